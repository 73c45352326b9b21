#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "panelcurve/analysis.hpp"
#include "panelcurve/csv.hpp"
#include "panelcurve/errors.hpp"
#include "panelcurve/report.hpp"
#include "panelcurve/simulate.hpp"
#include "panelcurve/version.hpp"

namespace {

using namespace panelcurve;

struct CommonOpts {
    std::string input;
    std::string config_file;
    std::vector<std::string> overrides; // key=value
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_input = true) {
    if (with_input) cmd->add_option("input", opts.input, "input panel CSV")->required();
    cmd->add_option("--config", opts.config_file, "config file (key = value lines)");
    cmd->add_option("--set", opts.overrides, "config override key=value (repeatable)");
    cmd->add_option("-o,--out", opts.out_path, "write output to a file instead of stdout");
}

AnalysisConfig make_config(const CommonOpts& opts) {
    AnalysisConfig config;
    if (!opts.config_file.empty()) config = load_config_file(opts.config_file);
    for (const auto& entry : opts.overrides) {
        auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + entry + "'");
        apply_config_entry(config, entry.substr(0, eq), entry.substr(eq + 1));
    }
    if (!opts.input.empty()) config.input_path = opts.input;
    config.validate();
    return config;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DataError("cannot open output file '" + out_path + "'");
    out << text;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"panel Phillips-curve estimation toolkit"};
    app.set_version_flag("--version", std::string("panelcurve ") + kVersion);
    app.require_subcommand(1);
    app.footer(config_key_help());

    CommonOpts run_opts, unitroot_opts, estimate_opts, spectest_opts;
    std::string run_format;

    auto* run_cmd = app.add_subcommand("run", "full analysis pipeline");
    add_common(run_cmd, run_opts);
    run_cmd->add_option("--format", run_format, "text|csv|json (overrides config)");

    auto* unitroot_cmd = app.add_subcommand("unitroot", "per-country ADF/PP screening table");
    add_common(unitroot_cmd, unitroot_opts);

    auto* estimate_cmd = app.add_subcommand("estimate", "pooled/fixed/random estimates tables");
    add_common(estimate_cmd, estimate_opts);

    auto* spectest_cmd = app.add_subcommand("spectest", "specification-test battery table");
    add_common(spectest_cmd, spectest_opts);

    auto* simulate_cmd = app.add_subcommand("simulate", "write a synthetic panel CSV");
    std::string sim_out;
    SimConfig sim;
    std::vector<double> sim_beta;
    simulate_cmd->add_option("output", sim_out, "output CSV path")->required();
    simulate_cmd->add_option("--seed", sim.seed, "RNG seed");
    simulate_cmd->add_option("--entities", sim.n_entities, "number of entities");
    simulate_cmd->add_option("--periods", sim.n_periods, "number of quarters");
    simulate_cmd->add_option("--sigma-u", sim.sigma_u, "entity-effect SD");
    simulate_cmd->add_option("--sigma-e", sim.sigma_e, "tranquil noise SD");
    simulate_cmd->add_option("--recession-noise-mult", sim.recession_noise_mult,
                             "noise multiplier inside recessions");
    simulate_cmd->add_option("--effect-level-corr", sim.effect_level_corr,
                             "entity-effect tilt of the expectation level");
    simulate_cmd->add_option("--beta", sim_beta, "b0 b1 b2 b3 b4")->expected(5);

    auto* report_cmd = app.add_subcommand("report", "re-render a saved JSON report");
    std::string report_in, report_format = "text", report_out;
    report_cmd->add_option("input", report_in, "saved JSON report")->required();
    report_cmd->add_option("--format", report_format, "text|csv|json");
    report_cmd->add_option("-o,--out", report_out, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (!sim_beta.empty())
        for (std::size_t i = 0; i < sim.beta.size(); ++i) sim.beta[i] = sim_beta[i];

    if (*run_cmd) {
        AnalysisConfig config = make_config(run_opts);
        if (!run_format.empty()) config.format = output_format_from_string(run_format);
        AnalysisReport report = run_analysis(config);
        emit(render_report(report, config.format), run_opts.out_path);
    } else if (*unitroot_cmd) {
        AnalysisConfig config = make_config(unitroot_opts);
        PanelDataset data = ingest_csv_file(config.input_path);
        UnitRootSection section = run_unit_roots(config, augment_dataset(config, data));
        emit(render_unit_root_table(section), unitroot_opts.out_path);
    } else if (*estimate_cmd) {
        AnalysisConfig config = make_config(estimate_opts);
        config.unitroot_enabled = false;
        AnalysisReport report = run_analysis(config);
        std::string text;
        for (const auto& mode : report.modes) text += render_estimates_table(mode) + "\n";
        emit(text, estimate_opts.out_path);
    } else if (*spectest_cmd) {
        AnalysisConfig config = make_config(spectest_opts);
        config.unitroot_enabled = false;
        AnalysisReport report = run_analysis(config);
        emit(render_spec_test_table(report), spectest_opts.out_path);
    } else if (*simulate_cmd) {
        write_csv_file(simulate_panel(sim), sim_out);
    } else if (*report_cmd) {
        std::ifstream in(report_in, std::ios::binary);
        if (!in) throw DataError("cannot open report file '" + report_in + "'");
        std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
        AnalysisReport report = report_from_json(bytes);
        emit(render_report(report, output_format_from_string(report_format)), report_out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const Error& e) {
        std::cerr << "panelcurve: " << e.what() << "\n";
        switch (e.kind()) {
            case Error::Kind::config: return 2;
            case Error::Kind::data: return 3;
            default: return 4;
        }
    } catch (const std::exception& e) {
        std::cerr << "panelcurve: " << e.what() << "\n";
        return 4;
    }
}
