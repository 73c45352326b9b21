#include "panelcurve/analysis.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "panelcurve/csv.hpp"
#include "panelcurve/distributions.hpp"
#include "panelcurve/errors.hpp"
#include "panelcurve/hp_filter.hpp"
#include "panelcurve/version.hpp"

namespace panelcurve {

namespace {

ReportUnitRoot to_report(const UnitRootResult& r) {
    return {r.kind == UnitRootKind::adf ? "adf" : "pp", r.statistic, r.lag_or_bandwidth, r.n_obs,
            r.p_value};
}

ReportTest to_report(const TestResult& t) {
    return {t.name, t.statistic, to_string(t.dist), t.df1, t.df2, t.p_value, t.non_rejection};
}

ReportCoefficient coefficient_report(const EstimationResult& result, std::size_t i) {
    return {result.names[i], result.coef(i),          result.se(i, CovKind::classical),
            result.se(i, CovKind::white), result.t_stat(i, CovKind::white),
            result.p_value(i, CovKind::white)};
}

ReportModel model_report(const EstimationResult& result, const std::string& label) {
    ReportModel model;
    model.effects = label;
    for (std::size_t i = 0; i < result.names.size(); ++i)
        model.coefficients.push_back(coefficient_report(result, i));
    model.r2_unweighted = result.r2_unweighted;
    model.r2_weighted = result.r2_weighted;
    model.n_obs = result.n_obs;
    if (result.components) {
        model.rho_u = result.components->rho_u;
        model.rho_e = result.components->rho_e;
        model.sigma_u2 = result.components->sigma_u2;
        model.sigma_e2 = result.components->sigma_e2;
    }
    return model;
}

CombinedEntry combined_entry(const EstimationResult& result, const std::string& base,
                             const std::string& interaction) {
    const std::size_t i = result.index_of(base);
    const std::size_t j = result.index_of(interaction);
    CombinedCoefficient cc = combined_coefficient(result, i, j, CovKind::white);

    CombinedEntry entry;
    entry.variable = base;
    entry.tranquil = result.coef(i);
    entry.tranquil_se = result.se(i, CovKind::white);
    entry.tranquil_p = result.p_value(i, CovKind::white);
    entry.interaction = result.coef(j);
    entry.interaction_se = result.se(j, CovKind::white);
    entry.interaction_p = result.p_value(j, CovKind::white);
    entry.combined = cc.sum;
    entry.se_paper = cc.se_paper;
    entry.p_paper = cc.p_paper;
    entry.se_full = cc.se_full;
    entry.p_full = cc.p_full;
    entry.clamped = cc.clamped;
    return entry;
}

} // namespace

// Each task owns one output slot, so results are order-independent.
UnitRootSection run_unit_roots(const AnalysisConfig& config, const PanelDataset& augmented) {
    UnitRootSection section;
    section.enabled = true;
    section.variables = {"CPI", "EI", "UGAP"};
    section.entities = augmented.entities;

    const std::vector<std::string> grids = {"pi", "expected_cpi", "u_gap"};
    const std::size_t n = augmented.n_entities();
    section.rows.assign(n, std::vector<UnitRootCell>(grids.size()));

    struct Task {
        std::size_t entity;
        std::size_t variable;
    };
    std::vector<Task> tasks;
    for (std::size_t e = 0; e < n; ++e)
        for (std::size_t v = 0; v < grids.size(); ++v) tasks.push_back({e, v});

    std::vector<std::string> failures(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const auto [e, v] = tasks[i];
            const std::string context =
                "unit-root stage, entity " + augmented.entities[e] + ", variable " +
                section.variables[v];
            try {
                SpanView span = contiguous_span(augmented.grid(grids[v]).row(e), context);
                UnitRootCell& cell = section.rows[e][v];
                cell.variable = section.variables[v];
                cell.adf = to_report(adf_test(span.values, config.max_lag));
                cell.pp = to_report(pp_test(span.values));
            } catch (const std::exception& ex) {
                failures[i] = context + ": " + ex.what();
            }
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    const std::size_t n_threads = std::min<std::size_t>(hw ? hw : 1, tasks.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (const auto& failure : failures)
        if (!failure.empty()) throw DataError(failure);
    return section;
}

double ReportTest::recompute_p() const {
    if (dist == "F") return f_sf(statistic, df1, df2);
    if (dist == "chi-square") return chi_squared_sf(statistic, df1);
    if (dist == "normal") return normal_sf(statistic);
    throw UsageError("unknown distribution '" + dist + "' in report test");
}

std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a-%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

PanelDataset augment_dataset(const AnalysisConfig& config, const PanelDataset& data) {
    for (const auto& required : {"cpi", "unemployment", "gdp_growth"})
        if (!data.has_series(required))
            throw DataError("transform stage: input lacks required column '" +
                            std::string(required) + "'");

    auto override_for = [&](const std::string& name) -> std::optional<double> {
        auto it = config.log_shift_overrides.find(name);
        return it == config.log_shift_overrides.end() ? std::nullopt
                                                      : std::optional<double>(it->second);
    };

    PanelDataset augmented = data;
    const double lambda = config.effective_lambda();

    // pi = first difference of log-shifted CPI.
    SeriesRef pi_ref{"cpi", {Transform(LogShift{override_for("cpi")}), Transform(FirstDiff{})},
                     "pi"};
    Grid pi;
    try {
        pi = resolve(pi_ref, data);
    } catch (const std::exception& ex) {
        throw DataError("transform stage, variable cpi: " + std::string(ex.what()));
    }

    Grid gap;
    try {
        if (config.nairu_source == NairuSource::unemployment) {
            gap = unemployment_gap(data.grid("unemployment"), lambda,
                                   override_for("unemployment"));
        } else {
            // Literal-text variant: the long-run level comes from the HP trend
            // of inflation; the gap is still log U against that trend's log.
            const Grid& u = data.grid("unemployment");
            const double cu = override_for("unemployment")
                                  ? *override_for("unemployment")
                                  : default_log_shift(u);
            Grid nairu(u.n_entities, u.n_periods);
            for (std::size_t e = 0; e < u.n_entities; ++e) {
                SpanView span = contiguous_span(pi.row(e), "nairu (inflation source)");
                HPResult hp = hp_filter(span.values, lambda);
                Series row(u.n_periods);
                for (std::size_t t = 0; t < hp.trend.size(); ++t)
                    row[span.offset + t] = hp.trend[t];
                nairu.set_row(e, row);
            }
            const double cn = override_for("nairu") ? *override_for("nairu")
                                                    : default_log_shift(nairu);
            gap = Grid(u.n_entities, u.n_periods);
            for (std::size_t e = 0; e < u.n_entities; ++e)
                for (std::size_t t = 0; t < u.n_periods; ++t)
                    if (u.at(e, t).has_value() && nairu.at(e, t).has_value())
                        gap.at(e, t) = log_shift(*u.at(e, t), cu) -
                                       log_shift(*nairu.at(e, t), cn);
        }
    } catch (const DataError&) {
        throw;
    } catch (const std::exception& ex) {
        throw DataError("gap stage: " + std::string(ex.what()));
    }

    augmented.series["pi"] = std::move(pi);
    augmented.series["u_gap"] = std::move(gap);
    return augmented;
}

ModelSpec phillips_spec(const AnalysisConfig& config, const PanelDataset& augmented,
                        ExpectationMode mode) {
    if (mode == ExpectationMode::forward && !augmented.has_series("expected_cpi"))
        throw DataError("estimation stage: forward mode needs the expected_cpi column");

    ModelSpec spec;
    spec.expectation = mode;
    spec.regressand = SeriesRef{"pi", {}, "pi"};
    if (mode == ExpectationMode::backward)
        spec.regressors.push_back(SeriesRef{"pi", {Transform(Shift{1})}, "pi_e"});
    else
        spec.regressors.push_back(SeriesRef{"expected_cpi", {}, "pi_e"});
    spec.regressors.push_back(SeriesRef{"u_gap", {}, "u_gap"});

    RegimeDummy dummy = recession_dummy(augmented.grid("gdp_growth"), config.recession_rule);
    spec.interactions.push_back({0, dummy, "pi_e:recession"});
    spec.interactions.push_back({1, std::move(dummy), "u_gap:recession"});
    spec.intercept = true;
    return spec;
}

AnalysisReport run_analysis(const AnalysisConfig& config, const PanelDataset& data,
                            const std::string& input_digest) {
    config.validate();
    PanelDataset augmented = augment_dataset(config, data);

    AnalysisReport report;
    report.provenance.version = kVersion;
    report.provenance.input_path = config.input_path;
    report.provenance.input_digest = input_digest;
    report.provenance.n_entities = data.n_entities();
    report.provenance.n_periods = data.n_periods();
    report.provenance.first_period = data.periods.front().str();
    report.provenance.last_period = data.periods.back().str();
    report.provenance.config_echo = config.echo();

    if (config.unitroot_enabled) {
        report.unit_roots = run_unit_roots(config, augmented);
    } else {
        report.unit_roots.enabled = false;
    }

    for (ExpectationMode mode : config.modes) {
        ModelSpec spec = phillips_spec(config, augmented, mode);
        const std::string mode_name = to_string(mode);

        EstimationResult pooled_res, fe_res, re_res;
        try {
            pooled_res = pooled(spec, augmented, config.white_flavor);
            fe_res = fixed_effects(spec, augmented, config.white_flavor);
            re_res = random_effects(spec, augmented, config.white_flavor);
        } catch (const Error&) {
            throw;
        } catch (const std::exception& ex) {
            throw NumericError("estimation stage, mode " + mode_name + ": " + ex.what());
        }

        ModeResults mode_results;
        mode_results.mode = mode_name;
        for (Effects effects : config.effects_to_run) {
            switch (effects) {
                case Effects::pooled:
                    mode_results.models.push_back(model_report(pooled_res, "pooled"));
                    break;
                case Effects::entity_fixed:
                case Effects::two_way_fixed:
                    mode_results.models.push_back(model_report(fe_res, "fixed"));
                    break;
                case Effects::random:
                    mode_results.models.push_back(model_report(re_res, "random"));
                    break;
            }
        }

        RedundantFEResult fe_test = redundant_fe_test(pooled_res, fe_res);
        TestResult bp = breusch_pagan_lm(pooled_res);
        TestResult honda = honda_lm(pooled_res);
        TestResult hausman_res = hausman(fe_res, re_res);
        ModelChoice choice = select_model(fe_test.f_form, bp, hausman_res, config.level);

        mode_results.tests.redundant_fe_f = to_report(fe_test.f_form);
        mode_results.tests.redundant_fe_chi2 = to_report(fe_test.chi2_form);
        mode_results.tests.breusch_pagan = to_report(bp);
        mode_results.tests.honda = to_report(honda);
        mode_results.tests.hausman = to_report(hausman_res);
        mode_results.tests.selected_model = to_string(choice.selected);
        mode_results.tests.decision_row = choice.decision_row;
        mode_results.tests.level = choice.level;

        const EstimationResult& chosen = choice.selected == ModelKind::pooled ? pooled_res
                                         : choice.selected == ModelKind::fixed_effects
                                             ? fe_res
                                             : re_res;
        mode_results.combined_source = to_string(choice.selected);
        mode_results.combined.push_back(combined_entry(chosen, "pi_e", "pi_e:recession"));
        mode_results.combined.push_back(combined_entry(chosen, "u_gap", "u_gap:recession"));

        report.modes.push_back(std::move(mode_results));
    }
    return report;
}

AnalysisReport run_analysis(const AnalysisConfig& config) {
    std::ifstream in(config.input_path, std::ios::binary);
    if (!in) throw DataError("cannot open input file '" + config.input_path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();

    std::istringstream stream(bytes);
    PanelDataset data = ingest_csv(stream);
    return run_analysis(config, data, fnv1a_digest(bytes));
}

} // namespace panelcurve
