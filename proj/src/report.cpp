#include "panelcurve/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "panelcurve/errors.hpp"

namespace panelcurve {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string stat_p(double statistic, double p) {
    return fixed4(statistic) + " (" + fixed4(p) + ")";
}

std::string coef_cell(const ReportCoefficient& c) {
    return fixed4(c.estimate) + stars(c.p_white) + " (" + fixed4(c.se_white) + ")";
}

std::string unit_root_cell(const ReportUnitRoot& r) {
    const char* tag = r.kind == "adf" ? "L" : "B";
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s (%s:%d N:%d)", fixed4(r.p_value).c_str(), tag,
                  r.lag_or_bandwidth, r.n_obs);
    return buf;
}

// Fixed-width text table; column widths fit the longest cell, two-space
// gutter, trailing whitespace trimmed.
class TextTable {
public:
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    std::string str() const {
        std::vector<std::size_t> widths;
        for (const auto& row : rows_) {
            if (widths.size() < row.size()) widths.resize(row.size(), 0);
            for (std::size_t c = 0; c < row.size(); ++c)
                widths[c] = std::max(widths[c], row[c].size());
        }
        std::string out;
        for (const auto& row : rows_) {
            std::string line;
            for (std::size_t c = 0; c < row.size(); ++c) {
                line += row[c];
                if (c + 1 < row.size())
                    line += std::string(widths[c] - row[c].size() + 2, ' ');
            }
            while (!line.empty() && line.back() == ' ') line.pop_back();
            out += line;
            out += '\n';
        }
        return out;
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

std::string heading(const std::string& title, char underline) {
    return title + "\n" + std::string(title.size(), underline) + "\n";
}

std::string mode_label(const std::string& mode) {
    return mode == "backward" ? "BL" : "FL";
}

} // namespace

std::string stars(double p_value) {
    if (p_value < 0.01) return "***";
    if (p_value < 0.05) return "**";
    if (p_value < 0.10) return "*";
    return "";
}

std::string render_unit_root_table(const UnitRootSection& section) {
    std::string out = heading("Unit root tests (ADF & PP, intercept)", '-');
    if (!section.enabled) return out + "(disabled by config)\n";
    TextTable table;
    std::vector<std::string> header = {"entity"};
    for (const auto& v : section.variables) header.push_back("ADF " + v);
    for (const auto& v : section.variables) header.push_back("PP " + v);
    table.add(header);
    for (std::size_t e = 0; e < section.entities.size(); ++e) {
        std::vector<std::string> row = {section.entities[e]};
        for (const auto& cell : section.rows[e]) row.push_back(unit_root_cell(cell.adf));
        for (const auto& cell : section.rows[e]) row.push_back(unit_root_cell(cell.pp));
        table.add(std::move(row));
    }
    return out + table.str();
}

std::string render_spec_test_table(const AnalysisReport& report) {
    std::string out = heading("Specification tests", '-');
    TextTable table;
    table.add({"model", "Redundant FE", "Breusch-Pagan LM", "Hausman"});
    for (const auto& mode : report.modes) {
        const auto& t = mode.tests;
        table.add({mode_label(mode.mode),
                   stat_p(t.redundant_fe_chi2.statistic, t.redundant_fe_chi2.p_value),
                   stat_p(t.breusch_pagan.statistic, t.breusch_pagan.p_value),
                   stat_p(t.hausman.statistic, t.hausman.p_value)});
    }
    return out + table.str();
}

std::string render_estimates_table(const ModeResults& mode) {
    std::string out =
        heading("Estimates: " + mode.mode + "-looking", '-');

    // Collect the union of coefficient names in first-seen order.
    std::vector<std::string> terms;
    for (const auto& model : mode.models)
        for (const auto& c : model.coefficients)
            if (std::find(terms.begin(), terms.end(), c.name) == terms.end())
                terms.push_back(c.name);

    TextTable table;
    std::vector<std::string> header = {"variable"};
    for (const auto& model : mode.models) header.push_back(model.effects);
    table.add(header);

    for (const auto& term : terms) {
        std::vector<std::string> row = {term};
        for (const auto& model : mode.models) {
            auto it = std::find_if(model.coefficients.begin(), model.coefficients.end(),
                                   [&](const ReportCoefficient& c) { return c.name == term; });
            row.push_back(it == model.coefficients.end() ? "-" : coef_cell(*it));
        }
        table.add(std::move(row));
    }

    auto metric_row = [&](const std::string& label, auto getter) {
        std::vector<std::string> row = {label};
        for (const auto& model : mode.models) row.push_back(getter(model));
        table.add(std::move(row));
    };
    metric_row("Weighted R2", [](const ReportModel& m) {
        return m.r2_weighted ? fixed4(*m.r2_weighted) : std::string("-");
    });
    metric_row("Unweighted R2", [](const ReportModel& m) { return fixed4(m.r2_unweighted); });
    metric_row("Panel obs.", [](const ReportModel& m) { return std::to_string(m.n_obs); });
    metric_row("rho_u", [](const ReportModel& m) {
        return m.rho_u ? fixed4(*m.rho_u) : std::string("-");
    });
    metric_row("rho_e", [](const ReportModel& m) {
        return m.rho_e ? fixed4(*m.rho_e) : std::string("-");
    });
    return out + table.str();
}

namespace {

std::string render_selection(const AnalysisReport& report) {
    std::string out = heading("Model selection", '-');
    TextTable table;
    table.add({"model", "decision", "table row", "FE test p", "RE test p", "Hausman p", "level"});
    for (const auto& mode : report.modes) {
        const auto& t = mode.tests;
        table.add({mode_label(mode.mode), t.selected_model, std::to_string(t.decision_row),
                   fixed4(t.redundant_fe_f.p_value), fixed4(t.breusch_pagan.p_value),
                   fixed4(t.hausman.p_value), fixed4(t.level)});
    }
    return out + table.str();
}

std::string render_combined(const AnalysisReport& report) {
    std::string out = heading("Combined coefficients (tranquil vs recession)", '-');
    TextTable table;
    table.add({"model", "variable", "tranquil", "interaction", "combined", "se_paper",
               "se_full", "source"});
    for (const auto& mode : report.modes) {
        for (const auto& entry : mode.combined) {
            table.add({mode_label(mode.mode), entry.variable,
                       fixed4(entry.tranquil) + stars(entry.tranquil_p) + " (" +
                           fixed4(entry.tranquil_se) + ")",
                       fixed4(entry.interaction) + stars(entry.interaction_p) + " (" +
                           fixed4(entry.interaction_se) + ")",
                       fixed4(entry.combined) + stars(entry.p_paper),
                       fixed4(entry.se_paper) + " (" + fixed4(entry.p_paper) + ")",
                       fixed4(entry.se_full) + " (" + fixed4(entry.p_full) + ")" +
                           (entry.clamped ? " [clamped]" : ""),
                       mode.combined_source});
        }
    }
    return out + table.str();
}

std::string render_provenance(const Provenance& p) {
    std::string out = heading("Provenance", '-');
    out += "panelcurve " + p.version + "\n";
    out += "input: " + (p.input_path.empty() ? "(in-memory)" : p.input_path);
    if (!p.input_digest.empty()) out += " [" + p.input_digest + "]";
    out += "\n";
    out += "panel: " + std::to_string(p.n_entities) + " entities x " +
           std::to_string(p.n_periods) + " periods (" + p.first_period + ".." + p.last_period +
           ")\n";
    out += "config:\n";
    for (const auto& [key, value] : p.config_echo) out += "  " + key + " = " + value + "\n";
    return out;
}

} // namespace

std::string render_text(const AnalysisReport& report) {
    std::string out = "panelcurve analysis report\n==========================\n\n";
    out += render_unit_root_table(report.unit_roots);
    out += "\n";
    out += render_spec_test_table(report);
    out += "\n";
    for (const auto& mode : report.modes) {
        out += render_estimates_table(mode);
        out += "\n";
    }
    out += render_selection(report);
    out += "\n";
    out += render_combined(report);
    out += "\n";
    out += render_provenance(report.provenance);
    return out;
}

std::string render_csv(const AnalysisReport& report) {
    std::string out =
        "mode,model,term,estimate,se_classical,se_white,t_white,p_white,stars,n_obs,"
        "r2_unweighted,r2_weighted,rho_u,rho_e\n";
    for (const auto& mode : report.modes) {
        for (const auto& model : mode.models) {
            for (const auto& c : model.coefficients) {
                std::ostringstream line;
                line << mode.mode << ',' << model.effects << ',' << c.name << ','
                     << fixed4(c.estimate) << ',' << fixed4(c.se_classical) << ','
                     << fixed4(c.se_white) << ',' << fixed4(c.t_white) << ','
                     << fixed4(c.p_white) << ',' << stars(c.p_white) << ',' << model.n_obs << ','
                     << fixed4(model.r2_unweighted) << ','
                     << (model.r2_weighted ? fixed4(*model.r2_weighted) : "") << ','
                     << (model.rho_u ? fixed4(*model.rho_u) : "") << ','
                     << (model.rho_e ? fixed4(*model.rho_e) : "") << '\n';
                out += line.str();
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON schema

namespace {

ordered_json to_json(const ReportUnitRoot& r) {
    return {{"kind", r.kind},
            {"statistic", r.statistic},
            {"lag_or_bandwidth", r.lag_or_bandwidth},
            {"n_obs", r.n_obs},
            {"p_value", r.p_value}};
}

ReportUnitRoot unit_root_from_json(const ordered_json& j) {
    return {j.at("kind"), j.at("statistic"), j.at("lag_or_bandwidth"), j.at("n_obs"),
            j.at("p_value")};
}

ordered_json to_json(const ReportTest& t) {
    return {{"name", t.name},     {"statistic", t.statistic}, {"dist", t.dist},
            {"df1", t.df1},       {"df2", t.df2},             {"p_value", t.p_value},
            {"non_rejection", t.non_rejection}};
}

ReportTest test_from_json(const ordered_json& j) {
    return {j.at("name"), j.at("statistic"), j.at("dist"),         j.at("df1"),
            j.at("df2"),  j.at("p_value"),   j.at("non_rejection")};
}

ordered_json to_json(const ReportCoefficient& c) {
    return {{"name", c.name},
            {"estimate", c.estimate},
            {"se_classical", c.se_classical},
            {"se_white", c.se_white},
            {"t_white", c.t_white},
            {"p_white", c.p_white}};
}

ReportCoefficient coefficient_from_json(const ordered_json& j) {
    return {j.at("name"),     j.at("estimate"), j.at("se_classical"),
            j.at("se_white"), j.at("t_white"),  j.at("p_white")};
}

ordered_json optional_to_json(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> optional_from_json(const ordered_json& j) {
    return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

} // namespace

std::string render_json(const AnalysisReport& report) {
    ordered_json j;
    j["panelcurve_version"] = report.provenance.version;

    ordered_json prov;
    prov["input_path"] = report.provenance.input_path;
    prov["input_digest"] = report.provenance.input_digest;
    prov["n_entities"] = report.provenance.n_entities;
    prov["n_periods"] = report.provenance.n_periods;
    prov["first_period"] = report.provenance.first_period;
    prov["last_period"] = report.provenance.last_period;
    ordered_json echo = ordered_json::array();
    for (const auto& [key, value] : report.provenance.config_echo)
        echo.push_back({{"key", key}, {"value", value}});
    prov["config"] = std::move(echo);
    j["provenance"] = std::move(prov);

    ordered_json roots;
    roots["enabled"] = report.unit_roots.enabled;
    roots["variables"] = report.unit_roots.variables;
    roots["entities"] = report.unit_roots.entities;
    ordered_json rows = ordered_json::array();
    for (const auto& row : report.unit_roots.rows) {
        ordered_json cells = ordered_json::array();
        for (const auto& cell : row)
            cells.push_back({{"variable", cell.variable},
                             {"adf", to_json(cell.adf)},
                             {"pp", to_json(cell.pp)}});
        rows.push_back(std::move(cells));
    }
    roots["rows"] = std::move(rows);
    j["unit_roots"] = std::move(roots);

    ordered_json modes = ordered_json::array();
    for (const auto& mode : report.modes) {
        ordered_json m;
        m["mode"] = mode.mode;
        ordered_json models = ordered_json::array();
        for (const auto& model : mode.models) {
            ordered_json mm;
            mm["effects"] = model.effects;
            ordered_json coefs = ordered_json::array();
            for (const auto& c : model.coefficients) coefs.push_back(to_json(c));
            mm["coefficients"] = std::move(coefs);
            mm["r2_unweighted"] = model.r2_unweighted;
            mm["r2_weighted"] = optional_to_json(model.r2_weighted);
            mm["n_obs"] = model.n_obs;
            mm["rho_u"] = optional_to_json(model.rho_u);
            mm["rho_e"] = optional_to_json(model.rho_e);
            mm["sigma_u2"] = optional_to_json(model.sigma_u2);
            mm["sigma_e2"] = optional_to_json(model.sigma_e2);
            models.push_back(std::move(mm));
        }
        m["models"] = std::move(models);

        ordered_json tests;
        tests["redundant_fe_f"] = to_json(mode.tests.redundant_fe_f);
        tests["redundant_fe_chi2"] = to_json(mode.tests.redundant_fe_chi2);
        tests["breusch_pagan"] = to_json(mode.tests.breusch_pagan);
        tests["honda"] = to_json(mode.tests.honda);
        tests["hausman"] = to_json(mode.tests.hausman);
        tests["selected_model"] = mode.tests.selected_model;
        tests["decision_row"] = mode.tests.decision_row;
        tests["level"] = mode.tests.level;
        m["tests"] = std::move(tests);

        m["combined_source"] = mode.combined_source;
        ordered_json combined = ordered_json::array();
        for (const auto& entry : mode.combined) {
            combined.push_back({{"variable", entry.variable},
                                {"tranquil", entry.tranquil},
                                {"tranquil_se", entry.tranquil_se},
                                {"tranquil_p", entry.tranquil_p},
                                {"interaction", entry.interaction},
                                {"interaction_se", entry.interaction_se},
                                {"interaction_p", entry.interaction_p},
                                {"combined", entry.combined},
                                {"se_paper", entry.se_paper},
                                {"p_paper", entry.p_paper},
                                {"se_full", entry.se_full},
                                {"p_full", entry.p_full},
                                {"clamped", entry.clamped}});
        }
        m["combined"] = std::move(combined);
        modes.push_back(std::move(m));
    }
    j["modes"] = std::move(modes);
    return j.dump(2) + "\n";
}

AnalysisReport report_from_json(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& ex) {
        throw DataError(std::string("report: invalid JSON: ") + ex.what());
    }

    AnalysisReport report;
    try {
        report.provenance.version = j.at("panelcurve_version");
        const auto& prov = j.at("provenance");
        report.provenance.input_path = prov.at("input_path");
        report.provenance.input_digest = prov.at("input_digest");
        report.provenance.n_entities = prov.at("n_entities");
        report.provenance.n_periods = prov.at("n_periods");
        report.provenance.first_period = prov.at("first_period");
        report.provenance.last_period = prov.at("last_period");
        for (const auto& kv : prov.at("config"))
            report.provenance.config_echo.emplace_back(kv.at("key"), kv.at("value"));

        const auto& roots = j.at("unit_roots");
        report.unit_roots.enabled = roots.at("enabled");
        report.unit_roots.variables = roots.at("variables").get<std::vector<std::string>>();
        report.unit_roots.entities = roots.at("entities").get<std::vector<std::string>>();
        for (const auto& row : roots.at("rows")) {
            std::vector<UnitRootCell> cells;
            for (const auto& cell : row)
                cells.push_back({cell.at("variable"), unit_root_from_json(cell.at("adf")),
                                 unit_root_from_json(cell.at("pp"))});
            report.unit_roots.rows.push_back(std::move(cells));
        }

        for (const auto& m : j.at("modes")) {
            ModeResults mode;
            mode.mode = m.at("mode");
            for (const auto& mm : m.at("models")) {
                ReportModel model;
                model.effects = mm.at("effects");
                for (const auto& c : mm.at("coefficients"))
                    model.coefficients.push_back(coefficient_from_json(c));
                model.r2_unweighted = mm.at("r2_unweighted");
                model.r2_weighted = optional_from_json(mm.at("r2_weighted"));
                model.n_obs = mm.at("n_obs");
                model.rho_u = optional_from_json(mm.at("rho_u"));
                model.rho_e = optional_from_json(mm.at("rho_e"));
                model.sigma_u2 = optional_from_json(mm.at("sigma_u2"));
                model.sigma_e2 = optional_from_json(mm.at("sigma_e2"));
                mode.models.push_back(std::move(model));
            }
            const auto& tests = m.at("tests");
            mode.tests.redundant_fe_f = test_from_json(tests.at("redundant_fe_f"));
            mode.tests.redundant_fe_chi2 = test_from_json(tests.at("redundant_fe_chi2"));
            mode.tests.breusch_pagan = test_from_json(tests.at("breusch_pagan"));
            mode.tests.honda = test_from_json(tests.at("honda"));
            mode.tests.hausman = test_from_json(tests.at("hausman"));
            mode.tests.selected_model = tests.at("selected_model");
            mode.tests.decision_row = tests.at("decision_row");
            mode.tests.level = tests.at("level");

            mode.combined_source = m.at("combined_source");
            for (const auto& e : m.at("combined")) {
                CombinedEntry entry;
                entry.variable = e.at("variable");
                entry.tranquil = e.at("tranquil");
                entry.tranquil_se = e.at("tranquil_se");
                entry.tranquil_p = e.at("tranquil_p");
                entry.interaction = e.at("interaction");
                entry.interaction_se = e.at("interaction_se");
                entry.interaction_p = e.at("interaction_p");
                entry.combined = e.at("combined");
                entry.se_paper = e.at("se_paper");
                entry.p_paper = e.at("p_paper");
                entry.se_full = e.at("se_full");
                entry.p_full = e.at("p_full");
                entry.clamped = e.at("clamped");
                mode.combined.push_back(std::move(entry));
            }
            report.modes.push_back(std::move(mode));
        }
    } catch (const ordered_json::exception& ex) {
        throw DataError(std::string("report: JSON schema mismatch: ") + ex.what());
    }
    return report;
}

std::string render_report(const AnalysisReport& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::text: return render_text(report);
        case OutputFormat::csv: return render_csv(report);
        case OutputFormat::json: return render_json(report);
    }
    throw UsageError("render_report: unknown format");
}

} // namespace panelcurve
