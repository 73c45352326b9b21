#pragma once

#include <optional>
#include <string>
#include <vector>

#include "panelcurve/config.hpp"
#include "panelcurve/dataset.hpp"
#include "panelcurve/spec_tests.hpp"
#include "panelcurve/unit_root.hpp"

namespace panelcurve {

// Plain-data report structures; everything below serializes to JSON and back
// without loss, so saved reports can be re-rendered.

struct ReportUnitRoot {
    std::string kind; // "adf" | "pp"
    double statistic = 0.0;
    int lag_or_bandwidth = 0;
    int n_obs = 0;
    double p_value = 1.0;
};

struct UnitRootCell {
    std::string variable; // display label: CPI, EI, UGAP
    ReportUnitRoot adf;
    ReportUnitRoot pp;
};

struct UnitRootSection {
    bool enabled = true;
    std::vector<std::string> variables;
    std::vector<std::string> entities;
    std::vector<std::vector<UnitRootCell>> rows; // [entity][variable]
};

struct ReportCoefficient {
    std::string name;
    double estimate = 0.0;
    double se_classical = 0.0;
    double se_white = 0.0;
    double t_white = 0.0;
    double p_white = 1.0;
};

struct ReportModel {
    std::string effects; // pooled | fixed | random
    std::vector<ReportCoefficient> coefficients;
    double r2_unweighted = 0.0;
    std::optional<double> r2_weighted;
    std::size_t n_obs = 0;
    // Swamy-Arora block, random effects only.
    std::optional<double> rho_u, rho_e, sigma_u2, sigma_e2;
};

struct ReportTest {
    std::string name;
    double statistic = 0.0;
    std::string dist; // F | chi-square | normal
    double df1 = 0.0;
    double df2 = 0.0;
    double p_value = 1.0;
    bool non_rejection = false;

    double recompute_p() const;
};

struct ModeSpecTests {
    ReportTest redundant_fe_f;
    ReportTest redundant_fe_chi2;
    ReportTest breusch_pagan;
    ReportTest honda;
    ReportTest hausman;
    std::string selected_model; // pooled | fixed_effects | random_effects
    int decision_row = 1;
    double level = 0.05;
};

struct CombinedEntry {
    std::string variable; // base regressor name
    double tranquil = 0.0, tranquil_se = 0.0, tranquil_p = 1.0;
    double interaction = 0.0, interaction_se = 0.0, interaction_p = 1.0;
    double combined = 0.0;
    double se_paper = 0.0, p_paper = 1.0; // sqrt(v_i + v_j)
    double se_full = 0.0, p_full = 1.0;   // covariance included
    bool clamped = false;
};

struct ModeResults {
    std::string mode; // backward | forward
    std::vector<ReportModel> models;
    ModeSpecTests tests;
    std::string combined_source; // model the combined rows come from
    std::vector<CombinedEntry> combined;
};

struct Provenance {
    std::string version;
    std::string input_path;
    std::string input_digest; // fnv1a-64 of the input bytes
    std::size_t n_entities = 0;
    std::size_t n_periods = 0;
    std::string first_period, last_period;
    std::vector<std::pair<std::string, std::string>> config_echo;
};

struct AnalysisReport {
    Provenance provenance;
    UnitRootSection unit_roots;
    std::vector<ModeResults> modes;
};

/// Full pipeline: transforms, gap construction, unit-root screening,
/// pooled/FE/RE estimation per expectation mode, the specification-test
/// battery with the model-selection decision, and combined coefficients.
/// Deterministic in (config, input bytes); no partial reports on error.
AnalysisReport run_analysis(const AnalysisConfig& config);
AnalysisReport run_analysis(const AnalysisConfig& config, const PanelDataset& data,
                            const std::string& input_digest = "");

/// Derived series the estimation consumes: regressand "pi", regressor
/// "u_gap" added next to the raw columns. Exposed for the CLI subcommands.
PanelDataset augment_dataset(const AnalysisConfig& config, const PanelDataset& data);

/// Unit-root screening grid over (entity, variable); per-cell tests run on a
/// worker pool with deterministic slot ordering.
UnitRootSection run_unit_roots(const AnalysisConfig& config, const PanelDataset& augmented);

ModelSpec phillips_spec(const AnalysisConfig& config, const PanelDataset& augmented,
                        ExpectationMode mode);

std::string fnv1a_digest(const std::string& bytes);

} // namespace panelcurve
