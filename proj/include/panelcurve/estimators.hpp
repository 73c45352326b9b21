#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "panelcurve/design.hpp"

namespace panelcurve {

enum class CovKind { classical, white };
enum class WhiteFlavor { hc0, hc1 };

/// Swamy-Arora variance components and the per-entity quasi-demeaning
/// weights they imply.
struct VarianceComponents {
    double sigma_u2 = 0.0; // cross-section variance (>= 0, clamped)
    double sigma_e2 = 0.0; // idiosyncratic variance
    double rho_u = 0.0;    // sigma_u2 / (sigma_u2 + sigma_e2)
    double rho_e = 1.0;
    bool truncated = false; // raw between - within/T was negative
    double sigma_between2 = 0.0;
    double t_bar = 0.0; // harmonic mean group size
    std::vector<std::size_t> group_entities;
    std::vector<double> theta; // aligned with group_entities
};

/// theta = 1 - sqrt(sigma_e2 / (T sigma_u2 + sigma_e2)), in [0, 1).
double quasi_demeaning_weight(double sigma_u2, double sigma_e2, std::size_t group_size);

struct EstimationResult {
    Effects effects = Effects::pooled;
    std::vector<std::string> names;
    Eigen::VectorXd coef;
    Eigen::MatrixXd cov_classical;
    Eigen::MatrixXd cov_white;

    // Residuals aligned with `rows`; fixed effects store the LSDV-equivalent
    // residuals, random effects the original-scale ones.
    Eigen::VectorXd residuals;
    std::vector<DesignMatrix::RowId> rows;
    std::vector<std::string> entities; // dataset entity codes
    std::vector<std::size_t> group_offsets;
    std::vector<std::size_t> group_entities;

    double rss = 0.0;
    double r2_unweighted = 0.0;
    std::optional<double> r2_weighted; // random effects only
    std::vector<std::pair<std::string, double>> entity_intercepts; // fixed effects only
    std::size_t n_obs = 0;
    std::size_t df_resid = 0;
    std::size_t n_slopes = 0; // coefficient count excluding the constant
    bool has_intercept = false;
    std::optional<VarianceComponents> components; // random effects only

    std::size_t index_of(const std::string& name) const; // throws UsageError
    double se(std::size_t i, CovKind kind = CovKind::white) const;
    double t_stat(std::size_t i, CovKind kind = CovKind::white) const;
    double p_value(std::size_t i, CovKind kind = CovKind::white) const; // normal approximation
    std::size_t n_groups() const { return group_entities.size(); }
};

struct CombinedCoefficient {
    std::string label;
    double sum = 0.0;
    double se_paper = 0.0; // sqrt(v_i + v_j), covariance ignored
    double se_full = 0.0;  // sqrt(v_i + v_j + 2 cov), clamped at 0
    double t_paper = 0.0, p_paper = 1.0;
    double t_full = 0.0, p_full = 1.0;
    bool clamped = false; // full-variance radicand was negative
};

/// Least squares on a realized design. Classical covariance s^2 (X'X)^-1 with
/// s^2 = RSS/(N-k); White covariance is the HC0 sandwich (HC1 rescales by
/// N/(N-k)). Solves by column-pivoted QR; rank deficiency (relative singular
/// value below 1e-10) names the offending column.
EstimationResult ols(const DesignMatrix& design, bool robust = true,
                     WhiteFlavor flavor = WhiteFlavor::hc0);

/// Stacked OLS with a common intercept.
EstimationResult pooled(const ModelSpec& spec, const PanelDataset& data,
                        WhiteFlavor flavor = WhiteFlavor::hc0);

/// Within estimator: slopes from OLS on entity-demeaned data (plus period
/// demeaning for two-way effects), per-entity intercepts recovered from group
/// means, covariance on within degrees of freedom N - n - k. Regressors that
/// are constant within every entity are rejected.
EstimationResult fixed_effects(const ModelSpec& spec, const PanelDataset& data,
                               WhiteFlavor flavor = WhiteFlavor::hc0);

/// Swamy-Arora variance components from the within and between regressions;
/// sigma_u2 is clamped at zero. Unbalanced panels use the harmonic mean group
/// size.
VarianceComponents swamy_arora(const ModelSpec& spec, const PanelDataset& data);

/// Feasible GLS via quasi-demeaning with the Swamy-Arora weights. Reports
/// both the weighted (transformed-data) and unweighted (original-data) R^2.
EstimationResult random_effects(const ModelSpec& spec, const PanelDataset& data,
                                WhiteFlavor flavor = WhiteFlavor::hc0);

/// Heteroskedasticity-robust sandwich (X'X)^-1 X' diag(e^2) X (X'X)^-1.
Eigen::MatrixXd white_cov(const Eigen::MatrixXd& x, const Eigen::VectorXd& residuals,
                          WhiteFlavor flavor = WhiteFlavor::hc0);
Eigen::MatrixXd white_cov(const DesignMatrix& design, const Eigen::VectorXd& residuals,
                          WhiteFlavor flavor = WhiteFlavor::hc0);

/// Sum of two coefficients with both standard-error conventions: the
/// covariance-free sqrt(v_i + v_j) and the full delta-method form. P-values
/// use the standard normal.
CombinedCoefficient combined_coefficient(const EstimationResult& result, std::size_t i,
                                         std::size_t j, CovKind kind = CovKind::white);

} // namespace panelcurve
