#include "panelcurve/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "panelcurve/distributions.hpp"
#include "panelcurve/errors.hpp"

namespace panelcurve {

namespace {

constexpr double kRankTolerance = 1e-10; // relative to the largest singular value

// First column that is linearly dependent on its predecessors, for error
// messages on rank-deficient designs.
std::size_t offending_column(const Eigen::MatrixXd& x) {
    for (std::size_t j = 1; j < static_cast<std::size_t>(x.cols()); ++j) {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(x.leftCols(j + 1));
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) < kRankTolerance * sv(0)) return j;
    }
    return static_cast<std::size_t>(x.cols() - 1);
}

struct FitCore {
    Eigen::VectorXd beta;
    Eigen::VectorXd resid;
    double rss = 0.0;
    Eigen::MatrixXd xtx_inv;
};

FitCore checked_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    const std::vector<std::string>& names) {
    const auto n = x.rows();
    const auto k = x.cols();
    if (n <= k)
        throw NumericError("least squares: " + std::to_string(n) + " rows for " +
                           std::to_string(k) + " columns");

    Eigen::BDCSVD<Eigen::MatrixXd> svd(x);
    const auto& sv = svd.singularValues();
    if (!(sv(0) > 0.0) || sv(sv.size() - 1) < kRankTolerance * sv(0)) {
        std::size_t j = offending_column(x);
        std::string name = j < names.size() ? names[j] : "#" + std::to_string(j);
        throw NumericError("least squares: design is rank deficient at column '" + name + "'");
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    FitCore fit;
    fit.beta = qr.solve(y);
    fit.resid = y - x * fit.beta;
    fit.rss = fit.resid.squaredNorm();

    // (X'X)^-1 = P R^-1 R^-T P' from X P = Q R; triangular solves only.
    Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    Eigen::MatrixXd rinv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    Eigen::MatrixXd m = rinv * rinv.transpose();
    fit.xtx_inv = qr.colsPermutation() * m * qr.colsPermutation().transpose();
    return fit;
}

Eigen::MatrixXd sandwich(const Eigen::MatrixXd& x, const Eigen::VectorXd& resid,
                         const Eigen::MatrixXd& xtx_inv, WhiteFlavor flavor) {
    Eigen::MatrixXd meat = x.transpose() * resid.array().square().matrix().asDiagonal() * x;
    Eigen::MatrixXd cov = xtx_inv * meat * xtx_inv;
    if (flavor == WhiteFlavor::hc1) {
        const double n = static_cast<double>(x.rows());
        const double k = static_cast<double>(x.cols());
        cov *= n / (n - k);
    }
    return 0.5 * (cov + cov.transpose()); // keep exactly symmetric
}

double centered_tss(const Eigen::VectorXd& y) {
    return (y.array() - y.mean()).square().sum();
}

void copy_grouping(const DesignMatrix& design, EstimationResult& result) {
    result.rows = design.rows;
    result.entities = design.entities;
    result.group_offsets = design.group_offsets;
    result.group_entities = design.group_entities;
}

// Per-group means of y and X over the design's entity grouping.
struct GroupMeans {
    Eigen::MatrixXd x; // n_groups x k
    Eigen::VectorXd y; // n_groups
};

GroupMeans group_means(const DesignMatrix& design) {
    const std::size_t g_count = design.n_groups();
    GroupMeans means;
    means.x.setZero(g_count, design.X.cols());
    means.y.setZero(g_count);
    for (std::size_t g = 0; g < g_count; ++g) {
        const auto start = static_cast<Eigen::Index>(design.group_offsets[g]);
        const auto len = static_cast<Eigen::Index>(design.group_size(g));
        means.x.row(g) = design.X.middleRows(start, len).colwise().mean();
        means.y(g) = design.y.segment(start, len).mean();
    }
    return means;
}

void demean_by_entity(const DesignMatrix& design, const GroupMeans& means, Eigen::MatrixXd& x,
                      Eigen::VectorXd& y) {
    x = design.X;
    y = design.y;
    for (std::size_t g = 0; g < design.n_groups(); ++g) {
        const auto start = static_cast<Eigen::Index>(design.group_offsets[g]);
        const auto len = static_cast<Eigen::Index>(design.group_size(g));
        x.middleRows(start, len).rowwise() -= means.x.row(g);
        y.segment(start, len).array() -= means.y(g);
    }
}

// Alternating entity/period demeaning; exact in one sweep on balanced
// panels, iterated to convergence otherwise.
std::size_t demean_two_way(const DesignMatrix& design, Eigen::MatrixXd& x, Eigen::VectorXd& y) {
    std::vector<std::uint32_t> period_ids;
    std::vector<std::size_t> period_of_row(design.n_rows());
    for (std::size_t r = 0; r < design.n_rows(); ++r) {
        const auto p = design.rows[r].period;
        auto it = std::find(period_ids.begin(), period_ids.end(), p);
        if (it == period_ids.end()) {
            period_of_row[r] = period_ids.size();
            period_ids.push_back(p);
        } else {
            period_of_row[r] = static_cast<std::size_t>(it - period_ids.begin());
        }
    }
    const std::size_t n_periods = period_ids.size();

    Eigen::MatrixXd work(design.n_rows(), design.X.cols() + 1);
    work.leftCols(design.X.cols()) = design.X;
    work.col(design.X.cols()) = design.y;

    std::vector<double> period_count(n_periods, 0.0);
    for (std::size_t r = 0; r < design.n_rows(); ++r) period_count[period_of_row[r]] += 1.0;

    for (int iter = 0; iter < 200; ++iter) {
        double shift = 0.0;
        for (std::size_t g = 0; g < design.n_groups(); ++g) {
            const auto start = static_cast<Eigen::Index>(design.group_offsets[g]);
            const auto len = static_cast<Eigen::Index>(design.group_size(g));
            Eigen::RowVectorXd mean = work.middleRows(start, len).colwise().mean();
            work.middleRows(start, len).rowwise() -= mean;
            shift = std::max(shift, mean.cwiseAbs().maxCoeff());
        }
        Eigen::MatrixXd period_sum = Eigen::MatrixXd::Zero(n_periods, work.cols());
        for (std::size_t r = 0; r < design.n_rows(); ++r)
            period_sum.row(period_of_row[r]) += work.row(r);
        for (std::size_t p = 0; p < n_periods; ++p) period_sum.row(p) /= period_count[p];
        for (std::size_t r = 0; r < design.n_rows(); ++r)
            work.row(r) -= period_sum.row(period_of_row[r]);
        shift = std::max(shift, period_sum.cwiseAbs().maxCoeff());
        if (shift < 1e-13) break;
    }
    x = work.leftCols(design.X.cols());
    y = work.col(design.X.cols());
    return n_periods;
}

void check_time_varying(const DesignMatrix& design, const GroupMeans& means) {
    for (Eigen::Index j = 0; j < design.X.cols(); ++j) {
        const double scale = std::max(design.X.col(j).cwiseAbs().maxCoeff(), 1.0);
        double max_dev = 0.0;
        for (std::size_t g = 0; g < design.n_groups(); ++g) {
            const auto start = static_cast<Eigen::Index>(design.group_offsets[g]);
            const auto len = static_cast<Eigen::Index>(design.group_size(g));
            max_dev = std::max(max_dev, (design.X.col(j).segment(start, len).array() -
                                         means.x(static_cast<Eigen::Index>(g), j))
                                            .abs()
                                            .maxCoeff());
        }
        if (max_dev <= 1e-12 * scale)
            throw NumericError("fixed_effects: regressor '" + design.column_names[j] +
                               "' is constant within every entity and would be annihilated");
    }
}

} // namespace

double quasi_demeaning_weight(double sigma_u2, double sigma_e2, std::size_t group_size) {
    if (!(sigma_e2 > 0.0)) throw UsageError("quasi_demeaning_weight: sigma_e2 must be positive");
    if (sigma_u2 < 0.0) throw UsageError("quasi_demeaning_weight: sigma_u2 must be >= 0");
    return 1.0 - std::sqrt(sigma_e2 / (static_cast<double>(group_size) * sigma_u2 + sigma_e2));
}

std::size_t EstimationResult::index_of(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw UsageError("no coefficient named '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
}

double EstimationResult::se(std::size_t i, CovKind kind) const {
    const Eigen::MatrixXd& cov = kind == CovKind::white ? cov_white : cov_classical;
    return std::sqrt(std::max(cov(i, i), 0.0));
}

double EstimationResult::t_stat(std::size_t i, CovKind kind) const {
    const double s = se(i, kind);
    return s > 0.0 ? coef(i) / s : 0.0;
}

double EstimationResult::p_value(std::size_t i, CovKind kind) const {
    return 2.0 * normal_sf(std::abs(t_stat(i, kind)));
}

EstimationResult ols(const DesignMatrix& design, bool robust, WhiteFlavor flavor) {
    FitCore fit = checked_fit(design.X, design.y, design.column_names);

    EstimationResult result;
    result.effects = design.effects;
    result.names = design.column_names;
    result.coef = fit.beta;
    result.residuals = fit.resid;
    result.rss = fit.rss;
    result.n_obs = design.n_rows();
    result.has_intercept = design.has_intercept;
    result.n_slopes = design.n_cols() - (design.has_intercept ? 1 : 0);
    result.df_resid = design.n_rows() - design.n_cols();
    copy_grouping(design, result);

    const double s2 = fit.rss / static_cast<double>(result.df_resid);
    result.cov_classical = s2 * fit.xtx_inv;
    result.cov_white = robust ? sandwich(design.X, fit.resid, fit.xtx_inv, flavor)
                              : result.cov_classical;

    const double tss = design.has_intercept ? centered_tss(design.y) : design.y.squaredNorm();
    result.r2_unweighted = tss > 0.0 ? 1.0 - fit.rss / tss : 1.0;
    return result;
}

EstimationResult pooled(const ModelSpec& spec, const PanelDataset& data, WhiteFlavor flavor) {
    ModelSpec pooled_spec = spec;
    pooled_spec.effects = Effects::pooled;
    return ols(build_design(pooled_spec, data), true, flavor);
}

EstimationResult fixed_effects(const ModelSpec& spec, const PanelDataset& data,
                               WhiteFlavor flavor) {
    ModelSpec fe_spec = spec;
    if (fe_spec.effects != Effects::two_way_fixed) fe_spec.effects = Effects::entity_fixed;
    DesignMatrix design = build_design(fe_spec, data);

    const std::size_t n = design.n_rows();
    const std::size_t k = design.n_cols();
    const std::size_t groups = design.n_groups();

    GroupMeans means = group_means(design);
    check_time_varying(design, means);

    Eigen::MatrixXd xw;
    Eigen::VectorXd yw;
    std::size_t absorbed = groups;
    if (fe_spec.effects == Effects::two_way_fixed)
        absorbed += demean_two_way(design, xw, yw) - 1;
    else
        demean_by_entity(design, means, xw, yw);

    if (n <= absorbed + k)
        throw NumericError("fixed_effects: no residual degrees of freedom (N=" +
                           std::to_string(n) + ", absorbed=" + std::to_string(absorbed) +
                           ", k=" + std::to_string(k) + ")");
    FitCore fit = checked_fit(xw, yw, design.column_names);

    EstimationResult result;
    result.effects = fe_spec.effects;
    result.names = design.column_names;
    result.coef = fit.beta;
    result.residuals = fit.resid;
    result.rss = fit.rss;
    result.n_obs = n;
    result.has_intercept = false;
    result.n_slopes = k;
    result.df_resid = n - absorbed - k;
    copy_grouping(design, result);

    const double s2 = fit.rss / static_cast<double>(result.df_resid);
    result.cov_classical = s2 * fit.xtx_inv;
    result.cov_white = sandwich(xw, fit.resid, fit.xtx_inv, flavor);

    for (std::size_t g = 0; g < groups; ++g) {
        const double alpha =
            means.y(static_cast<Eigen::Index>(g)) -
            means.x.row(static_cast<Eigen::Index>(g)).dot(fit.beta);
        result.entity_intercepts.emplace_back(design.entities[design.group_entities[g]], alpha);
    }

    // LSDV-equivalent fit: within residuals are exactly the LSDV ones, so R^2
    // compares RSS against the overall centered total sum of squares.
    result.r2_unweighted = 1.0 - fit.rss / centered_tss(design.y);
    return result;
}

VarianceComponents swamy_arora(const ModelSpec& spec, const PanelDataset& data) {
    ModelSpec fe_spec = spec;
    fe_spec.effects = Effects::entity_fixed;
    DesignMatrix within_design = build_design(fe_spec, data);

    const std::size_t n = within_design.n_rows();
    const std::size_t k = within_design.n_cols();
    const std::size_t groups = within_design.n_groups();

    GroupMeans means = group_means(within_design);
    Eigen::MatrixXd xw;
    Eigen::VectorXd yw;
    demean_by_entity(within_design, means, xw, yw);
    FitCore within = checked_fit(xw, yw, within_design.column_names);
    if (n <= groups + k)
        throw NumericError("swamy_arora: no within degrees of freedom");
    const double sigma_e2 = within.rss / static_cast<double>(n - groups - k);

    // Between regression on entity means, intercept included.
    const std::size_t k_between = k + 1;
    if (groups <= k_between)
        throw NumericError("swamy_arora: " + std::to_string(groups) +
                           " entities cannot identify " + std::to_string(k_between) +
                           " between-regression parameters");
    Eigen::MatrixXd xb(groups, k_between);
    xb.col(0).setOnes();
    xb.rightCols(k) = means.x;
    std::vector<std::string> between_names = {"const"};
    between_names.insert(between_names.end(), within_design.column_names.begin(),
                         within_design.column_names.end());
    FitCore between = checked_fit(xb, means.y, between_names);
    const double sigma_b2 = between.rss / static_cast<double>(groups - k_between);

    double inv_sum = 0.0;
    for (std::size_t g = 0; g < groups; ++g)
        inv_sum += 1.0 / static_cast<double>(within_design.group_size(g));
    const double t_bar = static_cast<double>(groups) / inv_sum;

    VarianceComponents vc;
    vc.sigma_e2 = sigma_e2;
    vc.sigma_between2 = sigma_b2;
    vc.t_bar = t_bar;
    const double raw = sigma_b2 - sigma_e2 / t_bar;
    vc.truncated = raw < 0.0;
    vc.sigma_u2 = std::max(0.0, raw);
    vc.rho_u = vc.sigma_u2 / (vc.sigma_u2 + vc.sigma_e2);
    vc.rho_e = 1.0 - vc.rho_u;
    vc.group_entities = within_design.group_entities;
    for (std::size_t g = 0; g < groups; ++g)
        vc.theta.push_back(
            quasi_demeaning_weight(vc.sigma_u2, vc.sigma_e2, within_design.group_size(g)));
    return vc;
}

EstimationResult random_effects(const ModelSpec& spec, const PanelDataset& data,
                                WhiteFlavor flavor) {
    VarianceComponents vc = swamy_arora(spec, data);

    ModelSpec re_spec = spec;
    re_spec.effects = Effects::pooled; // intercept column included
    DesignMatrix design = build_design(re_spec, data);
    if (vc.group_entities != design.group_entities)
        throw UsageError("random_effects: grouping mismatch between within and pooled designs");

    GroupMeans means = group_means(design);
    Eigen::MatrixXd xt = design.X;
    Eigen::VectorXd yt = design.y;
    for (std::size_t g = 0; g < design.n_groups(); ++g) {
        const auto start = static_cast<Eigen::Index>(design.group_offsets[g]);
        const auto len = static_cast<Eigen::Index>(design.group_size(g));
        xt.middleRows(start, len).rowwise() -= vc.theta[g] * means.x.row(g);
        yt.segment(start, len).array() -= vc.theta[g] * means.y(g);
    }

    FitCore fit = checked_fit(xt, yt, design.column_names);

    EstimationResult result;
    result.effects = Effects::random;
    result.names = design.column_names;
    result.coef = fit.beta;
    result.n_obs = design.n_rows();
    result.has_intercept = true;
    result.n_slopes = design.n_cols() - 1;
    result.df_resid = design.n_rows() - design.n_cols();
    copy_grouping(design, result);

    const double s2 = fit.rss / static_cast<double>(result.df_resid);
    result.cov_classical = s2 * fit.xtx_inv;
    result.cov_white = sandwich(xt, fit.resid, fit.xtx_inv, flavor);

    // Weighted R^2 on the GLS-transformed data, unweighted on the original.
    result.rss = fit.rss;
    const double tss_t = centered_tss(yt);
    result.r2_weighted = tss_t > 0.0 ? 1.0 - fit.rss / tss_t : 1.0;

    Eigen::VectorXd resid_orig = design.y - design.X * fit.beta;
    result.residuals = resid_orig;
    result.r2_unweighted = 1.0 - resid_orig.squaredNorm() / centered_tss(design.y);

    result.components = std::move(vc);
    return result;
}

Eigen::MatrixXd white_cov(const Eigen::MatrixXd& x, const Eigen::VectorXd& residuals,
                          WhiteFlavor flavor) {
    if (x.rows() != residuals.size())
        throw UsageError("white_cov: residual count " + std::to_string(residuals.size()) +
                         " != row count " + std::to_string(x.rows()));
    std::vector<std::string> names;
    FitCore fit = checked_fit(x, Eigen::VectorXd::Zero(x.rows()), names);
    return sandwich(x, residuals, fit.xtx_inv, flavor);
}

Eigen::MatrixXd white_cov(const DesignMatrix& design, const Eigen::VectorXd& residuals,
                          WhiteFlavor flavor) {
    if (design.X.rows() != residuals.size())
        throw UsageError("white_cov: residual count " + std::to_string(residuals.size()) +
                         " != row count " + std::to_string(design.X.rows()));
    Eigen::BDCSVD<Eigen::MatrixXd> svd(design.X);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < kRankTolerance * sv(0)) {
        std::size_t j = offending_column(design.X);
        throw NumericError("white_cov: design is rank deficient at column '" +
                           design.column_names[j] + "'");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.X);
    const auto k = design.X.cols();
    Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    Eigen::MatrixXd rinv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    Eigen::MatrixXd m = rinv * rinv.transpose();
    Eigen::MatrixXd xtx_inv = qr.colsPermutation() * m * qr.colsPermutation().transpose();
    return sandwich(design.X, residuals, xtx_inv, flavor);
}

CombinedCoefficient combined_coefficient(const EstimationResult& result, std::size_t i,
                                         std::size_t j, CovKind kind) {
    if (i == j || i >= result.names.size() || j >= result.names.size())
        throw UsageError("combined_coefficient: need two distinct valid coefficient indices");
    const Eigen::MatrixXd& cov = kind == CovKind::white ? result.cov_white : result.cov_classical;

    CombinedCoefficient combined;
    combined.label = result.names[i] + " + " + result.names[j];
    combined.sum = result.coef(i) + result.coef(j);
    combined.se_paper = std::sqrt(std::max(cov(i, i), 0.0) + std::max(cov(j, j), 0.0));

    const double full_var = cov(i, i) + cov(j, j) + 2.0 * cov(i, j);
    combined.clamped = full_var < 0.0;
    combined.se_full = std::sqrt(std::max(full_var, 0.0));

    auto fill = [&](double se, double& t, double& p) {
        if (se > 0.0) {
            t = combined.sum / se;
            p = 2.0 * normal_sf(std::abs(t));
        } else {
            t = 0.0;
            p = combined.sum == 0.0 ? 1.0 : 0.0;
        }
    };
    fill(combined.se_paper, combined.t_paper, combined.p_paper);
    fill(combined.se_full, combined.t_full, combined.p_full);
    return combined;
}

} // namespace panelcurve
