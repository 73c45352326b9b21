#include "panelcurve/spec_tests.hpp"

#include <cmath>

#include "panelcurve/distributions.hpp"
#include "panelcurve/errors.hpp"

namespace panelcurve {

namespace {

std::vector<std::vector<double>> residuals_by_entity(const EstimationResult& result) {
    std::vector<std::vector<double>> groups(result.n_groups());
    for (std::size_t g = 0; g < result.n_groups(); ++g) {
        const std::size_t start = result.group_offsets[g];
        const std::size_t end = result.group_offsets[g + 1];
        groups[g].assign(result.residuals.data() + start, result.residuals.data() + end);
    }
    return groups;
}

// Shared core of the two LM statistics: the residual ratio term and the
// Baltagi-Li scale (N T / (2(T-1)) for balanced groups).
struct LmParts {
    double scale = 0.0;
    double ratio_minus_one = 0.0;
};

LmParts lm_parts(const std::vector<std::vector<double>>& groups) {
    if (groups.empty()) throw UsageError("LM test: no residual groups");
    double total = 0.0, sum_sq = 0.0, sum_group_sq = 0.0, sum_tt1 = 0.0;
    for (const auto& g : groups) {
        double s = 0.0;
        for (double e : g) {
            s += e;
            sum_sq += e * e;
        }
        sum_group_sq += s * s;
        total += static_cast<double>(g.size());
        sum_tt1 += static_cast<double>(g.size()) * static_cast<double>(g.size() - 1);
    }
    if (sum_sq == 0.0) throw DataError("LM test: residuals are identically zero");
    if (sum_tt1 == 0.0) throw DataError("LM test: need at least one entity with >= 2 residuals");
    LmParts parts;
    parts.scale = total * total / (2.0 * sum_tt1);
    parts.ratio_minus_one = sum_group_sq / sum_sq - 1.0;
    return parts;
}

} // namespace

const char* to_string(DistKind kind) {
    switch (kind) {
        case DistKind::f: return "F";
        case DistKind::chi_squared: return "chi-square";
        case DistKind::standard_normal: return "normal";
    }
    return "?";
}

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::pooled: return "pooled";
        case ModelKind::fixed_effects: return "fixed_effects";
        case ModelKind::random_effects: return "random_effects";
    }
    return "?";
}

double TestResult::recompute_p() const {
    switch (dist) {
        case DistKind::f: return f_sf(statistic, df1, df2);
        case DistKind::chi_squared: return chi_squared_sf(statistic, df1);
        case DistKind::standard_normal: return normal_sf(statistic);
    }
    return 1.0;
}

RedundantFEResult redundant_fe_test(const EstimationResult& pooled_result,
                                    const EstimationResult& fe_result) {
    if (pooled_result.effects != Effects::pooled)
        throw UsageError("redundant_fe_test: first argument must be a pooled fit");
    if (fe_result.effects != Effects::entity_fixed &&
        fe_result.effects != Effects::two_way_fixed)
        throw UsageError("redundant_fe_test: second argument must be a fixed-effects fit");
    if (pooled_result.n_obs != fe_result.n_obs ||
        pooled_result.n_slopes != fe_result.n_slopes ||
        pooled_result.group_entities != fe_result.group_entities)
        throw UsageError("redundant_fe_test: results come from different specs or samples");

    const double n = static_cast<double>(fe_result.n_obs);
    const double groups = static_cast<double>(fe_result.n_groups());
    const double k = static_cast<double>(fe_result.n_slopes);
    const double df1 = groups - 1.0;
    const double df2 = n - groups - k;
    if (df1 <= 0.0 || df2 <= 0.0) throw UsageError("redundant_fe_test: non-positive df");

    const double rss_ratio = pooled_result.rss / fe_result.rss;
    const double f_stat =
        ((pooled_result.rss - fe_result.rss) / df1) / (fe_result.rss / df2);

    RedundantFEResult result;
    result.f_form = {"redundant_fe_f", f_stat, DistKind::f, df1, df2,
                     f_sf(f_stat, df1, df2),
                     "no unobserved heterogeneity (no fixed effects)"};
    const double chi2 = n * std::log(rss_ratio);
    result.chi2_form = {"redundant_fe_chi2", chi2, DistKind::chi_squared, df1, 0.0,
                        chi_squared_sf(chi2, df1),
                        "no unobserved heterogeneity (no fixed effects)"};
    return result;
}

TestResult breusch_pagan_lm(const std::vector<std::vector<double>>& residual_groups) {
    LmParts parts = lm_parts(residual_groups);
    const double lm = parts.scale * parts.ratio_minus_one * parts.ratio_minus_one;
    return {"breusch_pagan_lm", lm, DistKind::chi_squared, 1.0, 0.0, chi_squared_sf(lm, 1.0),
            "no random effects"};
}

TestResult breusch_pagan_lm(const EstimationResult& pooled_result) {
    return breusch_pagan_lm(residuals_by_entity(pooled_result));
}

TestResult honda_lm(const std::vector<std::vector<double>>& residual_groups) {
    LmParts parts = lm_parts(residual_groups);
    const double a = std::sqrt(parts.scale) * parts.ratio_minus_one;
    return {"honda_lm", a, DistKind::standard_normal, 0.0, 0.0, normal_sf(a),
            "no random effects"};
}

TestResult honda_lm(const EstimationResult& pooled_result) {
    return honda_lm(residuals_by_entity(pooled_result));
}

TestResult hausman(const EstimationResult& fe_result, const EstimationResult& re_result,
                   std::vector<std::string> slope_subset) {
    if (slope_subset.empty()) {
        for (const auto& name : fe_result.names)
            if (name != "const") slope_subset.push_back(name);
    }
    if (slope_subset.empty()) throw UsageError("hausman: empty coefficient subset");

    const std::size_t k = slope_subset.size();
    Eigen::VectorXd delta(k);
    Eigen::MatrixXd var_diff(k, k);
    std::vector<std::size_t> fe_idx(k), re_idx(k);
    for (std::size_t a = 0; a < k; ++a) {
        if (slope_subset[a] == "const")
            throw UsageError("hausman: intercepts are not comparable across FE and RE");
        fe_idx[a] = fe_result.index_of(slope_subset[a]);
        re_idx[a] = re_result.index_of(slope_subset[a]);
        delta(a) = fe_result.coef(fe_idx[a]) - re_result.coef(re_idx[a]);
    }
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            var_diff(a, b) = fe_result.cov_classical(fe_idx[a], fe_idx[b]) -
                             re_result.cov_classical(re_idx[a], re_idx[b]);

    // Symmetrize, then Moore-Penrose pseudo-inverse with a relative singular
    // value cutoff; df is the numerical rank of the difference.
    Eigen::MatrixXd sym = 0.5 * (var_diff + var_diff.transpose());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sym, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double tol = 1e-10 * (sv.size() > 0 ? sv(0) : 0.0);
    Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol && sv(i) > 0.0) {
            inv_sv(i) = 1.0 / sv(i);
            ++rank;
        }
    Eigen::MatrixXd pinv = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();

    const double h = delta.dot(pinv * delta);
    const double df = static_cast<double>(std::max(rank, 1));

    TestResult result{"hausman",
                      h,
                      DistKind::chi_squared,
                      df,
                      0.0,
                      chi_squared_sf(h, df),
                      "FE and RE estimators are both consistent (RE efficient)"};
    result.non_rejection = h < 0.0;
    return result;
}

ModelChoice select_model(const TestResult& fe_test, const TestResult& re_test,
                         const std::optional<TestResult>& hausman_test, double level) {
    if (!(level > 0.0 && level < 0.5))
        throw ConfigError("select_model: significance level must lie in (0, 0.5)");

    const bool fe_rejects = fe_test.p_value < level;
    const bool re_rejects = re_test.p_value < level;

    ModelChoice choice;
    choice.fe_test = fe_test;
    choice.re_test = re_test;
    choice.hausman_test = hausman_test;
    choice.level = level;

    if (!fe_rejects && !re_rejects) {
        choice.selected = ModelKind::pooled;
        choice.decision_row = 1;
    } else if (fe_rejects && !re_rejects) {
        choice.selected = ModelKind::fixed_effects;
        choice.decision_row = 2;
    } else if (!fe_rejects && re_rejects) {
        choice.selected = ModelKind::random_effects;
        choice.decision_row = 3;
    } else {
        if (!hausman_test)
            throw UsageError("select_model: both effects present but no Hausman result given");
        choice.decision_row = 4;
        const bool hausman_rejects =
            hausman_test->p_value < level && !hausman_test->non_rejection;
        choice.selected = hausman_rejects ? ModelKind::fixed_effects : ModelKind::random_effects;
    }
    return choice;
}

} // namespace panelcurve
