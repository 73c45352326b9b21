#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <vector>

#include "panelcurve/dataset.hpp"
#include "panelcurve/design.hpp"
#include "panelcurve/rng.hpp"

namespace testutil {

using namespace panelcurve;

// Dense HP-filter oracle: assemble I + lambda F explicitly and solve with a
// full-pivot LU. Independent of the banded production path.
inline std::vector<double> dense_hp_trend(const std::vector<double>& y, double lambda) {
    const auto n = static_cast<Eigen::Index>(y.size());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n - 2, n);
    for (Eigen::Index r = 0; r < n - 2; ++r) {
        d(r, r) = 1.0;
        d(r, r + 1) = -2.0;
        d(r, r + 2) = 1.0;
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) + lambda * d.transpose() * d;
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    Eigen::VectorXd tau = a.fullPivLu().solve(rhs);
    return {tau.data(), tau.data() + n};
}

// Normal-equations OLS oracle with explicit inversion; deliberately the
// naive textbook route.
struct OracleFit {
    Eigen::VectorXd beta;
    Eigen::MatrixXd xtx_inv;
    Eigen::VectorXd resid;
    double rss = 0.0;
};

inline OracleFit normal_equations(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    OracleFit fit;
    fit.xtx_inv = (x.transpose() * x).inverse();
    fit.beta = fit.xtx_inv * x.transpose() * y;
    fit.resid = y - x * fit.beta;
    fit.rss = fit.resid.squaredNorm();
    return fit;
}

// Element-by-element sandwich assembly: sum_i e_i^2 x_i x_i'.
inline Eigen::MatrixXd brute_force_sandwich(const Eigen::MatrixXd& x,
                                            const Eigen::VectorXd& resid) {
    Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(x.cols(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        meat += resid(i) * resid(i) * x.row(i).transpose() * x.row(i);
    return xtx_inv * meat * xtx_inv;
}

// Balanced panel with known coefficients; regressors have both within and
// between variation so every estimator is identified.
struct TestPanel {
    PanelDataset data;
    ModelSpec spec; // y on x1, x2, intercept
};

inline TestPanel make_panel(std::size_t n_entities, std::size_t n_periods, double beta1,
                            double beta2, double sigma_entity, double sigma_noise, Rng& rng,
                            double beta0 = 0.5) {
    PanelDataset data;
    for (std::size_t i = 0; i < n_entities; ++i) {
        char code[32];
        std::snprintf(code, sizeof code, "P%02zu", i);
        data.entities.push_back(code);
    }
    Quarter q{2000, 1};
    for (std::size_t t = 0; t < n_periods; ++t, q = q.next()) data.periods.push_back(q);

    Grid y(n_entities, n_periods), x1(n_entities, n_periods), x2(n_entities, n_periods);
    for (std::size_t i = 0; i < n_entities; ++i) {
        const double alpha = sigma_entity * rng.normal();
        const double x1_level = rng.normal(0.0, 1.0);
        const double x2_level = rng.normal(0.0, 1.0);
        for (std::size_t t = 0; t < n_periods; ++t) {
            const double v1 = x1_level + rng.normal();
            const double v2 = x2_level + rng.normal();
            x1.at(i, t) = v1;
            x2.at(i, t) = v2;
            y.at(i, t) = beta0 + beta1 * v1 + beta2 * v2 + alpha + sigma_noise * rng.normal();
        }
    }
    TestPanel panel;
    panel.data.entities = data.entities;
    panel.data.periods = data.periods;
    panel.data.series["y"] = std::move(y);
    panel.data.series["x1"] = std::move(x1);
    panel.data.series["x2"] = std::move(x2);
    panel.data.balanced = true;

    panel.spec.regressand = SeriesRef{"y", {}, "y"};
    panel.spec.regressors = {SeriesRef{"x1", {}, "x1"}, SeriesRef{"x2", {}, "x2"}};
    panel.spec.intercept = true;
    return panel;
}

// LSDV oracle: slopes from explicit entity dummies, no global intercept.
inline Eigen::VectorXd lsdv_slopes(const DesignMatrix& design) {
    const auto n = static_cast<Eigen::Index>(design.n_rows());
    const auto k = static_cast<Eigen::Index>(design.n_cols());
    const auto g = static_cast<Eigen::Index>(design.n_groups());
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, k + g);
    x.leftCols(k) = design.X;
    for (std::size_t grp = 0; grp < design.n_groups(); ++grp)
        for (std::size_t r = design.group_offsets[grp]; r < design.group_offsets[grp + 1]; ++r)
            x(static_cast<Eigen::Index>(r), k + static_cast<Eigen::Index>(grp)) = 1.0;
    Eigen::VectorXd full = x.colPivHouseholderQr().solve(design.y);
    return full.head(k);
}

} // namespace testutil
