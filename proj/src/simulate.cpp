#include "panelcurve/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "panelcurve/errors.hpp"
#include "panelcurve/hp_filter.hpp"
#include "panelcurve/rng.hpp"

namespace panelcurve {

namespace {

std::string entity_code(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "C%02zu", i + 1);
    return buf;
}

} // namespace

PanelDataset simulate_panel(const SimConfig& config) {
    if (config.n_entities == 0 || config.n_periods < 6)
        throw ConfigError("simulate_panel: need at least 1 entity and 6 periods");
    if (config.sigma_u < 0.0 || config.sigma_e < 0.0)
        throw ConfigError("simulate_panel: SDs must be non-negative");
    for (double rho : {config.expectation_rho, config.u_gap_rho})
        if (!(rho > -1.0 && rho < 1.0))
            throw ConfigError("simulate_panel: AR parameters must lie in (-1, 1)");

    const std::size_t n = config.n_entities;
    const std::size_t p = config.n_periods;
    Rng rng(config.seed);

    PanelDataset data;
    for (std::size_t i = 0; i < n; ++i) data.entities.push_back(entity_code(i));
    Quarter q = config.start;
    for (std::size_t t = 0; t < p; ++t, q = q.next()) data.periods.push_back(q);
    for (const auto& v : standard_variables()) data.series.emplace(v, Grid(n, p));

    Grid& cpi = data.series["cpi"];
    Grid& expected = data.series["expected_cpi"];
    Grid& unemployment = data.series["unemployment"];
    Grid& growth = data.series["gdp_growth"];

    const double x_innov_sd =
        config.expectation_sd * std::sqrt(1.0 - config.expectation_rho * config.expectation_rho);
    const double g_innov_sd =
        config.u_gap_sd * std::sqrt(1.0 - config.u_gap_rho * config.u_gap_rho);
    const double stationary_recession =
        config.recession_enter / (config.recession_enter + 1.0 - config.recession_stay);

    // CPI levels are written in a second pass: a common shift keeps every
    // level positive (so the analysis-side log shift is exactly 1) without
    // touching the log first differences that define pi.
    std::vector<std::vector<double>> log_levels(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double z = rng.normal();
        const double omega = config.sigma_u * z;
        const double x_level = config.expectation_mean + config.effect_level_corr * z;
        const double u_level = config.u_log_level + config.u_level_sd * rng.normal();

        // Expected inflation and the latent log-unemployment cycle.
        std::vector<double> x(p), log_u(p);
        double x_ar = config.expectation_sd * rng.normal();
        double g_ar = config.u_gap_sd * rng.normal();
        for (std::size_t t = 0; t < p; ++t) {
            if (t > 0) {
                x_ar = config.expectation_rho * x_ar + x_innov_sd * rng.normal();
                g_ar = config.u_gap_rho * g_ar + g_innov_sd * rng.normal();
            }
            x[t] = x_level + x_ar;
            log_u[t] = u_level + g_ar;
            expected.at(i, t) = x[t];
            unemployment.at(i, t) = std::exp(log_u[t]) - 1.0;
        }

        // Regimes and a growth series consistent with them under either
        // recession rule (strictly positive vs strictly negative).
        std::vector<bool> recession(p);
        bool state = rng.bernoulli(stationary_recession);
        for (std::size_t t = 0; t < p; ++t) {
            if (t > 0)
                state = rng.bernoulli(state ? config.recession_stay : config.recession_enter);
            recession[t] = state;
            growth.at(i, t) = state ? -0.3 - 1.8 * std::abs(rng.normal())
                                    : 0.4 + 2.2 * std::abs(rng.normal());
        }

        // Gap exactly as the analysis will compute it: HP cycle of log(U+1).
        Series u_row(p);
        for (std::size_t t = 0; t < p; ++t) u_row[t] = *unemployment.at(i, t);
        Series gap_cells = unemployment_gap(u_row, config.hp_lambda, 1.0);
        std::vector<double> gap(p);
        for (std::size_t t = 0; t < p; ++t) gap[t] = *gap_cells[t];

        // Log CPI levels cumulated from the structural inflation equation.
        std::vector<double>& levels = log_levels[i];
        levels.resize(p);
        levels[0] = std::log(100.0);
        for (std::size_t t = 1; t < p; ++t) {
            const double d = recession[t] ? 1.0 : 0.0;
            const double noise_sd =
                config.sigma_e * (recession[t] ? config.recession_noise_mult : 1.0);
            const double pi = config.beta[0] + config.beta[1] * x[t] + config.beta[2] * gap[t] +
                              config.beta[3] * x[t] * d + config.beta[4] * gap[t] * d + omega +
                              noise_sd * rng.normal();
            levels[t] = levels[t - 1] + pi;
        }
    }

    double min_level = log_levels[0][0];
    for (const auto& levels : log_levels)
        for (double l : levels) min_level = std::min(min_level, l);
    const double shift = std::max(0.0, 0.1 - min_level);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < p; ++t)
            cpi.at(i, t) = std::exp(log_levels[i][t] + shift) - 1.0;

    data.balanced = data.compute_balanced();
    return data;
}

} // namespace panelcurve
