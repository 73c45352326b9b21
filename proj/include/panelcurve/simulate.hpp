#pragma once

#include <array>
#include <cstdint>

#include "panelcurve/dataset.hpp"

namespace panelcurve {

/// Synthetic-panel generator used for fixtures and Monte Carlo oracles.
///
/// Inflation follows the estimated equation with known parameters:
///   pi_it = b0 + b1 x_it + b2 gap_it + b3 x_it D_it + b4 gap_it D_it
///           + omega_i + eps_it
/// where x is the expected-inflation AR(1) process, gap is the HP log-gap of
/// the generated unemployment series (computed with the same filter the
/// analysis applies, so the regression holds exactly in the realized design),
/// D marks recession regimes, omega_i ~ N(0, sigma_u^2), and eps is scaled by
/// recession_noise_mult inside recessions. CPI levels are cumulated from pi;
/// gdp_growth is strictly positive in tranquil quarters and strictly negative
/// in recessions.
struct SimConfig {
    std::size_t n_entities = 41;
    std::size_t n_periods = 145;
    Quarter start = {1980, 1};

    std::array<double, 5> beta = {0.003, 0.5, -0.07, 0.10, 0.0};
    double sigma_u = 0.012;            // entity-effect SD
    double sigma_e = 0.012;            // tranquil idiosyncratic SD
    double recession_noise_mult = 10.0;

    // Regime process: per-entity two-state Markov chain. Setting
    // recession_stay == recession_enter gives i.i.d. Bernoulli regimes.
    double recession_enter = 0.025;
    double recession_stay = 0.70;

    // Expected-inflation AR(1); entity levels tilt with the entity effect so
    // random-effects orthogonality fails by construction when wanted.
    double expectation_mean = 0.008;
    double expectation_rho = 0.90;
    double expectation_sd = 0.006; // stationary SD
    double effect_level_corr = 0.006; // entity-level shift per unit effect draw

    // Unemployment: log(U + 1) = level_i + AR(1) cycle.
    double u_log_level = 1.95;
    double u_level_sd = 0.25;
    double u_gap_rho = 0.85;
    double u_gap_sd = 0.035; // stationary SD

    double hp_lambda = 1600.0;
    std::uint64_t seed = 42;
};

PanelDataset simulate_panel(const SimConfig& config);

} // namespace panelcurve
