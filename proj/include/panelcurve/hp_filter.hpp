#pragma once

#include <optional>
#include <span>
#include <vector>

#include "panelcurve/dataset.hpp"

namespace panelcurve {

/// λ = (periods_per_year / 4)^x × base. Quarterly data give 1600 regardless
/// of the exponent.
double ravn_uhlig_lambda(int periods_per_year, double exponent, double base = 1600.0);

struct SmoothingRule {
    int periods_per_year = 4;
    double exponent = 2.0;
    double base = 1600.0;

    double lambda() const { return ravn_uhlig_lambda(periods_per_year, exponent, base); }
};

struct HPResult {
    std::vector<double> trend;
    std::vector<double> cycle; // input - trend
    double lambda = 0.0;
};

/// Hodrick–Prescott decomposition. The trend solves (I + λF)τ = y where F is
/// the second-difference penalty matrix; the system is symmetric positive
/// definite with bandwidth 2 and is solved by banded Cholesky in O(T).
/// Natural boundary rows, no padding. Requires T >= 4 and λ > 0.
HPResult hp_filter(std::span<const double> series, double lambda);

/// log-gap of a series against its own HP trend: log_shift both, filter, and
/// subtract. Leading/trailing holes are excluded from the filtered span;
/// interior holes are an error. The shift defaults to the per-series rule.
Series unemployment_gap(std::span<const Cell> series, double lambda,
                        std::optional<double> shift = std::nullopt);
Grid unemployment_gap(const Grid& grid, double lambda,
                      std::optional<double> shift = std::nullopt);

} // namespace panelcurve
