#include "panelcurve/hp_filter.hpp"

#include <cmath>

#include "panelcurve/errors.hpp"
#include "panelcurve/transforms.hpp"

namespace panelcurve {

double ravn_uhlig_lambda(int periods_per_year, double exponent, double base) {
    if (periods_per_year < 1) throw ConfigError("ravn_uhlig_lambda: periods_per_year must be >= 1");
    if (!(exponent > 0.0)) throw ConfigError("ravn_uhlig_lambda: exponent must be positive");
    return std::pow(periods_per_year / 4.0, exponent) * base;
}

HPResult hp_filter(std::span<const double> series, double lambda) {
    const std::size_t n = series.size();
    if (n < 4) throw DataError("hp_filter: need at least 4 observations, got " + std::to_string(n));
    if (!(lambda > 0.0)) throw ConfigError("hp_filter: lambda must be positive");

    // Diagonals of A = I + lambda * D'D with D the (T-2)xT second-difference
    // operator. d0 = main, d1 = first off, d2 = second off.
    std::vector<double> d0(n), d1(n - 1), d2(n - 2, lambda);
    d0[0] = d0[n - 1] = 1.0 + lambda;
    d0[1] = d0[n - 2] = 1.0 + 5.0 * lambda;
    for (std::size_t i = 2; i + 2 < n; ++i) d0[i] = 1.0 + 6.0 * lambda;
    d1[0] = d1[n - 2] = -2.0 * lambda;
    for (std::size_t i = 1; i + 2 < n; ++i) d1[i] = -4.0 * lambda;

    // Banded Cholesky A = LL', L lower with two sub-diagonals.
    std::vector<double> l0(n), l1(n - 1), l2(n - 2);
    for (std::size_t i = 0; i < n; ++i) {
        double a = d0[i];
        if (i >= 1) a -= l1[i - 1] * l1[i - 1];
        if (i >= 2) a -= l2[i - 2] * l2[i - 2];
        l0[i] = std::sqrt(a);
        if (i + 1 < n) {
            double b = d1[i];
            if (i >= 1) b -= l1[i - 1] * l2[i - 1];
            l1[i] = b / l0[i];
        }
        if (i + 2 < n) l2[i] = d2[i] / l0[i];
    }

    // Solve for the cycle: (I + lambda F) c = lambda F y. The right-hand side
    // vanishes exactly on affine inputs, so those pass through untouched even
    // at extreme lambda.
    std::vector<double> rhs(n, 0.0);
    for (std::size_t r = 0; r + 2 < n; ++r) {
        const double second_diff = series[r] - 2.0 * series[r + 1] + series[r + 2];
        const double w = lambda * second_diff;
        rhs[r] += w;
        rhs[r + 1] -= 2.0 * w;
        rhs[r + 2] += w;
    }

    HPResult result;
    result.lambda = lambda;
    result.trend.resize(n);
    result.cycle.resize(n);

    // Forward substitution Lz = rhs, then back substitution L'c = z.
    std::vector<double>& z = result.trend; // scratch
    for (std::size_t i = 0; i < n; ++i) {
        double v = rhs[i];
        if (i >= 1) v -= l1[i - 1] * z[i - 1];
        if (i >= 2) v -= l2[i - 2] * z[i - 2];
        z[i] = v / l0[i];
    }
    std::vector<double>& c = result.cycle;
    for (std::size_t ii = n; ii-- > 0;) {
        double v = z[ii];
        if (ii + 1 < n) v -= l1[ii] * c[ii + 1];
        if (ii + 2 < n) v -= l2[ii] * c[ii + 2];
        c[ii] = v / l0[ii];
    }
    for (std::size_t i = 0; i < n; ++i) result.trend[i] = series[i] - result.cycle[i];
    return result;
}

Series unemployment_gap(std::span<const Cell> series, double lambda, std::optional<double> shift) {
    SpanView span = contiguous_span(series, "unemployment_gap");
    const double c = shift ? *shift : default_log_shift(series);
    std::vector<double> logged(span.values.size());
    for (std::size_t t = 0; t < span.values.size(); ++t) logged[t] = log_shift(span.values[t], c);

    HPResult hp = hp_filter(logged, lambda);
    Series gap(series.size());
    for (std::size_t t = 0; t < logged.size(); ++t) gap[span.offset + t] = hp.cycle[t];
    return gap;
}

Grid unemployment_gap(const Grid& grid, double lambda, std::optional<double> shift) {
    const double c = shift ? *shift : default_log_shift(grid);
    Grid out(grid.n_entities, grid.n_periods);
    for (std::size_t e = 0; e < grid.n_entities; ++e)
        out.set_row(e, unemployment_gap(grid.row(e), lambda, c));
    return out;
}

} // namespace panelcurve
