#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace panelcurve {

enum class UnitRootKind { adf, pp };

/// Outcome of an ADF or PP regression, intercept case. `lag_or_bandwidth` is
/// the SIC-selected lag L for ADF and the Newey-West bandwidth B for PP;
/// `n_obs` is the effective regression sample.
struct UnitRootResult {
    UnitRootKind kind = UnitRootKind::adf;
    double statistic = 0.0;
    int lag_or_bandwidth = 0;
    int n_obs = 0;
    double p_value = 1.0;
};

/// Schwarz information criterion: ln(rss/n) + k ln(n)/n.
double sic(double rss, std::size_t n, std::size_t k);

/// Augmented Dickey-Fuller test with intercept. Candidate lags 0..max_lag are
/// compared by SIC on the common sample trimmed for the largest feasible lag,
/// then the winner is re-fit on its own longest sample. Requires a hole-free
/// span of length >= max_lag + 3.
UnitRootResult adf_test(std::span<const double> series, int max_lag = 13);

/// Newey-West automatic bandwidth for the Bartlett kernel:
/// floor(4 (T/100)^(2/9)).
int nw_bandwidth(std::size_t t);

/// Bartlett long-run variance: g0 + 2 sum_{j=1..B} (1 - j/(B+1)) g_j, with
/// autocovariances in the 1/N convention (keeps the estimate PSD).
double bartlett_lrv(std::span<const double> residuals, int bandwidth);

/// Phillips-Perron Z_t test with intercept. The bandwidth defaults to
/// nw_bandwidth of the regression sample; forcing it to 0 reduces Z_t to the
/// plain Dickey-Fuller t-statistic. Requires a hole-free span of length >= 10.
UnitRootResult pp_test(std::span<const double> series,
                       std::optional<int> bandwidth = std::nullopt);

/// One-sided p-value of the Dickey-Fuller t-distribution (intercept case) by
/// monotone cubic interpolation of tabulated finite-sample quantiles with a
/// 1/N adjustment between tabulated sample sizes. Clamped to
/// [0.0001, 0.9999] beyond the table.
double df_pvalue(double statistic, std::size_t n_obs);

} // namespace panelcurve
