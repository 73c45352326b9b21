#pragma once

namespace panelcurve {

// Thin wrappers over Boost.Math; all survival functions return upper-tail
// probabilities clamped to [0, 1].
double normal_cdf(double z);
double normal_sf(double z);
double chi_squared_sf(double x, double df); // x <= 0 yields 1
double f_sf(double x, double df1, double df2);

} // namespace panelcurve
