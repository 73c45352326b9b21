#include "panelcurve/distributions.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>

namespace panelcurve {

double normal_cdf(double z) {
    static const boost::math::normal_distribution<double> dist(0.0, 1.0);
    return boost::math::cdf(dist, z);
}

double normal_sf(double z) {
    static const boost::math::normal_distribution<double> dist(0.0, 1.0);
    return boost::math::cdf(boost::math::complement(dist, z));
}

double chi_squared_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    boost::math::chi_squared_distribution<double> dist(df);
    return boost::math::cdf(boost::math::complement(dist, x));
}

double f_sf(double x, double df1, double df2) {
    if (x <= 0.0) return 1.0;
    boost::math::fisher_f_distribution<double> dist(df1, df2);
    return boost::math::cdf(boost::math::complement(dist, x));
}

} // namespace panelcurve
