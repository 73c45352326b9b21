#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "panelcurve/errors.hpp"
#include "panelcurve/unit_root.hpp"

using namespace panelcurve;

namespace {

std::vector<double> random_walk(std::size_t n, Rng& rng) {
    std::vector<double> y(n);
    double level = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        level += rng.normal();
        y[t] = level;
    }
    return y;
}

std::vector<double> ar1(std::size_t n, double phi, Rng& rng) {
    std::vector<double> y(n);
    double state = rng.normal() / std::sqrt(1.0 - phi * phi);
    for (std::size_t t = 0; t < n; ++t) {
        state = phi * state + rng.normal();
        y[t] = state;
    }
    return y;
}

std::vector<double> white_noise(std::size_t n, Rng& rng) {
    std::vector<double> y(n);
    for (double& v : y) v = rng.normal();
    return y;
}

// Independent reconstruction of the final ADF regression through the
// normal-equations oracle.
double adf_tstat_oracle(const std::vector<double>& y, int lag) {
    const auto t_max = static_cast<Eigen::Index>(y.size());
    const Eigen::Index n = t_max - (lag + 1);
    Eigen::MatrixXd x(n, 2 + lag);
    Eigen::VectorXd dy(n);
    for (Eigen::Index t = lag + 1; t < t_max; ++t) {
        const Eigen::Index r = t - (lag + 1);
        dy(r) = y[t] - y[t - 1];
        x(r, 0) = 1.0;
        x(r, 1) = y[t - 1];
        for (int i = 1; i <= lag; ++i) x(r, 1 + i) = y[t - i] - y[t - i - 1];
    }
    auto fit = testutil::normal_equations(x, dy);
    const double s2 = fit.rss / static_cast<double>(n - (2 + lag));
    return fit.beta(1) / std::sqrt(s2 * fit.xtx_inv(1, 1));
}

} // namespace

TEST_SUITE_BEGIN("unit_root");

TEST_CASE("sic formula and monotone penalty") {
    CHECK(sic(10.0, 10, 0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(sic(10.0, 10, 2) == doctest::Approx(2.0 * std::log(10.0) / 10.0).epsilon(1e-12));
    double prev = sic(7.5, 50, 0);
    for (std::size_t k = 1; k < 6; ++k) {
        const double cur = sic(7.5, 50, k);
        CHECK(cur > prev);
        prev = cur;
    }
    CHECK_THROWS_AS(sic(0.0, 10, 1), NumericError);
    CHECK_THROWS_AS(sic(-1.0, 10, 1), NumericError);
}

TEST_CASE("adf statistic equals a brute-force regression at the selected lag") {
    Rng rng(101);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> y = ar1(120, 0.6, rng);
        UnitRootResult result = adf_test(y, 13);
        const double oracle = adf_tstat_oracle(y, result.lag_or_bandwidth);
        CHECK(result.statistic == doctest::Approx(oracle).epsilon(1e-10));
        CHECK(result.n_obs == static_cast<int>(y.size()) - 1 - result.lag_or_bandwidth);
    }
}

TEST_CASE("adf rejects stationary white noise") {
    Rng rng(202);
    std::vector<double> y = white_noise(200, rng);
    UnitRootResult result = adf_test(y);
    CHECK(result.p_value < 0.01);
}

TEST_CASE("adf length precondition") {
    Rng rng(203);
    std::vector<double> y = white_noise(15, rng); // max_lag + 2
    CHECK_THROWS_AS(adf_test(y, 13), DataError);
    std::vector<double> y2 = white_noise(16, rng); // boundary: max_lag + 3
    CHECK_NOTHROW(adf_test(y2, 13));
}

TEST_CASE("adf lag choice and t-stat are invariant to affine rescaling") {
    Rng rng(404);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> y = ar1(150, 0.7, rng);
        std::vector<double> scaled(y.size());
        for (std::size_t t = 0; t < y.size(); ++t) scaled[t] = -3.7 * y[t] + 11.0;
        UnitRootResult a = adf_test(y), b = adf_test(scaled);
        CHECK(a.lag_or_bandwidth == b.lag_or_bandwidth);
        CHECK(a.statistic == doctest::Approx(b.statistic).epsilon(1e-9));
    }
}

TEST_CASE("newey-west bandwidth rule") {
    CHECK(nw_bandwidth(100) == 4);
    CHECK(nw_bandwidth(144) == 4);
    CHECK(nw_bandwidth(1000) == 6);
    CHECK(nw_bandwidth(1) == 1); // 4 * 0.01^(2/9) = 1.43
}

TEST_CASE("bartlett long-run variance") {
    Rng rng(77);
    std::vector<double> e = white_noise(200, rng);

    // B = 0 reduces to the lag-0 autocovariance.
    double mean = 0.0;
    for (double v : e) mean += v / static_cast<double>(e.size());
    double gamma0 = 0.0;
    for (double v : e) gamma0 += (v - mean) * (v - mean) / static_cast<double>(e.size());
    CHECK(bartlett_lrv(e, 0) == doctest::Approx(gamma0).epsilon(1e-12));

    // Kernel weights: hand-assembled estimate for B = 2.
    auto gamma = [&](int j) {
        double acc = 0.0;
        for (std::size_t i = j; i < e.size(); ++i)
            acc += (e[i] - mean) * (e[i - j] - mean);
        return acc / static_cast<double>(e.size());
    };
    const double expected = gamma(0) + 2.0 * ((1.0 - 1.0 / 3.0) * gamma(1) +
                                              (1.0 - 2.0 / 3.0) * gamma(2));
    CHECK(bartlett_lrv(e, 2) == doctest::Approx(expected).epsilon(1e-12));

    CHECK_THROWS_AS(bartlett_lrv(std::vector<double>(5, 1.0), 5), DataError);
}

TEST_CASE("bartlett lrv is consistent for iid data") {
    Rng rng(88);
    std::vector<double> e = white_noise(5000, rng);
    const double gamma0 = bartlett_lrv(e, 0);
    const double lrv = bartlett_lrv(e, nw_bandwidth(e.size()));
    CHECK(lrv / gamma0 > 0.9);
    CHECK(lrv / gamma0 < 1.1);
}

TEST_CASE("pp with zero bandwidth is the dickey-fuller t-test") {
    Rng rng(99);
    std::vector<double> y = random_walk(80, rng);
    UnitRootResult pp = pp_test(y, 0);
    UnitRootResult adf = adf_test(y, 0);
    CHECK(pp.statistic == doctest::Approx(adf.statistic).epsilon(1e-10));
    CHECK(pp.n_obs == adf.n_obs);
}

TEST_CASE("pp rejects stationary white noise") {
    Rng rng(111);
    std::vector<double> y = white_noise(200, rng);
    CHECK(pp_test(y).p_value < 0.01);
    CHECK_THROWS_AS(pp_test(white_noise(9, rng)), DataError);
}

TEST_CASE("df p-values sit at the published critical values") {
    CHECK(std::abs(df_pvalue(-3.43, 10000) - 0.01) <= 0.005);
    CHECK(std::abs(df_pvalue(-2.86, 10000) - 0.05) <= 0.01);
    CHECK(df_pvalue(0.0, 10000) > 0.9);
    CHECK(df_pvalue(-30.0, 100) == 0.0001); // clamped
    CHECK(df_pvalue(30.0, 100) == 0.9999);
}

TEST_CASE("df p-value is monotone in the statistic") {
    for (std::size_t n : {std::size_t{30}, std::size_t{150}, std::size_t{5000}}) {
        double prev = 0.0;
        for (double stat = -6.0; stat <= 3.0; stat += 0.05) {
            const double p = df_pvalue(stat, n);
            CHECK(p >= prev);
            CHECK(p >= 0.0001);
            CHECK(p <= 0.9999);
            prev = p;
        }
    }
}

TEST_CASE("monte carlo size and power smoke checks") {
    // Smaller-scale versions of the acceptance criteria, wide tolerances.
    Rng rng(2024);
    int adf_reject_size = 0, adf_reject_power = 0, pp_reject_size = 0;
    const int reps = 400;
    for (int rep = 0; rep < reps; ++rep) {
        std::vector<double> walk = random_walk(200, rng);
        if (adf_test(walk).p_value < 0.05) ++adf_reject_size;
        if (pp_test(walk).p_value < 0.05) ++pp_reject_size;
        std::vector<double> stat = ar1(200, 0.5, rng);
        if (adf_test(stat).p_value < 0.05) ++adf_reject_power;
    }
    CHECK(adf_reject_size >= reps * 0.01);
    CHECK(adf_reject_size <= reps * 0.10);
    CHECK(pp_reject_size >= reps * 0.01);
    CHECK(pp_reject_size <= reps * 0.10);
    CHECK(adf_reject_power >= reps * 0.95);
}

TEST_SUITE_END();
