#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "panelcurve/distributions.hpp"
#include "panelcurve/errors.hpp"
#include "panelcurve/spec_tests.hpp"

using namespace panelcurve;
using testutil::make_panel;

namespace {

std::vector<std::vector<double>> grouped(std::initializer_list<std::vector<double>> groups) {
    return {groups.begin(), groups.end()};
}

// Balanced iid residual panel for size checks.
std::vector<std::vector<double>> iid_groups(std::size_t n, std::size_t t, Rng& rng) {
    std::vector<std::vector<double>> groups(n);
    for (auto& g : groups) {
        g.resize(t);
        for (double& e : g) e = rng.normal();
    }
    return groups;
}

TestResult fake_test(double p) {
    return {"fake", 1.0, DistKind::chi_squared, 1.0, 0.0, p, "null"};
}

EstimationResult fake_result(const std::vector<std::string>& names,
                             const Eigen::VectorXd& coef, const Eigen::MatrixXd& cov) {
    EstimationResult r;
    r.names = names;
    r.coef = coef;
    r.cov_classical = cov;
    r.cov_white = cov;
    return r;
}

} // namespace

TEST_SUITE_BEGIN("spec_tests");

TEST_CASE("redundant fe test") {
    Rng rng(31);
    SUBCASE("identical fits give F = 0 and p near 1") {
        auto panel = make_panel(6, 10, 0.5, -0.5, 1.0, 0.6, rng);
        EstimationResult pl = pooled(panel.spec, panel.data);
        EstimationResult fe = fixed_effects(panel.spec, panel.data);
        fe.rss = pl.rss; // forced equality
        RedundantFEResult r = redundant_fe_test(pl, fe);
        CHECK(r.f_form.statistic == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(r.f_form.p_value > 0.999);
        CHECK(r.chi2_form.statistic == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(r.chi2_form.p_value > 0.999);
    }
    SUBCASE("strong entity effects are detected with near certainty") {
        int rejections = 0;
        const int reps = 500;
        for (int rep = 0; rep < reps; ++rep) {
            auto panel = make_panel(10, 20, 0.5, -0.5, 5.0, 1.0, rng);
            EstimationResult pl = pooled(panel.spec, panel.data);
            EstimationResult fe = fixed_effects(panel.spec, panel.data);
            if (redundant_fe_test(pl, fe).f_form.p_value < 0.01) ++rejections;
        }
        CHECK(rejections >= static_cast<int>(reps * 0.99));
    }
    SUBCASE("size under the null is close to nominal") {
        int rejections = 0;
        const int reps = 2000;
        for (int rep = 0; rep < reps; ++rep) {
            auto panel = make_panel(10, 20, 0.5, -0.5, 0.0, 1.0, rng);
            EstimationResult pl = pooled(panel.spec, panel.data);
            EstimationResult fe = fixed_effects(panel.spec, panel.data);
            if (redundant_fe_test(pl, fe).f_form.p_value < 0.05) ++rejections;
        }
        const double rate = rejections / static_cast<double>(reps);
        CHECK(rate >= 0.025);
        CHECK(rate <= 0.075);
    }
    SUBCASE("mismatched inputs are rejected") {
        auto panel = make_panel(6, 10, 0.5, -0.5, 1.0, 0.6, rng);
        auto other = make_panel(7, 10, 0.5, -0.5, 1.0, 0.6, rng);
        EstimationResult pl = pooled(panel.spec, panel.data);
        EstimationResult fe = fixed_effects(other.spec, other.data);
        CHECK_THROWS_AS(redundant_fe_test(pl, fe), UsageError);
        CHECK_THROWS_AS(redundant_fe_test(fe, fe), UsageError);
    }
}

TEST_CASE("breusch-pagan closed form: constant residual per entity") {
    // e_it = c_i with N=3, T=4: ratio = T, bracket = (T-1), LM = NT(T-1)/2.
    auto groups = grouped({{1.0, 1.0, 1.0, 1.0}, {-2.0, -2.0, -2.0, -2.0},
                           {0.5, 0.5, 0.5, 0.5}});
    TestResult bp = breusch_pagan_lm(groups);
    CHECK(bp.statistic == doctest::Approx(18.0).epsilon(1e-12));
    CHECK(bp.df1 == 1.0);
    CHECK(bp.p_value == doctest::Approx(chi_squared_sf(18.0, 1.0)).epsilon(1e-12));

    TestResult honda = honda_lm(groups);
    CHECK(honda.statistic == doctest::Approx(std::sqrt(18.0)).epsilon(1e-12));
    CHECK(honda.dist == DistKind::standard_normal);
}

TEST_CASE("breusch-pagan size under iid residuals") {
    Rng rng(32);
    int rejections = 0;
    const int reps = 2000;
    for (int rep = 0; rep < reps; ++rep) {
        auto groups = iid_groups(12, 8, rng);
        if (breusch_pagan_lm(groups).p_value < 0.05) ++rejections;
    }
    const double rate = rejections / static_cast<double>(reps);
    CHECK(rate >= 0.025);
    CHECK(rate <= 0.075);
}

TEST_CASE("breusch-pagan degenerate input") {
    CHECK_THROWS_WITH_AS(breusch_pagan_lm(grouped({{0.0, 0.0}, {0.0, 0.0}})),
                         doctest::Contains("identically zero"), DataError);
}

TEST_CASE("honda squared equals breusch-pagan for non-negative statistics") {
    Rng rng(33);
    int seen = 0;
    while (seen < 50) {
        auto groups = iid_groups(6, 5, rng);
        TestResult honda = honda_lm(groups);
        if (honda.statistic < 0.0) continue;
        TestResult bp = breusch_pagan_lm(groups);
        CHECK(honda.statistic * honda.statistic == doctest::Approx(bp.statistic).epsilon(1e-10));
        ++seen;
    }
}

TEST_CASE("honda statistic is asymptotically standard normal") {
    Rng rng(34);
    const int reps = 2000;
    double sum = 0.0, sum_sq = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        const double a = honda_lm(iid_groups(20, 10, rng)).statistic;
        sum += a;
        sum_sq += a * a;
    }
    const double mean = sum / reps;
    const double var = sum_sq / reps - mean * mean;
    CHECK(std::abs(mean) <= 0.1);
    CHECK(var >= 0.8);
    CHECK(var <= 1.2);
}

TEST_CASE("breusch-pagan is invariant to per-entity sign flips") {
    Rng rng(35);
    auto groups = iid_groups(8, 6, rng);
    TestResult base = breusch_pagan_lm(groups);
    auto flipped = groups;
    for (std::size_t i = 0; i < flipped.size(); i += 2)
        for (double& e : flipped[i]) e = -e;
    CHECK(breusch_pagan_lm(flipped).statistic == doctest::Approx(base.statistic).epsilon(1e-12));
}

TEST_CASE("hausman") {
    SUBCASE("equal coefficients give H = 0, p = 1") {
        Eigen::Vector2d beta(0.5, -0.2);
        Eigen::Matrix2d v_fe = Eigen::Matrix2d::Identity() * 0.05;
        Eigen::Matrix2d v_re = Eigen::Matrix2d::Identity() * 0.01;
        auto fe = fake_result({"a", "b"}, beta, v_fe);
        auto re = fake_result({"a", "b"}, beta, v_re);
        TestResult h = hausman(fe, re);
        CHECK(h.statistic == 0.0);
        CHECK(h.p_value == 1.0);
    }
    SUBCASE("hand 2x2 example: H = 2") {
        auto fe = fake_result({"a", "b"}, Eigen::Vector2d(0.6, -0.4),
                              Eigen::Vector2d(0.011, 0.041).asDiagonal());
        auto re = fake_result({"a", "b"}, Eigen::Vector2d(0.5, -0.2),
                              Eigen::Vector2d(0.001, 0.001).asDiagonal());
        // delta = (0.1, -0.2), var diff = diag(0.01, 0.04) -> H = 1 + 1.
        TestResult h = hausman(fe, re);
        CHECK(h.statistic == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(h.df1 == 2.0);
        CHECK(h.p_value == doctest::Approx(chi_squared_sf(2.0, 2.0)).epsilon(1e-12));
    }
    SUBCASE("df equals the slope-set size on a full-rank difference") {
        Rng rng(36);
        Eigen::VectorXd beta_fe(4), beta_re(4);
        Eigen::MatrixXd noise = Eigen::MatrixXd::Random(4, 4);
        Eigen::MatrixXd v_fe = Eigen::MatrixXd::Identity(4, 4) * 0.2 +
                               0.01 * (noise + noise.transpose());
        Eigen::MatrixXd v_re = Eigen::MatrixXd::Identity(4, 4) * 0.01;
        for (int i = 0; i < 4; ++i) {
            beta_fe(i) = rng.normal();
            beta_re(i) = rng.normal();
        }
        auto fe = fake_result({"a", "b", "c", "d"}, beta_fe, v_fe);
        auto re = fake_result({"a", "b", "c", "d"}, beta_re, v_re);
        TestResult h = hausman(fe, re);
        CHECK(h.df1 == 4.0);
        CHECK(h.statistic > 0.0);
    }
    SUBCASE("invariant under subset reordering") {
        Rng rng(37);
        auto panel = make_panel(10, 12, 0.5, -0.5, 1.5, 0.7, rng);
        EstimationResult fe = fixed_effects(panel.spec, panel.data);
        EstimationResult re = random_effects(panel.spec, panel.data);
        TestResult a = hausman(fe, re, {"x1", "x2"});
        TestResult b = hausman(fe, re, {"x2", "x1"});
        CHECK(a.statistic == doctest::Approx(b.statistic).epsilon(1e-10));
        CHECK(a.df1 == b.df1);
    }
    SUBCASE("negative statistic is flagged as forced non-rejection") {
        auto fe = fake_result({"a"}, Eigen::VectorXd::Constant(1, 0.5),
                              Eigen::MatrixXd::Constant(1, 1, 0.01));
        auto re = fake_result({"a"}, Eigen::VectorXd::Constant(1, 0.8),
                              Eigen::MatrixXd::Constant(1, 1, 0.05));
        TestResult h = hausman(fe, re); // var diff = -0.04
        CHECK(h.statistic < 0.0);
        CHECK(h.non_rejection);
    }
    SUBCASE("empty subset / intercept subset rejected") {
        auto fe = fake_result({"const"}, Eigen::VectorXd::Constant(1, 0.5),
                              Eigen::MatrixXd::Constant(1, 1, 0.01));
        auto re = fe;
        CHECK_THROWS_AS(hausman(fe, re), UsageError);
        CHECK_THROWS_AS(hausman(fe, re, {"const"}), UsageError);
    }
}

TEST_CASE("model selection decision table") {
    SUBCASE("the four rows") {
        ModelChoice r1 = select_model(fake_test(0.40), fake_test(0.30), std::nullopt);
        CHECK(r1.selected == ModelKind::pooled);
        CHECK(r1.decision_row == 1);

        ModelChoice r2 = select_model(fake_test(0.001), fake_test(0.30), std::nullopt);
        CHECK(r2.selected == ModelKind::fixed_effects);
        CHECK(r2.decision_row == 2);

        ModelChoice r3 = select_model(fake_test(0.40), fake_test(0.001), std::nullopt);
        CHECK(r3.selected == ModelKind::random_effects);
        CHECK(r3.decision_row == 3);

        ModelChoice r4 = select_model(fake_test(0.001), fake_test(0.001), fake_test(0.000));
        CHECK(r4.selected == ModelKind::fixed_effects);
        CHECK(r4.decision_row == 4);

        ModelChoice r4b = select_model(fake_test(0.001), fake_test(0.001), fake_test(0.50));
        CHECK(r4b.selected == ModelKind::random_effects);
        CHECK(r4b.decision_row == 4);
    }
    SUBCASE("missing hausman in the fourth row is an error") {
        CHECK_THROWS_AS(select_model(fake_test(0.001), fake_test(0.001), std::nullopt),
                        UsageError);
    }
    SUBCASE("flagged hausman is treated as fail-to-reject") {
        TestResult negative = fake_test(0.0001);
        negative.non_rejection = true;
        ModelChoice c = select_model(fake_test(0.001), fake_test(0.001), negative);
        CHECK(c.selected == ModelKind::random_effects);
    }
    SUBCASE("total and deterministic over a p-value grid at any level") {
        for (double level : {0.01, 0.05, 0.10}) {
            for (double p_fe : {0.001, 0.04, 0.07, 0.5}) {
                for (double p_re : {0.001, 0.04, 0.07, 0.5}) {
                    ModelChoice c = select_model(fake_test(p_fe), fake_test(p_re),
                                                 fake_test(0.001), level);
                    const bool fe_r = p_fe < level, re_r = p_re < level;
                    ModelKind expected = !fe_r && !re_r ? ModelKind::pooled
                                         : fe_r && !re_r ? ModelKind::fixed_effects
                                         : !fe_r && re_r ? ModelKind::random_effects
                                                         : ModelKind::fixed_effects;
                    CHECK(c.selected == expected);
                }
            }
        }
    }
    SUBCASE("level must be a genuine significance level") {
        CHECK_THROWS_AS(select_model(fake_test(0.5), fake_test(0.5), std::nullopt, 0.7),
                        ConfigError);
    }
}

TEST_CASE("redundant fe F and chi-square forms agree in decision") {
    Rng rng(38);
    const int reps = 2000;
    int agreements = 0;
    for (int rep = 0; rep < reps; ++rep) {
        // Mix of null and alternative panels so both decisions occur.
        const double sigma_u = rep % 2 == 0 ? 0.0 : 0.5;
        auto panel = make_panel(10, 20, 0.5, -0.5, sigma_u, 1.0, rng);
        EstimationResult pl = pooled(panel.spec, panel.data);
        EstimationResult fe = fixed_effects(panel.spec, panel.data);
        RedundantFEResult r = redundant_fe_test(pl, fe);
        if ((r.f_form.p_value < 0.05) == (r.chi2_form.p_value < 0.05)) ++agreements;
    }
    CHECK(agreements >= static_cast<int>(reps * 0.98));
}

TEST_CASE("reported p-values are recomputable from statistic and distribution") {
    Rng rng(39);
    auto panel = make_panel(8, 12, 0.5, -0.5, 1.0, 0.7, rng);
    EstimationResult pl = pooled(panel.spec, panel.data);
    EstimationResult fe = fixed_effects(panel.spec, panel.data);
    EstimationResult re = random_effects(panel.spec, panel.data);
    RedundantFEResult rfe = redundant_fe_test(pl, fe);
    for (const TestResult& t : {rfe.f_form, rfe.chi2_form, breusch_pagan_lm(pl), honda_lm(pl),
                                hausman(fe, re)})
        CHECK(t.p_value == doctest::Approx(t.recompute_p()).epsilon(1e-12));
}

TEST_SUITE_END();
