#include <doctest.h>

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <vector>

#include "catex/core_values.hpp"
#include "catex/math.hpp"
#include "catex/rng.hpp"

using namespace catex;

namespace {

const ModelParams kBaseline(10.0, 5.0, 10.0, 1.0, 1.0, 0.9);

/// Brute-force oracle: E[max{mu0 + eps, mu1}] - mu0 by seeded sampling.
struct McMean {
    double value;
    double se;
};

template <typename Draw>
McMean mc_mean(std::uint64_t seed, std::uint64_t n, Draw&& draw) {
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        Substream rs(seed, i);
        double v = draw(rs);
        sum += v;
        sum_sq += v * v;
    }
    double mean = sum / static_cast<double>(n);
    double var = std::max(sum_sq / static_cast<double>(n) - mean * mean, 0.0);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

McMean mc_catalytic(const ModelParams& p, std::uint64_t seed, std::uint64_t n) {
    return mc_mean(seed, n, [&](Substream& rs) {
        double eps = p.sigma_eps * rs.next_normal();
        return std::max(p.mu0 + eps, p.mu1) - p.mu0;
    });
}

/// Exact scaled-t value via the partial-expectation identity
/// int_a^inf x f(x) dx = (nu + a^2)/(nu - 1) f(a); independent of the
/// quadrature route used by the implementation.
double t_value_closed_form(double gap, double sigma, double nu) {
    boost::math::students_t dist(nu);
    double scale = sigma * std::sqrt((nu - 2.0) / nu);
    double a = -gap / scale;
    return -gap * boost::math::cdf(dist, a) +
           scale * (nu + a * a) / (nu - 1.0) * boost::math::pdf(dist, a);
}

}  // namespace

TEST_CASE("parameter validation enforces the model invariants") {
    CHECK_THROWS_WITH_AS(ModelParams(10, 12, 1, 1, 1, 0.9),
                         "challenger must be inferior in expectation (mu1 < mu0)",
                         std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(10, 10, 1, 1, 1, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(10, 5, -1, 1, 1, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(10, 5, 1, -1, 1, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(10, 5, 1, 1, -1, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(10, 5, 1, 1, 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(10, 5, 1, 1, 1, 1.5), std::invalid_argument);
    CHECK(ModelParams(10, 5, 1, 1, 1, 1.0).quality_gap() == 5.0);
    CHECK_THROWS_AS(CaraParams(0.0), std::invalid_argument);
}

TEST_CASE("catalytic value closed form") {
    CHECK(catalytic_value(kBaseline.with_sigma_eps(0.0)) == 0.0);
    CHECK(catalytic_value(kBaseline) == doctest::Approx(1.97796557401).epsilon(1e-10));
    CHECK(catalytic_value(kBaseline.with_sigma_eps(5)) ==
          doctest::Approx(0.416577352938).epsilon(1e-10));
    CHECK(catalytic_value(kBaseline.with_sigma_eps(15)) ==
          doctest::Approx(3.81354171449).epsilon(1e-10));
    CHECK(catalytic_value(kBaseline.with_sigma_eps(20)) ==
          doctest::Approx(5.72689396447).epsilon(1e-10));
    CHECK(catalytic_value(kBaseline.with_sigma_eps(1)) ==
          doctest::Approx(5.34616553383e-8).epsilon(1e-8));
    // vanishes as the challenger becomes irrelevant
    CHECK(one_sided_option_value(1e6, 10.0) < 1e-300);
    // strictly positive whenever sigma_eps > 0 (until the tail underflows)
    CHECK(catalytic_value(kBaseline.with_sigma_eps(0.5)) > 0.0);
}

TEST_CASE("catalytic value agrees with the sampling oracle") {
    McMean mc10 = mc_catalytic(kBaseline, 2024, 2'000'000);
    CHECK(std::abs(mc10.value - 1.97796557401) < 4.0 * mc10.se);
    McMean mc5 = mc_catalytic(kBaseline.with_sigma_eps(5), 2025, 2'000'000);
    CHECK(std::abs(mc5.value - 0.416577352938) < 4.0 * mc5.se);
}

TEST_CASE("switching value: identity route, quadrature route, oracle") {
    CHECK(switching_value(kBaseline) == doctest::Approx(0.0175703743913).epsilon(1e-9));
    // degenerate challenger adds no switching option
    ModelParams no_theta(10, 5, 10, 0, 1, 0.9);
    CHECK(switching_value(no_theta) == 0.0);
    // sigma_eps = 0: one-sided option value with the roles swapped
    ModelParams no_eps(10, 5, 0, 1, 1, 0.9);
    CHECK(switching_value(no_eps) ==
          doctest::Approx(one_sided_option_value(5.0, 1.0)).epsilon(1e-12));

    for (auto [se, st] : {std::pair{0.5, 0.5}, {0.5, 1.0}, {0.5, 4.0}, {2.0, 0.5},
                          {2.0, 1.0}, {2.0, 4.0}, {10.0, 4.0}, {10.0, 8.0}}) {
        ModelParams p(10, 5, se, st, 1, 0.9);
        CHECK(switching_value_quadrature(p) ==
              doctest::Approx(switching_value(p)).epsilon(1e-8));
    }
    // a boundary layer far below the node spacing cannot converge; the
    // contract reports it as a configuration error
    CHECK_THROWS_AS(switching_value_quadrature(ModelParams(10, 5, 10, 0.5, 1, 0.9)),
                    NumericError);

    McMean mc = mc_mean(77, 2'000'000, [&](Substream& rs) {
        double eps = kBaseline.sigma_eps * rs.next_normal();
        double theta = kBaseline.mu1 + kBaseline.sigma_theta * rs.next_normal();
        return std::max(kBaseline.mu0 + eps, theta) - std::max(kBaseline.mu0 + eps, kBaseline.mu1);
    });
    CHECK(std::abs(mc.value - switching_value(kBaseline)) < 4.0 * mc.se);
}

TEST_CASE("decomposition satisfies the additive identity on random draws") {
    Substream rs(99, 0);
    for (int i = 0; i < 1000; ++i) {
        double mu0 = 20.0 * rs.next_uniform() - 5.0;
        double gap = 0.1 + 10.0 * rs.next_uniform();
        double se = 20.0 * rs.next_uniform();
        double st = 5.0 * rs.next_uniform();
        ModelParams p(mu0, mu0 - gap, se, st, 1.0, 0.9);
        OptionValueBreakdown ov = decompose_option_value(p);
        CHECK(std::abs(ov.total - ov.v_isq - ov.v_ic) < 1e-10);
        // the same total through the direct two-normal route
        double direct = expected_max_normal(p.mu0, p.sigma_eps, p.mu1, p.sigma_theta) - p.mu0;
        CHECK(ov.total == doctest::Approx(direct).epsilon(1e-10));
        CHECK(ov.v_isq >= 0.0);
        CHECK(ov.v_ic >= -1e-15);
        if (se > 0.0 && gap / se < 35.0) CHECK(ov.v_isq > 0.0);
        CHECK(ov.switch_prob >= 0.0);
        CHECK(ov.switch_prob < 0.5);
    }
}

TEST_CASE("switch probability values and decoupling shape") {
    CHECK(decompose_option_value(kBaseline).switch_prob ==
          doctest::Approx(0.309411696627).epsilon(1e-10));
    CHECK(decompose_option_value(kBaseline.with_sigma_eps(1)).switch_prob ==
          doctest::Approx(0.000203476).epsilon(1e-5));
    CHECK(decompose_option_value(kBaseline.with_sigma_eps(1e7)).switch_prob ==
          doctest::Approx(0.5).epsilon(1e-6));
    // strictly increasing in sigma_eps, bounded by one half
    double prev = 0.0;
    for (double se : {0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 1000.0}) {
        double sp = decompose_option_value(kBaseline.with_sigma_eps(se)).switch_prob;
        CHECK(sp > prev);
        CHECK(sp < 0.5);
        prev = sp;
    }
}

TEST_CASE("analytic derivatives match central finite differences") {
    CHECK(catalytic_derivative_sigma(kBaseline) ==
          doctest::Approx(0.352065326764).epsilon(1e-10));
    CHECK(catalytic_derivative_sigma(kBaseline.with_sigma_eps(5)) ==
          doctest::Approx(0.241970724519).epsilon(1e-10));
    CHECK(catalytic_derivative_delta(kBaseline) ==
          doctest::Approx(-0.308537538726).epsilon(1e-10));
    CHECK_THROWS_AS(catalytic_derivative_sigma(kBaseline.with_sigma_eps(0)), std::domain_error);
    CHECK_THROWS_AS(catalytic_derivative_delta(kBaseline.with_sigma_eps(0)), std::domain_error);

    // 20-point grid, relative agreement 1e-6, bound never exceeded
    int idx = 0;
    for (double gap : {1.0, 3.0, 5.0, 8.0}) {
        for (double se : {0.8, 2.0, 6.0, 12.0, 25.0}) {
            ++idx;
            ModelParams p(10.0, 10.0 - gap, se, 1.0, 1.0, 0.9);
            double h = 1e-5 * se;
            double fd_sigma = (one_sided_option_value(gap, se + h) -
                               one_sided_option_value(gap, se - h)) /
                              (2.0 * h);
            CHECK(catalytic_derivative_sigma(p) == doctest::Approx(fd_sigma).epsilon(1e-6));
            double hg = 1e-5 * gap;
            double fd_gap = (one_sided_option_value(gap + hg, se) -
                             one_sided_option_value(gap - hg, se)) /
                            (2.0 * hg);
            CHECK(catalytic_derivative_delta(p) == doctest::Approx(fd_gap).epsilon(1e-6));
            CHECK(catalytic_derivative_sigma(p) <= kInvSqrt2Pi + 1e-12);
            CHECK(catalytic_derivative_sigma(p) > 0.0);
            CHECK(catalytic_derivative_delta(p) < 0.0);
        }
    }
    CHECK(idx == 20);

    // limit of the marginal effect of uncertainty
    CHECK(catalytic_derivative_sigma(kBaseline.with_sigma_eps(1e9)) ==
          doctest::Approx(kInvSqrt2Pi).epsilon(1e-12));
    // the gap derivative vanishes from below as the challenger drops away
    double far = catalytic_derivative_delta(ModelParams(10.0, -200.0, 10.0, 1, 1, 0.9));
    CHECK(far <= 0.0);
    CHECK(far > -1e-90);

    // cross effect: higher mu1 raises the marginal value of uncertainty
    double h = 1e-5;
    double up = catalytic_derivative_sigma(ModelParams(10, 5 + h, 10, 1, 1, 0.9));
    double dn = catalytic_derivative_sigma(ModelParams(10, 5 - h, 10, 1, 1, 0.9));
    double cross = (up - dn) / (2.0 * h);
    CHECK(cross == doctest::Approx(5.0 / 100.0 * norm_pdf(0.5)).epsilon(1e-5));
    CHECK(cross > 0.0);
}

TEST_CASE("high-uncertainty expansion") {
    CHECK(catalytic_asymptote(kBaseline.with_sigma_eps(500)) ==
          doctest::Approx(196.971140201).epsilon(1e-10));
    CHECK(catalytic_asymptote(kBaseline.with_sigma_eps(20)) ==
          doctest::Approx(5.47884560803).epsilon(1e-10));
    // accuracy regimes against the exact value
    double exact500 = catalytic_value(kBaseline.with_sigma_eps(500));
    CHECK(std::abs(catalytic_asymptote(kBaseline.with_sigma_eps(500)) - exact500) / exact500 <
          1e-3);
    double exact100 = catalytic_value(kBaseline.with_sigma_eps(100));
    CHECK(std::abs(catalytic_asymptote(kBaseline.with_sigma_eps(100)) - exact100) / exact100 <
          0.01);
    // gap -> 0 collapses the expansion to the exact formula
    ModelParams tiny_gap(10.0, 10.0 - 1e-12, 7.0, 1.0, 1.0, 0.9);
    CHECK(catalytic_asymptote(tiny_gap) ==
          doctest::Approx(catalytic_value(tiny_gap)).epsilon(1e-9));
}

TEST_CASE("CARA value: closed form, dominance, risk-neutral limit") {
    CaraParams g001(0.01);
    double v = cara_catalytic_value(kBaseline, g001);
    CHECK(v == doctest::Approx(2.20814067387).epsilon(1e-9));
    CHECK(v > catalytic_value(kBaseline));

    double rn = catalytic_value(kBaseline);
    double prev = rn;
    for (double g : {0.001, 0.01, 0.05, 0.1}) {
        double vg = cara_catalytic_value(kBaseline, CaraParams(g));
        CHECK(vg > prev);
        prev = vg;
    }

    // first-order convergence: the gap scales linearly in gamma
    double gap4 = cara_catalytic_value(kBaseline, CaraParams(1e-4)) - rn;
    double gap3 = cara_catalytic_value(kBaseline, CaraParams(1e-3)) - rn;
    CHECK(gap3 / gap4 == doctest::Approx(10.0).epsilon(0.02));
    CHECK(gap4 > 0.0);

    // sampling oracle on the expected-utility route
    McMean mc = mc_mean(31, 2'000'000, [&](Substream& rs) {
        double eps = 10.0 * rs.next_normal();
        return -std::exp(-0.01 * std::max(10.0 + eps, 5.0));
    });
    double ce_yes = -std::log(-mc.value) / 0.01;
    double ce_no = 10.0 - 0.01 * 100.0 / 2.0;
    CHECK(std::abs((ce_yes - ce_no) - v) < 0.01);

    CHECK_THROWS_AS(cara_catalytic_value(ModelParams(10, 5, 1e6, 1, 1, 0.9), CaraParams(1000.0)),
                    NumericError);
}

TEST_CASE("heavy tails raise the value only when the kink sits in the tail") {
    // kink half a sd below the mean: the t density has less shoulder mass
    double shoulder = heavy_tail_catalytic_value(kBaseline, 5.0);
    CHECK(shoulder == doctest::Approx(1.76417329048).epsilon(1e-7));
    CHECK(shoulder == doctest::Approx(t_value_closed_form(5.0, 10.0, 5.0)).epsilon(1e-9));
    CHECK(shoulder < catalytic_value(kBaseline));

    // kink 2.5 sds below the mean: tail mass dominates and the order flips
    ModelParams tail = kBaseline.with_sigma_eps(2.0);
    double vt = heavy_tail_catalytic_value(tail, 5.0);
    CHECK(vt == doctest::Approx(0.0191458777974).epsilon(1e-7));
    CHECK(vt > catalytic_value(tail));

    // t converges to the normal as dof grows
    CHECK(std::abs(heavy_tail_catalytic_value(kBaseline, 1e4) - catalytic_value(kBaseline)) <
          1e-3);
    CHECK_THROWS_AS(heavy_tail_catalytic_value(kBaseline, 2.0), std::domain_error);

    // seeded sampling oracle with a t quantile sampler
    boost::math::students_t dist(5.0);
    double scale = 2.0 * std::sqrt(3.0 / 5.0);
    McMean mc = mc_mean(55, 2'000'000, [&](Substream& rs) {
        double t = boost::math::quantile(dist, rs.next_uniform());
        return std::max(scale * t, -5.0);
    });
    CHECK(std::abs(mc.value - vt) < 4.0 * mc.se);
}

TEST_CASE("multi-dimensional uncertainty aggregates through sqrt(n)") {
    CHECK(multidim_catalytic_value(5.0, 4, 5.0) ==
          doctest::Approx(catalytic_value(kBaseline)).epsilon(1e-12));
    CHECK(multidim_catalytic_value(7.3, 1, 5.0) ==
          doctest::Approx(one_sided_option_value(5.0, 7.3)).epsilon(1e-14));
    CHECK_THROWS_AS(multidim_catalytic_value(5.0, 0, 5.0), std::domain_error);

    // diminishing marginal value of complexity, with the stated approximation
    double fd = multidim_catalytic_value(5.0, 100, 5.0) - multidim_catalytic_value(5.0, 99, 5.0);
    double approx = 5.0 / (2.0 * std::sqrt(2.0 * M_PI * 99.5));
    CHECK(std::abs(fd - approx) / approx < 0.05);
    double fd_later =
        multidim_catalytic_value(5.0, 400, 5.0) - multidim_catalytic_value(5.0, 399, 5.0);
    CHECK(fd_later < fd);
    CHECK(fd_later > 0.0);
}

TEST_CASE("expected match conditional on staying") {
    CHECK(expected_match_given_stay(kBaseline) == doctest::Approx(5.09160433837).epsilon(1e-10));
    CHECK(expected_match_given_stay(kBaseline.with_sigma_eps(1e-6)) ==
          doctest::Approx(0.0).epsilon(1e-5));
    CHECK(expected_match_given_stay(ModelParams(1e6, 5, 10, 1, 1, 0.9)) ==
          doctest::Approx(0.0).epsilon(1e-5));
    CHECK_THROWS_AS(expected_match_given_stay(kBaseline.with_sigma_eps(0)), std::domain_error);

    // truncated-mean sampling oracle
    double sum = 0.0;
    std::uint64_t kept = 0;
    for (std::uint64_t i = 0; i < 2'000'000; ++i) {
        Substream rs(8, i);
        double eps = 10.0 * rs.next_normal();
        if (eps >= -5.0) {
            sum += eps;
            ++kept;
        }
    }
    CHECK(sum / static_cast<double>(kept) ==
          doctest::Approx(expected_match_given_stay(kBaseline)).epsilon(2e-3));
}
