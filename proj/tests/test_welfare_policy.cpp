#include <doctest.h>

#include <cmath>

#include "catex/rng.hpp"
#include "catex/welfare_policy.hpp"

using namespace catex;

namespace {

const ModelParams kBaseline(10.0, 5.0, 10.0, 1.0, 1.0, 0.9);

}  // namespace

TEST_CASE("social net value") {
    CHECK_THROWS_AS(ExternalityEnv(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ExternalityEnv(0.0, -1.0), std::invalid_argument);

    OptionValueBreakdown ov = decompose_option_value(kBaseline);
    double private_net = kBaseline.delta * ov.total - kBaseline.cost;

    // offsetting externalities cancel
    CHECK(social_net_value(kBaseline, ExternalityEnv(2.0, 2.0)) ==
          doctest::Approx(private_net).epsilon(1e-12));
    // baseline: inspection cost of 1 costs delta * 1 of social surplus
    CHECK(social_net_value(kBaseline, ExternalityEnv(1.0, 0.0)) ==
          doctest::Approx(private_net - 0.9).epsilon(1e-12));
}

TEST_CASE("over-exploration region is delta*(E-S) wide in option-value units") {
    ExternalityEnv env(1.0, 0.25);
    // private explores iff delta*OV >= c; social iff delta*OV >= c + delta(E-S)
    // locate both boundaries on a sigma grid and compare the OV gap
    double gap_lo = 1e9, gap_hi = -1e9;
    for (double se = 0.5; se < 25.0; se += 0.001) {
        ModelParams p = kBaseline.with_sigma_eps(se);
        double ov = decompose_option_value(p).total;
        bool priv = p.delta * ov - p.cost >= 0.0;
        bool soc = social_net_value(p, env) >= 0.0;
        if (priv && !soc) {
            gap_lo = std::min(gap_lo, p.delta * ov);
            gap_hi = std::max(gap_hi, p.delta * ov);
        }
    }
    // interval of over-exploration: c <= delta*OV < c + delta(E-S)
    CHECK(gap_lo >= kBaseline.cost - 1e-3);
    CHECK(gap_hi <= kBaseline.cost + kBaseline.delta * 0.75 + 1e-3);
    CHECK(gap_hi - gap_lo == doctest::Approx(kBaseline.delta * 0.75).epsilon(5e-3));

    // no over-exploration when spillovers dominate
    for (double se = 0.5; se < 25.0; se += 0.01) {
        ModelParams p = kBaseline.with_sigma_eps(se);
        bool priv = p.delta * decompose_option_value(p).total - p.cost >= 0.0;
        bool soc = social_net_value(p, ExternalityEnv(0.25, 1.0)) >= 0.0;
        CHECK((!priv || soc));
    }
}

TEST_CASE("optimal policy bundle values") {
    PolicyBundle taxed = optimal_policy(kBaseline, ExternalityEnv(1.0, 0.0));
    CHECK(taxed.exploration_tax == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(taxed.matching_subsidy == 0.0);
    CHECK(taxed.net_stance == PolicyStance::tax);

    // subsidy is spillover over the switch probability
    ModelParams p(10.0, 5.0, 10.0, 1.0, 1.0, 0.9);
    double ps = switch_probability(p);
    PolicyBundle sub = optimal_policy(p, ExternalityEnv(0.0, 0.5));
    CHECK(sub.matching_subsidy == doctest::Approx(0.5 / ps).epsilon(1e-14));
    CHECK(sub.net_stance == PolicyStance::subsidy);

    PolicyBundle neutral = optimal_policy(p, ExternalityEnv(0.5, 0.5));
    CHECK(neutral.net_stance == PolicyStance::neutral);

    // undefined subsidy: positive spillover but zero switch probability
    ModelParams degenerate(10.0, 5.0, 0.0, 0.0, 1.0, 0.9);
    CHECK_THROWS_AS(optimal_policy(degenerate, ExternalityEnv(0.0, 0.5)), std::domain_error);
}

TEST_CASE("bundle aligns private and social exploration thresholds exactly") {
    Substream rs(404, 0);
    for (int i = 0; i < 100; ++i) {
        double mu0 = 5.0 + 10.0 * rs.next_uniform();
        double gap = 0.5 + 8.0 * rs.next_uniform();
        double se = 0.2 + 15.0 * rs.next_uniform();
        double st = 0.2 + 4.0 * rs.next_uniform();
        double cost = 0.1 + 2.0 * rs.next_uniform();
        double delta = 0.5 + 0.5 * rs.next_uniform();
        ModelParams p(mu0, mu0 - gap, se, st, cost, delta);
        ExternalityEnv env(2.0 * rs.next_uniform(), 1.5 * rs.next_uniform());
        PolicyBundle bundle = optimal_policy(p, env);
        double priv = taxed_private_net_value(p, env, bundle);
        double soc = social_net_value(p, env);
        CHECK(std::abs(priv - soc) < 1e-12);
        CHECK((priv >= 0.0) == (soc >= 0.0));
    }
}

TEST_CASE("disclosure tradeoff") {
    BinarySignalEnv signal(kBaseline, 3.0, 7.0, 0.5, 10.0);
    ExternalityEnv ext(1.0, 0.0);

    // no catalytic explorers: pure signaling restoration cost
    double pure_signal = disclosure_tradeoff(signal, ext, 0.0);
    CHECK(pure_signal < 0.0);
    double psi_high = signal.cost_shape.value(counterfactual_separating_effort(signal), 7.0);
    CHECK(pure_signal == doctest::Approx(-0.5 * psi_high).epsilon(1e-12));

    // with no restored signaling cost the effect is non-negative
    BinarySignalEnv no_signal(kBaseline.with_sigma_eps(0.0), 3.0, 7.0, 0.5, 10.0);
    CHECK(counterfactual_separating_effort(no_signal) == 0.0);
    CHECK(disclosure_tradeoff(no_signal, ext, 0.0) == 0.0);
    CHECK(disclosure_tradeoff(no_signal, ext, 0.5) ==
          doctest::Approx(0.5 * (1.0 + 0.9)).epsilon(1e-12));

    // baseline pooling example, mass one half: direct two-scenario enumeration
    double mass = 0.5;
    double observed = disclosure_tradeoff(signal, ext, mass);
    double undisclosed_burn = mass * (kBaseline.cost + kBaseline.delta * ext.inspection_cost);
    double disclosed_burn = signal.prior_high * psi_high;
    CHECK(observed == doctest::Approx(undisclosed_burn - disclosed_burn).epsilon(1e-12));
    // sign at these numbers: saved inspections outweigh the restored signaling
    CHECK(observed > 0.0);

    CHECK_THROWS_AS(disclosure_tradeoff(signal, ext, 1.5), std::invalid_argument);
}
