#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "catex/collective.hpp"
#include "catex/rng.hpp"
#include "catex/signaling.hpp"

using namespace catex;

namespace {

const ModelParams kBase(10.0, 5.0, 10.0, 1.0, 1.0, 0.9);

NetworkGame random_game(std::uint64_t seed, int n, double density, double base_net,
                        double gain) {
    Substream rs(seed, 0);
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    std::vector<double> net(n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i != j && rs.next_uniform() < density) w[j][i] = rs.next_uniform();
        }
    }
    for (int i = 0; i < n; ++i) net[i] = base_net + rs.next_uniform();
    return NetworkGame(std::move(w), std::move(net), gain);
}

/// Exhaustive Nash enumeration oracle over all 2^n profiles.
std::vector<std::vector<int>> enumerate_nash(const NetworkGame& g) {
    std::vector<std::vector<int>> nash;
    int n = g.n_agents;
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> prof(n);
        for (int i = 0; i < n; ++i) prof[i] = (mask >> i) & 1;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            std::vector<int> flip = prof;
            flip[i] = 1 - flip[i];
            if (network_payoff(g, i, flip) > network_payoff(g, i, prof)) ok = false;
        }
        if (ok) nash.push_back(std::move(prof));
    }
    return nash;
}

}  // namespace

TEST_CASE("attention allocation: ratios, symmetry, equivariance, scaling") {
    AttentionProblem prob(1.0, {{4.0, 1.0}, {1.0, 1.0}});
    std::vector<double> a = allocate_attention(prob);
    CHECK(a[0] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(a[1] == doctest::Approx(0.2).epsilon(1e-15));

    // equal dimensions split the budget evenly
    AttentionProblem equal(3.0, {{2.0, 0.5}, {2.0, 0.5}, {2.0, 0.5}});
    for (double x : allocate_attention(equal)) CHECK(x == doctest::Approx(1.0).epsilon(1e-15));

    // permuting dimensions permutes the allocation
    AttentionProblem perm(1.0, {{1.0, 1.0}, {4.0, 1.0}});
    std::vector<double> b = allocate_attention(perm);
    CHECK(b[0] == doctest::Approx(a[1]).epsilon(1e-15));
    CHECK(b[1] == doctest::Approx(a[0]).epsilon(1e-15));

    // scale invariance of the signal-to-noise ratios
    AttentionProblem scaled(1.0, {{40.0, 10.0}, {10.0, 10.0}});
    std::vector<double> c = allocate_attention(scaled);
    CHECK(c[0] == doctest::Approx(a[0]).epsilon(1e-13));

    // allocations always exhaust the budget; zero-variance dims get nothing
    AttentionProblem with_zero(2.0, {{0.0, 1.0}, {3.0, 2.0}, {1.0, 4.0}});
    std::vector<double> z = allocate_attention(with_zero);
    CHECK(z[0] == 0.0);
    CHECK(z[0] + z[1] + z[2] == doctest::Approx(2.0).epsilon(1e-14));

    CHECK_THROWS_AS(allocate_attention(AttentionProblem(1.0, {{0.0, 1.0}, {0.0, 2.0}})),
                    std::domain_error);
    CHECK_THROWS_AS(AttentionProblem(0.0, {{1.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("two-agent complementarity yields both corner equilibria") {
    NetworkGame g({{0.0, 1.0}, {1.0, 0.0}}, {-1.0, -1.0}, 2.0);
    EquilibriumPair eq = network_equilibria(g);
    CHECK(eq.least == std::vector<int>{0, 0});
    CHECK(eq.greatest == std::vector<int>{1, 1});
    CHECK(eq.multiplicity);

    // dominance: positive private value explores regardless of the network
    NetworkGame pos({{0.0, 0.3}, {0.3, 0.0}}, {0.5, 0.5}, 1.0);
    EquilibriumPair eq2 = network_equilibria(pos);
    CHECK(eq2.least == std::vector<int>{1, 1});
    CHECK(eq2.greatest == std::vector<int>{1, 1});
    CHECK_FALSE(eq2.multiplicity);
}

TEST_CASE("supermodularity witness: cross differences equal the link weight times gain") {
    NetworkGame g = random_game(5, 6, 0.5, -1.0, 2.0);
    Substream rs(6, 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> prof(6);
        for (int i = 0; i < 6; ++i) prof[i] = rs.next_uniform() < 0.5;
        int i = static_cast<int>(rs.next_uniform() * 6);
        int j = (i + 1 + static_cast<int>(rs.next_uniform() * 5)) % 6;
        std::vector<int> lo = prof, hi = prof;
        lo[j] = 0;
        hi[j] = 1;
        auto gain = [&](std::vector<int> p) {
            p[i] = 1;
            double up = network_payoff(g, i, p);
            p[i] = 0;
            return up - network_payoff(g, i, p);
        };
        CHECK(gain(hi) - gain(lo) == doctest::Approx(g.weights[j][i] * 2.0).epsilon(1e-12));
    }
}

TEST_CASE("extremal equilibria bound the enumerated Nash lattice on random games") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        NetworkGame g = random_game(1000 + seed, 10, 0.35, -0.9, 1.8);
        EquilibriumPair eq = network_equilibria(g);
        std::vector<std::vector<int>> nash = enumerate_nash(g);
        REQUIRE(!nash.empty());
        CHECK(std::find(nash.begin(), nash.end(), eq.least) != nash.end());
        CHECK(std::find(nash.begin(), nash.end(), eq.greatest) != nash.end());
        for (const auto& prof : nash) {
            for (int i = 0; i < g.n_agents; ++i) {
                CHECK(eq.least[i] <= prof[i]);
                CHECK(prof[i] <= eq.greatest[i]);
            }
        }
        CHECK(eq.multiplicity == (nash.size() > 1));
    }
}

TEST_CASE("cascade environment and belief threshold") {
    CascadeEnv env(kBase, 3.0, 7.0, 0.5, 0.75);
    CHECK(env.base.mu1 == doctest::Approx(5.0));
    CHECK_THROWS_AS(CascadeEnv(kBase, 3.0, 7.0, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(CascadeEnv(kBase, 3.0, 7.0, 1.0, 0.75), std::invalid_argument);

    // catalytic term alone clears the bar: threshold at or below zero
    CHECK(env.belief_threshold() <= 0.0);
    // with sigma_eps = 0 the threshold is the classical one
    CascadeEnv classical(kBase.with_sigma_eps(0.0), 3.0, 7.0, 0.5, 0.75);
    CHECK(classical.belief_threshold() > 0.0);
}

TEST_CASE("catalytic term alone triggers exploration from the first agent") {
    CascadeEnv env(kBase, 3.0, 7.0, 0.5, 0.75);  // delta * OV(thetaL) > c at sigma_eps = 10
    CascadeLog log = run_cascade(env, ChallengerType::low, 10, 11);
    REQUIRE(log.onset_round.has_value());
    CHECK(*log.onset_round == 1);
    for (const CascadeStep& s : log.steps) {
        CHECK(s.explored);
        CHECK(s.in_cascade);
    }
}

TEST_CASE("with no catalytic value the onset matches a classical simulator") {
    // sigma_eps = 0 and thetaL below mu0: exploring pays only if the type is
    // high, so the rule is the classical posterior threshold
    // mu* = (c/delta) / (thetaH - mu0).
    ModelParams p(3.0, 2.5, 0.0, 1.0, 0.5, 0.9);
    CascadeEnv env(p, 1.0, 4.0, 0.5, 0.75);
    CHECK(env.belief_threshold() == doctest::Approx((0.5 / 0.9) / 1.0).epsilon(1e-12));

    auto classical_onset = [&](std::uint64_t seed, int n_agents) -> int {
        double mu_star = (0.5 / 0.9) / 1.0;
        double pub = 0.5;
        const double q = 0.75;
        auto bayes = [&](double prior, bool high) {
            double lh = high ? q : 1 - q;
            double ll = high ? 1 - q : q;
            return prior * lh / (prior * lh + (1 - prior) * ll);
        };
        for (int i = 1; i <= n_agents; ++i) {
            Substream rs(seed, static_cast<std::uint64_t>(i));
            bool sig = rs.next_uniform() < (1 - q);  // true type low
            bool act_h = bayes(pub, true) >= mu_star;
            bool act_l = bayes(pub, false) >= mu_star;
            if (act_h == act_l) return i;
            pub = bayes(pub, sig);
        }
        return -1;
    };

    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        CascadeLog log = run_cascade(env, ChallengerType::low, 40, seed);
        int expect = classical_onset(seed, 40);
        if (expect < 0) {
            CHECK_FALSE(log.onset_round.has_value());
        } else {
            REQUIRE(log.onset_round.has_value());
            CHECK(*log.onset_round == expect);
        }
    }
}

TEST_CASE("cascade onset arrives no later as the catalytic value rises") {
    // a rising high-type herd: the exploration-cascade threshold falls with
    // sigma_eps, so the fixed signal path crosses it earlier
    std::uint64_t seed = 14;
    std::optional<int> prev;
    for (double se : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}) {
        ModelParams p(5.0, 4.5, se, 1.0, 1.0, 0.9);
        CascadeEnv env(p, 2.0, 7.0, 0.5, 0.7);
        CascadeLog log = run_cascade(env, ChallengerType::high, 60, seed);
        REQUIRE(log.onset_round.has_value());
        if (prev.has_value()) CHECK(*log.onset_round <= *prev);
        prev = log.onset_round;
    }
}

TEST_CASE("cascade welfare tally matches an independent per-agent pass") {
    // catalytic herd on a low type: every member explores and burns c - d*OV
    ModelParams p(8.0, 4.0, 8.0, 1.0, 1.0, 0.9);
    CascadeEnv env(p, 2.0, 6.0, 0.5, 0.7);
    double externality = 0.8;
    CascadeLog log = run_cascade(env, ChallengerType::low, 60, 3, externality);

    double expost = 0.0, ext = 0.0;
    double ov_low = catalytic_value(env.base) + switching_value_of_type(env.base, 2.0);
    int explored_members = 0;
    for (const CascadeStep& s : log.steps) {
        if (s.in_cascade && s.explored) {
            expost += p.cost - p.delta * ov_low;
            ext += p.delta * externality;
            ++explored_members;
        }
    }
    CHECK(explored_members > 0);
    CHECK(log.private_expost_loss > 0.0);
    CHECK(log.private_expost_loss == doctest::Approx(expost).epsilon(1e-12));
    CHECK(log.externality_loss == doctest::Approx(ext).epsilon(1e-12));
}
