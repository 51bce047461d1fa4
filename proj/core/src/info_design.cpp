#include "catex/info_design.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "catex/math.hpp"

namespace catex {

namespace {

const double kLogMin = std::log(kMinNoise);
const double kLogMax = std::log(kNoLearningNoise);

double clamp_log_noise(double lt) { return std::clamp(lt, kLogMin, kLogMax); }

struct NelderMeadResult {
    std::array<double, 2> x;
    double f;
    bool converged;
};

/// Minimizes f over 2-d points; coordinates are clamped to the log-noise box.
template <typename F>
NelderMeadResult nelder_mead(F&& f, std::array<double, 2> start, int max_iter = 4000) {
    constexpr double kStep = 0.7;
    std::array<std::array<double, 2>, 3> xs = {start, start, start};
    xs[1][0] = clamp_log_noise(xs[1][0] + kStep);
    xs[2][1] = clamp_log_noise(xs[2][1] + kStep);
    std::array<double, 3> fs = {f(xs[0]), f(xs[1]), f(xs[2])};

    auto order = [&] {
        for (int i = 0; i < 2; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (fs[j] < fs[i]) {
                    std::swap(fs[i], fs[j]);
                    std::swap(xs[i], xs[j]);
                }
    };
    auto blend = [](const std::array<double, 2>& a, const std::array<double, 2>& b, double t) {
        return std::array<double, 2>{clamp_log_noise(a[0] + t * (b[0] - a[0])),
                                     clamp_log_noise(a[1] + t * (b[1] - a[1]))};
    };

    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
        order();
        double fspread = std::abs(fs[2] - fs[0]);
        double xspread = std::max(std::abs(xs[2][0] - xs[0][0]), std::abs(xs[2][1] - xs[0][1])) +
                         std::max(std::abs(xs[1][0] - xs[0][0]), std::abs(xs[1][1] - xs[0][1]));
        if (fspread <= 1e-13 * (1.0 + std::abs(fs[0])) && xspread <= 1e-10) {
            converged = true;
            break;
        }
        std::array<double, 2> centroid = {0.5 * (xs[0][0] + xs[1][0]),
                                          0.5 * (xs[0][1] + xs[1][1])};
        std::array<double, 2> refl = blend(centroid, xs[2], -1.0);
        double fr = f(refl);
        if (fr < fs[0]) {
            std::array<double, 2> expd = blend(centroid, xs[2], -2.0);
            double fe = f(expd);
            if (fe < fr) {
                xs[2] = expd;
                fs[2] = fe;
            } else {
                xs[2] = refl;
                fs[2] = fr;
            }
        } else if (fr < fs[1]) {
            xs[2] = refl;
            fs[2] = fr;
        } else {
            std::array<double, 2> ctr = blend(centroid, xs[2], fr < fs[2] ? -0.5 : 0.5);
            double fc = f(ctr);
            if (fc < std::min(fr, fs[2])) {
                xs[2] = ctr;
                fs[2] = fc;
            } else {
                // shrink toward the best vertex
                for (int i = 1; i < 3; ++i) {
                    xs[i] = blend(xs[0], xs[i], 0.5);
                    fs[i] = f(xs[i]);
                }
            }
        }
    }
    order();
    return {xs[0], fs[0], converged};
}

PrecisionChoice pack_choice(const ModelParams& p, const InfoCosts& costs, double tau_eta,
                            double tau_xi, bool converged) {
    // A coordinate is a no-learning corner when the sentinel does as well as
    // the located point; snap it so corners are reported exactly.
    double f = precision_net_value(p, costs, tau_eta, tau_xi);
    double slack = 1e-12 * (1.0 + std::abs(f));
    if (precision_net_value(p, costs, tau_eta, kNoLearningNoise) >= f - slack) {
        tau_xi = kNoLearningNoise;
        f = precision_net_value(p, costs, tau_eta, tau_xi);
    }
    if (precision_net_value(p, costs, kNoLearningNoise, tau_xi) >= f - slack) {
        tau_eta = kNoLearningNoise;
    }

    PrecisionChoice out;
    out.tau_eta = tau_eta;
    out.tau_xi = tau_xi;
    out.posterior_vol_eps = posterior_volatility(p.sigma_eps, tau_eta);
    out.posterior_vol_theta = posterior_volatility(p.sigma_theta, tau_xi);
    out.net_value = precision_net_value(p, costs, tau_eta, tau_xi);
    out.converged = converged;
    return out;
}

/// Budget-constrained optimum: all of `budget` is spent, split x on the
/// status-quo signal. Dense scan plus golden-section refinement.
std::pair<double, double> constrained_optimum(const ModelParams& p, const InfoCosts& costs,
                                              double budget) {
    auto value_of_split = [&](double x) {
        double tau_eta = std::sqrt(costs.kappa_eta / (x * budget));
        double tau_xi = std::sqrt(costs.kappa_xi / ((1.0 - x) * budget));
        return posterior_option_value(p, tau_eta, tau_xi);
    };
    constexpr int kScan = 2000;
    double best_x = 0.5;
    double best_v = -1.0;
    for (int i = 1; i < kScan; ++i) {
        double x = static_cast<double>(i) / kScan;
        double v = value_of_split(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    double lo = std::max(best_x - 1.0 / kScan, 1e-9);
    double hi = std::min(best_x + 1.0 / kScan, 1.0 - 1e-9);
    constexpr double kGolden = 0.6180339887498949;
    double a = lo, b = hi;
    double c1 = b - kGolden * (b - a), c2 = a + kGolden * (b - a);
    double f1 = value_of_split(c1), f2 = value_of_split(c2);
    for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
        if (f1 < f2) {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + kGolden * (b - a);
            f2 = value_of_split(c2);
        } else {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - kGolden * (b - a);
            f1 = value_of_split(c1);
        }
    }
    double x = 0.5 * (a + b);
    return {std::sqrt(costs.kappa_eta / (x * budget)),
            std::sqrt(costs.kappa_xi / ((1.0 - x) * budget))};
}

}  // namespace

InfoCosts::InfoCosts(double kappa_eta_, double kappa_xi_)
    : kappa_eta(kappa_eta_), kappa_xi(kappa_xi_) {
    if (!(kappa_eta > 0.0) || !(kappa_xi > 0.0)) {
        throw std::invalid_argument("InfoCosts: kappa_eta and kappa_xi must be > 0");
    }
}

double posterior_volatility(double prior_sigma, double noise) {
    if (noise >= kNoLearningNoise || prior_sigma == 0.0) return 0.0;
    return prior_sigma * prior_sigma / std::hypot(prior_sigma, noise);
}

double posterior_option_value(const ModelParams& p, double tau_eta, double tau_xi) {
    double rho_eps = posterior_volatility(p.sigma_eps, tau_eta);
    double rho_theta = posterior_volatility(p.sigma_theta, tau_xi);
    return one_sided_option_value(p.quality_gap(), std::hypot(rho_eps, rho_theta));
}

double precision_net_value(const ModelParams& p, const InfoCosts& costs, double tau_eta,
                           double tau_xi) {
    return p.delta * posterior_option_value(p, tau_eta, tau_xi) - p.cost -
           costs.kappa_eta / (tau_eta * tau_eta) - costs.kappa_xi / (tau_xi * tau_xi);
}

PrecisionChoice optimize_precision(const ModelParams& p, const InfoCosts& costs) {
    auto neg = [&](const std::array<double, 2>& lt) {
        return -precision_net_value(p, costs, std::exp(lt[0]), std::exp(lt[1]));
    };

    double le = std::log(std::max(p.sigma_eps, 1e-3));
    double lx = std::log(std::max(p.sigma_theta, 1e-3));
    const std::array<std::array<double, 2>, 6> starts = {{
        {le, lx},
        {le - 3.0, lx - 3.0},
        {le + 3.0, lx + 3.0},
        {le - 3.0, std::log(1e6)},
        {std::log(1e6), lx - 3.0},
        {0.0, 0.0},
    }};

    NelderMeadResult best{{0.0, 0.0}, 0.0, false};
    bool have = false;
    for (const auto& s : starts) {
        NelderMeadResult r =
            nelder_mead(neg, {clamp_log_noise(s[0]), clamp_log_noise(s[1])});
        if (!have || r.f < best.f - 1e-12) {
            best = r;
            have = true;
        } else if (std::abs(r.f - best.f) <= 1e-12) {
            // lexicographic tie-break on the noise pair
            if (r.x[0] < best.x[0] || (r.x[0] == best.x[0] && r.x[1] < best.x[1])) best = r;
        }
    }
    return pack_choice(p, costs, std::exp(best.x[0]), std::exp(best.x[1]), best.converged);
}

ComplementarityReport complementarity_probe(const ModelParams& p, const InfoCosts& costs,
                                            const ProbeOptions& options) {
    ComplementarityReport rep;
    rep.sigma_low = options.sigma_low;
    rep.sigma_high = options.sigma_high;

    PrecisionChoice at_low = optimize_precision(p.with_sigma_eps(options.sigma_low), costs);
    PrecisionChoice at_high = optimize_precision(p.with_sigma_eps(options.sigma_high), costs);
    rep.tau_eta_at_low = at_low.tau_eta;
    rep.tau_eta_at_high = at_high.tau_eta;
    rep.at_corner = at_low.tau_eta >= kNoLearningNoise || at_high.tau_eta >= kNoLearningNoise ||
                    at_low.tau_eta <= kMinNoise || at_high.tau_eta <= kMinNoise;
    rep.complementarity = !rep.at_corner && at_high.tau_eta < at_low.tau_eta;

    // Source substitution, unconstrained: re-optimize at kappa_xi +- step.
    double step = options.kappa_step_fraction * costs.kappa_xi;
    PrecisionChoice up = optimize_precision(p, InfoCosts(costs.kappa_eta, costs.kappa_xi + step));
    PrecisionChoice dn = optimize_precision(p, InfoCosts(costs.kappa_eta, costs.kappa_xi - step));
    rep.substitution_separable = (up.tau_eta - dn.tau_eta) / (2.0 * step);

    // Constrained variant: cap spending at a fraction of the unconstrained
    // optimum's outlay so the budget binds.
    PrecisionChoice uncon = optimize_precision(p, costs);
    double spend = costs.kappa_eta / (uncon.tau_eta * uncon.tau_eta) +
                   costs.kappa_xi / (uncon.tau_xi * uncon.tau_xi);
    rep.budget = options.budget_fraction * spend;
    if (rep.budget <= 0.0) {
        rep.substitution_constrained = 0.0;
        rep.at_corner = true;
        return rep;
    }
    auto [te_up, unused_up] =
        constrained_optimum(p, InfoCosts(costs.kappa_eta, costs.kappa_xi + step), rep.budget);
    auto [te_dn, unused_dn] =
        constrained_optimum(p, InfoCosts(costs.kappa_eta, costs.kappa_xi - step), rep.budget);
    rep.substitution_constrained = (te_up - te_dn) / (2.0 * step);
    return rep;
}

ParadoxVerdict it_paradox_check(const ModelParams& p, const InfoCosts& costs, double externality,
                                double cost_density_mass) {
    if (externality < 0.0) throw std::invalid_argument("it_paradox_check: externality must be >= 0");
    if (cost_density_mass < 0.0) {
        throw std::invalid_argument("it_paradox_check: cost_density_mass must be >= 0");
    }
    PrecisionChoice star = optimize_precision(p, costs);

    double step = 0.02 * costs.kappa_eta;
    PrecisionChoice up = optimize_precision(p, InfoCosts(costs.kappa_eta + step, costs.kappa_xi));
    PrecisionChoice dn = optimize_precision(p, InfoCosts(costs.kappa_eta - step, costs.kappa_xi));
    double ov_up = posterior_option_value(p, up.tau_eta, up.tau_xi);
    double ov_dn = posterior_option_value(p, dn.tau_eta, dn.tau_xi);
    double d_ov = (ov_up - ov_dn) / (2.0 * step);

    ParadoxVerdict v;
    v.d_pi_d_kappa_eta = cost_density_mass * p.delta * d_ov;
    v.externality_side = p.delta * externality * std::abs(v.d_pi_d_kappa_eta);
    v.private_side = 1.0 / (star.tau_eta * star.tau_eta);
    v.tau_eta_star = star.tau_eta;
    v.paradox = v.externality_side > v.private_side;
    return v;
}

}  // namespace catex
