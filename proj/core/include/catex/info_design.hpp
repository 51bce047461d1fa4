#pragma once

#include "catex/core_values.hpp"

namespace catex {

/// Quadratic-in-precision information cost kappa_eta/tau_eta^2 + kappa_xi/tau_xi^2.
struct InfoCosts {
    double kappa_eta;
    double kappa_xi;
    InfoCosts(double kappa_eta, double kappa_xi);
};

/// Noise scale treated as "no learning": posterior volatility clamps to zero
/// here so the optimizer works on a compact box.
inline constexpr double kNoLearningNoise = 1e9;
/// Smallest admissible noise scale (information costs diverge below).
inline constexpr double kMinNoise = 1e-4;

/// Optimal signal-noise pair with posterior-volatility bookkeeping.
/// posterior_vol_* are the sds of the posterior means: rho^2 = s^4/(s^2+tau^2).
struct PrecisionChoice {
    double tau_eta;
    double tau_xi;
    double posterior_vol_eps;
    double posterior_vol_theta;
    double net_value;
    bool converged;
};

/// sd of the posterior mean of a N(., prior_sigma^2) fundamental observed
/// with noise sd `noise`; zero at the no-learning sentinel.
double posterior_volatility(double prior_sigma, double noise);

/// Option value of deciding on posterior means: E[max{mu0+eps_hat, theta_hat}] - mu0
/// with independent normal posterior means of volatilities rho_eps, rho_theta.
double posterior_option_value(const ModelParams& p, double tau_eta, double tau_xi);

/// Net objective delta * OV(tau) - c - C(tau) at a given noise pair.
double precision_net_value(const ModelParams& p, const InfoCosts& costs, double tau_eta,
                           double tau_xi);

/// Maximizes the net objective over log-noise with deterministic multi-start
/// Nelder-Mead; corners snap to the no-learning sentinel. Non-convergence is
/// reported through the flag, with the best point found.
PrecisionChoice optimize_precision(const ModelParams& p, const InfoCosts& costs);

struct ProbeOptions {
    double sigma_low = 1.0;
    double sigma_high = 2.0;
    double budget_fraction = 0.75;  // of the unconstrained optimal spend
    double kappa_step_fraction = 0.02;
};

struct ComplementarityReport {
    double sigma_low = 0.0;
    double sigma_high = 0.0;
    double tau_eta_at_low = 0.0;
    double tau_eta_at_high = 0.0;
    bool complementarity = false;  // tau_eta falls as sigma_eps rises across the probe
    double substitution_separable = 0.0;    // d tau_eta*/d kappa_xi, unconstrained
    double substitution_constrained = 0.0;  // same under a binding spend budget
    double budget = 0.0;
    bool at_corner = false;  // some probe optimum sat at a noise bound
};

/// Two-point comparative statics of the optimal noise pair.
ComplementarityReport complementarity_probe(const ModelParams& p, const InfoCosts& costs,
                                            const ProbeOptions& options = {});

struct ParadoxVerdict {
    bool paradox;
    double externality_side;  // delta * E * |d pi / d kappa_eta|
    double private_side;      // tau_eta*^-2, the envelope value of cheaper information
    double d_pi_d_kappa_eta;
    double tau_eta_star;
};

/// Does cheaper status-quo information lower welfare? Compares the marginal
/// catalytic externality against the private envelope gain. The mass of
/// marginal explorers (density of the cost distribution at the exploration
/// threshold) is a free modeling input.
ParadoxVerdict it_paradox_check(const ModelParams& p, const InfoCosts& costs, double externality,
                                double cost_density_mass);

}  // namespace catex
