#pragma once

#include <stdexcept>

namespace catex {

/// Primitives of the two-option exploration problem: a status quo paying
/// mu0 + eps with eps ~ N(0, sigma_eps^2), and a challenger theta ~
/// N(mu1, sigma_theta^2) that is inferior in expectation (mu1 < mu0).
struct ModelParams {
    double mu0;
    double mu1;
    double sigma_eps;
    double sigma_theta;
    double cost;
    double delta;

    ModelParams(double mu0, double mu1, double sigma_eps, double sigma_theta, double cost,
                double delta);

    /// Delta = mu0 - mu1, strictly positive by construction.
    double quality_gap() const { return mu0 - mu1; }

    ModelParams with_sigma_eps(double s) const {
        return ModelParams(mu0, mu1, s, sigma_theta, cost, delta);
    }
};

/// Total option value of exploring, split into the value of resolving
/// status-quo uncertainty (v_isq) and the value of possibly adopting the
/// challenger (v_ic). total == v_isq + v_ic by construction.
struct OptionValueBreakdown {
    double v_isq;
    double v_ic;
    double total;
    double switch_prob;
};

/// CARA risk preference u(x) = -exp(-gamma x).
struct CaraParams {
    double gamma;
    explicit CaraParams(double g);
};

// ---------------------------------------------------------------------------
// Closed-form layer on raw (gap, sigma) arguments. Valid for any real gap;
// sigma >= 0 with the degenerate limits returned exactly.
// ---------------------------------------------------------------------------

/// E[max{X, mu_x - gap}] - mu_x for X ~ N(mu_x, sigma^2):
/// -gap Phi(-gap/sigma) + sigma phi(gap/sigma).
double one_sided_option_value(double gap, double sigma);

/// E[max{X, Y}] for independent normals (degenerate sigmas allowed).
double expected_max_normal(double mu_x, double sigma_x, double mu_y, double sigma_y);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// V^ISQ: value of resolving status-quo uncertainty against a deterministic
/// benchmark at mu1. Zero exactly when sigma_eps == 0.
double catalytic_value(const ModelParams& p);

/// V^IC: E[max{mu0+eps, theta}] - E[max{mu0+eps, mu1}], via the
/// independent-normals max identity. Zero exactly when sigma_theta == 0.
double switching_value(const ModelParams& p);

/// Same quantity by nested Gauss-Hermite quadrature over eps. Doubles the
/// order until the relative change is below rel_tol; throws NumericError at
/// max order. Slower; kept as an independent route for validation.
double switching_value_quadrature(const ModelParams& p, double rel_tol = 1e-9);

/// Pr(theta > mu0 + eps) = Phi(-Delta / sqrt(sigma_eps^2 + sigma_theta^2)).
double switch_probability(const ModelParams& p);

OptionValueBreakdown decompose_option_value(const ModelParams& p);

/// dV^ISQ/dsigma_eps = phi(-Delta/sigma_eps), in (0, 1/sqrt(2 pi)].
/// Requires sigma_eps > 0.
double catalytic_derivative_sigma(const ModelParams& p);

/// dV^ISQ/dDelta = -Phi(-Delta/sigma_eps) < 0. Requires sigma_eps > 0.
double catalytic_derivative_delta(const ModelParams& p);

/// Two-term high-uncertainty expansion sigma_eps/sqrt(2 pi) - Delta/2.
double catalytic_asymptote(const ModelParams& p);

/// V^ISQ for a CARA decision maker: certainty-equivalent gain of exploring,
/// evaluated in log space so small gamma does not cancel catastrophically.
double cara_catalytic_value(const ModelParams& p, const CaraParams& r);

/// V^ISQ when eps follows a Student's t with dof > 2 scaled to variance
/// sigma_eps^2, by adaptive quadrature with an analytic tail correction.
double heavy_tail_catalytic_value(const ModelParams& p, double dof);

/// n additive independent uncertainty dimensions of per-dimension sd sigma:
/// equals the one-dimensional value at aggregate sd sigma*sqrt(n).
double multidim_catalytic_value(double per_dim_sigma, int n, double delta);

/// E[eps | stay] = sigma_eps phi(Delta/sigma_eps) / Phi(Delta/sigma_eps):
/// the post-exploration uplift in status-quo valuation. sigma_eps > 0.
double expected_match_given_stay(const ModelParams& p);

}  // namespace catex
