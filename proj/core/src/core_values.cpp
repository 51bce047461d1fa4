#include "catex/core_values.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "catex/math.hpp"

namespace catex {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

ModelParams::ModelParams(double mu0_, double mu1_, double sigma_eps_, double sigma_theta_,
                         double cost_, double delta_)
    : mu0(mu0_), mu1(mu1_), sigma_eps(sigma_eps_), sigma_theta(sigma_theta_), cost(cost_),
      delta(delta_) {
    require(std::isfinite(mu0) && std::isfinite(mu1), "mu0 and mu1 must be finite");
    require(mu1 < mu0, "challenger must be inferior in expectation (mu1 < mu0)");
    require(sigma_eps >= 0.0 && std::isfinite(sigma_eps), "sigma_eps must be >= 0");
    require(sigma_theta >= 0.0 && std::isfinite(sigma_theta), "sigma_theta must be >= 0");
    require(cost >= 0.0 && std::isfinite(cost), "cost must be >= 0");
    require(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]");
}

CaraParams::CaraParams(double g) : gamma(g) {
    require(std::isfinite(gamma) && gamma > 0.0, "gamma must be finite and > 0");
}

double one_sided_option_value(double gap, double sigma) {
    if (sigma == 0.0) return gap < 0.0 ? -gap : 0.0;
    double d = gap / sigma;
    return -gap * norm_cdf(-d) + sigma * norm_pdf(d);
}

double expected_max_normal(double mu_x, double sigma_x, double mu_y, double sigma_y) {
    double s = std::hypot(sigma_x, sigma_y);
    if (s == 0.0) return std::max(mu_x, mu_y);
    return mu_x + one_sided_option_value(mu_x - mu_y, s);
}

double catalytic_value(const ModelParams& p) {
    return one_sided_option_value(p.quality_gap(), p.sigma_eps);
}

double switching_value(const ModelParams& p) {
    if (p.sigma_theta == 0.0) return 0.0;
    double total = one_sided_option_value(p.quality_gap(), std::hypot(p.sigma_eps, p.sigma_theta));
    return std::max(total - catalytic_value(p), 0.0);
}

double switching_value_quadrature(const ModelParams& p, double rel_tol) {
    if (p.sigma_theta == 0.0) return 0.0;
    // Outer Gauss-Hermite over eps of the smooth inner closed form
    // E_theta[max{mu0+eps, theta}]; the benchmark term E[max{mu0+eps, mu1}]
    // has the one-normal closed form and is subtracted exactly.
    auto outer = [&](int order) {
        auto inner = [&](double eps) {
            return expected_max_normal(p.mu0 + eps, 0.0, p.mu1, p.sigma_theta);
        };
        return gauss_hermite_mean(inner, 0.0, p.sigma_eps, order);
    };
    double benchmark = p.mu0 + one_sided_option_value(p.quality_gap(), p.sigma_eps);
    double prev = outer(16);
    for (int order : {32, 64, 128, 192}) {
        double cur = outer(order);
        if (std::abs(cur - prev) <= rel_tol * std::max(1.0, std::abs(cur))) {
            return cur - benchmark;
        }
        prev = cur;
    }
    throw NumericError("switching_value_quadrature: no convergence at max order 192");
}

double switch_probability(const ModelParams& p) {
    double s = std::hypot(p.sigma_eps, p.sigma_theta);
    if (s == 0.0) return 0.0;
    return norm_cdf(-p.quality_gap() / s);
}

OptionValueBreakdown decompose_option_value(const ModelParams& p) {
    OptionValueBreakdown out;
    out.v_isq = catalytic_value(p);
    out.v_ic = switching_value(p);
    out.total = out.v_isq + out.v_ic;
    out.switch_prob = switch_probability(p);
    return out;
}

double catalytic_derivative_sigma(const ModelParams& p) {
    if (p.sigma_eps <= 0.0) {
        throw std::domain_error("catalytic_derivative_sigma: requires sigma_eps > 0");
    }
    return norm_pdf(p.quality_gap() / p.sigma_eps);
}

double catalytic_derivative_delta(const ModelParams& p) {
    if (p.sigma_eps <= 0.0) {
        throw std::domain_error("catalytic_derivative_delta: requires sigma_eps > 0");
    }
    return -norm_cdf(-p.quality_gap() / p.sigma_eps);
}

double catalytic_asymptote(const ModelParams& p) {
    return p.sigma_eps * kInvSqrt2Pi - 0.5 * p.quality_gap();
}

double cara_catalytic_value(const ModelParams& p, const CaraParams& r) {
    double g = r.gamma;
    double se = p.sigma_eps;
    if (se <= 0.0) throw std::domain_error("cara_catalytic_value: requires sigma_eps > 0");
    // Exponents reach ~g^2 se^2 / 2; keep them representable in log space.
    if (g * se * se > 1e8) {
        throw NumericError("cara_catalytic_value: gamma * sigma_eps^2 exceeds overflow guard 1e8");
    }
    double gap = p.quality_gap();
    double ce_no = p.mu0 - 0.5 * g * se * se;
    // E[U_exp] = -(e^{A1} + e^{A2}), CE_yes = -logsumexp(A1, A2)/gamma.
    double a1 = -g * p.mu1 + norm_log_cdf(-gap / se);
    double a2 = -g * p.mu0 + 0.5 * g * g * se * se + norm_log_cdf((gap - g * se * se) / se);
    double hi = std::max(a1, a2);
    double lse = hi + std::log1p(std::exp(std::min(a1, a2) - hi));
    double ce_yes = -lse / g;
    return ce_yes - ce_no;
}

double heavy_tail_catalytic_value(const ModelParams& p, double dof) {
    if (!(dof > 2.0)) throw std::domain_error("heavy_tail_catalytic_value: dof must exceed 2");
    if (p.sigma_eps <= 0.0) {
        throw std::domain_error("heavy_tail_catalytic_value: requires sigma_eps > 0");
    }
    double gap = p.quality_gap();
    double scale = p.sigma_eps * std::sqrt((dof - 2.0) / dof);
    boost::math::students_t dist(dof);

    // V = E[max{eps, -Delta}] with eps = scale * T_dof. The integrand kinks
    // at the standardized threshold a, so integrate the two smooth pieces of
    // the [-40, 40] bulk separately and add the exact right-tail remainder
    // from the t partial-expectation identity
    //   int_b^inf x f(x) dx = (dof + b^2)/(dof - 1) f(b).
    constexpr double kBound = 40.0;
    double a = std::clamp(-gap / scale, -kBound, kBound);
    auto density = [&](double t) { return boost::math::pdf(dist, t); };
    auto weighted = [&](double t) { return scale * t * boost::math::pdf(dist, t); };

    double err_lo = 0.0, err_hi = 0.0;
    double below = -gap * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                              density, -kBound, a, 12, 1e-12, &err_lo);
    double above = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        weighted, a, kBound, 12, 1e-12, &err_hi);
    double abs_err = gap * err_lo + err_hi;
    if (abs_err > 1e-8) {
        throw NumericError("heavy_tail_catalytic_value: quadrature error estimate " +
                           std::to_string(abs_err) + " above tolerance 1e-8");
    }
    double tail_right =
        scale * (dof + kBound * kBound) / (dof - 1.0) * boost::math::pdf(dist, kBound);
    // left of -kBound the integrand is the constant -gap when the kink is
    // interior; the remainder is bounded by the t survival function
    double tail_left = gap / scale < kBound ? -gap * boost::math::cdf(dist, -kBound) : 0.0;
    return below + above + tail_right + tail_left;
}

double multidim_catalytic_value(double per_dim_sigma, int n, double delta) {
    if (n < 1) throw std::domain_error("multidim_catalytic_value: n must be >= 1");
    if (per_dim_sigma < 0.0) {
        throw std::domain_error("multidim_catalytic_value: per_dim_sigma must be >= 0");
    }
    return one_sided_option_value(delta, per_dim_sigma * std::sqrt(static_cast<double>(n)));
}

double expected_match_given_stay(const ModelParams& p) {
    if (p.sigma_eps <= 0.0) {
        throw std::domain_error("expected_match_given_stay: requires sigma_eps > 0");
    }
    double d = p.quality_gap() / p.sigma_eps;
    return p.sigma_eps * norm_pdf(d) / norm_cdf(d);
}

}  // namespace catex
