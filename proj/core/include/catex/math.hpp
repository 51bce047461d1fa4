#pragma once

#include <cmath>
#include <concepts>
#include <stdexcept>
#include <string>
#include <vector>

namespace catex {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2 pi)
inline constexpr double kSqrt2Pi = 2.5066282746310005024;

/// Thrown when an iterative numeric routine fails to meet its tolerance.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Standard normal PDF.
inline double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

/// Standard normal CDF via erfc; absolute error ~1e-16 over the full range.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

/// log Phi(x), stable deep into the left tail where Phi underflows.
double norm_log_cdf(double x);

/// Inverse standard normal CDF, full double precision (refined rational
/// approximation). Throws std::domain_error unless p in (0,1).
double norm_quantile(double p);

namespace detail {
/// Unrefined rational approximation (|rel err| < 1.2e-9); Monte Carlo grade.
double norm_quantile_fast(double p);
}  // namespace detail

// ---------------------------------------------------------------------------
// Gauss-Hermite quadrature (weight exp(-x^2), physicists' convention)
// ---------------------------------------------------------------------------

struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes/weights for the given order (cached; order in [1, 256]).
const GaussHermiteRule& gauss_hermite(int order);

/// E[f(X)] for X ~ N(mu, sigma^2) by Gauss-Hermite quadrature.
template <std::invocable<double> F>
double gauss_hermite_mean(F&& f, double mu, double sigma, int order) {
    const GaussHermiteRule& rule = gauss_hermite(order);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * f(mu + M_SQRT2 * sigma * rule.nodes[i]);
    }
    return acc / std::sqrt(M_PI);
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

/// Bisection on [lo, hi]; requires f(lo) and f(hi) of opposite sign.
/// Stops when the bracket width falls below tol.
template <std::invocable<double> F>
double bisect(F&& f, double lo, double hi, double tol, int max_iter = 400) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw NumericError("bisect: root not bracketed on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    }
    for (int it = 0; it < max_iter && (hi - lo) > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Expands [lo, hi] upward by doubling hi until f changes sign, then bisects.
/// f must be increasing-through-zero in the search direction.
template <std::invocable<double> F>
double bisect_expanding(F&& f, double lo, double hi, double tol, double hi_cap,
                        const std::string& what) {
    while (f(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > hi_cap) throw NumericError(what + ": no sign change up to " + std::to_string(hi_cap));
    }
    return bisect(f, lo, hi, tol);
}

}  // namespace catex
