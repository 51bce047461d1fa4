#pragma once

#include <stdexcept>
#include <string_view>
#include <variant>

#include "catex/math.hpp"
#include "catex/rng.hpp"

namespace catex {

/// Exploration-cost heterogeneity: fixed cost, or a positive-support family
/// drawn fresh per decision.
class CostDistribution {
public:
    static CostDistribution fixed(double value) {
        require(value >= 0.0, "fixed cost must be >= 0");
        return CostDistribution(Fixed{value});
    }
    static CostDistribution exponential(double mean) {
        require(mean > 0.0, "exponential mean must be > 0");
        return CostDistribution(Exponential{mean});
    }
    static CostDistribution lognormal(double log_mean, double log_sigma) {
        require(log_sigma > 0.0, "lognormal sigma must be > 0");
        return CostDistribution(Lognormal{log_mean, log_sigma});
    }

    double sample(Substream& rng) const {
        if (auto* f = std::get_if<Fixed>(&dist_)) return f->value;
        if (auto* e = std::get_if<Exponential>(&dist_)) return rng.next_exponential(e->mean);
        auto& l = std::get<Lognormal>(dist_);
        return rng.next_lognormal(l.log_mean, l.log_sigma);
    }

    /// F_c(x) = Pr(c <= x).
    double cdf(double x) const {
        if (auto* f = std::get_if<Fixed>(&dist_)) return x >= f->value ? 1.0 : 0.0;
        if (x <= 0.0) return 0.0;
        if (auto* e = std::get_if<Exponential>(&dist_)) return -std::expm1(-x / e->mean);
        auto& l = std::get<Lognormal>(dist_);
        return norm_cdf((std::log(x) - l.log_mean) / l.log_sigma);
    }

    bool invertible() const { return !std::holds_alternative<Fixed>(dist_); }

    /// F_c^{-1}(p) for p in (0,1); fixed costs are not invertible.
    double quantile(double p) const {
        if (!(p > 0.0 && p < 1.0)) throw std::domain_error("cost quantile: p must lie in (0,1)");
        if (std::holds_alternative<Fixed>(dist_)) {
            throw std::domain_error("cost quantile: fixed cost distribution is not invertible");
        }
        if (auto* e = std::get_if<Exponential>(&dist_)) return -e->mean * std::log1p(-p);
        auto& l = std::get<Lognormal>(dist_);
        return std::exp(l.log_mean + l.log_sigma * norm_quantile(p));
    }

    std::string_view name() const {
        if (std::holds_alternative<Fixed>(dist_)) return "fixed";
        if (std::holds_alternative<Exponential>(dist_)) return "exponential";
        return "lognormal";
    }

private:
    struct Fixed { double value; };
    struct Exponential { double mean; };
    struct Lognormal { double log_mean; double log_sigma; };
    using Variant = std::variant<Fixed, Exponential, Lognormal>;

    explicit CostDistribution(Variant d) : dist_(d) {}
    static void require(bool ok, const char* msg) {
        if (!ok) throw std::invalid_argument(msg);
    }

    Variant dist_;
};

}  // namespace catex
