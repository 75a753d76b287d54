#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>

namespace icpp {

// phi(t) = kappa * theta * exp(-theta * t) for t > 0
struct ExpKernel {
    double kappa;
    double theta;
};

// phi(t) = kappa * (t + c)^-(1 + theta) for t > 0
struct PowerLawKernel {
    double kappa;
    double c;
    double theta;
};

// Parametric triggering kernel with analytic antiderivative.
// Immutable value type; evaluation is a pure function of (params, t).
class Kernel {
  public:
    Kernel(ExpKernel k) : v_(k) { // NOLINT(google-explicit-constructor)
        if (!(k.kappa >= 0.0) || !(k.theta > 0.0))
            throw std::invalid_argument("ExpKernel requires kappa >= 0, theta > 0");
    }
    Kernel(PowerLawKernel k) : v_(k) { // NOLINT(google-explicit-constructor)
        if (!(k.kappa >= 0.0) || !(k.c > 0.0))
            throw std::invalid_argument("PowerLawKernel requires kappa >= 0, c > 0");
        // the antiderivative kappa/theta * (c^-theta - (t+c)^-theta) degenerates
        // as theta -> 0; such exponents are rejected outright
        if (!(k.theta > 1e-6))
            throw std::invalid_argument("PowerLawKernel requires theta > 1e-6");
    }

    bool is_exponential() const { return std::holds_alternative<ExpKernel>(v_); }
    const ExpKernel& as_exponential() const {
        if (!is_exponential())
            throw std::invalid_argument("operation requires an exponential kernel");
        return std::get<ExpKernel>(v_);
    }
    const PowerLawKernel& as_power_law() const { return std::get<PowerLawKernel>(v_); }

    // phi(t); 0 for t <= 0 (causal)
    double eval(double t) const {
        if (!(t > 0.0))
            return 0.0;
        if (const auto* e = std::get_if<ExpKernel>(&v_))
            return e->kappa * e->theta * std::exp(-e->theta * t);
        const auto& p = std::get<PowerLawKernel>(v_);
        return p.kappa * std::pow(t + p.c, -(1.0 + p.theta));
    }

    // Phi(t) = int_0^t phi(u) du; 0 for t <= 0, monotone nondecreasing
    double integral(double t) const {
        if (!(t > 0.0))
            return 0.0;
        if (const auto* e = std::get_if<ExpKernel>(&v_))
            return e->kappa * -std::expm1(-e->theta * t);
        const auto& p = std::get<PowerLawKernel>(v_);
        return p.kappa / p.theta * (std::pow(p.c, -p.theta) - std::pow(t + p.c, -p.theta));
    }

    // Phi over (t0, t1]
    double integral(double t0, double t1) const { return integral(t1) - integral(t0); }

    // Phi2(t) = int_0^t Phi(u) du
    double double_integral(double t) const {
        if (!(t > 0.0))
            return 0.0;
        if (const auto* e = std::get_if<ExpKernel>(&v_))
            return e->kappa * (t - -std::expm1(-e->theta * t) / e->theta);
        const auto& p = std::get<PowerLawKernel>(v_);
        // (t+c)^(1-theta) - c^(1-theta) over (1-theta), stable through theta = 1
        const double a = (1.0 - p.theta) * std::log1p(t / p.c);
        const double frac = std::abs(a) < 1e-8 ? 1.0 + 0.5 * a : std::expm1(a) / a;
        const double tail = std::pow(p.c, 1.0 - p.theta) * std::log1p(t / p.c) * frac;
        return p.kappa / p.theta * (std::pow(p.c, -p.theta) * t - tail);
    }

    // n* = int_0^inf phi; expected direct offspring per event
    double branching_factor() const {
        if (const auto* e = std::get_if<ExpKernel>(&v_))
            return e->kappa;
        const auto& p = std::get<PowerLawKernel>(v_);
        return p.kappa * std::pow(p.c, -p.theta) / p.theta;
    }

    bool subcritical() const { return branching_factor() < 1.0; }

    // Inverse of Phi(t)/n*; offspring inter-arrival sampling by inversion.
    // u in [0, 1).
    double offspring_quantile(double u) const {
        if (const auto* e = std::get_if<ExpKernel>(&v_))
            return -std::log1p(-u) / e->theta;
        const auto& p = std::get<PowerLawKernel>(v_);
        return p.c * (std::pow(1.0 - u, -1.0 / p.theta) - 1.0);
    }

  private:
    std::variant<ExpKernel, PowerLawKernel> v_;
};

} // namespace icpp
