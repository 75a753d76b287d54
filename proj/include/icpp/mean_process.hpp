#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "exogenous.hpp"
#include "kernels.hpp"

namespace icpp {

// Deterministic Poisson process whose intensity xi(t) solves
//   xi = s + xi * phi
// i.e. the expected intensity of the Hawkes process with the same kernel and
// exogenous input. Closed forms below exist for the exponential kernel only.
struct MeanModel {
    Kernel kernel;
    Exogenous exogenous;
};

namespace detail {

// closed forms contain 1/(kappa - 1) factors; keep evaluation off the pole
inline void check_closed_form(const Kernel& k) {
    const auto& e = k.as_exponential();
    if (std::abs(e.kappa - 1.0) < 1e-6)
        throw std::domain_error("closed form undefined for kappa within 1e-6 of 1");
}

// row V is tabulated for the exogenous decay matching the kernel
inline void check_dassios(const ExpKernel& e, const Dassios& d) {
    if (std::abs(d.kappa - e.kappa) > 1e-9 || std::abs(d.theta - e.theta) > 1e-9)
        throw std::invalid_argument(
            "closed form for the Dassios exogenous requires matching kernel parameters");
}

// response to a unit Dirac input: h(t) = kappa*theta*exp((kappa-1)*theta*t)
inline double impulse_h(const ExpKernel& e, double t) {
    if (!(t > 0.0))
        return 0.0;
    return e.kappa * e.theta * std::exp((e.kappa - 1.0) * e.theta * t);
}

// integral of h over (0, t]
inline double impulse_H(const ExpKernel& e, double t) {
    if (!(t > 0.0))
        return 0.0;
    const double g = (e.kappa - 1.0) * e.theta;
    return e.kappa / (e.kappa - 1.0) * std::expm1(g * t);
}

// xi for s = [a < t <= b] (unit-height rectangle; b may be +inf)
inline double rect_intensity(const ExpKernel& e, double a, double b, double t) {
    if (!(t > a))
        return 0.0;
    const double g = (e.kappa - 1.0) * e.theta;
    const double r = e.kappa / (1.0 - e.kappa);
    if (t <= b)
        return 1.0 / (1.0 - e.kappa) - r * std::exp(g * (t - a));
    return r * (std::exp(g * (t - b)) - std::exp(g * (t - a)));
}

// Xi for the same rectangle, integrated exactly from the intensity
inline double rect_compensator(const ExpKernel& e, double a, double b, double t) {
    if (!(t > a))
        return 0.0;
    const double g = (e.kappa - 1.0) * e.theta;
    const double r = e.kappa / (1.0 - e.kappa);
    const double up = std::min(t, b);
    // over (a, min(t,b)]
    double acc = (up - a) / (1.0 - e.kappa) - r / g * std::expm1(g * (up - a));
    if (t > b)
        // over (b, t]
        acc += r / g * (std::expm1(g * (t - b)) - std::exp(g * (b - a)) * std::expm1(g * (t - b)));
    return acc;
}

} // namespace detail

// h(t) of the impulse response E = delta + h; exponential kernel only
inline double impulse_response(const Kernel& k, double t) {
    detail::check_closed_form(k);
    return detail::impulse_h(k.as_exponential(), t);
}

// Absolutely continuous part of the closed-form intensity xi(t).
// Atoms of xi coincide with the atoms of the exogenous input and are
// reported structurally via model.exogenous.atoms().
inline double closed_intensity(const MeanModel& m, double t) {
    detail::check_closed_form(m.kernel);
    const ExpKernel& e = m.kernel.as_exponential();
    const double g = (e.kappa - 1.0) * e.theta;

    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Impulse>) {
                return detail::impulse_h(e, t - v.a);
            } else if constexpr (std::is_same_v<T, MultiImpulse>) {
                double acc = 0.0;
                for (double a : v.times)
                    acc += detail::impulse_h(e, t - a);
                return acc;
            } else if constexpr (std::is_same_v<T, Rect>) {
                return v.height * detail::rect_intensity(e, v.a, v.b, t);
            } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                double acc = 0.0;
                for (std::size_t i = 0; i + 1 < v.boundaries.size(); ++i)
                    acc += v.rates[i] *
                           detail::rect_intensity(e, v.boundaries[i], v.boundaries[i + 1], t);
                return acc;
            } else if constexpr (std::is_same_v<T, Dassios>) {
                detail::check_dassios(e, v);
                if (!(t >= 0.0))
                    return 0.0;
                const double level = e.kappa * e.theta / (1.0 - e.kappa);
                return level + (v.u0 - level) * std::exp(g * t);
            } else if constexpr (std::is_same_v<T, SinePlus>) {
                if (!(t >= 0.0))
                    return 0.0;
                const double th2 = e.theta * e.theta;
                const double B = 1.0 + th2 * (1.0 - e.kappa) * (1.0 - e.kappa);
                const double ecoef = (v.alpha * B + e.theta * (e.kappa - 1.0)) / B;
                return -v.alpha / (e.kappa - 1.0) +
                       e.kappa / (e.kappa - 1.0) * ecoef * std::exp(g * t) +
                       (std::sin(t) * (1.0 + th2 * (1.0 - e.kappa)) -
                        e.kappa * e.theta * std::cos(t)) /
                           B;
            } else { // Augmented
                const double inf = std::numeric_limits<double>::infinity();
                double acc = v.gamma * detail::rect_intensity(e, 0.0, 1.0, t) +
                             v.nu * detail::rect_intensity(e, 1.0, inf, t);
                for (std::size_t i = 0; i + 1 < v.base.boundaries.size(); ++i)
                    acc += v.mu * v.base.rates[i] *
                           detail::rect_intensity(e, v.base.boundaries[i],
                                                  v.base.boundaries[i + 1], t);
                return acc;
            }
        },
        m.exogenous.variant());
}

// Closed-form compensator Xi(t); Xi(0) = 0, monotone nondecreasing. Atoms of
// the exogenous input enter as unit jumps placed exactly at the atom times
// (an atom at time a is included for every t >= a, matching the half-open
// (x, y] interval convention).
inline double closed_compensator(const MeanModel& m, double t) {
    detail::check_closed_form(m.kernel);
    const ExpKernel& e = m.kernel.as_exponential();
    const double g = (e.kappa - 1.0) * e.theta;

    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Impulse>) {
                return (t >= v.a) ? 1.0 + detail::impulse_H(e, t - v.a) : 0.0;
            } else if constexpr (std::is_same_v<T, MultiImpulse>) {
                double acc = 0.0;
                for (double a : v.times)
                    if (t >= a)
                        acc += 1.0 + detail::impulse_H(e, t - a);
                return acc;
            } else if constexpr (std::is_same_v<T, Rect>) {
                return v.height * detail::rect_compensator(e, v.a, v.b, t);
            } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                double acc = 0.0;
                for (std::size_t i = 0; i + 1 < v.boundaries.size(); ++i)
                    acc += v.rates[i] *
                           detail::rect_compensator(e, v.boundaries[i], v.boundaries[i + 1], t);
                return acc;
            } else if constexpr (std::is_same_v<T, Dassios>) {
                detail::check_dassios(e, v);
                if (!(t > 0.0))
                    return 0.0;
                const double level = e.kappa * e.theta / (1.0 - e.kappa);
                return level * t - (v.u0 - level) / g * -std::expm1(g * t);
            } else if constexpr (std::is_same_v<T, SinePlus>) {
                if (!(t > 0.0))
                    return 0.0;
                const double th2 = e.theta * e.theta;
                const double km1 = e.kappa - 1.0;
                const double B = 1.0 + th2 * (1.0 - e.kappa) * (1.0 - e.kappa);
                const double ecoef = (v.alpha * B + e.theta * km1) / B;
                const double trig = (-std::cos(t) * (1.0 + th2 * (1.0 - e.kappa)) -
                                     e.kappa * e.theta * std::sin(t) +
                                     (1.0 + th2 * (1.0 - e.kappa))) /
                                    B;
                return -v.alpha * t / km1 +
                       e.kappa / (km1 * km1 * e.theta) * ecoef * std::expm1(g * t) + trig;
            } else { // Augmented
                const double inf = std::numeric_limits<double>::infinity();
                double acc = v.gamma * detail::rect_compensator(e, 0.0, 1.0, t) +
                             v.nu * detail::rect_compensator(e, 1.0, inf, t);
                for (std::size_t i = 0; i + 1 < v.base.boundaries.size(); ++i)
                    acc += v.mu * v.base.rates[i] *
                           detail::rect_compensator(e, v.base.boundaries[i],
                                                    v.base.boundaries[i + 1], t);
                return acc;
            }
        },
        m.exogenous.variant());
}

// Xi(x, y] = Xi(y) - Xi(x)
inline double compensator_interval(const MeanModel& m, double x, double y) {
    if (!(x <= y))
        throw std::invalid_argument("compensator_interval: requires x <= y");
    if (x == y)
        return 0.0;
    return closed_compensator(m, y) - closed_compensator(m, x);
}

// endogenous part: xi - s (never carries atoms, those live in s)
inline double closed_endo_intensity(const MeanModel& m, double t) {
    return closed_intensity(m, t) - m.exogenous.density(t);
}

// Xi - S
inline double closed_endo_compensator(const MeanModel& m, double t) {
    return closed_compensator(m, t) - m.exogenous.integral(t);
}

} // namespace icpp
