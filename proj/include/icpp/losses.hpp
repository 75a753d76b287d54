#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid_approx.hpp"
#include "mean_process.hpp"

namespace icpp {

enum class LossFamily { ppll, icll, sse, hip };

struct LossSpec {
    LossFamily family = LossFamily::ppll;
    bool endogenous = false;
};

inline std::string to_string(LossFamily f) {
    switch (f) {
    case LossFamily::ppll: return "ppll";
    case LossFamily::icll: return "icll";
    case LossFamily::sse: return "sse";
    default: return "hip";
    }
}

inline LossFamily loss_from_string(const std::string& s) {
    if (s == "ppll") return LossFamily::ppll;
    if (s == "icll") return LossFamily::icll;
    if (s == "sse") return LossFamily::sse;
    if (s == "hip") return LossFamily::hip;
    throw std::invalid_argument("unknown loss: " + s);
}

// interval compensators are floored inside logarithms so that a positive
// count over a zero-mass interval stays finite for derivative-free optimizers
inline constexpr double compensator_floor = 1e-10;

inline constexpr double infinite_loss = std::numeric_limits<double>::infinity();

namespace detail {

inline bool is_atom(const std::vector<double>& sorted_atoms, double t) {
    auto it = std::lower_bound(sorted_atoms.begin(), sorted_atoms.end(), t);
    return it != sorted_atoms.end() && *it == t;
}

// (phi * s)(t) for the absolutely continuous part of s; analytic for the
// piecewise-constant shapes the separable scenarios produce
inline double kernel_exo_convolution(const Kernel& k, const Exogenous& s, double t) {
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Impulse> || std::is_same_v<T, MultiImpulse>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, Rect>) {
                return v.height * (k.integral(t - v.a) - k.integral(t - v.b));
            } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                double acc = 0.0;
                for (std::size_t i = 0; i + 1 < v.boundaries.size(); ++i)
                    acc += v.rates[i] * (k.integral(t - v.boundaries[i]) -
                                         k.integral(t - v.boundaries[i + 1]));
                return acc;
            } else {
                throw std::invalid_argument(
                    "endogenous Hawkes loss needs an impulse or piecewise-constant exogenous");
            }
        },
        s.variant());
}

// int_0^T (phi * s)(t) dt for the same shapes
inline double kernel_exo_convolution_integral(const Kernel& k, const Exogenous& s, double T) {
    return std::visit(
        [&](const auto& v) -> double {
            using Ty = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<Ty, Impulse> || std::is_same_v<Ty, MultiImpulse>) {
                return 0.0;
            } else if constexpr (std::is_same_v<Ty, Rect>) {
                return v.height * (k.double_integral(T - v.a) - k.double_integral(T - v.b));
            } else if constexpr (std::is_same_v<Ty, PiecewiseConstant>) {
                double acc = 0.0;
                for (std::size_t i = 0; i + 1 < v.boundaries.size(); ++i)
                    acc += v.rates[i] * (k.double_integral(T - v.boundaries[i]) -
                                         k.double_integral(T - v.boundaries[i + 1]));
                return acc;
            } else {
                throw std::invalid_argument(
                    "endogenous Hawkes loss needs an impulse or piecewise-constant exogenous");
            }
        },
        s.variant());
}

} // namespace detail

// Negative point-process log-likelihood of a Hawkes process,
//   -sum_n log lambda(t_n) + S(T) + sum_i Phi(T - t_i).
// Events that coincide with an exogenous atom carry probability one (the
// Dirac mass dominates) and contribute no log term. With endogenous_only,
// log terms run over offspring events against the self-excitation intensity
// and S(T) is dropped; every observed event still excites, and immigrants
// that are only known interval-censored excite through their expectation,
// the term (phi * s)(t) for the continuous part of s.
inline double hawkes_ppll(const Kernel& k, const Exogenous& s, const EventSequence& seq,
                          bool endogenous_only = false) {
    if (endogenous_only && !seq.labeled() && !seq.events.empty())
        throw std::invalid_argument("hawkes_ppll: endogenous loss needs labeled events");
    const std::vector<double> atoms = s.atoms();
    const double T = seq.horizon;

    double loss = endogenous_only ? detail::kernel_exo_convolution_integral(k, s, T)
                                  : s.integral(T);
    const bool exponential = k.is_exponential();
    const double theta = exponential ? k.as_exponential().theta : 0.0;
    const double jump = exponential ? k.as_exponential().kappa * theta : 0.0;

    double excite = 0.0; // sum_{t_i < t} phi(t - t_i), maintained recursively
    double prev = 0.0;
    for (std::size_t n = 0; n < seq.events.size(); ++n) {
        const double t = seq.events[n].time;
        if (exponential) {
            excite *= std::exp(-theta * (t - prev));
        } else {
            excite = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                excite += k.eval(t - seq.events[i].time);
        }
        prev = t;

        const bool want_log =
            endogenous_only ? seq.events[n].label == EventLabel::offspring : true;
        if (want_log && !detail::is_atom(atoms, t)) {
            const double lam =
                excite + (endogenous_only ? detail::kernel_exo_convolution(k, s, t)
                                          : s.density(t));
            if (!(lam > 0.0))
                return infinite_loss;
            loss -= std::log(lam);
        }
        if (exponential)
            excite += jump;
        loss += k.integral(T - t);
    }
    return loss;
}

// Negative PP-LL of the deterministic mean process,
//   -sum_n log xi(t_n) + Xi(T),
// with the same atom convention as hawkes_ppll. The endogenous variant uses
// xi - s and Xi - S against offspring events only.
inline double mbpp_ppll(const MeanModel& m, const EventSequence& seq,
                        bool endogenous_only = false) {
    if (endogenous_only && !seq.labeled() && !seq.events.empty())
        throw std::invalid_argument("mbpp_ppll: endogenous loss needs labeled events");
    const std::vector<double> atoms = m.exogenous.atoms();
    const double T = seq.horizon;

    double loss = endogenous_only ? closed_endo_compensator(m, T) : closed_compensator(m, T);
    for (const auto& e : seq.events) {
        const bool want_log = endogenous_only ? e.label == EventLabel::offspring : true;
        if (!want_log)
            continue;
        if (!endogenous_only && detail::is_atom(atoms, e.time))
            continue;
        const double xi = endogenous_only ? closed_endo_intensity(m, e.time)
                                          : closed_intensity(m, e.time);
        if (!(xi > 0.0))
            return infinite_loss;
        loss -= std::log(xi);
    }
    return loss;
}

// sum_i Xi_i - sum_i C_i log Xi_i, Xi_i floored inside the log
inline double ic_ll(const std::vector<double>& interval_compensators,
                    const std::vector<double>& counts) {
    if (interval_compensators.size() != counts.size())
        throw std::invalid_argument("ic_ll: length mismatch");
    double loss = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double xi = std::max(interval_compensators[i], compensator_floor);
        loss += xi - counts[i] * std::log(xi);
    }
    return loss;
}

enum class Generator { kl, sse };

// B_phi(x, y) = phi(x) - phi(y) - (x - y)' grad phi(y)
inline double bregman(Generator g, const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("bregman: length mismatch");
    double acc = 0.0;
    if (g == Generator::sse) {
        for (std::size_t i = 0; i < x.size(); ++i)
            acc += (x[i] - y[i]) * (x[i] - y[i]);
        return acc;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= 0.0) || !(y[i] > 0.0))
            throw std::domain_error("bregman: KL needs x >= 0 and y > 0");
        if (x[i] > 0.0)
            acc += x[i] * std::log(x[i] / y[i]);
        acc -= x[i] - y[i];
    }
    return acc;
}

// sum_i C_i (log C_i - 1) with 0 log 0 = 0; the count-only constant by which
// the KL divergence and the IC-LL differ: KL(C, Xi) = ic_ll(Xi, C) + gap(C).
inline double kl_icll_gap(const std::vector<double>& counts) {
    double acc = 0.0;
    for (double c : counts)
        if (c > 0.0)
            acc += c * (std::log(c) - 1.0);
        else
            acc += -c; // c == 0 contributes 0
    return acc;
}

// Discretized intensity over unit intervals (day j covers (j, j+1]):
//   xi_hat[j] = s[j] + sum_{tau=1..j} phi(tau) * xi_hat[j - tau]
inline std::vector<double> hip_intensity(const Kernel& k, const std::vector<double>& s_daily) {
    std::vector<double> xi(s_daily.size());
    for (std::size_t j = 0; j < s_daily.size(); ++j) {
        double v = s_daily[j];
        for (std::size_t tau = 1; tau <= j; ++tau)
            v += k.eval(double(tau)) * xi[j - tau];
        xi[j] = v;
    }
    return xi;
}

// sum_i (C_i - xi_hat[i])^2; requires unit-length intervals
inline double hip_loss(const Kernel& k, const std::vector<double>& s_daily,
                       const CensoredSeries& counts) {
    validate_series(counts);
    for (std::size_t i = 1; i < counts.boundaries.size(); ++i)
        if (std::abs(counts.boundaries[i] - counts.boundaries[i - 1] - 1.0) > 1e-9)
            throw std::invalid_argument("hip_loss: intervals must have unit length");
    if (s_daily.size() != counts.size())
        throw std::invalid_argument("hip_loss: one exogenous value per interval required");
    const std::vector<double> xi = hip_intensity(k, s_daily);
    double acc = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i)
        acc += (counts.counts[i] - xi[i]) * (counts.counts[i] - xi[i]);
    return acc;
}

// Xi(o_{i-1}, o_i] for every interval of `boundaries`, from the closed form;
// with endogenous = true the exogenous increments are removed.
inline std::vector<double> closed_interval_compensators(const MeanModel& m,
                                                        const std::vector<double>& boundaries,
                                                        bool endogenous = false) {
    std::vector<double> out(boundaries.size() - 1);
    double prev = endogenous ? closed_endo_compensator(m, boundaries.front())
                             : closed_compensator(m, boundaries.front());
    for (std::size_t i = 1; i < boundaries.size(); ++i) {
        const double cur = endogenous ? closed_endo_compensator(m, boundaries[i])
                                      : closed_compensator(m, boundaries[i]);
        out[i - 1] = cur - prev;
        prev = cur;
    }
    return out;
}

// Same quantities from the grid lower-bound approximation; the approximation
// keeps S exact, so the endogenous variant just removes the S increments.
inline std::vector<double> approx_interval_compensators(const GridCompensator& gc,
                                                        const std::vector<double>& boundaries,
                                                        bool endogenous = false) {
    std::vector<double> out(boundaries.size() - 1);
    for (std::size_t i = 1; i < boundaries.size(); ++i) {
        out[i - 1] = gc.interval(boundaries[i - 1], boundaries[i]);
        if (endogenous)
            out[i - 1] -= gc.model().exogenous.integral(boundaries[i - 1], boundaries[i]);
    }
    return out;
}

} // namespace icpp
