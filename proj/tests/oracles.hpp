#pragma once

// Test-only oracles: quadrature, grid convolution, an Ogata-thinning Hawkes
// sampler and small brute-force helpers. Everything here is independent of
// the library's analytic evaluation paths.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <icpp/events.hpp>
#include <icpp/exogenous.hpp>
#include <icpp/kernels.hpp>
#include <icpp/rng.hpp>

namespace oracle {

// adaptive Simpson on [a, b]
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10) {
    if (!(b > a))
        return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 40);
}

// integrate with explicit split points (kinks, jumps)
inline double integrate_split(const std::function<double(double)>& f, double a, double b,
                              std::vector<double> splits, double tol = 1e-10) {
    splits.push_back(a);
    splits.push_back(b);
    std::sort(splits.begin(), splits.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
        const double lo = std::max(a, splits[i]);
        const double hi = std::min(b, splits[i + 1]);
        if (hi > lo)
            acc += integrate(f, lo, hi, tol);
    }
    return acc;
}

// n-fold self-convolution on a uniform grid by iterated trapezoid convolution
inline std::vector<double> self_convolve(const std::vector<double>& f, double h, int n) {
    std::vector<double> acc = f;
    for (int k = 1; k < n; ++k) {
        std::vector<double> next(acc.size(), 0.0);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            double v = 0.5 * (acc[0] * f[i] + acc[i] * f[0]);
            for (std::size_t j = 1; j < i; ++j)
                v += acc[j] * f[i - j];
            next[i] = v * h;
        }
        acc.swap(next);
    }
    return acc;
}

// Ogata thinning sampler of the full Hawkes process (cross-check for the
// cluster-based sampler). Only the exponential kernel is needed by tests.
inline icpp::EventSequence ogata_hawkes(const icpp::Kernel& k, const icpp::Exogenous& s, double T,
                                        icpp::SplitMix64& rng) {
    const auto& e = k.as_exponential();
    icpp::EventSequence seq;
    seq.horizon = T;
    // atoms enter deterministically
    for (double a : s.atoms())
        if (a > 0.0 && a <= T)
            seq.events.push_back({a, icpp::EventLabel::immigrant});

    double t = 0.0;
    std::size_t next_atom = 0;
    const auto atoms = s.atoms();
    double excite = 0.0; // endogenous intensity immediately after t
    auto decay_to = [&](double from, double to) { excite *= std::exp(-e.theta * (to - from)); };

    while (t < T) {
        // upper bound valid until the next accepted event or atom
        const double bound = s.sup_density(T) + excite;
        if (bound <= 0.0) {
            if (next_atom < atoms.size() && atoms[next_atom] <= T) {
                decay_to(t, atoms[next_atom]);
                t = atoms[next_atom++];
                excite += e.kappa * e.theta;
                continue;
            }
            break;
        }
        const double dt = rng.exponential(bound);
        if (next_atom < atoms.size() && atoms[next_atom] <= std::min(t + dt, T)) {
            decay_to(t, atoms[next_atom]);
            t = atoms[next_atom++];
            excite += e.kappa * e.theta; // the atom is an event and excites
            continue;
        }
        decay_to(t, t + dt);
        t += dt;
        if (t > T)
            break;
        const double lam = s.density(t) + excite;
        if (rng.uniform() * bound < lam) {
            seq.events.push_back({t, icpp::EventLabel::unlabeled});
            excite += e.kappa * e.theta;
        }
    }
    std::sort(seq.events.begin(), seq.events.end(),
              [](const icpp::Event& a, const icpp::Event& b) { return a.time < b.time; });
    return seq;
}

// |xi(t) - s(t) - (xi * phi)(t)| with the convolution done by adaptive
// quadrature; atoms of s enter the convolution as phi(t - a) terms and are
// dropped from the pointwise s. `xi` is the absolutely continuous part.
inline double volterra_residual(const std::function<double(double)>& xi,
                                const icpp::Exogenous& s, const icpp::Kernel& k, double t) {
    std::vector<double> splits = s.breakpoints();
    double conv = oracle::integrate_split(
        [&](double tau) { return xi(tau) * k.eval(t - tau); }, 0.0, t, splits, 1e-9);
    for (double a : s.atoms())
        conv += k.eval(t - a);
    return std::abs(xi(t) - s.density(t) - conv);
}

inline double mean(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v)
        acc += x;
    return acc / double(v.size());
}

inline double stddev(const std::vector<double>& v) {
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v)
        acc += (x - m) * (x - m);
    return std::sqrt(acc / double(v.size() - 1));
}

// Poisson log-likelihood of one count given a rate (for the LHPP property)
inline double poisson_loglik(double count, double rate_times_width) {
    double lf = 0.0;
    for (int i = 2; i <= int(count); ++i)
        lf += std::log(double(i));
    return count * std::log(rate_times_width) - rate_times_width - lf;
}

} // namespace oracle
