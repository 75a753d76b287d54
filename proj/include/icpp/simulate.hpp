#pragma once

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "events.hpp"
#include "exogenous.hpp"
#include "kernels.hpp"
#include "rng.hpp"

namespace icpp {

// Realization of the non-homogeneous Poisson process with intensity s on
// (0, T], by thinning against the constant envelope sup s. Atomic variants
// produce their atoms deterministically.
inline EventSequence sample_immigrants(const Exogenous& s, double T, SplitMix64& rng) {
    EventSequence out;
    out.horizon = T;
    if (s.has_atoms()) {
        for (double a : s.atoms())
            if (a > 0.0 && a <= T)
                out.events.push_back({a, EventLabel::immigrant});
        return out;
    }
    const double sup = s.sup_density(T);
    if (!std::isfinite(sup))
        throw std::domain_error("sample_immigrants: unbounded exogenous intensity");
    if (sup <= 0.0)
        return out;
    double t = 0.0;
    while (true) {
        t += rng.exponential(sup);
        if (t > T)
            break;
        if (rng.uniform() * sup < s.density(t))
            out.events.push_back({t, EventLabel::immigrant});
    }
    return out;
}

// Immigrant plus all direct and indirect offspring before T, generated
// generation by generation: each event spawns Poisson(n*) children at lags
// drawn by inverting Phi/n*. T may be infinite for subcritical kernels.
inline EventSequence sample_cascade(const Kernel& k, double immigrant_time, double T,
                                    SplitMix64& rng) {
    if (!k.subcritical())
        throw std::domain_error("sample_cascade: kernel must be subcritical (n* < 1)");
    EventSequence out;
    out.horizon = T;
    out.events.push_back({immigrant_time, EventLabel::immigrant});
    const double nstar = k.branching_factor();
    std::vector<double> generation{immigrant_time};
    std::vector<double> next;
    while (!generation.empty()) {
        next.clear();
        for (double parent : generation) {
            const int n = rng.poisson(nstar);
            for (int i = 0; i < n; ++i) {
                const double child = parent + k.offspring_quantile(rng.uniform());
                if (child <= T)
                    next.push_back(child);
            }
        }
        for (double t : next)
            out.events.push_back({t, EventLabel::offspring});
        generation.swap(next);
    }
    std::sort(out.events.begin(), out.events.end(),
              [](const Event& a, const Event& b) { return a.time < b.time; });
    return out;
}

// Separable Hawkes realization: immigrants from s, then one cascade per
// immigrant, merged and sorted. Labels are kept so that any scenario can be
// derived from the same realization.
inline EventSequence sample_hawkes(const Kernel& k, const Exogenous& s, double T,
                                   SplitMix64& rng) {
    EventSequence out;
    out.horizon = T;
    EventSequence immigrants = sample_immigrants(s, T, rng);
    for (const auto& im : immigrants.events) {
        EventSequence cascade = sample_cascade(k, im.time, T, rng);
        out.events.insert(out.events.end(), cascade.events.begin(), cascade.events.end());
    }
    std::sort(out.events.begin(), out.events.end(),
              [](const Event& a, const Event& b) { return a.time < b.time; });
    return out;
}

// n independent realizations with per-sequence sub-seeds; identical
// (seed, index) always yields the identical sequence regardless of threading.
inline std::vector<EventSequence> sample_batch(const Kernel& k, const Exogenous& s, double T,
                                               std::size_t n, std::uint64_t seed,
                                               std::size_t threads = 0) {
    std::vector<EventSequence> out(n);
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(1, n));
    auto work = [&](std::size_t first, std::size_t last) {
        for (std::size_t i = first; i < last; ++i) {
            SplitMix64 rng(substream_seed(seed, i));
            out[i] = sample_hawkes(k, s, T, rng);
        }
    };
    if (threads <= 1) {
        work(0, n);
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t first = t * chunk;
        if (first >= n)
            break;
        pool.emplace_back(work, first, std::min(n, first + chunk));
    }
    for (auto& th : pool)
        th.join();
    return out;
}

} // namespace icpp
