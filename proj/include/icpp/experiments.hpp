#pragma once

#include <cmath>
#include <mutex>
#include <thread>
#include <vector>

#include "fit.hpp"
#include "simulate.hpp"

namespace icpp {

// Parameter-recovery experiment: simulate sequences from a known generator,
// pre-process them for a scenario, jointly fit each group, and aggregate the
// per-group estimates as mean +/- std.
struct RecoveryConfig {
    Kernel true_kernel;
    Exogenous true_exogenous;
    double horizon = 30.0;
    std::size_t n_sequences = 200;
    std::size_t n_groups = 10;
    Scenario scenario = Scenario::A;
    ModelFamily family = ModelFamily::mbpp_closed;
    KernelFamily kernel_family = KernelFamily::exponential;
    LossSpec loss;
    std::size_t intervals = 15;   // O, endogenous/merged censoring
    std::size_t intervals_q = 0;  // Q, immigrant censoring; 0 -> same as O
    FitConfig fit;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
};

struct RecoveryResult {
    std::vector<FitResult> groups;

    double mean(std::size_t param) const {
        double acc = 0.0;
        for (const auto& g : groups)
            acc += g.params[param];
        return acc / double(groups.size());
    }

    double stddev(std::size_t param) const {
        const double m = mean(param);
        double acc = 0.0;
        for (const auto& g : groups)
            acc += (g.params[param] - m) * (g.params[param] - m);
        return groups.size() > 1 ? std::sqrt(acc / double(groups.size() - 1)) : 0.0;
    }
};

inline RecoveryResult run_recovery(const RecoveryConfig& cfg) {
    const std::vector<EventSequence> all = sample_batch(
        cfg.true_kernel, cfg.true_exogenous, cfg.horizon, cfg.n_sequences, cfg.seed, cfg.threads);

    const std::vector<double> O = equidistant_boundaries(cfg.horizon, cfg.intervals);
    const std::vector<double> Q =
        equidistant_boundaries(cfg.horizon, cfg.intervals_q ? cfg.intervals_q : cfg.intervals);
    std::optional<Exogenous> known;
    if (!scenario_separable(cfg.scenario))
        known = cfg.true_exogenous;

    const std::size_t per_group = cfg.n_sequences / cfg.n_groups;
    RecoveryResult out;
    out.groups.resize(cfg.n_groups);

    auto fit_one = [&](std::size_t g) {
        std::vector<ScenarioData> group;
        group.reserve(per_group);
        for (std::size_t i = g * per_group; i < (g + 1) * per_group; ++i)
            group.push_back(make_scenario(all[i], cfg.scenario, O, Q, known));
        FitConfig fc = cfg.fit;
        fc.seed = substream_seed(cfg.seed, 0xf17 + g);
        out.groups[g] = fit_group(group, cfg.family, cfg.kernel_family, cfg.loss, fc);
    };

    std::size_t threads = cfg.threads ? cfg.threads
                                      : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, cfg.n_groups);
    if (threads <= 1) {
        for (std::size_t g = 0; g < cfg.n_groups; ++g)
            fit_one(g);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t g = t; g < cfg.n_groups; g += threads)
                        fit_one(g);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            });
        for (auto& th : pool)
            th.join();
        if (failure)
            std::rethrow_exception(failure);
    }
    return out;
}

// Error of the lower-bound compensator against the closed form over an
// evaluation grid, for each number of approximation points. The error is the
// maximum absolute deviation relative to the total mass Xi(T); a pointwise
// ratio would be dominated by the vanishing denominator near t = 0.
struct SweepPoint {
    std::size_t grid_points;
    double max_rel_error;
};

inline std::vector<SweepPoint> sweep_grid_error(const MeanModel& model, double T,
                                                const std::vector<std::size_t>& Ds,
                                                std::size_t eval_points = 200) {
    std::vector<SweepPoint> out;
    const double scale = closed_compensator(model, T);
    for (std::size_t D : Ds) {
        const GridCompensator gc(model, Grid::equidistant(T, D));
        double worst = 0.0;
        for (std::size_t i = 1; i <= eval_points; ++i) {
            const double t = T * double(i) / double(eval_points);
            worst = std::max(worst, std::abs(gc.lower(t) - closed_compensator(model, t)));
        }
        out.push_back({D, worst / scale});
    }
    return out;
}

} // namespace icpp
