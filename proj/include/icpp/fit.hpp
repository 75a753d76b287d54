#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "losses.hpp"
#include "rng.hpp"
#include "scenarios.hpp"

namespace icpp {

enum class ModelFamily { hawkes, mbpp_closed, mbpp_approx };
enum class KernelFamily { exponential, powerlaw };

inline std::string to_string(ModelFamily m) {
    switch (m) {
    case ModelFamily::hawkes: return "hawkes";
    case ModelFamily::mbpp_closed: return "mbpp-closed";
    default: return "mbpp-approx";
    }
}

inline ModelFamily model_from_string(const std::string& s) {
    if (s == "hawkes") return ModelFamily::hawkes;
    if (s == "mbpp-closed") return ModelFamily::mbpp_closed;
    if (s == "mbpp-approx") return ModelFamily::mbpp_approx;
    throw std::invalid_argument("unknown model: " + s);
}

inline std::string to_string(KernelFamily k) {
    return k == KernelFamily::exponential ? "exponential" : "powerlaw";
}

inline KernelFamily kernel_from_string(const std::string& s) {
    if (s == "exponential") return KernelFamily::exponential;
    if (s == "powerlaw") return KernelFamily::powerlaw;
    throw std::invalid_argument("unknown kernel: " + s);
}

inline std::vector<std::string> kernel_param_names(KernelFamily k) {
    if (k == KernelFamily::exponential)
        return {"kappa", "theta"};
    return {"kappa", "c", "theta"};
}

inline Kernel make_kernel(KernelFamily f, const std::vector<double>& p) {
    if (f == KernelFamily::exponential)
        return Kernel(ExpKernel{p.at(0), p.at(1)});
    return Kernel(PowerLawKernel{p.at(0), p.at(1), p.at(2)});
}

struct ParamBounds {
    double lo = 1e-4;
    double hi = 10.0;
};

struct FitConfig {
    std::vector<ParamBounds> bounds; // per parameter; empty -> defaults
    std::size_t restarts = 10;
    double tolerance = 1e-9;
    std::size_t max_iterations = 0; // 0 -> scaled with dimension
    std::uint64_t seed = 0;
    std::size_t grid_points = 0; // approximate models; 0 -> observation intervals
};

struct FitResult {
    std::vector<std::string> param_names;
    std::vector<double> params;
    double loss = 0.0;
    bool converged = false;
    std::size_t restarts = 0;
    std::vector<double> restart_losses; // converged loss of every restart
    std::vector<bool> at_bound;         // saturation diagnostics, per parameter
    std::string model, kernel, loss_name, scenario;
    std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// Nelder-Mead simplex on unconstrained coordinates; box constraints enter
// through a logistic reparameterization, so the simplex can never leave the
// bounds.

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
};

template <class F>
NelderMeadResult nelder_mead(F&& f, const std::vector<double>& x0, double tol,
                             std::size_t max_iter) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i)
        simplex[i + 1][i] += 0.5;
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        fv[i] = f(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    NelderMeadResult res;
    for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
        std::iota(order.begin(), order.end(), std::size_t(0));
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];

        if (std::isfinite(fv[best]) &&
            std::abs(fv[worst] - fv[best]) <= tol * (std::abs(fv[best]) + tol)) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst)
                continue;
            for (std::size_t d = 0; d < n; ++d)
                centroid[d] += simplex[i][d] / double(n);
        }

        auto blend = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t d = 0; d < n; ++d)
                x[d] = centroid[d] + coef * (simplex[worst][d] - centroid[d]);
            return x;
        };

        std::vector<double> xr = blend(-1.0);
        const double fr = f(xr);
        if (fr < fv[order[0]]) {
            std::vector<double> xe = blend(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[worst] = std::move(xe);
                fv[worst] = fe;
            } else {
                simplex[worst] = std::move(xr);
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            simplex[worst] = std::move(xr);
            fv[worst] = fr;
            continue;
        }
        std::vector<double> xc = blend(fr < fv[worst] ? -0.5 : 0.5);
        const double fc = f(xc);
        if (fc < std::min(fr, fv[worst])) {
            simplex[worst] = std::move(xc);
            fv[worst] = fc;
            continue;
        }
        // shrink toward the best vertex
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best)
                continue;
            for (std::size_t d = 0; d < n; ++d)
                simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
            fv[i] = f(simplex[i]);
        }
    }
    const std::size_t best =
        std::size_t(std::min_element(fv.begin(), fv.end()) - fv.begin());
    res.x = simplex[best];
    res.fx = fv[best];
    return res;
}

// p = lo + (hi - lo) * sigmoid(z)
struct BoxTransform {
    std::vector<ParamBounds> bounds;

    std::vector<double> to_params(const std::vector<double>& z) const {
        std::vector<double> p(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double s = 0.5 * (1.0 + std::tanh(0.5 * z[i]));
            p[i] = bounds[i].lo + (bounds[i].hi - bounds[i].lo) * s;
        }
        return p;
    }

    std::vector<double> to_z(const std::vector<double>& p) const {
        std::vector<double> z(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            double s = (p[i] - bounds[i].lo) / (bounds[i].hi - bounds[i].lo);
            s = std::clamp(s, 1e-12, 1.0 - 1e-12);
            z[i] = std::log(s / (1.0 - s));
        }
        return z;
    }
};

// deterministic restart point, uniform in log-space over the bounds
inline std::vector<double> restart_point(const std::vector<ParamBounds>& bounds,
                                         std::uint64_t seed, std::size_t restart) {
    SplitMix64 rng(substream_seed(seed, 0x5eed0000ULL + restart));
    std::vector<double> p(bounds.size());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const double llo = std::log(std::max(bounds[i].lo, 1e-12));
        const double lhi = std::log(bounds[i].hi);
        p[i] = std::exp(llo + (lhi - llo) * rng.uniform());
    }
    return p;
}

// Minimizes `objective(params)` over box bounds with multi-restart
// Nelder-Mead; ties between restarts break toward the lower restart index.
template <class F>
FitResult minimize(F&& objective, const std::vector<ParamBounds>& bounds, const FitConfig& cfg) {
    if (cfg.restarts < 1)
        throw std::invalid_argument("minimize: restarts must be >= 1");
    for (const auto& b : bounds)
        if (!(b.lo > 0.0) || !(b.hi > b.lo) || !std::isfinite(b.hi))
            throw std::invalid_argument("minimize: bounds must be finite, positive, ordered");

    const BoxTransform box{bounds};
    auto f = [&](const std::vector<double>& z) { return objective(box.to_params(z)); };
    const std::size_t max_iter =
        cfg.max_iterations ? cfg.max_iterations : 250 * bounds.size() + 250;

    FitResult out;
    out.restarts = cfg.restarts;
    out.seed = cfg.seed;
    out.loss = infinite_loss;
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        const std::vector<double> z0 = box.to_z(restart_point(bounds, cfg.seed, r));
        NelderMeadResult nm = nelder_mead(f, z0, cfg.tolerance, max_iter);
        out.restart_losses.push_back(nm.fx);
        if (nm.fx < out.loss) {
            out.loss = nm.fx;
            out.params = box.to_params(nm.x);
            out.converged = nm.converged;
        }
    }
    if (!std::isfinite(out.loss))
        throw std::runtime_error("minimize: every restart diverged");
    out.at_bound.resize(bounds.size());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const double width = bounds[i].hi - bounds[i].lo;
        out.at_bound[i] = out.params[i] - bounds[i].lo < 1e-3 * width ||
                          bounds[i].hi - out.params[i] < 1e-3 * width;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Legal (scenario, model, loss) combinations:
//   Hawkes fits event-time scenarios (A-C) with PP-LL only; interval-censored
//   offspring (D-F) take the mean-process models with IC-LL / SSE / HIP.
//   Endogenous losses require separable data (B, C, E, F); HIP has no
//   endogenous variant here and requires unit intervals.
inline void validate_combination(Scenario sc, ModelFamily mf, KernelFamily kf, LossSpec loss) {
    const bool censored = scenario_offspring_censored(sc);
    if (loss.family == LossFamily::ppll && censored)
        throw std::invalid_argument("PP-LL needs event times; scenario " + to_string(sc) +
                                    " observes counts (only MBPP with an interval loss fits it)");
    if (loss.family != LossFamily::ppll && !censored)
        throw std::invalid_argument("interval losses need censored data; scenario " +
                                    to_string(sc) + " observes event times");
    if (mf == ModelFamily::hawkes && censored)
        throw std::invalid_argument("the Hawkes process cannot fit interval-censored data");
    if (mf == ModelFamily::mbpp_approx && !censored)
        throw std::invalid_argument("the approximate model only evaluates interval losses");
    if (mf == ModelFamily::mbpp_closed && kf != KernelFamily::exponential)
        throw std::invalid_argument("closed forms exist for the exponential kernel only");
    if (loss.endogenous && !scenario_separable(sc))
        throw std::invalid_argument("endogenous losses need separable data");
    if (loss.endogenous && loss.family == LossFamily::hip)
        throw std::invalid_argument("the HIP loss has no endogenous variant");
}

namespace detail {

// Data of one sequence, reduced to what the chosen loss consumes.
struct PreparedSequence {
    Exogenous exo;
    // ppll path
    EventSequence events;
    bool endo = false;
    // interval path
    std::vector<double> boundaries;
    std::vector<double> counts;
    std::vector<double> s_daily; // hip only
};

inline EventSequence merge_times(const std::vector<double>& immigrants,
                                 const std::vector<double>& offspring, double T) {
    EventSequence seq;
    seq.horizon = T;
    for (double t : immigrants)
        seq.events.push_back({t, EventLabel::immigrant});
    for (double t : offspring)
        seq.events.push_back({t, EventLabel::offspring});
    std::sort(seq.events.begin(), seq.events.end(),
              [](const Event& a, const Event& b) { return a.time < b.time; });
    return seq;
}

inline PreparedSequence prepare_sequence(const ScenarioData& d, LossSpec loss) {
    PreparedSequence p{scenario_exogenous(d), {}, loss.endogenous, {}, {}, {}};
    const Scenario sc = d.scenario;
    if (loss.family == LossFamily::ppll) {
        switch (sc) {
        case Scenario::A:
            p.events.horizon = d.horizon;
            for (double t : *d.event_times)
                p.events.events.push_back({t, EventLabel::unlabeled});
            break;
        case Scenario::B:
            p.events = merge_times(*d.immigrant_times, *d.event_times, d.horizon);
            break;
        case Scenario::C:
            // immigrants are censored; the event-time stream is offspring only
            p.events.horizon = d.horizon;
            for (double t : *d.event_times)
                p.events.events.push_back({t, EventLabel::offspring});
            break;
        default:
            throw std::logic_error("ppll prepared for a censored scenario");
        }
        return p;
    }

    // interval losses
    p.boundaries = d.event_counts->boundaries;
    p.counts = d.event_counts->counts;
    if (!loss.endogenous) {
        // fold the separable immigrant stream back into the counts so that the
        // full compensator (exogenous mass included) is the right target
        if (sc == Scenario::E) {
            EventSequence imm;
            imm.horizon = d.horizon;
            for (double t : *d.immigrant_times)
                imm.events.push_back({t, EventLabel::immigrant});
            const CensoredSeries ic = censor(imm, p.boundaries);
            for (std::size_t i = 0; i < p.counts.size(); ++i)
                p.counts[i] += ic.counts[i];
        } else if (sc == Scenario::F) {
            if (d.immigrant_counts->boundaries != p.boundaries)
                throw std::invalid_argument(
                    "non-endogenous loss in scenario F needs Q equal to O");
            for (std::size_t i = 0; i < p.counts.size(); ++i)
                p.counts[i] += d.immigrant_counts->counts[i];
        }
    }
    if (loss.family == LossFamily::hip) {
        p.s_daily.resize(p.boundaries.size() - 1);
        for (std::size_t i = 0; i + 1 < p.boundaries.size(); ++i)
            p.s_daily[i] = p.exo.integral(p.boundaries[i], p.boundaries[i + 1]);
    }
    return p;
}

} // namespace detail

// Group objective: parameters are shared across all sequences of the group
// and per-sequence losses are summed in a fixed order.
class GroupObjective {
  public:
    GroupObjective(const std::vector<ScenarioData>& group, ModelFamily mf, KernelFamily kf,
                   LossSpec loss, std::size_t grid_points = 0)
        : mf_(mf), kf_(kf), loss_(loss) {
        if (group.empty())
            throw std::invalid_argument("GroupObjective: empty group");
        scenario_ = group.front().scenario;
        for (const auto& d : group)
            if (d.scenario != scenario_)
                throw std::invalid_argument("GroupObjective: mixed scenarios in one group");
        validate_combination(scenario_, mf, kf, loss);
        for (const auto& d : group)
            seqs_.push_back(detail::prepare_sequence(d, loss));
        if (loss.family != LossFamily::ppll) {
            const std::size_t m = seqs_.front().boundaries.size() - 1;
            grid_points_ = grid_points ? grid_points : m;
        }
    }

    std::size_t dim() const { return kernel_param_names(kf_).size(); }
    Scenario scenario() const { return scenario_; }

    double operator()(const std::vector<double>& params) const {
        double total = 0.0;
        try {
            const Kernel k = make_kernel(kf_, params);
            for (const auto& s : seqs_) {
                total += sequence_loss(k, s);
                if (!std::isfinite(total))
                    return infinite_loss;
            }
        } catch (const std::domain_error&) {
            return infinite_loss; // e.g. kappa inside the closed-form guard band
        }
        return total;
    }

  private:
    double sequence_loss(const Kernel& k, const detail::PreparedSequence& s) const {
        if (loss_.family == LossFamily::ppll) {
            if (mf_ == ModelFamily::hawkes)
                return hawkes_ppll(k, s.exo, s.events, s.endo);
            return mbpp_ppll(MeanModel{k, s.exo}, s.events, s.endo);
        }
        if (loss_.family == LossFamily::hip)
            return hip_loss(k, s.s_daily, CensoredSeries{s.boundaries, s.counts});

        std::vector<double> xi;
        if (mf_ == ModelFamily::mbpp_closed) {
            xi = closed_interval_compensators(MeanModel{k, s.exo}, s.boundaries, s.endo);
        } else {
            const Grid g = Grid::equidistant(s.boundaries.back(), grid_points_);
            const GridCompensator gc(MeanModel{k, s.exo}, g);
            xi = approx_interval_compensators(gc, s.boundaries, s.endo);
        }
        if (loss_.family == LossFamily::icll)
            return ic_ll(xi, s.counts);
        return bregman(Generator::sse, s.counts, xi);
    }

    ModelFamily mf_;
    KernelFamily kf_;
    LossSpec loss_;
    Scenario scenario_;
    std::size_t grid_points_ = 0;
    std::vector<detail::PreparedSequence> seqs_;
};

// Bounded multi-restart fit of the kernel parameters on one group.
inline FitResult fit_group(const std::vector<ScenarioData>& group, ModelFamily mf,
                           KernelFamily kf, LossSpec loss, const FitConfig& cfg) {
    GroupObjective obj(group, mf, kf, loss, cfg.grid_points);
    std::vector<ParamBounds> bounds = cfg.bounds;
    if (bounds.empty())
        bounds.assign(obj.dim(), ParamBounds{});
    if (bounds.size() != obj.dim())
        throw std::invalid_argument("fit_group: one bound per parameter required");

    FitResult res = minimize(obj, bounds, cfg);
    res.param_names = kernel_param_names(kf);
    res.model = to_string(mf);
    res.kernel = to_string(kf);
    res.loss_name = to_string(loss.family) + (loss.endogenous ? "-endo" : "");
    res.scenario = to_string(obj.scenario());
    return res;
}

inline FitResult fit(const ScenarioData& data, ModelFamily mf, KernelFamily kf, LossSpec loss,
                     const FitConfig& cfg) {
    return fit_group(std::vector<ScenarioData>{data}, mf, kf, loss, cfg);
}

// Daily model for the popularity pipeline: kernel parameters plus the
// augmented exogenous (gamma, nu, mu) are fitted jointly on unit-day counts,
// with the known exogenous daily volumes as the base. `exo_daily` may extend
// past the observed days; the tail is ignored by the loss and reused later
// for forecasting.
inline FitResult fit_daily(const std::vector<double>& observed_counts,
                           const std::vector<double>& exo_daily, ModelFamily mf,
                           KernelFamily kf, LossFamily lf, const FitConfig& cfg) {
    if (lf == LossFamily::ppll)
        throw std::invalid_argument("fit_daily: daily counts need an interval loss");
    if (mf == ModelFamily::mbpp_closed && kf != KernelFamily::exponential)
        throw std::invalid_argument("closed forms exist for the exponential kernel only");
    if (exo_daily.size() < observed_counts.size())
        throw std::invalid_argument("fit_daily: one exogenous value per observed day required");
    const std::size_t n = observed_counts.size();
    const std::size_t nk = kernel_param_names(kf).size();

    PiecewiseConstant base;
    base.boundaries.resize(exo_daily.size() + 1);
    std::iota(base.boundaries.begin(), base.boundaries.end(), 0.0);
    base.rates = exo_daily;

    std::vector<double> boundaries(n + 1);
    std::iota(boundaries.begin(), boundaries.end(), 0.0);
    const std::size_t grid_points = cfg.grid_points ? cfg.grid_points : n;

    auto objective = [&](const std::vector<double>& p) -> double {
        try {
            const Kernel k = make_kernel(kf, std::vector<double>(p.begin(), p.begin() + nk));
            const Augmented aug{p[nk], p[nk + 1], p[nk + 2], base};
            if (lf == LossFamily::hip) {
                std::vector<double> s_daily(n);
                for (std::size_t i = 0; i < n; ++i)
                    s_daily[i] = augmented_daily_value(aug, i);
                return hip_loss(k, s_daily, CensoredSeries{boundaries, observed_counts});
            }
            const MeanModel m{k, Exogenous(aug)};
            std::vector<double> xi;
            if (mf == ModelFamily::mbpp_closed) {
                xi = closed_interval_compensators(m, boundaries);
            } else {
                const GridCompensator gc(m, Grid::equidistant(double(n), grid_points));
                xi = approx_interval_compensators(gc, boundaries);
            }
            return lf == LossFamily::icll ? ic_ll(xi, observed_counts)
                                          : bregman(Generator::sse, observed_counts, xi);
        } catch (const std::domain_error&) {
            return infinite_loss;
        }
    };

    std::vector<ParamBounds> bounds = cfg.bounds;
    if (bounds.empty()) {
        bounds.assign(nk, ParamBounds{});
        const double cmax = *std::max_element(observed_counts.begin(), observed_counts.end());
        const double hi = std::max(10.0, 2.0 * cmax);
        bounds.push_back({1e-6, hi});  // gamma
        bounds.push_back({1e-6, hi});  // nu
        bounds.push_back({1e-6, 10.0}); // mu
    }
    if (bounds.size() != nk + 3)
        throw std::invalid_argument("fit_daily: one bound per parameter required");

    FitResult res = minimize(objective, bounds, cfg);
    res.param_names = kernel_param_names(kf);
    res.param_names.insert(res.param_names.end(), {"gamma", "nu", "mu"});
    res.model = lf == LossFamily::hip ? "hip" : to_string(mf);
    res.kernel = to_string(kf);
    res.loss_name = to_string(lf);
    res.scenario = "daily";
    return res;
}

} // namespace icpp
