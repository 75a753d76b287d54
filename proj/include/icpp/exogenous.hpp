#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

namespace icpp {

// Dirac impulse at time a; one immigrant entering exactly at a.
struct Impulse {
    double a;
};

// sum of Dirac impulses at the given (sorted) times
struct MultiImpulse {
    std::vector<double> times;
};

// s(t) = height on (a, b], 0 elsewhere
struct Rect {
    double a;
    double b;
    double height;
};

// s(t) = rates[i] on (boundaries[i], boundaries[i+1]]; boundaries[0] = 0
struct PiecewiseConstant {
    std::vector<double> boundaries;
    std::vector<double> rates;
};

// s(t) = kappa*theta + (u0 - kappa*theta) * exp(-theta*t)
struct Dassios {
    double u0;
    double kappa;
    double theta;
};

// s(t) = sin(t) + alpha, alpha >= 1
struct SinePlus {
    double alpha;
};

// Daily exogenous made of a one-off initial mass, a constant background and a
// scaled observed base:  s_hat[d] = gamma*[d = 0] + nu*[d > 0] + mu*base[d],
// where day d covers (d, d+1].
struct Augmented {
    double gamma;
    double nu;
    double mu;
    PiecewiseConstant base;
};

namespace detail {

inline void check_piecewise(const PiecewiseConstant& p) {
    if (p.boundaries.size() < 2 || p.rates.size() + 1 != p.boundaries.size())
        throw std::invalid_argument("PiecewiseConstant: |rates| must equal |boundaries| - 1");
    if (p.boundaries.front() != 0.0)
        throw std::invalid_argument("PiecewiseConstant: first boundary must be 0");
    for (std::size_t i = 1; i < p.boundaries.size(); ++i)
        if (!(p.boundaries[i] > p.boundaries[i - 1]))
            throw std::invalid_argument("PiecewiseConstant: boundaries must be strictly increasing");
    for (double r : p.rates)
        if (!(r >= 0.0))
            throw std::invalid_argument("PiecewiseConstant: rates must be nonnegative");
}

inline double piecewise_density(const PiecewiseConstant& p, double t) {
    if (!(t > p.boundaries.front()) || t > p.boundaries.back())
        return 0.0;
    auto it = std::lower_bound(p.boundaries.begin(), p.boundaries.end(), t);
    return p.rates[std::size_t(it - p.boundaries.begin()) - 1];
}

inline double piecewise_integral(const PiecewiseConstant& p, double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < p.boundaries.size(); ++i) {
        const double lo = p.boundaries[i], hi = p.boundaries[i + 1];
        if (t <= lo)
            break;
        acc += p.rates[i] * (std::min(t, hi) - lo);
    }
    return acc;
}

} // namespace detail

// Exogenous intensity s(t) with analytic integral S(t). Atoms (Dirac masses)
// are kept structurally: density() is the absolutely continuous part only,
// while integral() counts one unit per atom at or before t.
class Exogenous {
  public:
    using Variant =
        std::variant<Impulse, MultiImpulse, Rect, PiecewiseConstant, Dassios, SinePlus, Augmented>;

    Exogenous(Impulse v) : v_(v) { // NOLINT(google-explicit-constructor)
        if (!(v.a >= 0.0))
            throw std::invalid_argument("Impulse: time must be nonnegative");
    }
    Exogenous(MultiImpulse v) : v_(std::move(v)) { // NOLINT(google-explicit-constructor)
        const auto& ts = std::get<MultiImpulse>(v_).times;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (!(ts[i] > 0.0))
                throw std::invalid_argument("MultiImpulse: times must be positive");
            if (i > 0 && ts[i] < ts[i - 1])
                throw std::invalid_argument("MultiImpulse: times must be sorted");
        }
    }
    Exogenous(Rect v) : v_(v) { // NOLINT(google-explicit-constructor)
        if (!(v.a >= 0.0 && v.b > v.a && v.height >= 0.0))
            throw std::invalid_argument("Rect: requires 0 <= a < b and height >= 0");
    }
    Exogenous(PiecewiseConstant v) : v_(std::move(v)) { // NOLINT(google-explicit-constructor)
        detail::check_piecewise(std::get<PiecewiseConstant>(v_));
    }
    Exogenous(Dassios v) : v_(v) { // NOLINT(google-explicit-constructor)
        if (!(v.u0 >= 0.0 && v.kappa >= 0.0 && v.theta > 0.0))
            throw std::invalid_argument("Dassios: requires u0, kappa >= 0 and theta > 0");
    }
    Exogenous(SinePlus v) : v_(v) { // NOLINT(google-explicit-constructor)
        if (!(v.alpha >= 1.0))
            throw std::invalid_argument("SinePlus: alpha must be >= 1 so that s(t) >= 0");
    }
    Exogenous(Augmented v) : v_(std::move(v)) { // NOLINT(google-explicit-constructor)
        const auto& a = std::get<Augmented>(v_);
        if (!(a.gamma >= 0.0 && a.nu >= 0.0 && a.mu >= 0.0))
            throw std::invalid_argument("Augmented: gamma, nu, mu must be nonnegative");
        detail::check_piecewise(a.base);
    }

    const Variant& variant() const { return v_; }

    template <class T> bool holds() const { return std::holds_alternative<T>(v_); }
    template <class T> const T& get() const { return std::get<T>(v_); }

    bool has_atoms() const { return holds<Impulse>() || holds<MultiImpulse>(); }

    std::vector<double> atoms() const {
        if (const auto* i = std::get_if<Impulse>(&v_))
            return {i->a};
        if (const auto* m = std::get_if<MultiImpulse>(&v_))
            return m->times;
        return {};
    }

    // absolutely continuous part of s(t)
    double density(double t) const {
        return std::visit(
            [t](const auto& v) -> double {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Impulse> || std::is_same_v<T, MultiImpulse>) {
                    return 0.0;
                } else if constexpr (std::is_same_v<T, Rect>) {
                    return (t > v.a && t <= v.b) ? v.height : 0.0;
                } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                    return detail::piecewise_density(v, t);
                } else if constexpr (std::is_same_v<T, Dassios>) {
                    if (t < 0.0)
                        return 0.0;
                    return v.kappa * v.theta + (v.u0 - v.kappa * v.theta) * std::exp(-v.theta * t);
                } else if constexpr (std::is_same_v<T, SinePlus>) {
                    return t < 0.0 ? 0.0 : std::sin(t) + v.alpha;
                } else {
                    if (!(t > 0.0))
                        return 0.0;
                    double r = v.mu * detail::piecewise_density(v.base, t);
                    r += (t <= 1.0) ? v.gamma : v.nu;
                    return r;
                }
            },
            v_);
    }

    // S(t) = int_0^t s(u) du, atoms at times <= t contribute one unit each
    double integral(double t) const {
        if (!(t > 0.0)) {
            const auto* i = std::get_if<Impulse>(&v_);
            return (i && i->a == 0.0 && t == 0.0) ? 1.0 : 0.0;
        }
        return std::visit(
            [t](const auto& v) -> double {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Impulse>) {
                    return v.a <= t ? 1.0 : 0.0;
                } else if constexpr (std::is_same_v<T, MultiImpulse>) {
                    auto it = std::upper_bound(v.times.begin(), v.times.end(), t);
                    return double(it - v.times.begin());
                } else if constexpr (std::is_same_v<T, Rect>) {
                    return t <= v.a ? 0.0 : v.height * (std::min(t, v.b) - v.a);
                } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                    return detail::piecewise_integral(v, t);
                } else if constexpr (std::is_same_v<T, Dassios>) {
                    return v.kappa * v.theta * t +
                           (v.u0 - v.kappa * v.theta) * -std::expm1(-v.theta * t) / v.theta;
                } else if constexpr (std::is_same_v<T, SinePlus>) {
                    return (1.0 - std::cos(t)) + v.alpha * t;
                } else {
                    double acc = v.gamma * std::min(t, 1.0);
                    if (t > 1.0)
                        acc += v.nu * (t - 1.0);
                    return acc + v.mu * detail::piecewise_integral(v.base, t);
                }
            },
            v_);
    }

    double integral(double t0, double t1) const { return integral(t1) - integral(t0); }

    // dominating constant for thinning over (0, T]
    double sup_density(double T) const {
        return std::visit(
            [T](const auto& v) -> double {
                using T_ = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T_, Impulse> || std::is_same_v<T_, MultiImpulse>) {
                    return 0.0;
                } else if constexpr (std::is_same_v<T_, Rect>) {
                    return v.height;
                } else if constexpr (std::is_same_v<T_, PiecewiseConstant>) {
                    return *std::max_element(v.rates.begin(), v.rates.end());
                } else if constexpr (std::is_same_v<T_, Dassios>) {
                    return std::max(v.u0, v.kappa * v.theta);
                } else if constexpr (std::is_same_v<T_, SinePlus>) {
                    return v.alpha + 1.0;
                } else {
                    double base_sup =
                        v.base.rates.empty()
                            ? 0.0
                            : *std::max_element(v.base.rates.begin(), v.base.rates.end());
                    return std::max(v.gamma, v.nu) + v.mu * base_sup;
                }
            },
            v_);
    }

    // points where the density is discontinuous or kinked (quadrature split points)
    std::vector<double> breakpoints() const {
        if (const auto* r = std::get_if<Rect>(&v_))
            return {r->a, r->b};
        if (const auto* p = std::get_if<PiecewiseConstant>(&v_))
            return p->boundaries;
        if (const auto* a = std::get_if<Augmented>(&v_)) {
            std::vector<double> b = a->base.boundaries;
            b.push_back(1.0);
            std::sort(b.begin(), b.end());
            return b;
        }
        return atoms();
    }

  private:
    Variant v_;
};

// Maximum-likelihood piecewise-constant rates for interval-censored immigrant
// counts: rate_i = count_i / width_i.
inline Exogenous lhpp_from_counts(const std::vector<double>& boundaries,
                                  const std::vector<double>& counts) {
    if (boundaries.size() != counts.size() + 1)
        throw std::invalid_argument("lhpp_from_counts: |counts| must equal |boundaries| - 1");
    for (double c : counts)
        if (!(c >= 0.0))
            throw std::invalid_argument("lhpp_from_counts: counts must be nonnegative");
    PiecewiseConstant p;
    p.boundaries = boundaries;
    p.rates.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        p.rates[i] = counts[i] / (boundaries[i + 1] - boundaries[i]);
    return Exogenous(std::move(p));
}

// Per-day exogenous mass of an Augmented spec; day d covers (d, d+1].
inline double augmented_daily_value(const Augmented& a, std::size_t day) {
    double v = (day == 0) ? a.gamma : a.nu;
    return v + a.mu * (detail::piecewise_integral(a.base, double(day + 1)) -
                       detail::piecewise_integral(a.base, double(day)));
}

} // namespace icpp
