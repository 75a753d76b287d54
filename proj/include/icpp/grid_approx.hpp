#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "events.hpp"
#include "mean_process.hpp"

namespace icpp {

// Approximation points d_0 = 0 < d_1 < ... < d_D = T.
struct Grid {
    std::vector<double> points;

    static Grid equidistant(double T, std::size_t D) {
        return Grid{equidistant_boundaries(T, D)};
    }

    std::size_t cells() const { return points.size() - 1; }
    double horizon() const { return points.back(); }

    // D-bar(t) = max{ i in 1..D : d_i < t }, 0 when the set is empty
    std::size_t last_before(double t) const {
        std::size_t j = 0;
        while (j + 1 < points.size() && points[j + 1] < t)
            ++j;
        return j;
    }
};

inline void validate_grid(const Grid& g) {
    if (g.points.size() < 2)
        throw std::invalid_argument("Grid: need at least two points");
    if (g.points.front() != 0.0)
        throw std::invalid_argument("Grid: first point must be 0");
    for (std::size_t i = 1; i < g.points.size(); ++i)
        if (!(g.points[i] > g.points[i - 1]))
            throw std::invalid_argument("Grid: points must be strictly increasing");
}

enum class Bound { lower, upper };

// Grid-cell approximation of the compensator,
//   Xi-(t) = S(t) + sum_{j : d_j < t} m_j * Phi(t - d_j),
// where the cell masses m_j approximate E[M(d_{j-1}, d_j]] and are either
// given (observed history) or filled left to right by the recursion
//   m_j = Xi-(d_j) - Xi-(d_{j-1}),
// which is well defined because cell j only reads cells i < j.
// All kernel integrals use the analytic antiderivative Phi.
class GridCompensator {
  public:
    GridCompensator(MeanModel model, Grid grid)
        : model_(std::move(model)), grid_(std::move(grid)) {
        validate_grid(grid_);
        fill_cells_by_recursion();
    }

    GridCompensator(MeanModel model, Grid grid, std::vector<double> cell_masses)
        : model_(std::move(model)), grid_(std::move(grid)), cells_(std::move(cell_masses)) {
        validate_grid(grid_);
        if (cells_.size() != grid_.cells())
            throw std::invalid_argument("GridCompensator: one mass per grid cell required");
    }

    const Grid& grid() const { return grid_; }
    const MeanModel& model() const { return model_; }
    const std::vector<double>& cells() const { return cells_; }

    double lower(double t) const {
        check_domain(t);
        double acc = model_.exogenous.integral(t);
        for (std::size_t j = 1; j < grid_.points.size(); ++j) {
            if (!(grid_.points[j] < t))
                break;
            acc += cells_[j - 1] * model_.kernel.integral(t - grid_.points[j]);
        }
        return acc;
    }

    double upper(double t) const {
        check_domain(t);
        double acc = model_.exogenous.integral(t);
        const std::size_t dbar = grid_.last_before(t);
        for (std::size_t j = 1; j <= dbar + 1 && j <= grid_.cells(); ++j)
            acc += cells_[j - 1] * model_.kernel.integral(t - grid_.points[j - 1]);
        return acc;
    }

    double value(double t, Bound b) const { return b == Bound::lower ? lower(t) : upper(t); }

    // Xi=(x, y] by the explicit two-sum form; identical to lower(y) - lower(x)
    // because Phi vanishes on nonpositive arguments.
    double interval(double x, double y) const {
        if (!(0.0 <= x && x <= y))
            throw std::invalid_argument("interval: requires 0 <= x <= y");
        check_domain(y);
        const std::size_t dbar_x = grid_.last_before(x);
        const std::size_t dbar_y = grid_.last_before(y);
        double acc = model_.exogenous.integral(x, y);
        for (std::size_t j = 1; j <= dbar_y; ++j)
            acc += cells_[j - 1] * (model_.kernel.integral(y - grid_.points[j]) -
                                    model_.kernel.integral(x - grid_.points[j]));
        for (std::size_t j = dbar_x + 1; j <= dbar_y; ++j)
            acc += cells_[j - 1] * model_.kernel.integral(x - grid_.points[j]);
        return acc;
    }

  private:
    void check_domain(double t) const {
        if (!(t >= 0.0) || t > grid_.horizon() * (1.0 + 1e-12))
            throw std::invalid_argument("GridCompensator: t must lie in [0, T]");
    }

    void fill_cells_by_recursion() {
        const std::size_t D = grid_.cells();
        cells_.assign(D, 0.0);

        const double step = grid_.points[1];
        bool equidistant = true;
        for (std::size_t i = 1; i < grid_.points.size() && equidistant; ++i)
            equidistant = std::abs(grid_.points[i] - double(i) * step) <= 1e-9 * grid_.horizon();

        if (equidistant && model_.kernel.is_exponential()) {
            // Phi((j-i)*step) = kappa - kappa*exp(-theta*(j-i)*step); the
            // geometric tail makes the whole fill a single forward recursion
            const auto& e = model_.kernel.as_exponential();
            const double decay = std::exp(-e.theta * step);
            double prefix = 0.0; // sum of m_i
            double tail = 0.0;   // sum of m_i * exp(-theta*(j-i)*step)
            double prev = 0.0;   // Xi-(d_{j-1})
            for (std::size_t j = 1; j <= D; ++j) {
                const double v =
                    model_.exogenous.integral(grid_.points[j]) + e.kappa * (prefix - tail);
                cells_[j - 1] = v - prev;
                prev = v;
                prefix += cells_[j - 1];
                tail = decay * (tail + cells_[j - 1]);
            }
            return;
        }

        // Phi as a function of the lag j - i when the grid is equidistant
        std::vector<double> lag_phi;
        if (equidistant) {
            lag_phi.resize(D + 1);
            for (std::size_t k = 0; k <= D; ++k)
                lag_phi[k] = model_.kernel.integral(double(k) * step);
        }

        double prev = 0.0; // Xi-(d_{j-1})
        for (std::size_t j = 1; j <= D; ++j) {
            double v = model_.exogenous.integral(grid_.points[j]);
            for (std::size_t i = 1; i < j; ++i)
                v += cells_[i - 1] * (equidistant
                                          ? lag_phi[j - i]
                                          : model_.kernel.integral(grid_.points[j] -
                                                                   grid_.points[i]));
            cells_[j - 1] = v - prev;
            prev = v;
        }
    }

    MeanModel model_;
    Grid grid_;
    std::vector<double> cells_;
};

inline double approx_compensator(const MeanModel& m, const Grid& g, double t, Bound b) {
    return GridCompensator(m, g).value(t, b);
}

inline double approx_compensator_interval(const MeanModel& m, const Grid& g, double x, double y) {
    return GridCompensator(m, g).interval(x, y);
}

// One forecast per horizon interval, conditioned on interval-censored history:
// each future interval receives the exogenous increment, the Phi-increments of
// every observed cell weighted by its observed count, and the Phi-increments
// of the already-forecast future cells weighted by their forecasts.
inline std::vector<double> conditioned_forecast(const Kernel& kernel, const Exogenous& exogenous,
                                                const CensoredSeries& observed,
                                                const std::vector<double>& horizon) {
    validate_series(observed);
    if (horizon.size() < 2)
        throw std::invalid_argument("conditioned_forecast: horizon needs at least one interval");
    const double t_obs = observed.boundaries.back();
    if (std::abs(horizon.front() - t_obs) > 1e-9 * std::max(1.0, t_obs))
        throw std::invalid_argument(
            "conditioned_forecast: horizon must start at the end of the observation window");
    for (std::size_t i = 1; i < horizon.size(); ++i)
        if (!(horizon[i] > horizon[i - 1]))
            throw std::invalid_argument("conditioned_forecast: horizon must be increasing");

    std::vector<double> anchors(observed.boundaries.begin() + 1, observed.boundaries.end());
    std::vector<double> masses(observed.counts);
    std::vector<double> out;
    out.reserve(horizon.size() - 1);
    for (std::size_t i = 1; i < horizon.size(); ++i) {
        const double lo = horizon[i - 1], hi = horizon[i];
        double f = exogenous.integral(lo, hi);
        for (std::size_t j = 0; j < anchors.size(); ++j)
            f += masses[j] *
                 (kernel.integral(hi - anchors[j]) - kernel.integral(lo - anchors[j]));
        out.push_back(f);
        anchors.push_back(hi);
        masses.push_back(f);
    }
    return out;
}

} // namespace icpp
