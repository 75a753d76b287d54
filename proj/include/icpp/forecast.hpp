#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "grid_approx.hpp"

namespace icpp {

// Predicted count per future day, conditioned on the observed daily counts.
// Day d covers (d, d+1]; `observed` holds days 0..n-1 and the forecast covers
// days n..n+horizon-1. Future exogenous mass comes from the augmented spec,
// whose base must extend over the horizon.
inline std::vector<double> forecast_daily(const Kernel& kernel, const Augmented& exo,
                                          const std::vector<double>& observed,
                                          std::size_t horizon) {
    const std::size_t n = observed.size();
    if (exo.base.boundaries.back() < double(n + horizon) - 1e-9)
        throw std::invalid_argument("forecast_daily: future exogenous counts missing");
    CensoredSeries obs;
    obs.boundaries.resize(n + 1);
    std::iota(obs.boundaries.begin(), obs.boundaries.end(), 0.0);
    obs.counts = observed;
    std::vector<double> hb(horizon + 1);
    for (std::size_t i = 0; i <= horizon; ++i)
        hb[i] = double(n + i);
    std::vector<double> out = conditioned_forecast(kernel, Exogenous(exo), obs, hb);
    for (double& v : out)
        v = std::max(v, 0.0);
    return out;
}

// The discretized-intensity recursion extended into the future: observed days
// enter with their counts, future days with their own predictions.
inline std::vector<double> hip_forecast(const Kernel& kernel, const Augmented& exo,
                                        const std::vector<double>& observed,
                                        std::size_t horizon) {
    const std::size_t n = observed.size();
    std::vector<double> weights(observed);
    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t d = n; d < n + horizon; ++d) {
        double v = augmented_daily_value(exo, d);
        for (std::size_t j = 0; j < weights.size(); ++j)
            v += weights[j] * kernel.eval(double(d - j));
        v = std::max(v, 0.0);
        out.push_back(v);
        weights.push_back(v);
    }
    return out;
}

// Percentile of every value within the corpus: (rank + 1/2) / n * 100 with
// average ranks on ties, so the result depends on ranks only.
inline std::vector<double> percentile_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> pct(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]])
            ++j;
        const double rank = 0.5 * double(i + j); // average rank of the tie group
        for (std::size_t k = i; k <= j; ++k)
            pct[order[k]] = (rank + 0.5) / double(n) * 100.0;
        i = j + 1;
    }
    return pct;
}

// Absolute difference between the percentile rank of the true total and of
// the predicted total, in percentage points per item.
inline std::vector<double> ape(const std::vector<double>& predicted_totals,
                               const std::vector<double>& true_totals) {
    if (predicted_totals.size() != true_totals.size())
        throw std::invalid_argument("ape: length mismatch");
    if (true_totals.size() < 2)
        throw std::invalid_argument("ape: percentiles need at least two items");
    const std::vector<double> pt = percentile_ranks(true_totals);
    const std::vector<double> pp = percentile_ranks(predicted_totals);
    std::vector<double> out(pt.size());
    for (std::size_t i = 0; i < pt.size(); ++i)
        out[i] = std::abs(pt[i] - pp[i]);
    return out;
}

// mean over days of 2|p - a| / (|p| + |a|), with 0/0 = 0
inline double smape(const std::vector<double>& predicted, const std::vector<double>& actual) {
    if (predicted.size() != actual.size())
        throw std::invalid_argument("smape: length mismatch");
    if (predicted.empty())
        return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double denom = std::abs(predicted[i]) + std::abs(actual[i]);
        if (denom > 0.0)
            acc += 2.0 * std::abs(predicted[i] - actual[i]) / denom;
    }
    return acc / double(predicted.size());
}

struct ForecastReport {
    std::vector<double> total_true;
    std::vector<double> total_pred;
    std::vector<double> item_ape;
    std::vector<double> item_smape;
    double mean_ape = 0.0;
    double mean_smape = 0.0;
};

inline ForecastReport build_report(const std::vector<std::vector<double>>& predicted,
                                   const std::vector<std::vector<double>>& actual) {
    if (predicted.size() != actual.size())
        throw std::invalid_argument("build_report: item count mismatch");
    ForecastReport r;
    const std::size_t n = predicted.size();
    r.total_true.resize(n);
    r.total_pred.resize(n);
    r.item_smape.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.total_pred[i] = std::accumulate(predicted[i].begin(), predicted[i].end(), 0.0);
        r.total_true[i] = std::accumulate(actual[i].begin(), actual[i].end(), 0.0);
        r.item_smape[i] = smape(predicted[i], actual[i]);
    }
    r.item_ape = ape(r.total_pred, r.total_true);
    r.mean_ape = std::accumulate(r.item_ape.begin(), r.item_ape.end(), 0.0) / double(n);
    r.mean_smape = std::accumulate(r.item_smape.begin(), r.item_smape.end(), 0.0) / double(n);
    return r;
}

} // namespace icpp
