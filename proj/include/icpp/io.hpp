#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "events.hpp"
#include "exogenous.hpp"
#include "fit.hpp"
#include "forecast.hpp"

namespace icpp {

inline constexpr const char* version_string = "0.1.0";

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// kernel / exogenous specs <-> JSON

inline json to_json(const Kernel& k) {
    if (k.is_exponential()) {
        const auto& e = k.as_exponential();
        return {{"type", "exponential"}, {"kappa", e.kappa}, {"theta", e.theta}};
    }
    const auto& p = k.as_power_law();
    return {{"type", "powerlaw"}, {"kappa", p.kappa}, {"theta", p.theta}, {"c", p.c}};
}

inline Kernel kernel_from_json(const json& j) {
    const std::string type = j.at("type");
    if (type == "exponential")
        return Kernel(ExpKernel{j.at("kappa"), j.at("theta")});
    if (type == "powerlaw")
        return Kernel(PowerLawKernel{j.at("kappa"), j.at("c"), j.at("theta")});
    throw std::invalid_argument("kernel_from_json: unknown type " + type);
}

inline json to_json(const Exogenous& e);

inline json to_json(const PiecewiseConstant& p) {
    return {{"type", "piecewise"}, {"boundaries", p.boundaries}, {"rates", p.rates}};
}

inline json to_json(const Exogenous& e) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Impulse>) {
                return {{"type", "impulse"}, {"a", v.a}};
            } else if constexpr (std::is_same_v<T, MultiImpulse>) {
                return {{"type", "multi-impulse"}, {"times", v.times}};
            } else if constexpr (std::is_same_v<T, Rect>) {
                return {{"type", "rect"}, {"a", v.a}, {"b", v.b}, {"height", v.height}};
            } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                return to_json(v);
            } else if constexpr (std::is_same_v<T, Dassios>) {
                return {{"type", "dassios"}, {"u0", v.u0}, {"kappa", v.kappa}, {"theta", v.theta}};
            } else if constexpr (std::is_same_v<T, SinePlus>) {
                return {{"type", "sineplus"}, {"alpha", v.alpha}};
            } else {
                return {{"type", "augmented"},
                        {"gamma", v.gamma},
                        {"nu", v.nu},
                        {"mu", v.mu},
                        {"base", to_json(v.base)}};
            }
        },
        e.variant());
}

inline Exogenous exogenous_from_json(const json& j) {
    const std::string type = j.at("type");
    if (type == "impulse")
        return Exogenous(Impulse{j.at("a")});
    if (type == "multi-impulse")
        return Exogenous(MultiImpulse{j.at("times").get<std::vector<double>>()});
    if (type == "rect")
        return Exogenous(Rect{j.at("a"), j.at("b"), j.at("height")});
    if (type == "piecewise")
        return Exogenous(PiecewiseConstant{j.at("boundaries").get<std::vector<double>>(),
                                           j.at("rates").get<std::vector<double>>()});
    if (type == "dassios")
        return Exogenous(Dassios{j.at("u0"), j.at("kappa"), j.at("theta")});
    if (type == "sineplus")
        return Exogenous(SinePlus{j.at("alpha")});
    if (type == "augmented") {
        const json& b = j.at("base");
        return Exogenous(Augmented{j.at("gamma"), j.at("nu"), j.at("mu"),
                                   PiecewiseConstant{b.at("boundaries").get<std::vector<double>>(),
                                                     b.at("rates").get<std::vector<double>>()}});
    }
    throw std::invalid_argument("exogenous_from_json: unknown type " + type);
}

// ---------------------------------------------------------------------------
// CSV files

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot open for writing: " + path);
    f.precision(17);
    return f;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open for reading: " + path);
    return f;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
        out.push_back(field);
    return out;
}

inline std::string label_name(EventLabel l) {
    switch (l) {
    case EventLabel::immigrant: return "immigrant";
    case EventLabel::offspring: return "offspring";
    default: return "unlabeled";
    }
}

inline EventLabel label_from(const std::string& s) {
    if (s == "immigrant")
        return EventLabel::immigrant;
    if (s == "offspring")
        return EventLabel::offspring;
    if (s == "unlabeled" || s.empty())
        return EventLabel::unlabeled;
    throw std::invalid_argument("unknown event label: " + s);
}

} // namespace detail

inline void write_events_csv(const std::string& path, const EventSequence& seq) {
    auto f = detail::open_out(path);
    f << "time,label\n";
    for (const auto& e : seq.events)
        f << e.time << ',' << detail::label_name(e.label) << '\n';
}

// `horizon` falls back to the last event time when not given
inline EventSequence read_events_csv(const std::string& path, double horizon = 0.0) {
    auto f = detail::open_in(path);
    std::string line;
    std::getline(f, line); // header
    EventSequence seq;
    while (std::getline(f, line)) {
        if (line.empty())
            continue;
        const auto fields = detail::split_csv(line);
        Event e{std::stod(fields.at(0)), fields.size() > 1 ? detail::label_from(fields[1])
                                                           : EventLabel::unlabeled};
        seq.events.push_back(e);
    }
    seq.horizon = horizon > 0.0 ? horizon
                                : (seq.events.empty() ? 1.0 : seq.events.back().time);
    validate_sequence(seq);
    return seq;
}

inline void write_counts_csv(const std::string& path, const CensoredSeries& s) {
    auto f = detail::open_out(path);
    f << "start,end,count\n";
    for (std::size_t i = 0; i < s.counts.size(); ++i)
        f << s.boundaries[i] << ',' << s.boundaries[i + 1] << ',' << s.counts[i] << '\n';
}

// `from_zero = false` reads a (start,end,count) file whose window does not
// begin at 0, e.g. forecasts over a future horizon
inline CensoredSeries read_counts_csv(const std::string& path, bool from_zero = true) {
    auto f = detail::open_in(path);
    std::string line;
    std::getline(f, line); // header
    CensoredSeries s;
    while (std::getline(f, line)) {
        if (line.empty())
            continue;
        const auto fields = detail::split_csv(line);
        const double start = std::stod(fields.at(0));
        if (s.boundaries.empty())
            s.boundaries.push_back(start);
        s.boundaries.push_back(std::stod(fields.at(1)));
        s.counts.push_back(std::stod(fields.at(2)));
    }
    if (from_zero) {
        validate_series(s);
    } else {
        for (std::size_t i = 1; i < s.boundaries.size(); ++i)
            if (!(s.boundaries[i] > s.boundaries[i - 1]))
                throw std::invalid_argument("counts file: boundaries must be increasing");
    }
    return s;
}

// ---------------------------------------------------------------------------
// fit results

inline json to_json(const FitResult& r) {
    json params = json::object();
    for (std::size_t i = 0; i < r.params.size(); ++i)
        params[r.param_names[i]] = r.params[i];
    json at_bound = json::array();
    for (bool b : r.at_bound)
        at_bound.push_back(b);
    return {{"params", params},   {"loss", r.loss},          {"converged", r.converged},
            {"restarts", r.restarts}, {"at_bound", at_bound}, {"model", r.model},
            {"kernel", r.kernel}, {"loss_name", r.loss_name}, {"scenario", r.scenario},
            {"seed", r.seed}};
}

inline void write_fit_json(const std::string& path, const FitResult& r) {
    auto f = detail::open_out(path);
    f << to_json(r).dump(2) << '\n';
}

inline void write_batch_csv(const std::string& path, const std::vector<FitResult>& results) {
    auto f = detail::open_out(path);
    f << "group,kappa,theta,loss,converged\n";
    for (std::size_t g = 0; g < results.size(); ++g) {
        const auto& r = results[g];
        double kappa = 0.0, theta = 0.0;
        for (std::size_t i = 0; i < r.param_names.size(); ++i) {
            if (r.param_names[i] == "kappa")
                kappa = r.params[i];
            if (r.param_names[i] == "theta")
                theta = r.params[i];
        }
        f << g << ',' << kappa << ',' << theta << ',' << r.loss << ',' << (r.converged ? 1 : 0)
          << '\n';
    }
}

inline void write_report_csv(const std::string& path, const ForecastReport& r) {
    auto f = detail::open_out(path);
    f << "item,horizon_total_true,horizon_total_pred,ape,smape\n";
    for (std::size_t i = 0; i < r.total_true.size(); ++i)
        f << i << ',' << r.total_true[i] << ',' << r.total_pred[i] << ',' << r.item_ape[i] << ','
          << r.item_smape[i] << '\n';
}

inline void write_daily_csv(const std::string& path,
                            const std::vector<std::vector<double>>& per_item_days,
                            const std::string& value_name = "value") {
    auto f = detail::open_out(path);
    f << "item,day," << value_name << '\n';
    for (std::size_t i = 0; i < per_item_days.size(); ++i)
        for (std::size_t d = 0; d < per_item_days[i].size(); ++d)
            f << i << ',' << d << ',' << per_item_days[i][d] << '\n';
}

// every output file gets a sibling `<path>.meta.json` echoing config and seed
inline void write_sidecar(const std::string& output_path, const json& config,
                          std::uint64_t seed) {
    auto f = detail::open_out(output_path + ".meta.json");
    f << json{{"config", config}, {"seed", seed}, {"version", version_string}}.dump(2) << '\n';
}

} // namespace icpp
