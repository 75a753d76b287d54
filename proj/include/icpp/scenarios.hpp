#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "events.hpp"
#include "exogenous.hpp"

namespace icpp {

// The six observation regimes: (separable or not) x (event times or
// interval-censored), for immigrants and offspring.
//   A: merged event times, s(t) known       D: merged counts, s(t) known
//   B: immigrant ET + offspring ET          E: immigrant ET + offspring IC
//   C: immigrant IC + offspring ET          F: immigrant IC + offspring IC
enum class Scenario { A, B, C, D, E, F };

inline bool scenario_separable(Scenario s) { return s != Scenario::A && s != Scenario::D; }
inline bool scenario_offspring_censored(Scenario s) {
    return s == Scenario::D || s == Scenario::E || s == Scenario::F;
}

inline std::string to_string(Scenario s) {
    switch (s) {
    case Scenario::A: return "A";
    case Scenario::B: return "B";
    case Scenario::C: return "C";
    case Scenario::D: return "D";
    case Scenario::E: return "E";
    default: return "F";
    }
}

inline Scenario scenario_from_string(const std::string& s) {
    if (s.size() == 1 && s[0] >= 'A' && s[0] <= 'F')
        return Scenario(int(s[0]) - 'A');
    if (s.size() == 1 && s[0] >= 'a' && s[0] <= 'f')
        return Scenario(int(s[0]) - 'a');
    throw std::invalid_argument("unknown scenario: " + s);
}

// One realization, pre-processed for a scenario. Only the members that the
// scenario observes are set.
struct ScenarioData {
    Scenario scenario = Scenario::A;
    double horizon = 0.0;
    std::optional<Exogenous> known_exogenous;       // A, D
    std::optional<std::vector<double>> event_times; // A: merged, B/C: offspring
    std::optional<std::vector<double>> immigrant_times; // B, E
    std::optional<CensoredSeries> immigrant_counts;     // C, F
    std::optional<CensoredSeries> event_counts;         // D: merged, E/F: offspring
};

// Applies the scenario pre-processing to a labeled realization: merging
// labels (A, D), hiding s(t) and keeping separate streams (B, C, E, F), and
// censoring the streams the scenario observes as counts. O censors the
// endogenous/merged stream, Q the immigrant stream.
inline ScenarioData make_scenario(const EventSequence& seq, Scenario sc,
                                  const std::vector<double>& O, const std::vector<double>& Q,
                                  std::optional<Exogenous> known = std::nullopt) {
    validate_sequence(seq);
    if (scenario_separable(sc) && !seq.labeled())
        throw std::invalid_argument("make_scenario: separable scenarios need labeled input");
    if (!scenario_separable(sc) && !known)
        throw std::invalid_argument("make_scenario: scenarios A and D require the exogenous spec");

    ScenarioData d;
    d.scenario = sc;
    d.horizon = seq.horizon;
    switch (sc) {
    case Scenario::A:
        d.known_exogenous = known;
        d.event_times = seq.times();
        break;
    case Scenario::B:
        d.immigrant_times = seq.times(EventLabel::immigrant);
        d.event_times = seq.times(EventLabel::offspring);
        break;
    case Scenario::C:
        d.immigrant_counts = censor(seq, Q, EventLabel::immigrant);
        d.event_times = seq.times(EventLabel::offspring);
        break;
    case Scenario::D:
        d.known_exogenous = known;
        d.event_counts = censor(seq, O);
        break;
    case Scenario::E:
        d.immigrant_times = seq.times(EventLabel::immigrant);
        d.event_counts = censor(seq, O, EventLabel::offspring);
        break;
    case Scenario::F:
        d.immigrant_counts = censor(seq, Q, EventLabel::immigrant);
        d.event_counts = censor(seq, O, EventLabel::offspring);
        break;
    }
    return d;
}

// Exogenous specification a model should use when fitting this data:
// the known s(t) for A/D, multi-impulse for B/E, LHPP for C/F.
inline Exogenous scenario_exogenous(const ScenarioData& d) {
    switch (d.scenario) {
    case Scenario::A:
    case Scenario::D:
        return *d.known_exogenous;
    case Scenario::B:
    case Scenario::E:
        return Exogenous(MultiImpulse{*d.immigrant_times});
    default:
        return lhpp_from_counts(d.immigrant_counts->boundaries, d.immigrant_counts->counts);
    }
}

} // namespace icpp
