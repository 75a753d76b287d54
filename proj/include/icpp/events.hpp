#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace icpp {

enum class EventLabel { unlabeled, immigrant, offspring };

struct Event {
    double time;
    EventLabel label = EventLabel::unlabeled;
};

// Timestamped events on (0, T]. Labels are all-or-none: a sequence is either
// fully labeled (immigrant/offspring) or fully unlabeled.
struct EventSequence {
    std::vector<Event> events;
    double horizon = 0.0;

    bool labeled() const {
        return !events.empty() && events.front().label != EventLabel::unlabeled;
    }

    std::vector<double> times() const {
        std::vector<double> out(events.size());
        for (std::size_t i = 0; i < events.size(); ++i)
            out[i] = events[i].time;
        return out;
    }

    std::vector<double> times(EventLabel which) const {
        std::vector<double> out;
        for (const auto& e : events)
            if (e.label == which)
                out.push_back(e.time);
        return out;
    }
};

inline void validate_sequence(const EventSequence& s) {
    if (!(s.horizon > 0.0))
        throw std::invalid_argument("EventSequence: horizon must be positive");
    bool any_unlabeled = false, any_labeled = false;
    for (std::size_t i = 0; i < s.events.size(); ++i) {
        const auto& e = s.events[i];
        if (!(e.time > 0.0 && e.time <= s.horizon))
            throw std::invalid_argument("EventSequence: times must lie in (0, T]");
        if (i > 0 && e.time < s.events[i - 1].time)
            throw std::invalid_argument("EventSequence: times must be sorted");
        (e.label == EventLabel::unlabeled ? any_unlabeled : any_labeled) = true;
    }
    if (any_unlabeled && any_labeled)
        throw std::invalid_argument("EventSequence: mixed labeled/unlabeled events");
}

// Ordered observation boundaries o_0 = 0 < ... < o_m = T with one count per
// half-open interval (o_{i-1}, o_i].
struct CensoredSeries {
    std::vector<double> boundaries;
    std::vector<double> counts;

    std::size_t size() const { return counts.size(); }
    double horizon() const { return boundaries.back(); }
    double total() const {
        double acc = 0.0;
        for (double c : counts)
            acc += c;
        return acc;
    }
};

inline void validate_series(const CensoredSeries& s) {
    if (s.boundaries.size() < 2 || s.counts.size() + 1 != s.boundaries.size())
        throw std::invalid_argument("CensoredSeries: |counts| must equal |boundaries| - 1");
    if (s.boundaries.front() != 0.0)
        throw std::invalid_argument("CensoredSeries: first boundary must be 0");
    for (std::size_t i = 1; i < s.boundaries.size(); ++i)
        if (!(s.boundaries[i] > s.boundaries[i - 1]))
            throw std::invalid_argument("CensoredSeries: boundaries must be strictly increasing");
    for (double c : s.counts)
        if (!(c >= 0.0))
            throw std::invalid_argument("CensoredSeries: counts must be nonnegative");
}

inline std::vector<double> equidistant_boundaries(double T, std::size_t m) {
    if (!(T > 0.0) || m == 0)
        throw std::invalid_argument("equidistant_boundaries: need T > 0 and m >= 1");
    std::vector<double> b(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
        b[i] = T * double(i) / double(m);
    return b;
}

// Interval counts of the (optionally label-filtered) events. An event at
// exactly o_i lands in interval i, per the (o_{i-1}, o_i] convention.
inline CensoredSeries censor(const EventSequence& seq, const std::vector<double>& boundaries,
                             std::optional<EventLabel> filter = std::nullopt) {
    CensoredSeries out{boundaries, std::vector<double>(boundaries.size() - 1, 0.0)};
    validate_series(out);
    for (const auto& e : seq.events) {
        if (filter && e.label != *filter)
            continue;
        if (!(e.time > boundaries.front() && e.time <= boundaries.back()))
            throw std::invalid_argument("censor: event outside (0, T]");
        auto it = std::lower_bound(boundaries.begin(), boundaries.end(), e.time);
        out.counts[std::size_t(it - boundaries.begin()) - 1] += 1.0;
    }
    return out;
}

} // namespace icpp
