#include <catch2/catch_amalgamated.hpp>

#include <icpp/mean_process.hpp>
#include <icpp/scenarios.hpp>
#include <icpp/simulate.hpp>

#include "oracles.hpp"

using namespace icpp;

TEST_CASE("immigrant sampling") {
    SplitMix64 rng(1);
    // zero intensity -> empty
    CHECK(sample_immigrants(Exogenous(Rect{0.0, 30.0, 0.0}), 30.0, rng).events.empty());

    // constant rate: mean count ~ lambda * T
    {
        const double lambda = 1.3, T = 30.0;
        std::vector<double> counts;
        for (int r = 0; r < 1000; ++r) {
            SplitMix64 g(substream_seed(42, r));
            counts.push_back(
                double(sample_immigrants(Exogenous(Rect{0.0, T, lambda}), T, g).events.size()));
        }
        const double se = oracle::stddev(counts) / std::sqrt(1000.0);
        REQUIRE(std::abs(oracle::mean(counts) - lambda * T) <= 3.0 * se);
    }

    // sine rate: mean count ~ S(30)
    {
        const Exogenous s(SinePlus{2.0});
        std::vector<double> counts;
        for (int r = 0; r < 1000; ++r) {
            SplitMix64 g(substream_seed(43, r));
            counts.push_back(double(sample_immigrants(s, 30.0, g).events.size()));
        }
        const double se = oracle::stddev(counts) / std::sqrt(1000.0);
        REQUIRE(std::abs(oracle::mean(counts) - s.integral(30.0)) <= 3.0 * se);
    }

    // atomic variants produce their atoms deterministically
    const auto atoms = sample_immigrants(Exogenous(MultiImpulse{{1.0, 2.0, 40.0}}), 30.0, rng);
    REQUIRE(atoms.events.size() == 2);
    CHECK(atoms.events[0].time == 1.0);
}

TEST_CASE("cascade sampling") {
    SplitMix64 rng(2);
    // kappa = 0: the cascade is the lone immigrant
    const auto lone = sample_cascade(Kernel(ExpKernel{0.0, 1.0}), 3.0, 30.0, rng);
    REQUIRE(lone.events.size() == 1);
    CHECK(lone.events[0].label == EventLabel::immigrant);

    CHECK_THROWS_AS(sample_cascade(Kernel(ExpKernel{1.1, 1.0}), 1.0, 30.0, rng),
                    std::domain_error);

    // Galton-Watson mean size 1/(1 - n*) at infinite horizon
    const Kernel k(ExpKernel{0.6, 0.8});
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> sizes;
    for (int r = 0; r < 10000; ++r) {
        SplitMix64 g(substream_seed(44, r));
        const auto c = sample_cascade(k, 1.0, inf, g);
        sizes.push_back(double(c.events.size()));
        for (const auto& e : c.events)
            if (e.label == EventLabel::offspring)
                REQUIRE(e.time > 1.0);
    }
    const double se = oracle::stddev(sizes) / std::sqrt(10000.0);
    REQUIRE(std::abs(oracle::mean(sizes) - 2.5) <= 3.0 * se);
}

TEST_CASE("censoring") {
    EventSequence seq;
    seq.horizon = 3.0;
    for (double t : {0.5, 1.5, 2.5})
        seq.events.push_back({t, EventLabel::unlabeled});
    CHECK(censor(seq, {0, 1, 2, 3}).counts == std::vector<double>{1, 1, 1});

    EventSequence empty;
    empty.horizon = 3.0;
    CHECK(censor(empty, {0, 1, 2, 3}).counts == std::vector<double>{0, 0, 0});

    // an event exactly at a boundary belongs to the left interval
    EventSequence at_boundary;
    at_boundary.horizon = 3.0;
    at_boundary.events.push_back({1.0, EventLabel::unlabeled});
    CHECK(censor(at_boundary, {0, 1, 2, 3}).counts == std::vector<double>{1, 0, 0});

    EventSequence outside;
    outside.horizon = 5.0;
    outside.events.push_back({4.0, EventLabel::unlabeled});
    CHECK_THROWS_AS(censor(outside, {0, 1, 2, 3}), std::invalid_argument);
}

TEST_CASE("scenario pre-processing") {
    const Kernel k(ExpKernel{0.6, 0.8});
    const Exogenous s(SinePlus{2.0});
    SplitMix64 rng(7);
    const EventSequence seq = sample_hawkes(k, s, 30.0, rng);
    const auto O = equidistant_boundaries(30.0, 10);
    const auto Q = equidistant_boundaries(30.0, 5);

    const auto a = make_scenario(seq, Scenario::A, O, Q, s);
    REQUIRE(a.event_times.has_value());
    CHECK(a.event_times->size() == seq.events.size());
    CHECK(a.known_exogenous.has_value());

    const auto f = make_scenario(seq, Scenario::F, O, Q);
    REQUIRE(f.immigrant_counts.has_value());
    REQUIRE(f.event_counts.has_value());
    const double n_imm = f.immigrant_counts->total();
    const double n_off = f.event_counts->total();
    CHECK(n_imm + n_off == double(seq.events.size()));

    // conservation across every scenario
    const auto d = make_scenario(seq, Scenario::D, O, Q, s);
    CHECK(d.event_counts->total() == double(seq.events.size()));
    const auto b = make_scenario(seq, Scenario::B, O, Q);
    CHECK(b.immigrant_times->size() + b.event_times->size() == seq.events.size());
    const auto c = make_scenario(seq, Scenario::C, O, Q);
    CHECK(c.immigrant_counts->total() + double(c.event_times->size()) ==
          double(seq.events.size()));
    const auto e = make_scenario(seq, Scenario::E, O, Q);
    CHECK(double(e.immigrant_times->size()) + e.event_counts->total() ==
          double(seq.events.size()));

    // separable scenarios reject unlabeled input
    EventSequence unlabeled;
    unlabeled.horizon = 30.0;
    unlabeled.events.push_back({1.0, EventLabel::unlabeled});
    CHECK_THROWS_AS(make_scenario(unlabeled, Scenario::B, O, Q), std::invalid_argument);
    // A and D need the exogenous specification
    CHECK_THROWS_AS(make_scenario(seq, Scenario::A, O, Q), std::invalid_argument);
}

TEST_CASE("batch simulation is reproducible and seed-keyed") {
    const Kernel k(ExpKernel{0.6, 0.8});
    const Exogenous s(SinePlus{2.0});
    const auto batch1 = sample_batch(k, s, 30.0, 8, 123, 2);
    const auto batch2 = sample_batch(k, s, 30.0, 8, 123, 1);
    REQUIRE(batch1.size() == batch2.size());
    for (std::size_t i = 0; i < batch1.size(); ++i) {
        REQUIRE(batch1[i].events.size() == batch2[i].events.size());
        for (std::size_t j = 0; j < batch1[i].events.size(); ++j) {
            REQUIRE(batch1[i].events[j].time == batch2[i].events[j].time);
            REQUIRE(batch1[i].events[j].label == batch2[i].events[j].label);
        }
    }
    const auto other = sample_batch(k, s, 30.0, 8, 124, 2);
    bool any_diff = false;
    for (std::size_t i = 0; i < other.size() && !any_diff; ++i)
        any_diff = other[i].events.size() != batch1[i].events.size();
    CHECK(any_diff);
}

TEST_CASE("full Hawkes simulation matches the expected interval counts") {
    const Kernel k(ExpKernel{0.6, 0.8});
    const Exogenous s(SinePlus{2.0});
    const MeanModel m{k, s};
    const double T = 30.0;
    const std::size_t n = 2000, bins = 15;
    const auto bounds = equidistant_boundaries(T, bins);

    const auto batch = sample_batch(k, s, T, n, 777);
    std::vector<std::vector<double>> counts(bins);
    for (const auto& seq : batch) {
        const auto c = censor(seq, bounds);
        for (std::size_t b = 0; b < bins; ++b)
            counts[b].push_back(c.counts[b]);
    }
    for (std::size_t b = 0; b < bins; ++b) {
        const double expected = compensator_interval(m, bounds[b], bounds[b + 1]);
        const double got = oracle::mean(counts[b]);
        const double se = oracle::stddev(counts[b]) / std::sqrt(double(n));
        REQUIRE(std::abs(got - expected) <= 3.0 * se);
    }
}

TEST_CASE("cluster sampler agrees with the thinning oracle") {
    const Kernel k(ExpKernel{0.6, 0.8});
    const Exogenous s(SinePlus{2.0});
    const double T = 15.0;
    const std::size_t n = 2000;

    std::vector<double> cluster_counts, ogata_counts;
    for (std::size_t r = 0; r < n; ++r) {
        SplitMix64 g1(substream_seed(31, r)), g2(substream_seed(12345, r));
        cluster_counts.push_back(double(sample_hawkes(k, s, T, g1).events.size()));
        ogata_counts.push_back(double(oracle::ogata_hawkes(k, s, T, g2).events.size()));
    }
    const double se = std::sqrt(oracle::stddev(cluster_counts) * oracle::stddev(cluster_counts) +
                                oracle::stddev(ogata_counts) * oracle::stddev(ogata_counts)) /
                      std::sqrt(double(n));
    REQUIRE(std::abs(oracle::mean(cluster_counts) - oracle::mean(ogata_counts)) <= 3.0 * se);
}
