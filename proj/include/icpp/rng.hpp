#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace icpp {

// splitmix64: counter-based 64-bit generator (Steele, Lea, Flood 2014).
// The whole stream is a pure function of (seed, counter), which makes
// per-sequence sub-streams reproducible regardless of draw order.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform double in [0, 1)
    double uniform() { return double((*this)() >> 11) * 0x1.0p-53; }

    // uniform double in (0, 1], safe inside log()
    double uniform_pos() { return 1.0 - uniform(); }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    // Knuth's product method; means used in this library are small.
    int poisson(double mean) {
        if (mean <= 0.0)
            return 0;
        if (mean < 30.0) {
            const double limit = std::exp(-mean);
            int n = 0;
            double prod = uniform();
            while (prod > limit) {
                ++n;
                prod *= uniform();
            }
            return n;
        }
        // split large means; keeps the product away from underflow
        const int half = poisson(mean / 2.0);
        return half + poisson(mean - mean / 2.0);
    }

  private:
    std::uint64_t state_;
};

// Deterministic sub-seed for the i-th item of a batch keyed by `seed`.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0xd1b54a32d192ed03ULL * (index + 1)));
    return g();
}

} // namespace icpp
