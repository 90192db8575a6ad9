#pragma once

#include <cmath>
#include <cstdint>

namespace hcn {

/// SplitMix64 step; also used to hash counters into stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Mixes a master seed with stream indices so that parallel sub-streams are
/// statistically independent and the assignment is order-free.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s = h ^ (a * 0x9e3779b97f4a7c15ULL);
    h = splitmix64(s);
    s = h ^ (b * 0xc2b2ae3d27d4eb4fULL);
    h = splitmix64(s);
    s = h ^ (c * 0x165667b19e3779f9ULL);
    return splitmix64(s);
}

/// Small self-contained generator (xoshiro-free: SplitMix64 stream). The
/// sampling helpers below are hand-rolled so that sequences are identical
/// across standard libraries and worker counts.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe for log().
    double uniform_pos() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Unit-mean exponential (Rayleigh power fading gain).
    double exponential() { return -std::log(uniform_pos()); }

    /// Exact Poisson sampling. Knuth multiplication for small means; larger
    /// means are split into chunks so the running product never underflows.
    std::uint64_t poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        std::uint64_t total = 0;
        while (mean > 30.0) {
            total += poisson_small(30.0);
            mean -= 30.0;
        }
        return total + poisson_small(mean);
    }

  private:
    std::uint64_t poisson_small(double mean) {
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double prod = uniform_pos();
        while (prod > limit) {
            ++k;
            prod *= uniform_pos();
        }
        return k;
    }

    std::uint64_t state_;
};

}  // namespace hcn
