#ifndef AKCDF_RNG_HPP
#define AKCDF_RNG_HPP

#include <cmath>
#include <cstdint>

// Splittable pseudo-random streams.  A stream is identified by a 64-bit
// master seed plus a stream index; identical (seed, index) pairs yield
// identical variate sequences regardless of thread scheduling, which is
// what makes the Monte Carlo grids reproducible under parallelism.
//
// The generator is xoshiro256++ with its state filled by splitmix64
// applied to the (seed, index) pair.

namespace akcdf {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index) {
        std::uint64_t mix = seed;
        (void)detail::splitmix64(mix);
        mix ^= 0x9e3779b97f4a7c15ULL * stream_index + detail::splitmix64(mix);
        mix += stream_index;
        for (auto& word : state_) word = detail::splitmix64(mix);
        has_spare_ = false;
        spare_ = 0.0;
    }

    // Composite stream id for (distribution, sample size, replicate) cells.
    static std::uint64_t cell_index(std::uint64_t i, std::uint64_t n, std::uint64_t k) {
        std::uint64_t mix = 0x517cc1b727220a95ULL ^ (i * 0x2545f4914f6cdd1dULL);
        mix ^= detail::splitmix64(mix) + n;
        mix ^= detail::splitmix64(mix) + k;
        return detail::splitmix64(mix);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    // Uniform on (0,1), never returning the endpoints.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal by the Marsaglia polar method with a cached spare.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    double exponential() { return -std::log(uniform()); }

private:
    std::uint64_t state_[4];
    bool has_spare_;
    double spare_;
};

} // namespace akcdf

#endif
