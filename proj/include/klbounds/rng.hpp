#pragma once

#include <array>
#include <cmath>
#include <cstdint>

// Seeded, splittable random streams. Every Monte Carlo block derives its own
// stream from (seed, stream index), so estimates are reproducible bit for bit
// regardless of execution order or worker count. The generator below is
// xoshiro256** (Blackman & Vigna) seeded through splitmix64; normals use the
// Marsaglia polar method without caching, keeping the consumption pattern a
// pure function of the call sequence.

namespace klbounds {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

class Rng {
  public:
    static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        Rng r;
        for (auto& word : r.state_) word = detail::splitmix64(sm);
        return r;
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// uniform on [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// uniform on (0, 1); never returns an endpoint, safe to take logs of
    double uniform01_open() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// standard normal, Marsaglia polar method
    double normal() {
        while (true) {
            const double x = 2.0 * uniform01() - 1.0;
            const double y = 2.0 * uniform01() - 1.0;
            const double s = x * x + y * y;
            if (s > 0.0 && s < 1.0) return x * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace klbounds
