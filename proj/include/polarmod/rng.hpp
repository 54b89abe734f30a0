/*
Seedable random streams for reproducible Monte-Carlo runs.

Algorithm identities (fixed; results are part of the reproducibility
contract and must not change between versions):

  * Stream generator: xoshiro256** (Blackman/Vigna 2018), state seeded
    from four consecutive outputs of a splitmix64 sequence.
  * Substream derivation: derive_stream(master, a, b) feeds `master`,
    `a` and `b` through the splitmix64 finalizer (see mix64 below), one
    absorption step per word. Substreams for distinct (a, b) pairs are
    treated as independent.
  * Gaussian sampling: basic (trigonometric) Box-Muller. Each call to
    normal_pair consumes exactly two 64-bit words and yields two
    independent N(0,1) variates, so RNG consumption per complex noise
    sample is fixed regardless of constellation layout.

Bounded integers use the 128-bit multiply-shift reduction (Lemire), which
consumes exactly one word per draw.
*/

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace polarmod {

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

  private:
    std::uint64_t state_;
};

class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on (0, 1]; never returns 0 so log() is always finite.
    double next_unit_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform on [0, 1).
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    std::uint8_t next_bit() { return static_cast<std::uint8_t>(next_u64() >> 63); }

    // Uniform integer in [0, n). n must be nonzero.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Two independent standard normals via Box-Muller.
    void normal_pair(double& z0, double& z1) {
        const double u1 = next_unit_open();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        z0 = r * std::cos(a);
        z1 = r * std::sin(a);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// Deterministic substream for item (a, b) of a master-seeded experiment,
// e.g. (snr_index, frame_index) or (0, trial_index).
inline Rng derive_stream(std::uint64_t master_seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = mix64(master_seed + 0x9E3779B97F4A7C15ULL);
    h = mix64(h ^ (a + 0xD1B54A32D192ED03ULL));
    h = mix64(h ^ (b + 0x8CB92BA72F3D8DD7ULL));
    return Rng(h);
}

}  // namespace polarmod
