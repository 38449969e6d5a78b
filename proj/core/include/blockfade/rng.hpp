#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace blockfade {

// SplitMix64 step; used to expand (seed, stream) keys into generator state.
struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// One substream of the simulation RNG. A stream is addressed by the pair
// (seed, stream_index); distinct indices give statistically independent
// xoshiro256++ states, so chunked Monte Carlo runs reproduce bit-for-bit
// for a fixed (seed, chunk size) no matter how many workers execute them.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 sm{seed + 0xD2B74407B1CE6E93ULL * (stream + 1)};
        for (auto& word : s_) word = sm.next();
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
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
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    double exponential() { return -std::log(uniform()); }

    // Box-Muller pair, one value cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(2.0 * exponential());
        const double theta = 2.0 * M_PI * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    // Gamma(shape, 1) for integer shape >= 1: Exp(1) at shape 1, otherwise
    // the Marsaglia-Tsang squeeze method (exact, no shape restriction above 1).
    double gamma_int(int shape) {
        if (shape < 1) throw std::domain_error("gamma_int: shape must be >= 1");
        if (shape == 1) return exponential();
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace blockfade
