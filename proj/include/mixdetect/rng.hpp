#pragma once

#include <cmath>
#include <cstdint>

namespace mixdetect {

// Counter-based pseudo-random stream (splitmix64). A stream is fully
// determined by its 64-bit key, and keys are derived by hashing a
// (master seed, index...) tuple, so any grid point or replicate can be
// generated independently of scheduling order.
class RngStream {
public:
    explicit RngStream(std::uint64_t key) : state_(key) {}

    // Derives a stream key from a master seed and up to three indices.
    static RngStream derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                            std::uint64_t c = 0) {
        std::uint64_t k = mix(seed ^ 0x9e3779b97f4a7c15ULL);
        k = mix(k ^ a);
        k = mix(k ^ b);
        k = mix(k ^ c);
        return RngStream(k);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform on (0,1); never returns 0 or 1.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the second variate of each pair is cached.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 6.283185307179586476925286766559 * u2;
        spare_ = mag * std::sin(ang);
        have_spare_ = true;
        return mag * std::cos(ang);
    }

    bool next_bernoulli(double p) { return next_uniform() < p; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace mixdetect
