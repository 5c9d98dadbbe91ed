#pragma once

#include <cmath>
#include <cstdint>

namespace tvc {

// SplitMix64 (Steele, Lea & Flood, 2014). 64-bit Weyl sequence pushed through
// an avalanche finalizer. Chosen over <random> engines because every draw is
// specified here, so artifacts replay bit-exactly across platforms and
// standard-library versions. All distribution transforms are spelled out
// below for the same reason.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed = 0) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return finalize(state_);
    }

    // Uniform on [0,1) with 53 random mantissa bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Uniform integer in [0, n). Multiply-shift reduction; n must be > 0.
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller, cosine branch. Consumes two uniforms
    // per draw and caches nothing, so the stream position is predictable.
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 <= 0.0)
            u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi() * u2);
    }

    // Independent child stream keyed by up to three salts. Forking does not
    // advance the parent, so streams can be assigned per individual without
    // caring about evaluation order.
    SplitMix64 fork(uint64_t a, uint64_t b = 0, uint64_t c = 0) const {
        uint64_t key = finalize(a + 0x8BB84B93962EACC9ULL);
        key = finalize(key ^ (b + 0x2545F4914F6CDD1DULL));
        key = finalize(key ^ (c + 0x27220A95FE1DBF9ULL));
        return SplitMix64(finalize(state_ ^ key));
    }

    uint64_t state() const { return state_; }

private:
    static constexpr double pi() { return 3.141592653589793238462643383279502884; }

    static uint64_t finalize(uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    uint64_t state_;
};

} // namespace tvc
