#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace wlansim::sim {

// FNV-1a 64-bit hash, used to turn stream labels into seed material.
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Named deterministic random stream. Same (master_seed, label) yields the
// same sequence on every platform; distinct labels give independent streams.
//
// The generator is splitmix64: a counter advanced by a fixed odd gamma with
// an avalanching output mix. It is fully specified here and must not change
// between versions; the algorithm name is recorded in run manifests.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::string_view label)
        : state_(mix(master_seed ^ fnv1a64(label))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), n >= 1. Multiply-shift map; the O(n/2^64)
    // bias is irrelevant for the small ranges used here.
    std::uint64_t uniform_int(std::uint64_t n) { return mul_hi(next_u64(), n); }

    double uniform_range(double lo, double hi) { return lo + uniform() * (hi - lo); }

    // Standard normal via Box-Muller (pairs cached).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Portable high 64 bits of a 64x64 product.
    static constexpr std::uint64_t mul_hi(std::uint64_t a, std::uint64_t b) {
        const std::uint64_t a_lo = a & 0xFFFFFFFFULL, a_hi = a >> 32;
        const std::uint64_t b_lo = b & 0xFFFFFFFFULL, b_hi = b >> 32;
        const std::uint64_t mid1 = a_hi * b_lo + ((a_lo * b_lo) >> 32);
        const std::uint64_t mid2 = a_lo * b_hi + (mid1 & 0xFFFFFFFFULL);
        return a_hi * b_hi + (mid1 >> 32) + (mid2 >> 32);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Deterministic sub-seed derivation for per-iteration / per-instance runs.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view label,
                                 std::uint64_t index = 0) {
    RngStream s(master_seed ^ (index * 0xD1B54A32D192ED03ULL), label);
    return s.next_u64();
}

}  // namespace wlansim::sim
