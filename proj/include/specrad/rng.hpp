#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "specrad/errors.hpp"

namespace specrad {

namespace detail {

// Stateless 64-bit finalizer (splitmix64 output stage).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// splitmix64 step: advances the counter and returns a mixed output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    return mix64(state);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

// Seedable, replicate-indexed random stream.
//
// The (root_seed, replicate_index) pair is hashed through a splitmix64
// chain into the 256-bit state of a xoshiro256++ generator, so replicate
// streams are derived counter-style: the same pair always reproduces the
// same draw sequence regardless of thread count, and distinct indices give
// statistically independent streams. One stream per replicate; never share
// a stream between threads.
class RngStream {
public:
    RngStream(std::uint64_t root_seed, std::uint64_t replicate_index)
        : root_seed_(root_seed), replicate_index_(replicate_index) {
        std::uint64_t chain = detail::mix64(root_seed ^ 0x9E3779B97F4A7C15ull);
        chain = detail::mix64(chain ^ detail::mix64(replicate_index ^ 0xD2B74407B1CE6E93ull));
        for (auto& word : state_) {
            word = detail::splitmix64(chain);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
            state_[0] = 1; // xoshiro must not start from the all-zero state
        }
    }

    std::uint64_t root_seed() const { return root_seed_; }
    std::uint64_t replicate_index() const { return replicate_index_; }

    // xoshiro256++ step.
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

    // Uniform on [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on the open interval (0, 1); safe under log().
    double next_double_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the second variate of each pair is
    // cached, so draws come in deterministic order within a stream.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_double_open();
        const double u2 = next_double();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * pi_ * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    // Gamma(shape, scale 1) for real shape >= 1, Marsaglia-Tsang (2000)
    // squeeze/accept-reject. Expected cost is a little over one normal and
    // one uniform per draw at every shape.
    double next_gamma(double shape) {
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x;
            double v;
            do {
                x = next_normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = next_double_open();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) {
                return d * v;
            }
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
                return d * v;
            }
        }
    }

private:
    static constexpr double pi_ = 3.14159265358979323846;

    std::uint64_t state_[4];
    std::uint64_t root_seed_;
    std::uint64_t replicate_index_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// One draw from Gamma(shape, scale 1) with integer shape >= 1.
inline double sample_gamma_int(std::int64_t shape, RngStream& rng) {
    if (shape < 1) {
        throw DomainError("sample_gamma_int: shape must be a positive integer, got " +
                          std::to_string(shape));
    }
    return rng.next_gamma(static_cast<double>(shape));
}

} // namespace specrad
