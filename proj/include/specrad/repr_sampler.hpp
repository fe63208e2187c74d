#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "specrad/ensemble.hpp"
#include "specrad/errors.hpp"
#include "specrad/parallel.hpp"
#include "specrad/rng.hpp"

namespace specrad {

enum class Estimator { Representation, DirectFull, DirectPower };

inline const char* estimator_name(Estimator e) {
    switch (e) {
        case Estimator::Representation: return "representation";
        case Estimator::DirectFull: return "direct-full";
        case Estimator::DirectPower: return "direct-power";
    }
    return "unknown";
}

// One replicate's ln(spectral radius) plus enough metadata to regenerate it.
struct LogRadiusSample {
    double log_radius = 0.0;
    std::uint64_t replicate_index = 0;
    Estimator estimator = Estimator::Representation;
    std::uint64_t root_seed = 0;
};

// Default cap on total gamma/normal draws per batch call.
constexpr std::uint64_t default_draw_budget = 10000000000ull;

namespace detail {

// Core of the exact sampler. The squared spectral radius of the product
// ensemble has the law of max_{1<=j<=n} prod_{r=1..m} s_{j,r} with the
// s_{j,r} independent Gamma(j + l_r) variables, so
//   log_radius = (1/2) max_j sum_r ln s_{j,r},
// accumulated entirely in the log domain. Draw order is j-major then r,
// which fixes the stream consumption order per replicate.
//
// shape_offset shifts every gamma shape to j + l_r + shape_offset; it
// exists only so the cross-check suite can verify its own sensitivity to
// a deliberately corrupted sampler. Production paths pass 0.
inline double log_radius_repr_impl(const EnsembleSpec& spec, RngStream& rng,
                                   std::int64_t shape_offset) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::int64_t j = 1; j <= spec.n; ++j) {
        double log_prod = 0.0;
        for (std::int64_t r = 0; r < spec.m; ++r) {
            const double s = sample_gamma_int(j + spec.offset(r) + shape_offset, rng);
            log_prod += std::log(s);
        }
        if (log_prod > best) {
            best = log_prod;
        }
    }
    return 0.5 * best;
}

inline void check_draw_budget(const EnsembleSpec& spec, std::uint64_t replicates,
                              std::uint64_t budget) {
    const std::uint64_t per_replicate =
        static_cast<std::uint64_t>(spec.n) * static_cast<std::uint64_t>(spec.m);
    if (per_replicate > budget || replicates > budget / per_replicate) {
        throw CapacityError("draw budget exceeded: " + std::to_string(replicates) +
                            " replicates x " + std::to_string(per_replicate) +
                            " draws each > " + std::to_string(budget));
    }
}

} // namespace detail

// Exact draw of ln(spectral radius) through the gamma-product identity;
// costs n*m gamma variates.
inline LogRadiusSample sample_log_radius_repr(const EnsembleSpec& spec, RngStream& rng) {
    LogRadiusSample out;
    out.log_radius = detail::log_radius_repr_impl(spec, rng, 0);
    out.replicate_index = rng.replicate_index();
    out.estimator = Estimator::Representation;
    out.root_seed = rng.root_seed();
    return out;
}

// Batch of independent replicates. Replicate i uses RngStream(root_seed,
// index_offset + i) and lands in slot i, so output is ordered by index
// and bit-identical for any thread count. index_offset separates seed
// lanes when two batches must be independent under one root seed.
inline std::vector<LogRadiusSample> sample_batch_repr(
    const EnsembleSpec& spec, std::uint64_t replicates, std::uint64_t root_seed,
    unsigned threads = 1, std::uint64_t index_offset = 0, std::int64_t shape_offset = 0,
    std::uint64_t draw_budget = default_draw_budget) {
    if (replicates < 1) {
        throw RangeError("sample_batch_repr: replicates must be >= 1");
    }
    detail::check_draw_budget(spec, replicates, draw_budget);
    std::vector<LogRadiusSample> out(replicates);
    detail::run_indexed(replicates, threads, [&](std::uint64_t i) {
        RngStream rng(root_seed, index_offset + i);
        LogRadiusSample& slot = out[i];
        slot.log_radius = detail::log_radius_repr_impl(spec, rng, shape_offset);
        slot.replicate_index = index_offset + i;
        slot.estimator = Estimator::Representation;
        slot.root_seed = root_seed;
    });
    return out;
}

} // namespace specrad
