#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "specrad/errors.hpp"
#include "specrad/specfun.hpp"

namespace specrad {

// Validated dimension chain (n_1, ..., n_{m+1}) of a product of m
// rectangular factors, where factor r has shape n_r x n_{r+1}. The chain
// must start and end at its minimum n, so the product is square n x n.
// offsets holds the factor excesses l_r = n_r - n for r = 1..m.
struct EnsembleSpec {
    std::vector<std::int64_t> dims;      // length m + 1
    std::int64_t n = 0;                  // = dims.front() = dims.back() = min
    std::int64_t m = 0;                  // number of factors
    std::vector<std::int64_t> offsets;   // length m, offsets[0] = 0

    std::int64_t dim(std::int64_t r) const { return dims[static_cast<std::size_t>(r)]; }
    std::int64_t offset(std::int64_t r) const { return offsets[static_cast<std::size_t>(r)]; }
};

inline EnsembleSpec validate_spec(const std::vector<std::int64_t>& dims) {
    if (dims.size() < 2) {
        throw LengthError("validate_spec: dimension chain needs at least 2 entries, got " +
                          std::to_string(dims.size()));
    }
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] < 1) {
            throw RangeError("validate_spec: dims[" + std::to_string(i) +
                             "] = " + std::to_string(dims[i]) + " is not positive");
        }
    }
    const std::int64_t n = dims.front();
    if (dims.back() != n) {
        throw ShapeError("validate_spec: first and last dimensions must agree (product must "
                         "be square), got " + std::to_string(n) + " and " +
                         std::to_string(dims.back()));
    }
    for (std::size_t i = 1; i + 1 < dims.size(); ++i) {
        if (dims[i] < n) {
            throw ShapeError("validate_spec: interior dimension dims[" + std::to_string(i) +
                             "] = " + std::to_string(dims[i]) +
                             " is smaller than the endpoints " + std::to_string(n));
        }
    }
    EnsembleSpec spec;
    spec.dims = dims;
    spec.n = n;
    spec.m = static_cast<std::int64_t>(dims.size()) - 1;
    spec.offsets.reserve(static_cast<std::size_t>(spec.m));
    for (std::int64_t r = 0; r < spec.m; ++r) {
        spec.offsets.push_back(dims[static_cast<std::size_t>(r)] - n);
    }
    return spec;
}

// Delta_{j,k} = sum_{r=1..m} (j + l_r)^{-k} for 1 <= j <= n, k > 0.
inline double delta_jk(const EnsembleSpec& spec, std::int64_t j, double k) {
    if (j < 1 || j > spec.n) {
        throw RangeError("delta_jk: j = " + std::to_string(j) + " outside 1.." +
                         std::to_string(spec.n));
    }
    if (!(k > 0.0)) {
        throw DomainError("delta_jk: k must be positive, got " + std::to_string(k));
    }
    double sum = 0.0;
    for (std::int64_t l : spec.offsets) {
        sum += std::pow(static_cast<double>(j + l), -k);
    }
    return sum;
}

// Delta_n = Delta_{n,1} = sum_r 1/n_r, the size parameter whose limit
// selects the limiting law.
inline double delta_n(const EnsembleSpec& spec) {
    double sum = 0.0;
    for (std::int64_t l : spec.offsets) {
        sum += 1.0 / static_cast<double>(spec.n + l);
    }
    return sum;
}

// Sum of digamma values over the factor dimensions, sum_{r=1..m} psi(n_r).
// Callers halve it for the centering constant.
inline double psi_sum(const EnsembleSpec& spec) {
    double sum = 0.0;
    for (std::int64_t l : spec.offsets) {
        sum += digamma(static_cast<double>(spec.n + l));
    }
    return sum;
}

// Sum of log factor dimensions, sum_{r=1..m} ln(n_r); half of it centers
// the ratio statistics.
inline double log_dim_sum(const EnsembleSpec& spec) {
    double sum = 0.0;
    for (std::int64_t l : spec.offsets) {
        sum += std::log(static_cast<double>(spec.n + l));
    }
    return sum;
}

} // namespace specrad
