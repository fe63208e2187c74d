#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "specrad/ensemble.hpp"
#include "specrad/errors.hpp"
#include "specrad/parallel.hpp"
#include "specrad/repr_sampler.hpp"
#include "specrad/rng.hpp"

namespace specrad {

using Complex = std::complex<double>;

// Dense row-major complex matrix, just enough for product chains and
// spectral radii.
struct ComplexMatrix {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<Complex> entries;

    ComplexMatrix() = default;
    ComplexMatrix(std::int64_t r, std::int64_t c)
        : rows(r), cols(c), entries(static_cast<std::size_t>(r * c)) {
        if (r < 1 || c < 1) {
            throw RangeError("ComplexMatrix: dimensions must be positive");
        }
    }

    Complex& at(std::int64_t i, std::int64_t j) {
        return entries[static_cast<std::size_t>(i * cols + j)];
    }
    const Complex& at(std::int64_t i, std::int64_t j) const {
        return entries[static_cast<std::size_t>(i * cols + j)];
    }

    bool all_finite() const {
        for (const Complex& z : entries) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                return false;
            }
        }
        return true;
    }
};

// rows x cols block of i.i.d. standard complex normal entries: real and
// imaginary parts are independent N(0, 1/2), so E|g|^2 = 1. Entries are
// generated row-major, real part before imaginary part.
inline ComplexMatrix sample_ginibre_block(std::int64_t rows, std::int64_t cols,
                                          RngStream& rng) {
    ComplexMatrix mat(rows, cols);
    const double scale = 0.70710678118654752440; // 1/sqrt(2)
    for (Complex& z : mat.entries) {
        const double re = scale * rng.next_normal();
        const double im = scale * rng.next_normal();
        z = Complex(re, im);
    }
    return mat;
}

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.rows) {
        throw ShapeError("matmul: inner dimensions disagree, " + std::to_string(a.cols) +
                         " vs " + std::to_string(b.rows));
    }
    ComplexMatrix c(a.rows, b.cols);
    for (std::int64_t i = 0; i < a.rows; ++i) {
        for (std::int64_t k = 0; k < a.cols; ++k) {
            const Complex aik = a.at(i, k);
            if (aik == Complex(0.0, 0.0)) {
                continue;
            }
            const Complex* brow = &b.at(k, 0);
            Complex* crow = &c.at(i, 0);
            for (std::int64_t j = 0; j < b.cols; ++j) {
                crow[j] += aik * brow[j];
            }
        }
    }
    return c;
}

// Samples the m factor blocks of the ensemble and multiplies them left to
// right into the n x n product. Blocks are drawn in chain order, each
// fully before the next multiplication, so the stream consumption order
// is fixed.
inline ComplexMatrix product_chain(const EnsembleSpec& spec, RngStream& rng) {
    ComplexMatrix prod = sample_ginibre_block(spec.dim(0), spec.dim(1), rng);
    for (std::int64_t r = 1; r < spec.m; ++r) {
        ComplexMatrix block = sample_ginibre_block(spec.dim(r), spec.dim(r + 1), rng);
        prod = matmul(prod, block);
        if (!prod.all_finite()) {
            throw OverflowError("product_chain: non-finite entry after factor " +
                                std::to_string(r + 1));
        }
    }
    if (!prod.all_finite()) {
        throw OverflowError("product_chain: non-finite entry in sampled block");
    }
    return prod;
}

namespace detail {

// Unitary Givens rotation G = [[c, s], [-conj(s), c]] with real c >= 0
// mapping (a, b) to (r, 0).
inline void givens_rotation(Complex a, Complex b, double& c, Complex& s, Complex& r) {
    const double abs_a = std::abs(a);
    const double abs_b = std::abs(b);
    if (abs_b == 0.0) {
        c = 1.0;
        s = Complex(0.0, 0.0);
        r = a;
        return;
    }
    if (abs_a == 0.0) {
        c = 0.0;
        s = std::conj(b) / abs_b;
        r = Complex(abs_b, 0.0);
        return;
    }
    const double norm = std::hypot(abs_a, abs_b);
    const Complex phase_a = a / abs_a;
    c = abs_a / norm;
    s = phase_a * std::conj(b) / norm;
    r = phase_a * norm;
}

// Both eigenvalues of [[a, b], [c, d]], pairing via the product to avoid
// cancellation in the quadratic formula.
inline std::pair<Complex, Complex> eigenvalues_2x2(Complex a, Complex b, Complex c,
                                                   Complex d) {
    const Complex tr = a + d;
    const Complex det = a * d - b * c;
    Complex disc = std::sqrt(tr * tr - 4.0 * det);
    if (std::real(std::conj(tr) * disc) < 0.0) {
        disc = -disc;
    }
    const Complex lam1 = 0.5 * (tr + disc);
    const Complex lam2 = (lam1 == Complex(0.0, 0.0)) ? 0.5 * (tr - disc) : det / lam1;
    return {lam1, lam2};
}

// Wilkinson-style shift: the eigenvalue of the trailing 2x2 closest to
// the bottom corner entry.
inline Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
    const auto [lam1, lam2] = eigenvalues_2x2(a, b, c, d);
    return std::abs(lam1 - d) <= std::abs(lam2 - d) ? lam1 : lam2;
}

// In-place unitary reduction to upper Hessenberg form by Householder
// reflectors.
inline void hessenberg_reduce(ComplexMatrix& h) {
    const std::int64_t n = h.rows;
    std::vector<Complex> v;
    for (std::int64_t k = 0; k + 2 < n; ++k) {
        double xnorm_sq = 0.0;
        for (std::int64_t i = k + 1; i < n; ++i) {
            xnorm_sq += std::norm(h.at(i, k));
        }
        const double xnorm = std::sqrt(xnorm_sq);
        if (xnorm == 0.0) {
            continue;
        }
        const Complex a0 = h.at(k + 1, k);
        const double abs_a0 = std::abs(a0);
        const Complex phase = abs_a0 == 0.0 ? Complex(1.0, 0.0) : a0 / abs_a0;
        const std::int64_t len = n - k - 1;
        v.assign(static_cast<std::size_t>(len), Complex(0.0, 0.0));
        for (std::int64_t i = 0; i < len; ++i) {
            v[static_cast<std::size_t>(i)] = h.at(k + 1 + i, k);
        }
        v[0] += phase * xnorm;
        double vv = 0.0;
        for (const Complex& vi : v) {
            vv += std::norm(vi);
        }
        if (vv == 0.0) {
            continue;
        }
        const double beta = 2.0 / vv;
        // Left update: rows k+1..n-1, columns k..n-1.
        for (std::int64_t j = k; j < n; ++j) {
            Complex w(0.0, 0.0);
            for (std::int64_t i = 0; i < len; ++i) {
                w += std::conj(v[static_cast<std::size_t>(i)]) * h.at(k + 1 + i, j);
            }
            w *= beta;
            for (std::int64_t i = 0; i < len; ++i) {
                h.at(k + 1 + i, j) -= v[static_cast<std::size_t>(i)] * w;
            }
        }
        // Right update: all rows, columns k+1..n-1.
        for (std::int64_t i = 0; i < n; ++i) {
            Complex u(0.0, 0.0);
            for (std::int64_t t = 0; t < len; ++t) {
                u += h.at(i, k + 1 + t) * v[static_cast<std::size_t>(t)];
            }
            u *= beta;
            for (std::int64_t t = 0; t < len; ++t) {
                h.at(i, k + 1 + t) -= u * std::conj(v[static_cast<std::size_t>(t)]);
            }
        }
        h.at(k + 1, k) = -phase * xnorm;
        for (std::int64_t i = k + 2; i < n; ++i) {
            h.at(i, k) = Complex(0.0, 0.0);
        }
    }
}

// Eigenvalues of a square complex matrix: Hessenberg reduction followed
// by explicitly shifted QR with complex Givens rotations, deflating from
// the bottom. Throws ConvergenceError after 30*n sweeps.
inline std::vector<Complex> dense_eigenvalues(ComplexMatrix h) {
    const std::int64_t n = h.rows;
    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<Complex> eigs;
    eigs.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        eigs.push_back(h.at(0, 0));
        return eigs;
    }
    hessenberg_reduce(h);

    std::int64_t hi = n - 1;
    std::int64_t sweeps = 0;
    std::int64_t since_deflation = 0;
    std::vector<double> cos_buf(static_cast<std::size_t>(n));
    std::vector<Complex> sin_buf(static_cast<std::size_t>(n));
    while (hi >= 0) {
        if (hi == 0) {
            eigs.push_back(h.at(0, 0));
            break;
        }
        std::int64_t lo = hi;
        while (lo > 0) {
            const double off = std::abs(h.at(lo, lo - 1));
            const double diag = std::abs(h.at(lo - 1, lo - 1)) + std::abs(h.at(lo, lo));
            if (off <= eps * diag) {
                h.at(lo, lo - 1) = Complex(0.0, 0.0);
                break;
            }
            --lo;
        }
        if (lo == hi) {
            eigs.push_back(h.at(hi, hi));
            --hi;
            since_deflation = 0;
            continue;
        }
        if (lo == hi - 1) {
            const auto [lam1, lam2] = eigenvalues_2x2(h.at(lo, lo), h.at(lo, hi),
                                                      h.at(hi, lo), h.at(hi, hi));
            eigs.push_back(lam1);
            eigs.push_back(lam2);
            hi -= 2;
            since_deflation = 0;
            continue;
        }
        if (++sweeps > 30 * n) {
            throw ConvergenceError("dense_eigenvalues: QR iteration exceeded " +
                                   std::to_string(30 * n) + " sweeps");
        }
        ++since_deflation;
        Complex mu;
        if (since_deflation % 11 == 0) {
            // Exceptional shift to break rare shift cycles.
            mu = h.at(hi, hi) + Complex(0.75 * std::abs(h.at(hi, hi - 1)), 0.0);
        } else {
            mu = wilkinson_shift(h.at(hi - 1, hi - 1), h.at(hi - 1, hi),
                                 h.at(hi, hi - 1), h.at(hi, hi));
        }
        for (std::int64_t i = lo; i <= hi; ++i) {
            h.at(i, i) -= mu;
        }
        // Forward pass: rotate rows to upper triangular within the window.
        for (std::int64_t i = lo; i < hi; ++i) {
            double c;
            Complex s;
            Complex r;
            givens_rotation(h.at(i, i), h.at(i + 1, i), c, s, r);
            cos_buf[static_cast<std::size_t>(i - lo)] = c;
            sin_buf[static_cast<std::size_t>(i - lo)] = s;
            h.at(i, i) = r;
            h.at(i + 1, i) = Complex(0.0, 0.0);
            for (std::int64_t j = i + 1; j <= hi; ++j) {
                const Complex t1 = h.at(i, j);
                const Complex t2 = h.at(i + 1, j);
                h.at(i, j) = c * t1 + s * t2;
                h.at(i + 1, j) = -std::conj(s) * t1 + c * t2;
            }
        }
        // Backward pass: right-multiply by the conjugate rotations,
        // restoring the Hessenberg band.
        for (std::int64_t i = lo; i < hi; ++i) {
            const double c = cos_buf[static_cast<std::size_t>(i - lo)];
            const Complex s = sin_buf[static_cast<std::size_t>(i - lo)];
            const std::int64_t rmax = std::min(i + 1, hi);
            for (std::int64_t r2 = lo; r2 <= rmax; ++r2) {
                const Complex t1 = h.at(r2, i);
                const Complex t2 = h.at(r2, i + 1);
                h.at(r2, i) = c * t1 + std::conj(s) * t2;
                h.at(r2, i + 1) = -s * t1 + c * t2;
            }
        }
        for (std::int64_t i = lo; i <= hi; ++i) {
            h.at(i, i) += mu;
        }
    }
    return eigs;
}

} // namespace detail

constexpr std::int64_t default_full_solver_cap = 64;

// Spectral radius through the full spectrum (dense QR eigensolver).
inline double spectral_radius_full(const ComplexMatrix& mat,
                                   std::int64_t cap = default_full_solver_cap) {
    if (mat.rows != mat.cols) {
        throw ShapeError("spectral_radius_full: matrix must be square, got " +
                         std::to_string(mat.rows) + "x" + std::to_string(mat.cols));
    }
    if (mat.rows > cap) {
        throw SizeError("spectral_radius_full: size " + std::to_string(mat.rows) +
                        " exceeds the dense-solver cap " + std::to_string(cap));
    }
    if (!mat.all_finite()) {
        throw DataError("spectral_radius_full: non-finite entries");
    }
    double radius = 0.0;
    for (const Complex& lam : detail::dense_eigenvalues(mat)) {
        radius = std::max(radius, std::abs(lam));
    }
    return radius;
}

// Spectral radius by power iteration with a random complex start vector.
// Converges when the Rayleigh quotient v*Av / v*v changes by a relative
// 1e-10 or less over three consecutive iterations. Tied dominant moduli
// surface as ConvergenceError, never as a silently wrong value.
inline double spectral_radius_power(const ComplexMatrix& mat, RngStream& rng) {
    if (mat.rows != mat.cols) {
        throw ShapeError("spectral_radius_power: matrix must be square");
    }
    if (!mat.all_finite()) {
        throw DataError("spectral_radius_power: non-finite entries");
    }
    const std::int64_t n = mat.rows;
    const std::size_t un = static_cast<std::size_t>(n);
    std::vector<Complex> v(un);
    double vnorm_sq = 0.0;
    for (Complex& z : v) {
        z = Complex(rng.next_normal(), rng.next_normal());
        vnorm_sq += std::norm(z);
    }
    const double inv0 = 1.0 / std::sqrt(vnorm_sq);
    for (Complex& z : v) {
        z *= inv0;
    }
    std::vector<Complex> w(un);
    Complex lambda_prev(0.0, 0.0);
    int stable = 0;
    constexpr int max_iters = 5000;
    constexpr double rel_tol = 1e-10;
    for (int iter = 0; iter < max_iters; ++iter) {
        for (std::int64_t i = 0; i < n; ++i) {
            Complex acc(0.0, 0.0);
            const Complex* row = &mat.at(i, 0);
            for (std::int64_t j = 0; j < n; ++j) {
                acc += row[j] * v[static_cast<std::size_t>(j)];
            }
            w[static_cast<std::size_t>(i)] = acc;
        }
        Complex lambda(0.0, 0.0);
        double wnorm_sq = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            lambda += std::conj(v[static_cast<std::size_t>(i)]) * w[static_cast<std::size_t>(i)];
            wnorm_sq += std::norm(w[static_cast<std::size_t>(i)]);
        }
        const double wnorm = std::sqrt(wnorm_sq);
        if (wnorm == 0.0) {
            return 0.0; // exact zero image: radius 0 (nilpotent-like input)
        }
        if (wnorm < 1e-300) {
            throw ZeroError("spectral_radius_power: iterate norm underflowed");
        }
        const double inv = 1.0 / wnorm;
        for (std::int64_t i = 0; i < n; ++i) {
            v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] * inv;
        }
        if (iter > 0 && std::abs(lambda - lambda_prev) <= rel_tol * std::abs(lambda)) {
            if (++stable >= 3) {
                return std::abs(lambda);
            }
        } else {
            stable = 0;
        }
        lambda_prev = lambda;
    }
    throw ConvergenceError("spectral_radius_power: no convergence in " +
                           std::to_string(max_iters) + " iterations "
                           "(near-tied dominant moduli?)");
}

enum class DirectMethod { Full, Power };

// ln(spectral radius) of one freshly sampled product matrix. A Power run
// that fails to converge falls back to the full solver when the size cap
// allows, and the estimator tag records the path actually used.
inline LogRadiusSample sample_log_radius_direct(const EnsembleSpec& spec, RngStream& rng,
                                                DirectMethod method) {
    const ComplexMatrix prod = product_chain(spec, rng);
    double radius = 0.0;
    Estimator tag = Estimator::DirectFull;
    if (method == DirectMethod::Full) {
        radius = spectral_radius_full(prod);
    } else {
        try {
            radius = spectral_radius_power(prod, rng);
            tag = Estimator::DirectPower;
        } catch (const ConvergenceError&) {
            if (prod.rows <= default_full_solver_cap) {
                radius = spectral_radius_full(prod);
                tag = Estimator::DirectFull;
            } else {
                throw;
            }
        }
    }
    if (!(radius > 0.0)) {
        throw ZeroError("sample_log_radius_direct: zero spectral radius, log undefined");
    }
    LogRadiusSample out;
    out.log_radius = std::log(radius);
    out.replicate_index = rng.replicate_index();
    out.estimator = tag;
    out.root_seed = rng.root_seed();
    return out;
}

// Batch version; same indexing and determinism contract as
// sample_batch_repr. The budget counts Gaussian draws (two per complex
// entry across all factor blocks).
inline std::vector<LogRadiusSample> sample_batch_direct(
    const EnsembleSpec& spec, std::uint64_t replicates, std::uint64_t root_seed,
    DirectMethod method, unsigned threads = 1, std::uint64_t index_offset = 0,
    std::uint64_t draw_budget = default_draw_budget) {
    if (replicates < 1) {
        throw RangeError("sample_batch_direct: replicates must be >= 1");
    }
    std::uint64_t per_replicate = 0;
    for (std::int64_t r = 0; r < spec.m; ++r) {
        per_replicate += 2ull * static_cast<std::uint64_t>(spec.dim(r)) *
                         static_cast<std::uint64_t>(spec.dim(r + 1));
    }
    if (per_replicate > draw_budget || replicates > draw_budget / per_replicate) {
        throw CapacityError("draw budget exceeded: " + std::to_string(replicates) +
                            " replicates x " + std::to_string(per_replicate) +
                            " draws each > " + std::to_string(draw_budget));
    }
    std::vector<LogRadiusSample> out(replicates);
    detail::run_indexed(replicates, threads, [&](std::uint64_t i) {
        RngStream rng(root_seed, index_offset + i);
        out[i] = sample_log_radius_direct(spec, rng, method);
    });
    return out;
}

} // namespace specrad
