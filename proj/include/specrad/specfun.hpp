#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "specrad/errors.hpp"

namespace specrad {

namespace detail {

constexpr double half_log_two_pi = 0.91893853320467274178; // ln(2*pi)/2

// Stirling series tail for ln Gamma, valid for x >= 12: terms through
// x^{-11} leave a truncation error below 1e-16 relative.
inline double ln_gamma_asymptotic(double x) {
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = inv *
        (1.0 / 12.0 + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 +
         inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360360.0))))));
    return (x - 0.5) * std::log(x) - x + half_log_two_pi + series;
}

// Asymptotic digamma for x >= 10, consistent with
// psi(x) = ln x - 1/(2x) - 1/(12 x^2) + O(x^{-4}); terms through x^{-12}.
inline double digamma_asymptotic(double x) {
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = inv2 *
        (1.0 / 12.0 + inv2 * (-1.0 / 120.0 + inv2 * (1.0 / 252.0 +
         inv2 * (-1.0 / 240.0 + inv2 * (1.0 / 132.0 + inv2 * (-691.0 / 32760.0))))));
    return std::log(x) - 0.5 * inv - series;
}

} // namespace detail

// ln Gamma(x) for x > 0, relative error <= 1e-12 on [1e-3, 1e6].
inline double ln_gamma(double x) {
    if (!(x > 0.0)) {
        throw DomainError("ln_gamma: argument must be positive, got " + std::to_string(x));
    }
    if (x >= 12.0) {
        return detail::ln_gamma_asymptotic(x);
    }
    // Recur upward past the asymptotic threshold: Gamma(x) = Gamma(x+k) / (x...(x+k-1)).
    double product = 1.0;
    double y = x;
    while (y < 12.0) {
        product *= y;
        y += 1.0;
    }
    return detail::ln_gamma_asymptotic(y) - std::log(product);
}

// Digamma psi(x) for x > 0, absolute error <= 1e-12 for x >= 1.
inline double digamma(double x) {
    if (!(x > 0.0)) {
        throw DomainError("digamma: argument must be positive, got " + std::to_string(x));
    }
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x; // psi(x) = psi(x+1) - 1/x
        x += 1.0;
    }
    return acc + detail::digamma_asymptotic(x);
}

// Standard normal cdf, absolute error <= 1e-14.
inline double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

// Gumbel cdf exp(-e^{-x}).
inline double gumbel_cdf(double x) {
    return std::exp(-std::exp(-x));
}

// Truncated evaluation of the infinite product  prod_{j>=0} Phi(y + j*sqrt(alpha)).
//
// Factors are included up to and including the first argument >= 8.3, where
// 1 - Phi(8.3) < 1e-16, so every omitted factor is 1 to double precision and
// the truncation error is below any admissible tol.
inline double phi_alpha_cdf(double y, double alpha, double tol = 1e-12) {
    if (!(alpha >= 1e-6)) {
        throw DomainError("phi_alpha_cdf: alpha must be >= 1e-6 (use the Gumbel law "
                          "for the alpha -> 0 regime), got " + std::to_string(alpha));
    }
    if (!(tol >= 1e-15 && tol <= 1e-6)) {
        throw DomainError("phi_alpha_cdf: tol must lie in [1e-15, 1e-6], got " +
                          std::to_string(tol));
    }
    const double step = std::sqrt(alpha);
    double product = 1.0;
    double arg = y;
    for (;;) {
        product *= std_normal_cdf(arg);
        if (arg >= 8.3 || product == 0.0) {
            break;
        }
        arg += step;
    }
    return product;
}

enum class LawKind { Gumbel, Normal, PhiAlpha, Radial };

// A parameterized limiting distribution exposing cdf and quantile.
// Radial is the law of the rescaled radius itself in the finite-alpha
// regime: F(x) = Phi_alpha(sqrt(alpha)/2 + 2 ln(x)/sqrt(alpha)) for x > 0.
struct LimitLaw {
    LawKind kind = LawKind::Gumbel;
    double alpha = 0.0;          // > 0 for PhiAlpha and Radial
    double truncation_tol = 1e-12;

    static LimitLaw gumbel() { return LimitLaw{LawKind::Gumbel, 0.0, 1e-12}; }
    static LimitLaw normal() { return LimitLaw{LawKind::Normal, 0.0, 1e-12}; }

    static LimitLaw phi_alpha(double alpha, double tol = 1e-12) {
        check_alpha(alpha);
        return LimitLaw{LawKind::PhiAlpha, alpha, tol};
    }

    static LimitLaw radial(double alpha, double tol = 1e-12) {
        check_alpha(alpha);
        return LimitLaw{LawKind::Radial, alpha, tol};
    }

    std::string description() const {
        char buf[64];
        switch (kind) {
            case LawKind::Gumbel: return "gumbel";
            case LawKind::Normal: return "normal";
            case LawKind::PhiAlpha:
                std::snprintf(buf, sizeof(buf), "phi_alpha(alpha=%g)", alpha);
                return buf;
            case LawKind::Radial:
                std::snprintf(buf, sizeof(buf), "radial(alpha=%g)", alpha);
                return buf;
        }
        return "unknown";
    }

private:
    static void check_alpha(double alpha) {
        if (!(alpha >= 1e-6)) {
            throw DomainError("LimitLaw: alpha must be >= 1e-6, got " + std::to_string(alpha));
        }
    }
};

inline double law_cdf(const LimitLaw& law, double x) {
    switch (law.kind) {
        case LawKind::Gumbel:
            return gumbel_cdf(x);
        case LawKind::Normal:
            return std_normal_cdf(x);
        case LawKind::PhiAlpha:
            return phi_alpha_cdf(x, law.alpha, law.truncation_tol);
        case LawKind::Radial: {
            if (x <= 0.0) {
                return 0.0;
            }
            const double root = std::sqrt(law.alpha);
            return phi_alpha_cdf(0.5 * root + 2.0 * std::log(x) / root,
                                 law.alpha, law.truncation_tol);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

// Quantile by bracket expansion and bisection; the result x satisfies
// |law_cdf(x) - p| <= 1e-10.
inline double law_quantile(const LimitLaw& law, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("law_quantile: p must lie in (0,1), got " + std::to_string(p));
    }
    constexpr double bracket_limit = 1e6;
    double lo = law.kind == LawKind::Radial ? 0.0 : -1.0;
    double hi = 1.0;
    while (law_cdf(law, lo) > p) {
        hi = lo;
        lo *= 2.0;
        if (lo < -bracket_limit) {
            throw ConvergenceError("law_quantile: bracket expansion exceeded |x| = 1e6");
        }
    }
    while (law_cdf(law, hi) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > bracket_limit) {
            throw ConvergenceError("law_quantile: bracket expansion exceeded |x| = 1e6");
        }
    }
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double c = law_cdf(law, mid);
        if (c < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-15 * (1.0 + std::fabs(mid))) {
            break;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace specrad
