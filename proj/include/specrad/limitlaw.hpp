#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specrad/ensemble.hpp"
#include "specrad/errors.hpp"
#include "specrad/repr_sampler.hpp"
#include "specrad/specfun.hpp"

namespace specrad {

// Which limit governs the ensemble sequence: delta_n -> 0, a finite
// alpha, or infinity. A single finite ensemble has no intrinsic regime;
// this is declared by the caller or classified heuristically.
enum class RegimeKind { AlphaZero, AlphaFinite, AlphaInfinite };

struct Regime {
    RegimeKind kind = RegimeKind::AlphaFinite;
    double alpha = 0.0; // meaningful only for AlphaFinite

    static Regime zero() { return Regime{RegimeKind::AlphaZero, 0.0}; }
    static Regime infinite() { return Regime{RegimeKind::AlphaInfinite, 0.0}; }
    static Regime finite(double alpha) {
        if (!(alpha > 0.0)) {
            throw DomainError("Regime::finite: alpha must be positive, got " +
                              std::to_string(alpha));
        }
        return Regime{RegimeKind::AlphaFinite, alpha};
    }
};

// Constants of the log-scale statistic
//   V = ( (log_radius - center)/scale - a_n ) / b_n.
struct Normalizers {
    double center = 0.0;   // (1/2) sum_r psi(n_r)
    double scale = 0.0;    // (1/2) sqrt(delta_n)
    double a_n = 0.0;
    double b_n = 1.0;
    double delta_n = 0.0;
};

// Constants of the ratio statistic
//   V = alpha_n * (exp(log_radius - log_scale_center) - 1) - beta_n.
struct GumbelConstants {
    double alpha_n = 0.0;
    double beta_n = 0.0;
    double log_scale_center = 0.0; // (1/2) sum_r ln(n_r)
};

// a(y) = (ln y)^{1/2} - (ln y)^{-1/2} ln(sqrt(2 pi) ln y), y > 1.
inline double a_norm(double y) {
    if (!(y > 1.0)) {
        throw DomainError("a_norm: y must exceed 1, got " + std::to_string(y));
    }
    const double ln_y = std::log(y);
    const double root = std::sqrt(ln_y);
    return root - std::log(std::sqrt(2.0 * 3.14159265358979323846) * ln_y) / root;
}

// b(y) = (ln y)^{-1/2}, y > 1.
inline double b_norm(double y) {
    if (!(y > 1.0)) {
        throw DomainError("b_norm: y must exceed 1, got " + std::to_string(y));
    }
    return 1.0 / std::sqrt(std::log(y));
}

// Centering and scaling for the log-scale statistic. In the alpha-zero
// regime the statistic needs the extra affine layer (a_n, b_n) computed
// at y = 1/delta_n, which requires delta_n < 1; in the finite and
// infinite regimes a_n = 0, b_n = 1.
inline Normalizers normalizers_theorem1(const EnsembleSpec& spec, const Regime& regime) {
    Normalizers norms;
    norms.delta_n = delta_n(spec);
    norms.center = 0.5 * psi_sum(spec);
    norms.scale = 0.5 * std::sqrt(norms.delta_n);
    if (regime.kind == RegimeKind::AlphaZero) {
        if (!(norms.delta_n < 1.0)) {
            throw DomainError("normalizers_theorem1: alpha-zero regime requires "
                              "delta_n < 1, got " + std::to_string(norms.delta_n));
        }
        const double y = 1.0 / norms.delta_n;
        norms.a_n = a_norm(y);
        norms.b_n = b_norm(y);
    }
    return norms;
}

inline std::vector<double> standardize_theorem1(const std::vector<LogRadiusSample>& samples,
                                                const Normalizers& norms) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const LogRadiusSample& s : samples) {
        out.push_back(((s.log_radius - norms.center) / norms.scale - norms.a_n) / norms.b_n);
    }
    return out;
}

// Constants of the Gumbel-limit ratio statistic; defined only while
// delta_n < 1 (the alpha-zero regime target).
inline GumbelConstants gumbel_constants_theorem2a(const EnsembleSpec& spec) {
    const double d = delta_n(spec);
    if (!(d < 1.0)) {
        throw DomainError("gumbel_constants_theorem2a: requires delta_n < 1, got " +
                          std::to_string(d));
    }
    GumbelConstants consts;
    const double neg_log_d = -std::log(d);
    consts.alpha_n = 2.0 * std::sqrt(neg_log_d / d);
    consts.beta_n = neg_log_d - std::log(neg_log_d) -
                    0.5 * std::log(2.0 * 3.14159265358979323846);
    consts.log_scale_center = 0.5 * log_dim_sum(spec);
    return consts;
}

// The ratio exp(log_radius - log_scale_center) is 1 + O(sqrt(delta_n)),
// so the subtraction runs through expm1 in the log domain to keep
// precision where the statistic concentrates.
inline std::vector<double> standardize_theorem2a(const std::vector<LogRadiusSample>& samples,
                                                 const GumbelConstants& consts) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const LogRadiusSample& s : samples) {
        out.push_back(consts.alpha_n * std::expm1(s.log_radius - consts.log_scale_center) -
                      consts.beta_n);
    }
    return out;
}

// Law of the plain rescaled radius exp(log_radius - (1/2) sum ln n_r) in
// the finite-alpha regime: F(x) = Phi_alpha(sqrt(alpha)/2 + 2 ln(x)/sqrt(alpha)).
inline LimitLaw radial_law_theorem2b(double alpha) {
    return LimitLaw::radial(alpha);
}

inline std::vector<double> rescaled_radius(const std::vector<LogRadiusSample>& samples,
                                           const EnsembleSpec& spec) {
    const double center = 0.5 * log_dim_sum(spec);
    std::vector<double> out;
    out.reserve(samples.size());
    for (const LogRadiusSample& s : samples) {
        out.push_back(std::exp(s.log_radius - center));
    }
    return out;
}

// Declared regimes are returned after guard checks; otherwise a
// documented heuristic classifies by delta_n: below 0.05 alpha-zero,
// above 20 alpha-infinite, else alpha-finite at the observed delta_n.
inline Regime regime_of(const EnsembleSpec& spec,
                        const std::optional<Regime>& declared = std::nullopt) {
    const double d = delta_n(spec);
    if (declared.has_value()) {
        if (declared->kind == RegimeKind::AlphaZero && !(d < 1.0)) {
            throw GuardError("regime_of: declared alpha-zero regime but delta_n = " +
                             std::to_string(d) + " >= 1");
        }
        return *declared;
    }
    if (d < 0.05) {
        return Regime::zero();
    }
    if (d > 20.0) {
        return Regime::infinite();
    }
    return Regime::finite(d);
}

// Limiting law of the standardized log-scale statistic in each regime.
inline LimitLaw law_for_theorem1(const Regime& regime) {
    switch (regime.kind) {
        case RegimeKind::AlphaZero: return LimitLaw::gumbel();
        case RegimeKind::AlphaFinite: return LimitLaw::phi_alpha(regime.alpha);
        case RegimeKind::AlphaInfinite: return LimitLaw::normal();
    }
    return LimitLaw::gumbel();
}

} // namespace specrad
