#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "specrad/ensemble.hpp"
#include "specrad/limitlaw.hpp"
#include "specrad/specfun.hpp"

#include "oracles.hpp"

using specrad::EnsembleSpec;
using specrad::GumbelConstants;
using specrad::LogRadiusSample;
using specrad::Normalizers;
using specrad::Regime;
using specrad::RegimeKind;
using specrad::validate_spec;

namespace {

std::vector<LogRadiusSample> wrap(const std::vector<double>& values) {
    std::vector<LogRadiusSample> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        LogRadiusSample s;
        s.log_radius = values[i];
        s.replicate_index = i;
        out.push_back(s);
    }
    return out;
}

EnsembleSpec square_chain(std::int64_t n, std::size_t m) {
    return validate_spec(std::vector<std::int64_t>(m + 1, n));
}

} // namespace

TEST_CASE("affine constants match an extended-precision reference") {
    for (double y : {1.5, 2.0, std::exp(1.0), 10.0, 100.0, 1e4, 1e8}) {
        REQUIRE(specrad::a_norm(y) ==
                Catch::Approx(oracles::a_norm_ref(y)).epsilon(1e-14));
        REQUIRE(specrad::b_norm(y) ==
                Catch::Approx(oracles::b_norm_ref(y)).epsilon(1e-14));
    }
    REQUIRE(specrad::a_norm(100.0) == Catch::Approx(1.00612).margin(5e-5));
    REQUIRE(specrad::b_norm(100.0) ==
            Catch::Approx(1.0 / std::sqrt(std::log(100.0))).margin(1e-15));
    REQUIRE(specrad::b_norm(std::exp(4.0)) == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("affine constants reject arguments at or below one") {
    REQUIRE_THROWS_AS(specrad::a_norm(1.0), specrad::DomainError);
    REQUIRE_THROWS_AS(specrad::a_norm(0.5), specrad::DomainError);
    REQUIRE_THROWS_AS(specrad::b_norm(1.0), specrad::DomainError);
    REQUIRE_THROWS_AS(specrad::b_norm(-2.0), specrad::DomainError);
}

TEST_CASE("log-scale normalizers in the finite regime") {
    const EnsembleSpec spec = validate_spec({4, 6, 5, 4});
    const Normalizers norms =
        specrad::normalizers_theorem1(spec, Regime::finite(specrad::delta_n(spec)));
    const double center_ref =
        0.5 * (oracles::psi_int(4) + oracles::psi_int(6) + oracles::psi_int(5));
    REQUIRE(norms.delta_n == Catch::Approx(37.0 / 60.0).margin(1e-15));
    REQUIRE(norms.center == Catch::Approx(center_ref).margin(1e-13));
    REQUIRE(norms.scale == Catch::Approx(0.5 * std::sqrt(37.0 / 60.0)).margin(1e-14));
    REQUIRE(norms.a_n == 0.0);
    REQUIRE(norms.b_n == 1.0);
}

TEST_CASE("log-scale normalizers add the affine layer in the zero regime") {
    const EnsembleSpec spec = validate_spec({200, 200});
    const Normalizers norms = specrad::normalizers_theorem1(spec, Regime::zero());
    REQUIRE(norms.delta_n == 0.005);
    REQUIRE(norms.a_n == specrad::a_norm(200.0));
    REQUIRE(norms.b_n == specrad::b_norm(200.0));
    REQUIRE(norms.center == Catch::Approx(0.5 * oracles::psi_int(200)).margin(1e-12));
}

TEST_CASE("zero-regime normalizers require small delta") {
    const EnsembleSpec spec = validate_spec({2, 2, 2}); // delta_n = 1
    REQUIRE_THROWS_AS(specrad::normalizers_theorem1(spec, Regime::zero()),
                      specrad::DomainError);
    // The same spec is fine in the finite regime.
    const Normalizers norms =
        specrad::normalizers_theorem1(spec, Regime::finite(1.0));
    REQUIRE(norms.a_n == 0.0);
}

TEST_CASE("standardization fixes the centering point") {
    const EnsembleSpec fin = validate_spec({4, 6, 5, 4});
    const Normalizers nf =
        specrad::normalizers_theorem1(fin, Regime::finite(specrad::delta_n(fin)));
    const auto vf = specrad::standardize_theorem1(wrap({nf.center}), nf);
    REQUIRE(vf.size() == 1);
    REQUIRE(vf[0] == 0.0);

    const EnsembleSpec zero = validate_spec({200, 200});
    const Normalizers nz = specrad::normalizers_theorem1(zero, Regime::zero());
    const auto vz =
        specrad::standardize_theorem1(wrap({nz.center + nz.scale * nz.a_n}), nz);
    REQUIRE(std::fabs(vz[0]) <= 1e-12);
}

TEST_CASE("standardization preserves sample order") {
    const EnsembleSpec spec = validate_spec({200, 200});
    const Normalizers norms = specrad::normalizers_theorem1(spec, Regime::zero());
    const std::vector<double> raw = {2.0, 2.7, 2.71, 3.0, 3.5};
    const auto v = specrad::standardize_theorem1(wrap(raw), norms);
    for (std::size_t i = 1; i < v.size(); ++i) {
        REQUIRE(v[i] > v[i - 1]);
    }
}

TEST_CASE("ratio-statistic constants match an extended-precision reference") {
    const EnsembleSpec spec = validate_spec({100, 100});
    const GumbelConstants consts = specrad::gumbel_constants_theorem2a(spec);
    REQUIRE(consts.alpha_n ==
            Catch::Approx(oracles::alpha_n_ref(0.01)).epsilon(1e-13));
    REQUIRE(consts.beta_n ==
            Catch::Approx(oracles::beta_n_ref(0.01)).epsilon(1e-13));
    REQUIRE(consts.log_scale_center ==
            Catch::Approx(0.5 * std::log(100.0)).margin(1e-15));
}

TEST_CASE("reference ratio constants hit their closed forms at delta = 1/e") {
    const double d = std::exp(-1.0);
    // alpha(1/e) = 2 sqrt(e), beta(1/e) = 1 - ln sqrt(2 pi).
    REQUIRE(oracles::alpha_n_ref(d) ==
            Catch::Approx(2.0 * std::sqrt(std::exp(1.0))).epsilon(1e-14));
    REQUIRE(oracles::beta_n_ref(d) ==
            Catch::Approx(1.0 - 0.5 * std::log(2.0 * oracles::pi)).epsilon(1e-14));
}

TEST_CASE("ratio constants are rejected once delta reaches one") {
    REQUIRE_THROWS_AS(specrad::gumbel_constants_theorem2a(validate_spec({2, 2, 2})),
                      specrad::DomainError);
    REQUIRE_THROWS_AS(specrad::gumbel_constants_theorem2a(square_chain(3, 5)),
                      specrad::DomainError);
}

TEST_CASE("ratio standardization maps anchor points to the constants") {
    const EnsembleSpec spec = validate_spec({100, 100});
    const GumbelConstants consts = specrad::gumbel_constants_theorem2a(spec);
    const double lsc = consts.log_scale_center;
    const auto v = specrad::standardize_theorem2a(
        wrap({lsc, lsc + std::log(2.0)}), consts);
    REQUIRE(v[0] == Catch::Approx(-consts.beta_n).margin(1e-12));
    REQUIRE(v[1] == Catch::Approx(consts.alpha_n - consts.beta_n).margin(1e-9));
}

TEST_CASE("rescaled radius is one at the log-scale center") {
    const EnsembleSpec spec = validate_spec({4, 6, 5, 4});
    const double lsc = 0.5 * specrad::log_dim_sum(spec);
    const auto r = specrad::rescaled_radius(wrap({lsc, lsc + 1.0}), spec);
    REQUIRE(r[0] == 1.0);
    REQUIRE(r[1] == Catch::Approx(std::exp(1.0)).epsilon(1e-15));
}

TEST_CASE("radial law evaluates through the chained normal product") {
    const specrad::LimitLaw law = specrad::radial_law_theorem2b(4.0);
    REQUIRE(specrad::law_cdf(law, 1e-8) < 1e-12);
    REQUIRE(specrad::law_cdf(law, 1.0) ==
            Catch::Approx(oracles::phi_alpha_truncated(1.0, 4.0)).margin(1e-9));
    REQUIRE(specrad::law_cdf(law, 0.5) < specrad::law_cdf(law, 1.0));
    REQUIRE(specrad::law_cdf(law, 1.0) < specrad::law_cdf(law, 2.0));
    REQUIRE_THROWS_AS(specrad::radial_law_theorem2b(5e-7), specrad::DomainError);
}

TEST_CASE("regime classification follows the documented thresholds") {
    REQUIRE(specrad::regime_of(validate_spec({200, 200})).kind == RegimeKind::AlphaZero);
    const Regime fin = specrad::regime_of(validate_spec({4, 6, 5, 4}));
    REQUIRE(fin.kind == RegimeKind::AlphaFinite);
    REQUIRE(fin.alpha == Catch::Approx(37.0 / 60.0).margin(1e-15));
    REQUIRE(specrad::regime_of(square_chain(2, 100)).kind == RegimeKind::AlphaInfinite);
}

TEST_CASE("declared regimes pass through after guard checks") {
    const EnsembleSpec spec = validate_spec({4, 6, 5, 4});
    const Regime declared = specrad::regime_of(spec, Regime::finite(3.5));
    REQUIRE(declared.kind == RegimeKind::AlphaFinite);
    REQUIRE(declared.alpha == 3.5);
    REQUIRE(specrad::regime_of(spec, Regime::zero()).kind == RegimeKind::AlphaZero);
    REQUIRE_THROWS_AS(specrad::regime_of(validate_spec({2, 2, 2}), Regime::zero()),
                      specrad::GuardError);
    REQUIRE_THROWS_AS(Regime::finite(0.0), specrad::DomainError);
}

TEST_CASE("square chains collapse to the m over n constants") {
    const EnsembleSpec spec = square_chain(4, 2); // delta_n = 2/4, dyadic
    REQUIRE(specrad::delta_n(spec) == 0.5);
    const Normalizers norms =
        specrad::normalizers_theorem1(spec, Regime::finite(0.5));
    REQUIRE(norms.center == Catch::Approx(oracles::psi_int(4)).margin(1e-12));
    REQUIRE(norms.scale == Catch::Approx(0.5 * std::sqrt(0.5)).margin(1e-15));

    const EnsembleSpec big = square_chain(64, 1); // delta_n = 1/64, dyadic
    REQUIRE(specrad::delta_n(big) == 1.0 / 64.0);
    const GumbelConstants consts = specrad::gumbel_constants_theorem2a(big);
    REQUIRE(consts.alpha_n ==
            Catch::Approx(2.0 * std::sqrt(64.0 * std::log(64.0))).epsilon(1e-15));
    REQUIRE(consts.log_scale_center == Catch::Approx(0.5 * std::log(64.0)).margin(1e-15));
}

TEST_CASE("log-scale and ratio statistics rank samples identically") {
    const EnsembleSpec spec = validate_spec({4, 6, 5, 4});
    std::vector<double> raw;
    for (int i = 0; i < 50; ++i) {
        raw.push_back(1.0 + 0.11 * i + 0.3 * std::sin(3.7 * i));
    }
    const auto samples = wrap(raw);
    const Normalizers norms =
        specrad::normalizers_theorem1(spec, Regime::finite(specrad::delta_n(spec)));
    const GumbelConstants consts = specrad::gumbel_constants_theorem2a(spec);
    const auto v1 = specrad::standardize_theorem1(samples, norms);
    const auto v2 = specrad::standardize_theorem2a(samples, consts);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        for (std::size_t j = i + 1; j < raw.size(); ++j) {
            REQUIRE((v1[i] < v1[j]) == (v2[i] < v2[j]));
        }
    }
}

TEST_CASE("normalizer computation is pure") {
    const EnsembleSpec spec = validate_spec({10, 17, 12, 10});
    const Regime regime = specrad::regime_of(spec);
    const Normalizers a = specrad::normalizers_theorem1(spec, regime);
    const Normalizers b = specrad::normalizers_theorem1(spec, regime);
    REQUIRE(a.center == b.center);
    REQUIRE(a.scale == b.scale);
    REQUIRE(a.a_n == b.a_n);
    REQUIRE(a.b_n == b.b_n);
    REQUIRE(a.delta_n == b.delta_n);
}

TEST_CASE("each regime selects its limiting law") {
    REQUIRE(specrad::law_for_theorem1(Regime::zero()).kind ==
            specrad::LawKind::Gumbel);
    const specrad::LimitLaw phi = specrad::law_for_theorem1(Regime::finite(2.5));
    REQUIRE(phi.kind == specrad::LawKind::PhiAlpha);
    REQUIRE(phi.alpha == 2.5);
    REQUIRE(specrad::law_for_theorem1(Regime::infinite()).kind ==
            specrad::LawKind::Normal);
}
