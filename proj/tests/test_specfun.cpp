#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "specrad/specfun.hpp"

#include "oracles.hpp"

using specrad::LimitLaw;

TEST_CASE("ln_gamma hits the factorial anchors") {
    REQUIRE(std::fabs(specrad::ln_gamma(1.0)) <= 1e-14);
    REQUIRE(std::fabs(specrad::ln_gamma(5.0) - std::log(24.0)) <= 1e-12);
    for (int n = 2; n <= 20; ++n) {
        const double expected = std::log(oracles::gamma_int(n));
        REQUIRE(std::fabs(specrad::ln_gamma(n) - expected) <=
                1e-12 * std::max(1.0, std::fabs(expected)));
    }
}

TEST_CASE("ln_gamma matches the half-integer closed form") {
    const double expected = std::log(1.875 * std::sqrt(oracles::pi));
    REQUIRE(std::fabs(specrad::ln_gamma(3.5) - expected) <= 1e-12);
    for (int n = 1; n <= 30; ++n) {
        const double ref = std::log(oracles::gamma_int_plus_half(n));
        REQUIRE(std::fabs(specrad::ln_gamma(n + 0.5) - ref) <=
                1e-12 * std::max(1.0, std::fabs(ref)));
    }
}

TEST_CASE("ln_gamma satisfies the recurrence over a wide grid") {
    for (double x = 0.5; x <= 300.0; x += 0.37) {
        const double lhs = std::exp(specrad::ln_gamma(x + 1.0) - specrad::ln_gamma(x));
        REQUIRE(std::fabs(lhs - x) <= 1e-10 * x);
    }
}

TEST_CASE("ln_gamma rejects non-positive arguments") {
    REQUIRE_THROWS_AS(specrad::ln_gamma(0.0), specrad::DomainError);
    REQUIRE_THROWS_AS(specrad::ln_gamma(-2.5), specrad::DomainError);
}

TEST_CASE("digamma agrees with the harmonic-sum oracle") {
    for (int n = 1; n <= 50; ++n) {
        REQUIRE(std::fabs(specrad::digamma(n) - oracles::psi_int(n)) <= 1e-12);
    }
}

TEST_CASE("digamma at 1 and 2 reproduces the euler-gamma values") {
    REQUIRE(std::fabs(specrad::digamma(1.0) + oracles::euler_gamma) <= 1e-12);
    REQUIRE(std::fabs(specrad::digamma(2.0) - (1.0 - oracles::euler_gamma)) <= 1e-12);
}

TEST_CASE("digamma satisfies its recurrence") {
    for (double x = 0.5; x <= 100.0; x += 0.73) {
        REQUIRE(std::fabs(specrad::digamma(x + 1.0) - specrad::digamma(x) - 1.0 / x) <=
                1e-12);
    }
}

TEST_CASE("digamma at 10 shows the second-order asymptotic gap") {
    // psi(10) differs from ln 10 - 1/20 by the O(1/x^2) term, about 8.3e-4.
    const double gap = (std::log(10.0) - 0.05) - specrad::digamma(10.0);
    REQUIRE(gap > 7.9e-4);
    REQUIRE(gap < 8.7e-4);
    REQUIRE(std::fabs(specrad::digamma(10.0) - oracles::psi_int(10)) <= 1e-12);
}

TEST_CASE("digamma rejects non-positive arguments") {
    REQUIRE_THROWS_AS(specrad::digamma(0.0), specrad::DomainError);
    REQUIRE_THROWS_AS(specrad::digamma(-1.0), specrad::DomainError);
}

TEST_CASE("normal cdf matches quadrature to tight accuracy") {
    REQUIRE(specrad::std_normal_cdf(0.0) == Catch::Approx(0.5).margin(1e-15));
    REQUIRE(std::fabs(specrad::std_normal_cdf(40.0) - 1.0) <= 1e-15);
    REQUIRE(std::fabs(specrad::std_normal_cdf(1.0) - oracles::normal_cdf_simpson(1.0)) <=
            1e-9);
    for (double x = -6.0; x <= 6.0; x += 0.5) {
        REQUIRE(std::fabs(specrad::std_normal_cdf(x) - oracles::normal_cdf_simpson(x)) <=
                1e-9);
    }
}

TEST_CASE("normal cdf is symmetric") {
    for (double x = 0.0; x <= 8.0; x += 0.25) {
        REQUIRE(std::fabs(specrad::std_normal_cdf(-x) - (1.0 - specrad::std_normal_cdf(x))) <=
                1e-14);
    }
}

TEST_CASE("gumbel cdf anchors") {
    REQUIRE(std::fabs(specrad::gumbel_cdf(0.0) - std::exp(-1.0)) <= 1e-15);
    REQUIRE(std::fabs(specrad::gumbel_cdf(-std::log(std::log(2.0))) - 0.5) <= 1e-15);
    REQUIRE(specrad::gumbel_cdf(-40.0) == 0.0);
}

TEST_CASE("phi_alpha matches the quadrature product oracle") {
    REQUIRE(std::fabs(specrad::phi_alpha_cdf(0.0, 4.0) -
                      oracles::phi_alpha_truncated(0.0, 4.0)) <= 1e-9);
    for (double y = -3.0; y <= 9.0; y += 0.75) {
        for (double alpha : {0.25, 1.0, 4.0, 9.0}) {
            REQUIRE(std::fabs(specrad::phi_alpha_cdf(y, alpha) -
                              oracles::phi_alpha_truncated(y, alpha)) <= 1e-8);
        }
    }
}

TEST_CASE("phi_alpha saturates to the plain normal cdf at large alpha") {
    for (double y = -3.0; y <= 3.0; y += 0.5) {
        REQUIRE(std::fabs(specrad::phi_alpha_cdf(y, 100.0) - specrad::std_normal_cdf(y)) <=
                1e-4);
    }
}

TEST_CASE("phi_alpha underflows to zero far in the left tail") {
    REQUIRE(specrad::phi_alpha_cdf(-40.0, 4.0) == 0.0);
}

TEST_CASE("phi_alpha never exceeds its first factor") {
    for (double y = -5.0; y <= 9.0; y += 0.4) {
        for (double alpha : {1e-6, 0.01, 1.0, 4.0, 64.0}) {
            REQUIRE(specrad::phi_alpha_cdf(y, alpha) <= specrad::std_normal_cdf(y));
        }
    }
}

TEST_CASE("phi_alpha is monotone in both arguments") {
    for (double alpha : {0.5, 4.0}) {
        double prev = -1.0;
        for (double y = -6.0; y <= 9.0; y += 0.2) {
            const double value = specrad::phi_alpha_cdf(y, alpha);
            REQUIRE(value >= prev - 1e-15);
            prev = value;
        }
    }
    for (double y : {-2.0, 0.0, 1.5}) {
        double prev = -1.0;
        for (double alpha = 0.1; alpha <= 50.0; alpha *= 1.5) {
            const double value = specrad::phi_alpha_cdf(y, alpha);
            REQUIRE(value >= prev - 1e-15);
            prev = value;
        }
    }
}

TEST_CASE("phi_alpha guards its parameter domain") {
    REQUIRE_THROWS_AS(specrad::phi_alpha_cdf(0.0, 5e-7), specrad::DomainError);
    REQUIRE_THROWS_AS(specrad::phi_alpha_cdf(0.0, 4.0, 1e-16), specrad::DomainError);
    REQUIRE_THROWS_AS(specrad::phi_alpha_cdf(0.0, 4.0, 1e-5), specrad::DomainError);
}

TEST_CASE("limit law factories validate alpha") {
    REQUIRE_THROWS_AS(LimitLaw::phi_alpha(0.0), specrad::DomainError);
    REQUIRE_THROWS_AS(LimitLaw::radial(1e-7), specrad::DomainError);
    REQUIRE(LimitLaw::phi_alpha(4.0).alpha == 4.0);
}

TEST_CASE("law_cdf dispatches to the right family") {
    REQUIRE(std::fabs(specrad::law_cdf(LimitLaw::gumbel(), 0.0) - std::exp(-1.0)) <= 1e-15);
    REQUIRE(std::fabs(specrad::law_cdf(LimitLaw::normal(), 0.0) - 0.5) <= 1e-15);
    const LimitLaw radial = LimitLaw::radial(4.0);
    REQUIRE(specrad::law_cdf(radial, 0.0) == 0.0);
    REQUIRE(specrad::law_cdf(radial, -3.0) == 0.0);
    // F(1) = Phi_4(1) since sqrt(4)/2 + 2 ln(1)/2 = 1.
    REQUIRE(std::fabs(specrad::law_cdf(radial, 1.0) -
                      oracles::phi_alpha_truncated(1.0, 4.0)) <= 1e-9);
}

TEST_CASE("law cdfs are non-decreasing on a grid") {
    const std::vector<LimitLaw> laws = {LimitLaw::gumbel(), LimitLaw::normal(),
                                        LimitLaw::phi_alpha(4.0), LimitLaw::radial(4.0)};
    for (const auto& law : laws) {
        double prev = -1.0;
        for (double x = -8.0; x <= 8.0; x += 0.25) {
            const double c = specrad::law_cdf(law, x);
            REQUIRE(c >= 0.0);
            REQUIRE(c <= 1.0);
            REQUIRE(c >= prev - 1e-15);
            prev = c;
        }
    }
}

TEST_CASE("law_quantile inverts the cdf") {
    REQUIRE(std::fabs(specrad::law_quantile(LimitLaw::gumbel(), std::exp(-1.0))) <= 1e-8);
    REQUIRE(std::fabs(specrad::law_quantile(LimitLaw::normal(), 0.5)) <= 1e-8);
    REQUIRE(std::fabs(specrad::law_quantile(LimitLaw::gumbel(), 0.5) -
                      oracles::gumbel_quantile(0.5)) <= 1e-8);
}

TEST_CASE("quantile of cdf is the identity on moderate grids") {
    const std::vector<LimitLaw> laws = {LimitLaw::gumbel(), LimitLaw::normal(),
                                        LimitLaw::phi_alpha(4.0)};
    for (const auto& law : laws) {
        for (double x = -2.0; x <= 4.0; x += 0.5) {
            const double p = specrad::law_cdf(law, x);
            if (p <= 1e-12 || p >= 1.0 - 1e-12) {
                continue;
            }
            REQUIRE(std::fabs(specrad::law_quantile(law, p) - x) <= 1e-8);
        }
    }
    const LimitLaw radial = LimitLaw::radial(4.0);
    for (double x = 0.25; x <= 3.0; x += 0.25) {
        const double p = specrad::law_cdf(radial, x);
        if (p <= 1e-12 || p >= 1.0 - 1e-12) {
            continue;
        }
        REQUIRE(std::fabs(specrad::law_quantile(radial, p) - x) <= 1e-8);
    }
}

TEST_CASE("law_quantile is monotone in p") {
    const LimitLaw law = LimitLaw::phi_alpha(2.0);
    double prev = -1e30;
    for (double p = 0.02; p < 1.0; p += 0.02) {
        const double x = specrad::law_quantile(law, p);
        REQUIRE(x >= prev);
        prev = x;
    }
}

TEST_CASE("law_quantile rejects out-of-range probabilities") {
    REQUIRE_THROWS_AS(specrad::law_quantile(LimitLaw::gumbel(), 0.0), specrad::DomainError);
    REQUIRE_THROWS_AS(specrad::law_quantile(LimitLaw::gumbel(), 1.0), specrad::DomainError);
    REQUIRE_THROWS_AS(specrad::law_quantile(LimitLaw::gumbel(), -0.5), specrad::DomainError);
}

TEST_CASE("law descriptions name the family and parameter") {
    REQUIRE(LimitLaw::gumbel().description() == "gumbel");
    REQUIRE(LimitLaw::normal().description() == "normal");
    REQUIRE(LimitLaw::phi_alpha(4.0).description() == "phi_alpha(alpha=4)");
    REQUIRE(LimitLaw::radial(0.5).description() == "radial(alpha=0.5)");
}
