#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "specrad/errors.hpp"
#include "specrad/specfun.hpp"

namespace specrad {

// Goodness-of-fit result.
struct KsReport {
    double statistic = 0.0;
    double p_value = 1.0;
    std::int64_t n1 = 0;
    std::optional<std::int64_t> n2; // set for two-sample tests
    std::string law_description;
};

// Survival function of the Kolmogorov distribution,
//   p = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2),
// clamped into [0, 1].
inline double kolmogorov_pvalue(double lambda) {
    if (lambda <= 0.0) {
        return 1.0;
    }
    double sum = 0.0;
    for (int k = 1; k <= 1000; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-18) {
            break;
        }
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

namespace detail {

inline void require_no_nan(const std::vector<double>& xs, const char* who) {
    for (double x : xs) {
        if (std::isnan(x)) {
            throw DataError(std::string(who) + ": NaN in sample");
        }
    }
}

// Stephens' small-sample argument correction for the asymptotic p-value.
inline double stephens_lambda(double effective_n, double d) {
    const double root = std::sqrt(effective_n);
    return (root + 0.12 + 0.11 / root) * d;
}

} // namespace detail

// Kolmogorov-Smirnov distance between the ECDF of `samples` and a
// non-decreasing reference cdf, evaluated through both one-sided gaps at
// every order statistic. No minimum sample size is imposed here; the
// testing wrappers below add it.
inline double ks_statistic_one_sample(std::vector<double> samples,
                                      const std::function<double(double)>& cdf) {
    if (samples.empty()) {
        throw DataError("ks_statistic_one_sample: empty sample");
    }
    detail::require_no_nan(samples, "ks_statistic_one_sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        const double upper = static_cast<double>(i + 1) / n - f; // ECDF jumps above cdf
        const double lower = f - static_cast<double>(i) / n;     // cdf above ECDF
        d = std::max(d, std::max(upper, lower));
    }
    return d;
}

// KS distance between two ECDFs over the merged grid of unique values,
// so ties contribute a single evaluation point.
inline double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw DataError("ks_statistic_two_sample: empty sample");
    }
    detail::require_no_nan(a, "ks_statistic_two_sample");
    detail::require_no_nan(b, "ks_statistic_two_sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t ia = 0;
    std::size_t ib = 0;
    double d = 0.0;
    while (ia < a.size() || ib < b.size()) {
        double x;
        if (ia >= a.size()) {
            x = b[ib];
        } else if (ib >= b.size()) {
            x = a[ia];
        } else {
            x = std::min(a[ia], b[ib]);
        }
        while (ia < a.size() && a[ia] <= x) {
            ++ia;
        }
        while (ib < b.size() && b[ib] <= x) {
            ++ib;
        }
        const double gap = std::fabs(static_cast<double>(ia) / na -
                                     static_cast<double>(ib) / nb);
        d = std::max(d, gap);
    }
    return d;
}

// One-sample KS test with the asymptotic p-value.
inline KsReport ks_one_sample(const std::vector<double>& samples,
                              const std::function<double(double)>& cdf,
                              std::string law_description = "") {
    if (samples.size() < 8) {
        throw DataError("ks_one_sample: need at least 8 samples, got " +
                        std::to_string(samples.size()));
    }
    KsReport report;
    report.statistic = ks_statistic_one_sample(samples, cdf);
    report.n1 = static_cast<std::int64_t>(samples.size());
    report.p_value = kolmogorov_pvalue(
        detail::stephens_lambda(static_cast<double>(samples.size()), report.statistic));
    report.law_description = std::move(law_description);
    return report;
}

// Two-sample KS test; the p-value uses the effective size n1*n2/(n1+n2).
inline KsReport ks_two_sample(const std::vector<double>& a, const std::vector<double>& b,
                              std::string law_description = "two-sample") {
    if (a.size() < 8 || b.size() < 8) {
        throw DataError("ks_two_sample: need at least 8 samples per side, got " +
                        std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
    KsReport report;
    report.statistic = ks_statistic_two_sample(a, b);
    report.n1 = static_cast<std::int64_t>(a.size());
    report.n2 = static_cast<std::int64_t>(b.size());
    const double effective =
        static_cast<double>(a.size()) * static_cast<double>(b.size()) /
        static_cast<double>(a.size() + b.size());
    report.p_value = kolmogorov_pvalue(detail::stephens_lambda(effective, report.statistic));
    report.law_description = std::move(law_description);
    return report;
}

// QQ pairs (theoretical quantile, empirical quantile) on the grid
// p_i = (i - 1/2)/count, i = 1..count.
inline std::vector<std::pair<double, double>> qq_points(std::vector<double> samples,
                                                        const LimitLaw& law,
                                                        std::int64_t count) {
    if (count < 1) {
        throw RangeError("qq_points: count must be >= 1");
    }
    if (static_cast<std::size_t>(count) > samples.size()) {
        throw RangeError("qq_points: count " + std::to_string(count) +
                         " exceeds sample size " + std::to_string(samples.size()));
    }
    detail::require_no_nan(samples, "qq_points");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 1; i <= count; ++i) {
        const double p = (static_cast<double>(i) - 0.5) / static_cast<double>(count);
        const auto idx = static_cast<std::size_t>(
            std::min(n - 1.0, std::floor(p * n)));
        out.emplace_back(law_quantile(law, p), samples[idx]);
    }
    return out;
}

} // namespace specrad
