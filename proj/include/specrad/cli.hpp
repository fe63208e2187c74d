#pragma once

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "specrad/ensemble.hpp"
#include "specrad/errors.hpp"
#include "specrad/limitlaw.hpp"
#include "specrad/matrix_sampler.hpp"
#include "specrad/repr_sampler.hpp"
#include "specrad/rng.hpp"
#include "specrad/specfun.hpp"
#include "specrad/stats.hpp"

namespace specrad {

// Exit code contract for every command: 0 pass, 1 statistical reject,
// 2 config/guard/data error, 3 I/O error, 4 capacity.
enum ExitCode : int {
    exit_pass = 0,
    exit_reject = 1,
    exit_config = 2,
    exit_io = 3,
    exit_capacity = 4,
};

enum class EstimatorChoice { Representation, DirectFull, DirectPower };
enum class RegimeChoice { Auto, AlphaZero, AlphaFinite, AlphaInfinite };
enum class StatisticChoice { Theorem1, Theorem2a, Theorem2b };

struct RunConfig {
    std::vector<std::int64_t> dims;
    std::uint64_t replicates = 5000;
    std::uint64_t root_seed = 0;
    EstimatorChoice estimator = EstimatorChoice::Representation;
    RegimeChoice regime = RegimeChoice::Auto;
    std::optional<double> alpha; // explicit alpha for the finite regime
    StatisticChoice statistic = StatisticChoice::Theorem1;
    double ks_level = 0.01;
    std::string output_path; // empty: per-command default
};

inline const char* statistic_token(StatisticChoice s) {
    switch (s) {
        case StatisticChoice::Theorem1: return "theorem1";
        case StatisticChoice::Theorem2a: return "theorem2a";
        case StatisticChoice::Theorem2b: return "theorem2b";
    }
    return "unknown";
}

namespace detail {

inline EstimatorChoice parse_estimator_token(const std::string& tok) {
    if (tok == "representation") return EstimatorChoice::Representation;
    if (tok == "direct-full") return EstimatorChoice::DirectFull;
    if (tok == "direct-power") return EstimatorChoice::DirectPower;
    throw ParseError("config: unknown estimator '" + tok +
                     "' (expected representation | direct-full | direct-power)");
}

inline RegimeChoice parse_regime_token(const std::string& tok) {
    if (tok == "auto") return RegimeChoice::Auto;
    if (tok == "alpha-zero") return RegimeChoice::AlphaZero;
    if (tok == "alpha-finite") return RegimeChoice::AlphaFinite;
    if (tok == "alpha-infinite") return RegimeChoice::AlphaInfinite;
    throw ParseError("config: unknown regime '" + tok +
                     "' (expected auto | alpha-zero | alpha-finite | alpha-infinite)");
}

inline StatisticChoice parse_statistic_token(const std::string& tok) {
    if (tok == "theorem1") return StatisticChoice::Theorem1;
    if (tok == "theorem2a") return StatisticChoice::Theorem2a;
    if (tok == "theorem2b") return StatisticChoice::Theorem2b;
    throw ParseError("config: unknown statistic '" + tok +
                     "' (expected theorem1 | theorem2a | theorem2b)");
}

} // namespace detail

// Parses and validates a JSON config document. Unknown keys are errors,
// not warnings: a typo in "regime" must not silently run a default study.
inline RunConfig parse_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("config: top-level document must be a JSON object");
    }
    static const char* known[] = {"dims",  "replicates", "seed",     "estimator",
                                  "regime", "alpha",     "statistic", "ks_level",
                                  "output_path"};
    for (const auto& item : doc.items()) {
        bool ok = false;
        for (const char* k : known) {
            if (item.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw ParseError("config: unknown key '" + item.key() + "'");
        }
    }
    if (!doc.contains("dims")) {
        throw ParseError("config: dims required");
    }
    RunConfig config;
    const auto& dims = doc["dims"];
    if (!dims.is_array() || dims.empty()) {
        throw ParseError("config: dims must be a non-empty array of integers");
    }
    for (const auto& d : dims) {
        if (!d.is_number_integer() && !d.is_number_unsigned()) {
            throw ParseError("config: dims entries must be integers");
        }
        config.dims.push_back(d.get<std::int64_t>());
    }
    if (doc.contains("replicates")) {
        const auto& v = doc["replicates"];
        if (!v.is_number_integer() && !v.is_number_unsigned()) {
            throw ParseError("config: replicates must be an integer");
        }
        const std::int64_t r = v.get<std::int64_t>();
        if (r < 1) {
            throw ParseError("config: replicates must be >= 1, got " + std::to_string(r));
        }
        config.replicates = static_cast<std::uint64_t>(r);
    }
    if (doc.contains("seed")) {
        const auto& v = doc["seed"];
        if (v.is_number_unsigned()) {
            config.root_seed = v.get<std::uint64_t>();
        } else if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
            config.root_seed = static_cast<std::uint64_t>(v.get<std::int64_t>());
        } else {
            throw ParseError("config: seed must be a non-negative integer");
        }
    }
    if (doc.contains("estimator")) {
        if (!doc["estimator"].is_string()) {
            throw ParseError("config: estimator must be a string");
        }
        config.estimator = detail::parse_estimator_token(doc["estimator"].get<std::string>());
    }
    if (doc.contains("regime")) {
        if (!doc["regime"].is_string()) {
            throw ParseError("config: regime must be a string");
        }
        config.regime = detail::parse_regime_token(doc["regime"].get<std::string>());
    }
    if (doc.contains("alpha")) {
        if (!doc["alpha"].is_number()) {
            throw ParseError("config: alpha must be a number");
        }
        const double a = doc["alpha"].get<double>();
        if (!(a > 0.0)) {
            throw ParseError("config: alpha must be positive, got " + std::to_string(a));
        }
        config.alpha = a;
    }
    if (doc.contains("statistic")) {
        if (!doc["statistic"].is_string()) {
            throw ParseError("config: statistic must be a string");
        }
        config.statistic = detail::parse_statistic_token(doc["statistic"].get<std::string>());
    }
    if (doc.contains("ks_level")) {
        if (!doc["ks_level"].is_number()) {
            throw ParseError("config: ks_level must be a number");
        }
        config.ks_level = doc["ks_level"].get<double>();
        if (!(config.ks_level > 0.0 && config.ks_level < 1.0)) {
            throw ParseError("config: ks_level must lie in (0,1)");
        }
    }
    if (doc.contains("output_path")) {
        if (!doc["output_path"].is_string()) {
            throw ParseError("config: output_path must be a string");
        }
        config.output_path = doc["output_path"].get<std::string>();
    }
    validate_spec(config.dims); // reject bad dimension chains at parse time
    return config;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for reading: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failure: " + path);
    }
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("write failure: " + path);
    }
}

// CSV sample format, bit-exact: header `replicate,log_radius`, then one
// row per replicate with the value at 17 significant digits.
inline std::string format_samples_csv(const std::vector<LogRadiusSample>& samples) {
    std::string out = "replicate,log_radius\n";
    char buf[64];
    for (const LogRadiusSample& s : samples) {
        std::snprintf(buf, sizeof(buf), "%" PRIu64 ",%.17g\n", s.replicate_index,
                      s.log_radius);
        out += buf;
    }
    return out;
}

inline std::vector<LogRadiusSample> parse_samples_csv(const std::string& text,
                                                      std::uint64_t root_seed) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("samples csv: empty document");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "replicate,log_radius") {
        throw DataError("samples csv: unexpected header '" + line + "'");
    }
    std::vector<LogRadiusSample> samples;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw DataError("samples csv: malformed row " + std::to_string(row));
        }
        const std::string idx_text = line.substr(0, comma);
        const std::string val_text = line.substr(comma + 1);
        char* end = nullptr;
        const std::uint64_t idx = std::strtoull(idx_text.c_str(), &end, 10);
        if (end == idx_text.c_str() || *end != '\0') {
            throw DataError("samples csv: bad replicate index at row " + std::to_string(row));
        }
        end = nullptr;
        const double value = std::strtod(val_text.c_str(), &end);
        if (end == val_text.c_str() || *end != '\0') {
            throw DataError("samples csv: bad log_radius at row " + std::to_string(row));
        }
        if (!std::isfinite(value)) {
            throw DataError("samples csv: non-finite log_radius at row " +
                            std::to_string(row));
        }
        LogRadiusSample s;
        s.log_radius = value;
        s.replicate_index = idx;
        s.estimator = Estimator::Representation;
        s.root_seed = root_seed;
        samples.push_back(s);
    }
    return samples;
}

// Report JSON with a fixed key order so output bytes are reproducible.
inline std::string format_report_json(const KsReport& report, const char* statistic_name,
                                      const RunConfig& config) {
    nlohmann::ordered_json doc;
    doc["law"] = report.law_description;
    doc["statistic_name"] = statistic_name;
    doc["ks_statistic"] = report.statistic;
    doc["p_value"] = report.p_value;
    doc["n_samples"] = report.n1;
    doc["seed"] = config.root_seed;
    doc["dims"] = config.dims;
    return doc.dump(2) + "\n";
}

// Maps library errors onto the exit code contract; used by every command.
template <typename Fn>
int run_guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_capacity;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }
}

namespace detail {

inline Regime resolve_regime(const RunConfig& config, const EnsembleSpec& spec) {
    switch (config.regime) {
        case RegimeChoice::Auto:
            return regime_of(spec);
        case RegimeChoice::AlphaZero:
            return regime_of(spec, Regime::zero());
        case RegimeChoice::AlphaFinite:
            return regime_of(spec, Regime::finite(config.alpha.value_or(delta_n(spec))));
        case RegimeChoice::AlphaInfinite:
            return regime_of(spec, Regime::infinite());
    }
    return regime_of(spec);
}

inline std::vector<LogRadiusSample> run_sampler(const RunConfig& config,
                                                const EnsembleSpec& spec, unsigned threads,
                                                std::uint64_t index_offset = 0,
                                                std::int64_t shape_offset = 0) {
    switch (config.estimator) {
        case EstimatorChoice::Representation:
            return sample_batch_repr(spec, config.replicates, config.root_seed, threads,
                                     index_offset, shape_offset);
        case EstimatorChoice::DirectFull:
            return sample_batch_direct(spec, config.replicates, config.root_seed,
                                       DirectMethod::Full, threads, index_offset);
        case EstimatorChoice::DirectPower:
            return sample_batch_direct(spec, config.replicates, config.root_seed,
                                       DirectMethod::Power, threads, index_offset);
    }
    throw ParseError("run_sampler: unreachable estimator");
}

struct StandardizedSet {
    std::vector<double> values;
    LimitLaw law = LimitLaw::gumbel();
};

// Standardizes samples per the configured statistic and pairs them with
// the limiting law they should follow.
inline StandardizedSet standardize_for_test(const RunConfig& config, const EnsembleSpec& spec,
                                            const std::vector<LogRadiusSample>& samples) {
    StandardizedSet out;
    const Regime regime = resolve_regime(config, spec);
    switch (config.statistic) {
        case StatisticChoice::Theorem1: {
            const Normalizers norms = normalizers_theorem1(spec, regime);
            out.values = standardize_theorem1(samples, norms);
            out.law = law_for_theorem1(regime);
            break;
        }
        case StatisticChoice::Theorem2a: {
            const GumbelConstants consts = gumbel_constants_theorem2a(spec);
            out.values = standardize_theorem2a(samples, consts);
            out.law = LimitLaw::gumbel();
            break;
        }
        case StatisticChoice::Theorem2b: {
            if (regime.kind != RegimeKind::AlphaFinite) {
                throw GuardError("theorem2b statistic requires a finite-alpha regime "
                                 "(declare alpha-finite or supply alpha)");
            }
            out.values = rescaled_radius(samples, spec);
            out.law = radial_law_theorem2b(regime.alpha);
            break;
        }
    }
    return out;
}

} // namespace detail

// Writes a CSV of replicates samples; exit 0 on success.
inline int cmd_simulate(const RunConfig& config, unsigned threads = 1) {
    return run_guarded([&]() {
        const EnsembleSpec spec = validate_spec(config.dims);
        const std::vector<LogRadiusSample> samples =
            detail::run_sampler(config, spec, threads);
        const std::string path =
            config.output_path.empty() ? "samples.csv" : config.output_path;
        write_text_file(path, format_samples_csv(samples));
        return exit_pass;
    });
}

// Standardizes samples (from a file, or freshly simulated), runs a
// one-sample KS test against the regime's law and writes the JSON report.
// Exit 0 when p >= ks_level, 1 when rejected.
inline int cmd_test(const RunConfig& config,
                    const std::optional<std::string>& samples_path = std::nullopt,
                    unsigned threads = 1) {
    return run_guarded([&]() {
        const EnsembleSpec spec = validate_spec(config.dims);
        std::vector<LogRadiusSample> samples;
        if (samples_path.has_value()) {
            samples = parse_samples_csv(read_text_file(*samples_path), config.root_seed);
        } else {
            samples = detail::run_sampler(config, spec, threads);
        }
        detail::StandardizedSet set = detail::standardize_for_test(config, spec, samples);
        const LimitLaw law = set.law;
        const KsReport report = ks_one_sample(
            set.values, [&law](double x) { return law_cdf(law, x); }, law.description());
        const std::string path =
            config.output_path.empty() ? "report.json" : config.output_path;
        write_text_file(
            path, format_report_json(report, statistic_token(config.statistic), config));
        return report.p_value >= config.ks_level ? exit_pass : exit_reject;
    });
}

// Runs both samplers on independent seed lanes under one root seed and
// compares them with a two-sample KS test. shape_offset deliberately
// corrupts the gamma shapes of the representation lane; it exists so the
// suite can prove it would catch a broken sampler.
inline int cmd_xcheck(const RunConfig& config, unsigned threads = 1,
                      std::int64_t shape_offset = 0) {
    return run_guarded([&]() {
        const EnsembleSpec spec = validate_spec(config.dims);
        if (spec.n > default_full_solver_cap) {
            throw SizeError("xcheck: n = " + std::to_string(spec.n) +
                            " exceeds the direct-full cap " +
                            std::to_string(default_full_solver_cap));
        }
        const std::uint64_t direct_lane = 1ull << 32;
        const std::vector<LogRadiusSample> repr = sample_batch_repr(
            spec, config.replicates, config.root_seed, threads, 0, shape_offset);
        const std::vector<LogRadiusSample> direct =
            sample_batch_direct(spec, config.replicates, config.root_seed,
                                DirectMethod::Full, threads, direct_lane);
        std::vector<double> a;
        std::vector<double> b;
        a.reserve(repr.size());
        b.reserve(direct.size());
        for (const LogRadiusSample& s : repr) {
            a.push_back(s.log_radius);
        }
        for (const LogRadiusSample& s : direct) {
            b.push_back(s.log_radius);
        }
        const KsReport report = ks_two_sample(a, b, "two-sample");
        const std::string path =
            config.output_path.empty() ? "report.json" : config.output_path;
        write_text_file(path, format_report_json(report, "xcheck", config));
        return report.p_value >= config.ks_level ? exit_pass : exit_reject;
    });
}

// Tabulates the infinite-product cdf over a y grid into a CSV.
inline int cmd_tabulate(double alpha, const std::vector<double>& y_grid,
                        const std::string& out_path) {
    return run_guarded([&]() {
        std::string out = "y,phi_alpha\n";
        char buf[64];
        for (double y : y_grid) {
            const double value = phi_alpha_cdf(y, alpha);
            std::snprintf(buf, sizeof(buf), "%.17g,%.6f\n", y, value);
            out += buf;
        }
        write_text_file(out_path.empty() ? "tabulate.csv" : out_path, out);
        return exit_pass;
    });
}

// Fast deterministic sanity suite; prints one line per check.
inline int cmd_selftest(unsigned threads = 1) {
    (void)threads;
    int failures = 0;
    const auto check = [&failures](const char* name, bool ok) {
        std::cout << (ok ? "ok - " : "FAIL - ") << name << "\n";
        if (!ok) {
            ++failures;
        }
    };
    return run_guarded([&]() {
        {
            RngStream a(123, 7);
            RngStream b(123, 7);
            bool same = true;
            for (int i = 0; i < 10000; ++i) {
                if (a.next_u64() != b.next_u64()) {
                    same = false;
                    break;
                }
            }
            check("rng stream reproducibility", same);
        }
        {
            bool ok = true;
            const double euler_gamma = 0.57721566490153286;
            double harmonic = 0.0;
            for (int n = 1; n <= 50; ++n) {
                if (std::fabs(digamma(n) - (-euler_gamma + harmonic)) > 1e-12) {
                    ok = false;
                }
                harmonic += 1.0 / n;
            }
            check("digamma harmonic-sum identity", ok);
        }
        check("phi_alpha(0, 4) anchor",
              std::fabs(phi_alpha_cdf(0.0, 4.0) - 0.488609) < 1e-5);
        check("kolmogorov p-value at lambda=1",
              std::fabs(kolmogorov_pvalue(1.0) - 0.2699996717) < 1e-6);
        check("gumbel median quantile",
              std::fabs(law_quantile(LimitLaw::gumbel(), 0.5) - 0.36651292058166433) < 1e-8);
        {
            const EnsembleSpec spec = validate_spec({4, 6, 5, 4});
            check("delta_n of (4,6,5,4) is 37/60",
                  std::fabs(delta_n(spec) - 37.0 / 60.0) < 1e-15);
        }
        {
            const EnsembleSpec spec = validate_spec({200, 200});
            const GumbelConstants consts = gumbel_constants_theorem2a(spec);
            const double lhs = consts.alpha_n * std::sqrt(delta_n(spec)) / 2.0;
            const double rhs = std::sqrt(-std::log(delta_n(spec)));
            check("ratio-statistic scale identity", std::fabs(lhs - rhs) < 1e-12);
            LogRadiusSample s;
            s.log_radius = consts.log_scale_center;
            const std::vector<double> v = standardize_theorem2a({s}, consts);
            check("ratio statistic centering", std::fabs(v[0] + consts.beta_n) < 1e-12);
        }
        {
            const EnsembleSpec spec = validate_spec({3, 4, 3});
            const std::vector<LogRadiusSample> repr =
                sample_batch_repr(spec, 500, 2026, 1, 0);
            const std::vector<LogRadiusSample> direct = sample_batch_direct(
                spec, 500, 2026, DirectMethod::Full, 1, 1ull << 32);
            std::vector<double> a;
            std::vector<double> b;
            for (const auto& s : repr) {
                a.push_back(s.log_radius);
            }
            for (const auto& s : direct) {
                b.push_back(s.log_radius);
            }
            const KsReport r = ks_two_sample(a, b);
            check("sampler cross-check on (3,4,3)", r.p_value >= 0.001);
        }
        {
            RngStream rng(42, 0);
            std::vector<double> draws;
            const LimitLaw gum = LimitLaw::gumbel();
            for (int i = 0; i < 500; ++i) {
                draws.push_back(law_quantile(gum, rng.next_double_open()));
            }
            const KsReport r =
                ks_one_sample(draws, [](double x) { return gumbel_cdf(x); });
            check("null calibration of one-sample ks", r.p_value >= 0.001);
        }
        {
            RngStream rng(5, 0);
            const EnsembleSpec spec = validate_spec({8, 8});
            const ComplexMatrix prod = product_chain(spec, rng);
            const double full = spectral_radius_full(prod);
            bool ok;
            try {
                const double power = spectral_radius_power(prod, rng);
                ok = std::fabs(power - full) <= 1e-8 * full;
            } catch (const ConvergenceError&) {
                ok = false;
            }
            check("power iteration agrees with dense solver", ok);
        }
        return failures == 0 ? exit_pass : exit_reject;
    });
}

} // namespace specrad
