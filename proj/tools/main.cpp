#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specrad/specrad.hpp"

namespace {

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.empty()) {
        return grid;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        char* end = nullptr;
        const double value = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0') {
            throw specrad::ParseError("grid: cannot parse '" + tok + "' as a number");
        }
        grid.push_back(value);
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    return grid;
}

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string out_path;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* out_opt = nullptr;
};

void add_common(CLI::App* sub, CommonArgs& args, bool with_config) {
    if (with_config) {
        // No ExistingFile check: a missing file should surface as an I/O
        // error (exit 3), same as any other unreadable input.
        sub->add_option("--config", args.config_path, "JSON config file")->required();
    }
    args.seed_opt = sub->add_option("--seed", args.seed, "root seed (overrides config)");
    sub->add_option("--threads", args.threads, "worker threads (affects speed only)");
    args.out_opt = sub->add_option("--out", args.out_path, "output path (overrides config)");
}

specrad::RunConfig load_config(const CommonArgs& args) {
    specrad::RunConfig config = specrad::parse_config(specrad::read_text_file(args.config_path));
    if (args.seed_opt != nullptr && args.seed_opt->count() > 0) {
        config.root_seed = args.seed;
    }
    if (args.out_opt != nullptr && args.out_opt->count() > 0) {
        config.output_path = args.out_path;
    }
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral radius sampler and limit-law test bench for products of "
                 "rectangular complex Ginibre matrices"};
    app.require_subcommand(1);

    CommonArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "sample log spectral radii into a CSV");
    add_common(sim, sim_args, true);

    CommonArgs test_args;
    std::string samples_path;
    CLI::App* test = app.add_subcommand(
        "test", "KS-test standardized samples against the limiting law");
    add_common(test, test_args, true);
    CLI::Option* samples_opt = test->add_option(
        "--samples", samples_path, "existing samples CSV (otherwise simulate fresh)");

    CommonArgs xcheck_args;
    std::int64_t shape_offset = 0;
    CLI::App* xcheck = app.add_subcommand(
        "xcheck", "two-sample KS between the exact and the direct sampler");
    add_common(xcheck, xcheck_args, true);
    xcheck
        ->add_option("--shape-offset", shape_offset,
                     "perturb gamma shapes by this offset (sensitivity check)")
        ->group(""); // hidden from help

    CommonArgs tab_args;
    double alpha = 0.0;
    std::string grid_text = "-4,-3,-2,-1,0,1,2,3,4";
    CLI::App* tab = app.add_subcommand("tabulate", "tabulate the finite-alpha limit cdf");
    tab->add_option("--alpha", alpha, "alpha parameter (>= 1e-6)")->required();
    tab->add_option("--grid", grid_text, "comma-separated y values");
    add_common(tab, tab_args, false);

    CommonArgs self_args;
    CLI::App* self = app.add_subcommand("selftest", "run the built-in sanity suite");
    add_common(self, self_args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return specrad::exit_config;
    }

    return specrad::run_guarded([&]() -> int {
        if (sim->parsed()) {
            return specrad::cmd_simulate(load_config(sim_args), sim_args.threads);
        }
        if (test->parsed()) {
            std::optional<std::string> samples;
            if (samples_opt->count() > 0) {
                samples = samples_path;
            }
            return specrad::cmd_test(load_config(test_args), samples, test_args.threads);
        }
        if (xcheck->parsed()) {
            return specrad::cmd_xcheck(load_config(xcheck_args), xcheck_args.threads,
                                       shape_offset);
        }
        if (tab->parsed()) {
            return specrad::cmd_tabulate(alpha, parse_grid(grid_text), tab_args.out_path);
        }
        return specrad::cmd_selftest(self_args.threads);
    });
}
