// bellscope command line: chsh, scan, verify, pr-spectrum, simulate.
// Exit codes: 0 success, 1 failed verification check, 2 config error,
// 3 model error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "bellscope/commands.hpp"
#include "bellscope/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

struct CliOverrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> optimize;
    std::optional<int> grid;
    std::optional<std::int64_t> n;
};

void add_common_flags(CLI::App* cmd, CliOverrides& overrides) {
    cmd->add_option("--config", overrides.config_path, "JSON config file");
    cmd->add_option("--seed", overrides.seed, "override the RNG seed");
    cmd->add_option("--out", overrides.out_dir, "output directory");
}

bellscope::ExperimentConfig load_config(const CliOverrides& overrides) {
    nlohmann::json j = nlohmann::json::object();
    if (!overrides.config_path.empty()) {
        std::ifstream in(overrides.config_path);
        if (!in)
            throw bellscope::ConfigError("cannot open config file " +
                                         overrides.config_path);
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw bellscope::ConfigError(std::string("config is not valid JSON: ") +
                                         e.what());
        }
    }
    auto config = bellscope::ExperimentConfig::from_json(j);
    if (overrides.seed) config.seed = *overrides.seed;
    if (overrides.out_dir) config.out_dir = *overrides.out_dir;
    if (overrides.optimize) {
        if (*overrides.optimize != "min" && *overrides.optimize != "max")
            throw bellscope::ConfigError("--optimize takes min or max");
        config.optimize = *overrides.optimize;
    }
    if (overrides.grid) config.grid_points = *overrides.grid;
    if (overrides.n) config.n_per_pair = *overrides.n;
    return config;
}

void apply_thread_override() {
#ifdef _OPENMP
    if (const char* env = std::getenv("BELLSCOPE_THREADS")) {
        const int threads = std::atoi(env);
        if (threads > 0) omp_set_num_threads(threads);
    }
#endif
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation laboratory for classical, quantum and superquantum models"};
    app.require_subcommand(1);

    CliOverrides overrides;
    auto* chsh = app.add_subcommand("chsh", "evaluate or optimize the CHSH quantity");
    add_common_flags(chsh, overrides);
    chsh->add_option("--optimize", overrides.optimize,
                     "search the settings space (min or max)");
    chsh->add_option("--grid", overrides.grid, "optimizer grid points per angle");

    auto* scan = app.add_subcommand("scan", "sweep theta and emit distribution curves");
    add_common_flags(scan, overrides);

    auto* verify = app.add_subcommand("verify", "run the full invariant suite");
    add_common_flags(verify, overrides);

    auto* spectrum =
        app.add_subcommand("pr-spectrum", "sweep the generalized PR family");
    add_common_flags(spectrum, overrides);

    auto* simulate = app.add_subcommand("simulate", "generate and analyze an ensemble");
    add_common_flags(simulate, overrides);
    simulate->add_option("--n", overrides.n, "trials per setting pair");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    apply_thread_override();

    try {
        const auto config = load_config(overrides);
        nlohmann::json envelope;
        int exit_code = 0;
        if (chsh->parsed()) {
            envelope = bellscope::cmd_chsh(config);
        } else if (scan->parsed()) {
            envelope = bellscope::cmd_scan(config);
        } else if (verify->parsed()) {
            envelope = bellscope::cmd_verify(config);
            if (!envelope.value("pass", false)) exit_code = 1;
        } else if (spectrum->parsed()) {
            envelope = bellscope::cmd_pr_spectrum(config);
        } else if (simulate->parsed()) {
            envelope = bellscope::cmd_simulate(config);
        }
        std::cout << envelope.dump(2) << "\n";
        return exit_code;
    } catch (const bellscope::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const bellscope::ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 3;
    }
}
