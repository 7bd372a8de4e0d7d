// Batch-experiment surface behind the CLI: config schema, report envelopes,
// and the five commands (chsh, scan, verify, pr-spectrum, simulate). Each
// command writes its artifacts under the configured output directory and
// returns the report envelope. Everything is deterministic given the config;
// the envelope's generated_at header is the single volatile field.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"

#include "bellscope/chsh.hpp"
#include "bellscope/models.hpp"

namespace bellscope {

inline constexpr const char* kArtifactName = "bellscope";
inline constexpr const char* kArtifactVersion = "0.1.0";

struct Tolerances {
    double analytic = 1e-12;     // exact-identity checks
    double optimizer = 1e-6;     // quantum optimum vs 2 sqrt 2
    double monte_carlo = 5e-3;   // estimate vs analytic correlation
    double z_threshold = 3.0;    // stderr multiples for pass/fail flags
};

struct ScanSpec {
    int points = 721;
    double theta_max = 6.283185307179586476925286766559;  // 2 pi
};

struct SpectrumSpec {
    int points = 101;
};

struct ExperimentConfig {
    nlohmann::json model = default_model();
    nlohmann::json settings = default_settings();
    std::optional<nlohmann::json> reference_state;
    std::optional<std::string> optimize;  // "min" or "max"
    int grid_points = 16;
    int refine_iters = 60;
    std::int64_t n_per_pair = 100000;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    ScanSpec scan;
    SpectrumSpec spectrum;
    Tolerances tolerances;

    static nlohmann::json default_model();
    static nlohmann::json default_settings();

    // Rejects unknown keys at every level; throws ConfigError.
    static ExperimentConfig from_json(const nlohmann::json& j);
    // Full echo with defaults materialized; feeding it back reproduces the run.
    nlohmann::json to_json() const;

    std::unique_ptr<CorrelationModel> make_model() const;
    ChshSettings make_settings() const;
    // Conservation targets: the explicit reference_state if given, otherwise
    // the quantum model's own state, otherwise the spin-1/2 singlet.
    BellState make_reference_state() const;
};

nlohmann::json cmd_chsh(const ExperimentConfig& config);
nlohmann::json cmd_scan(const ExperimentConfig& config);
nlohmann::json cmd_pr_spectrum(const ExperimentConfig& config);
nlohmann::json cmd_simulate(const ExperimentConfig& config);

// Runs the full invariant suite (plus the configured model's marginal
// checks) and reports one entry per check. envelope["pass"] decides the
// process exit code: 0 when everything holds, 1 otherwise.
nlohmann::json cmd_verify(const ExperimentConfig& config);

}  // namespace bellscope
