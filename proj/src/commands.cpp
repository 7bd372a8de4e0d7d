#include "bellscope/commands.hpp"

#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "bellscope/ensemble.hpp"
#include "bellscope/errors.hpp"
#include "bellscope/io.hpp"
#include "bellscope/rng.hpp"

namespace bellscope {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoSqrt2 = 2.8284271247461902976;

nlohmann::json tolerances_to_json(const Tolerances& t) {
    return {{"analytic", t.analytic},
            {"optimizer", t.optimizer},
            {"monte_carlo", t.monte_carlo},
            {"z_threshold", t.z_threshold}};
}

Tolerances tolerances_from_json(const nlohmann::json& j) {
    require_keys(j, {"analytic", "optimizer", "monte_carlo", "z_threshold"},
                 "tolerances");
    Tolerances t;
    t.analytic = j.value("analytic", t.analytic);
    t.optimizer = j.value("optimizer", t.optimizer);
    t.monte_carlo = j.value("monte_carlo", t.monte_carlo);
    t.z_threshold = j.value("z_threshold", t.z_threshold);
    return t;
}

std::string timestamp_utc() {
    char buffer[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

nlohmann::json make_envelope(const ExperimentConfig& config, const std::string& command,
                             nlohmann::json results) {
    nlohmann::json envelope;
    envelope["artifact"] = kArtifactName;
    envelope["version"] = kArtifactVersion;
    envelope["command"] = command;
    envelope["generated_at"] = timestamp_utc();  // the one volatile field
    envelope["config"] = config.to_json();
    envelope["results"] = std::move(results);
    return envelope;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw ConfigError("failed writing " + path.string());
}

std::filesystem::path prepare_out_dir(const ExperimentConfig& config) {
    const std::filesystem::path dir(config.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string());
    return dir;
}

void write_envelope(const std::filesystem::path& path, const nlohmann::json& envelope) {
    write_text_file(path, envelope.dump(2) + "\n");
}

nlohmann::json chsh_report_to_json(const ChshReport& report) {
    return {{"value", report.value},
            {"per_pair", report.per_pair},
            {"settings", chsh_settings_to_json(report.settings)}};
}

}  // namespace

nlohmann::json ExperimentConfig::default_model() {
    return {{"kind", "quantum"}, {"state", "psi_minus"}, {"realization", "spin_half"}};
}

nlohmann::json ExperimentConfig::default_settings() {
    // The singlet's CHSH-minimizing settings.
    return {{"a", kPi / 4}, {"a_prime", -kPi / 4}, {"b", 0.0}, {"b_prime", kPi / 2}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    require_keys(j,
                 {"model", "settings", "reference_state", "optimize", "grid_points",
                  "refine_iters", "n_per_pair", "seed", "out_dir", "scan", "spectrum",
                  "tolerances"},
                 "config");
    ExperimentConfig config;
    try {
        if (j.contains("model")) config.model = j.at("model");
        if (j.contains("settings")) config.settings = j.at("settings");
        if (j.contains("reference_state")) config.reference_state = j.at("reference_state");
        if (j.contains("optimize")) {
            const std::string mode = j.at("optimize").get<std::string>();
            if (mode != "min" && mode != "max")
                throw ConfigError("optimize must be \"min\" or \"max\"");
            config.optimize = mode;
        }
        config.grid_points = j.value("grid_points", config.grid_points);
        config.refine_iters = j.value("refine_iters", config.refine_iters);
        config.n_per_pair = j.value("n_per_pair", config.n_per_pair);
        config.seed = j.value("seed", config.seed);
        config.out_dir = j.value("out_dir", config.out_dir);
        if (j.contains("scan")) {
            require_keys(j.at("scan"), {"points", "theta_max"}, "scan");
            config.scan.points = j.at("scan").value("points", config.scan.points);
            config.scan.theta_max = j.at("scan").value("theta_max", config.scan.theta_max);
        }
        if (j.contains("spectrum")) {
            require_keys(j.at("spectrum"), {"points"}, "spectrum");
            config.spectrum.points =
                j.at("spectrum").value("points", config.spectrum.points);
        }
        if (j.contains("tolerances"))
            config.tolerances = tolerances_from_json(j.at("tolerances"));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    // Validate eagerly so bad configs fail before any work happens.
    config.make_model();
    config.make_settings();
    config.make_reference_state();
    return config;
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["model"] = model;
    j["settings"] = settings;
    if (reference_state) j["reference_state"] = *reference_state;
    if (optimize) j["optimize"] = *optimize;
    j["grid_points"] = grid_points;
    j["refine_iters"] = refine_iters;
    j["n_per_pair"] = n_per_pair;
    j["seed"] = seed;
    j["out_dir"] = out_dir;
    j["scan"] = {{"points", scan.points}, {"theta_max", scan.theta_max}};
    j["spectrum"] = {{"points", spectrum.points}};
    j["tolerances"] = tolerances_to_json(tolerances);
    return j;
}

std::unique_ptr<CorrelationModel> ExperimentConfig::make_model() const {
    return model_from_json(model);
}

ChshSettings ExperimentConfig::make_settings() const {
    return chsh_settings_from_json(settings);
}

BellState ExperimentConfig::make_reference_state() const {
    if (reference_state) return bell_state_from_json(*reference_state);
    if (model.is_object() && model.value("kind", "") == "quantum") {
        nlohmann::json state = model;
        state.erase("kind");
        return bell_state_from_json(state);
    }
    return BellState::spin_half(BellLabel::PsiMinus);
}

nlohmann::json cmd_chsh(const ExperimentConfig& config) {
    const auto dir = prepare_out_dir(config);
    const auto model = config.make_model();

    ChshReport report;
    if (config.optimize) {
        const OptimizeMode mode =
            *config.optimize == "max" ? OptimizeMode::Maximize : OptimizeMode::Minimize;
        report = optimize_chsh(*model, mode, config.grid_points, config.refine_iters);
    } else {
        report = chsh_value(*model, config.make_settings());
    }

    nlohmann::json results = chsh_report_to_json(report);
    results["optimized"] = config.optimize.has_value();
    results["tolerance"] =
        config.optimize ? config.tolerances.optimizer : config.tolerances.analytic;

    std::ostringstream csv;
    csv << "alice_setting,bob_setting,correlation\n";
    for (int i = 0; i < 4; ++i) {
        const auto pair = report.settings.pair(i);
        csv << encode_setting(pair.alice) << ',' << encode_setting(pair.bob) << ','
            << format_double(report.per_pair[std::size_t(i)]) << '\n';
    }
    write_text_file(dir / "chsh_correlations.csv", csv.str());

    const nlohmann::json envelope = make_envelope(config, "chsh", std::move(results));
    write_envelope(dir / "chsh_report.json", envelope);
    return envelope;
}

nlohmann::json cmd_scan(const ExperimentConfig& config) {
    const auto dir = prepare_out_dir(config);
    const auto model = config.make_model();
    const auto* quantum = dynamic_cast<const QuantumModel*>(model.get());
    if (quantum == nullptr) throw ModelError("scan requires a quantum model");
    if (config.scan.points < 2) throw ConfigError("scan needs at least 2 points");

    const BellState& state = quantum->state();
    std::ostringstream csv;
    csv << "theta,p_pp,p_pm,p_mp,p_mm,correlation,conditional_avg_plus\n";
    for (int k = 0; k < config.scan.points; ++k) {
        const double theta = config.scan.theta_max * k / (config.scan.points - 1);
        const JointDistribution d = joint_distribution(state, theta, 0.0);
        csv << format_double(theta) << ',' << format_double(d.p_pp) << ','
            << format_double(d.p_pm) << ',' << format_double(d.p_mp) << ','
            << format_double(d.p_mm) << ',' << format_double(correlation(d)) << ','
            << format_double(bob_average_given_alice(d, +1)) << '\n';
    }
    write_text_file(dir / "scan.csv", csv.str());

    nlohmann::json results = {{"rows", config.scan.points},
                              {"theta_max", config.scan.theta_max},
                              {"csv", "scan.csv"}};
    const nlohmann::json envelope = make_envelope(config, "scan", std::move(results));
    write_envelope(dir / "scan_report.json", envelope);
    return envelope;
}

nlohmann::json cmd_pr_spectrum(const ExperimentConfig& config) {
    const auto dir = prepare_out_dir(config);
    if (config.spectrum.points < 2) throw ConfigError("spectrum needs at least 2 points");
    const BellState reference = config.make_reference_state();
    const ChshSettings assignment = ChshSettings::paper_pr_assignment();

    std::ostringstream csv;
    csv << "c,e,chsh_first_cell,chsh_fourth_cell,conservation_deviation\n";
    double first_start = 0.0, first_end = 0.0;
    for (int k = 0; k < config.spectrum.points; ++k) {
        const double c = 0.5 * k / (config.spectrum.points - 1);
        const double e = 0.5 - c;
        const GeneralizedPrModel first(c, e, ReplacedCell::FirstCorrelation);
        const GeneralizedPrModel fourth(c, e, ReplacedCell::FourthCorrelation);
        const double chsh_first = generalized_pr_chsh(first);
        const double chsh_fourth = generalized_pr_chsh(fourth);
        const double deviation = conservation_deviation(first, reference, assignment);
        if (k == 0) first_start = chsh_first;
        if (k == config.spectrum.points - 1) first_end = chsh_first;
        csv << format_double(c) << ',' << format_double(e) << ','
            << format_double(chsh_first) << ',' << format_double(chsh_fourth) << ','
            << format_double(deviation) << '\n';
    }
    write_text_file(dir / "pr_spectrum.csv", csv.str());

    nlohmann::json results = {{"rows", config.spectrum.points},
                              {"chsh_first_cell_start", first_start},
                              {"chsh_first_cell_end", first_end},
                              {"csv", "pr_spectrum.csv"}};
    const nlohmann::json envelope =
        make_envelope(config, "pr-spectrum", std::move(results));
    write_envelope(dir / "pr_spectrum_report.json", envelope);
    return envelope;
}

namespace {

nlohmann::json partition_to_json(const PartitionReport& p) {
    return {{"by_party", p.by_party == Party::Alice ? "alice" : "bob"},
            {"count_plus", p.count_plus},
            {"count_minus", p.count_minus},
            {"avg_given_plus", p.avg_given_plus},
            {"avg_given_minus", p.avg_given_minus},
            {"expected_plus", p.expected_plus},
            {"expected_minus", p.expected_minus},
            {"std_error_plus", p.std_error_plus},
            {"std_error_minus", p.std_error_minus},
            {"empty_cell", p.empty_cell}};
}

nlohmann::json scan_report_to_json(const ConservationScanReport& scan) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& cell : scan.cells)
        cells.push_back({{"pair_index", cell.pair_index},
                         {"alice_outcome", cell.alice_outcome},
                         {"empirical", cell.empirical},
                         {"target", cell.target},
                         {"std_error", cell.std_error},
                         {"deviation", cell.deviation}});
    return {{"cells", cells},
            {"max_deviation", scan.max_deviation},
            {"max_z", scan.max_z},
            {"exact_violation", scan.exact_violation}};
}

}  // namespace

nlohmann::json cmd_simulate(const ExperimentConfig& config) {
    const auto dir = prepare_out_dir(config);
    const auto model = config.make_model();
    const ChshSettings settings = config.make_settings();
    const auto pairs = settings.pairs();
    const std::vector<SettingPair> schedule(pairs.begin(), pairs.end());

    const Ensemble ensemble = simulate_ensemble(*model, schedule, config.n_per_pair,
                                                config.seed, config.model.dump());

    std::ostringstream csv;
    write_ensemble_csv(ensemble, csv);
    write_text_file(dir / "ensemble.csv", csv.str());
    write_text_file(dir / "ensemble.json", ensemble_to_json(ensemble).dump(2) + "\n");

    const bool angled = pairs[0].alice.angle && pairs[0].bob.angle &&
                        pairs[3].alice.angle && pairs[3].bob.angle;
    const BellState reference = config.make_reference_state();

    nlohmann::json pair_results = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
        const SettingPair& pair = pairs[std::size_t(i)];
        const CorrelationEstimate est = estimate_correlation(ensemble, pair);

        std::array<std::int64_t, 4> cell_counts{};
        for (std::int64_t t = ensemble.block_begin(std::size_t(i));
             t < ensemble.block_end(std::size_t(i)); ++t)
            ++cell_counts[std::size_t(ensemble.cell(t))];

        nlohmann::json entry = {
            {"alice_setting", encode_setting(pair.alice)},
            {"bob_setting", encode_setting(pair.bob)},
            {"n", est.n},
            {"estimate", est.estimate},
            {"std_error", est.std_error},
            {"cell_counts", cell_counts},
            {"partition_by_alice",
             partition_to_json(partition_analysis(ensemble, *model, pair, Party::Alice))},
            {"partition_by_bob",
             partition_to_json(partition_analysis(ensemble, *model, pair, Party::Bob))},
        };
        if (angled) {
            // Trials landing in outcome cells the reference state forbids at
            // these angles.
            const JointDistribution target =
                joint_distribution(reference, *pair.alice.angle, *pair.bob.angle);
            std::int64_t violating = 0;
            for (int cell = 0; cell < 4; ++cell)
                if (target.cell(cell) < 1e-15) violating += cell_counts[std::size_t(cell)];
            entry["violating_trials"] = violating;
        }
        pair_results.push_back(std::move(entry));
    }

    const ChshEstimate chsh = estimate_chsh(ensemble, settings);
    nlohmann::json results = {
        {"pairs", pair_results},
        {"chsh_estimate", {{"value", chsh.value}, {"std_error", chsh.std_error}}},
        {"files", {"ensemble.csv", "ensemble.json"}},
        {"tolerance_monte_carlo", config.tolerances.monte_carlo},
        {"z_threshold", config.tolerances.z_threshold},
    };
    if (angled) {
        const ConservationScanReport scan = conservation_violation_scan(
            *model, reference, settings, config.n_per_pair, config.seed);
        results["conservation_scan"] = scan_report_to_json(scan);
    }

    const nlohmann::json envelope = make_envelope(config, "simulate", std::move(results));
    write_envelope(dir / "simulate_report.json", envelope);
    return envelope;
}

// ---------------------------------------------------------------------------
// verify

namespace {

struct Check {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

Check make_check(std::string name, double deviation, double tolerance,
                 std::string detail = {}) {
    const bool pass = deviation <= tolerance;
    return {std::move(name), deviation, tolerance, pass, std::move(detail)};
}

double check_amplitudes(double /*tol*/) {
    CounterRng rng(0xA11CE, 1);
    const BellState singlet = BellState::spin_half(BellLabel::PsiMinus);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Angle alpha{rng.uniform(-2.0 * kPi, 2.0 * kPi)};
        const Angle beta{rng.uniform(-2.0 * kPi, 2.0 * kPi)};
        const AmplitudeSet amps = singlet_amplitudes(alpha, beta);
        const JointDistribution d = joint_distribution(singlet, alpha, beta);
        worst = std::max({worst, std::abs(std::norm(amps.a_uu) - d.p_pp),
                          std::abs(std::norm(amps.a_ud) - d.p_pm),
                          std::abs(std::norm(amps.a_du) - d.p_mp),
                          std::abs(std::norm(amps.a_dd) - d.p_mm),
                          std::abs(amps.a_ud + amps.a_du),
                          std::abs(amps.a_uu + amps.a_dd)});
    }
    return worst;
}

double check_correlation_closed_form() {
    CounterRng rng(0xC0441, 2);
    const BellState singlet = BellState::spin_half(BellLabel::PsiMinus);
    const BellState mermin = BellState::photon(BellLabel::PhiPlus);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double alpha = rng.uniform(-2.0 * kPi, 2.0 * kPi);
        const double beta = rng.uniform(-2.0 * kPi, 2.0 * kPi);
        worst = std::max(
            worst, std::abs(correlation(joint_distribution(singlet, alpha, beta)) +
                            std::cos(alpha - beta)));
        worst = std::max(
            worst, std::abs(correlation(joint_distribution(mermin, alpha, beta)) -
                            std::cos(2.0 * (alpha - beta))));
    }
    return worst;
}

double check_solver_equivalence() {
    // Photon realization maps the device angle straight to the Hilbert angle,
    // so joint_distribution at (theta, 0) is the closed form at theta.
    const BellState unlike = BellState::photon(BellLabel::PsiMinus);
    const BellState like = BellState::photon(BellLabel::PhiPlus);
    double worst = 0.0;
    for (int k = 0; k <= 720; ++k) {
        const double theta = 2.0 * kPi * k / 720.0;
        const JointDistribution su = solve_conservation_state(theta, Parity::Unlike);
        const JointDistribution cu = joint_distribution(unlike, theta, 0.0);
        const JointDistribution sl = solve_conservation_state(theta, Parity::Like);
        const JointDistribution cl = joint_distribution(like, theta, 0.0);
        for (int cell = 0; cell < 4; ++cell)
            worst = std::max({worst, std::abs(su.cell(cell) - cu.cell(cell)),
                              std::abs(sl.cell(cell) - cl.cell(cell))});
    }
    return worst;
}

double check_conditional_average() {
    CounterRng rng(0xC04D, 3);
    double worst = 0.0;
    for (BellLabel label : {BellLabel::PsiMinus, BellLabel::PsiPlus, BellLabel::PhiPlus,
                            BellLabel::PhiMinus})
        for (Realization realization : {Realization::SpinHalf, Realization::Photon}) {
            const BellState state = BellState::make(label, realization);
            for (int i = 0; i < 250; ++i) {
                const double alpha = rng.uniform(-2.0 * kPi, 2.0 * kPi);
                const double beta = rng.uniform(-2.0 * kPi, 2.0 * kPi);
                const JointDistribution d = joint_distribution(state, alpha, beta);
                // The unlike-parity formula takes twice the Hilbert angle, the
                // like-parity formula takes the Hilbert angle itself.
                const double hilbert = state.hilbert_angle(alpha, beta);
                const double theta =
                    state.parity() == Parity::Unlike ? 2.0 * hilbert : hilbert;
                for (int outcome : {+1, -1})
                    worst = std::max(
                        worst, std::abs(conditional_average(state, theta, outcome) -
                                        bob_average_given_alice(d, outcome)));
            }
        }
    return worst;
}

ChshSettings random_angle_settings(CounterRng& rng) {
    return ChshSettings::angles(rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi),
                                rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi));
}

double check_no_signaling(const CorrelationModel& configured,
                          const ChshSettings& configured_settings, double tol,
                          int lhv_draws) {
    double worst = no_signaling_check(configured, configured_settings, tol).max_violation;

    CounterRng rng(0x0516, 4);
    const QuantumModel singlet(BellState::spin_half(BellLabel::PsiMinus));
    const QuantumModel mermin(BellState::photon(BellLabel::PhiPlus));
    for (int i = 0; i < 50; ++i) {
        const ChshSettings s = random_angle_settings(rng);
        worst = std::max(worst, no_signaling_check(singlet, s, tol).max_violation);
        worst = std::max(worst, no_signaling_check(mermin, s, tol).max_violation);
    }

    const ChshSettings slots = ChshSettings::slots();
    worst = std::max(worst, no_signaling_check(PrBoxModel(), slots, tol).max_violation);
    for (double c : {0.0, 0.1, 0.25, 0.4, 0.5})
        for (ReplacedCell cell :
             {ReplacedCell::FirstCorrelation, ReplacedCell::FourthCorrelation})
            worst = std::max(worst, no_signaling_check(GeneralizedPrModel(c, 0.5 - c, cell),
                                                       slots, tol)
                                        .max_violation);
    for (int i = 0; i < lhv_draws; ++i)
        worst = std::max(
            worst,
            no_signaling_check(LhvModel::random(std::uint64_t(i)), slots, tol).max_violation);
    return worst;
}

double check_nprf(const CorrelationModel& configured,
                  const ChshSettings& configured_settings, double tol, int lhv_draws) {
    double worst = nprf_marginal_check(configured, configured_settings, tol).max_violation;

    CounterRng rng(0x0517, 5);
    const QuantumModel singlet(BellState::spin_half(BellLabel::PsiMinus));
    const QuantumModel mermin(BellState::photon(BellLabel::PhiPlus));
    for (int i = 0; i < 50; ++i) {
        const ChshSettings s = random_angle_settings(rng);
        worst = std::max(worst, nprf_marginal_check(singlet, s, tol).max_violation);
        worst = std::max(worst, nprf_marginal_check(mermin, s, tol).max_violation);
    }

    const ChshSettings slots = ChshSettings::slots();
    worst = std::max(worst, nprf_marginal_check(PrBoxModel(), slots, tol).max_violation);
    for (double c : {0.0, 0.1, 0.25, 0.4, 0.5})
        for (ReplacedCell cell :
             {ReplacedCell::FirstCorrelation, ReplacedCell::FourthCorrelation})
            worst = std::max(worst, nprf_marginal_check(GeneralizedPrModel(c, 0.5 - c, cell),
                                                        slots, tol)
                                        .max_violation);
    // Globally flip-symmetric mixtures are the LHV subset with exact
    // equal-frequency outcomes.
    for (int i = 0; i < lhv_draws; ++i)
        worst = std::max(worst,
                         nprf_marginal_check(LhvModel::random_symmetric(std::uint64_t(i)),
                                             slots, tol)
                             .max_violation);
    return worst;
}

struct Su2TableResult {
    double invariant_max = 0.0;     // worst deviation on the invariant pairs
    double noninvariant_min = 1e9;  // weakest peak deviation elsewhere
};

Su2TableResult check_su2_table() {
    const auto is_invariant = [](BellLabel label, PauliAxis axis) {
        switch (label) {
            case BellLabel::PsiMinus: return true;
            case BellLabel::PsiPlus: return axis == PauliAxis::Z;
            case BellLabel::PhiMinus: return axis == PauliAxis::X;
            case BellLabel::PhiPlus: return axis == PauliAxis::Y;
        }
        return false;
    };
    Su2TableResult result;
    for (BellLabel label : {BellLabel::PsiMinus, BellLabel::PsiPlus, BellLabel::PhiPlus,
                            BellLabel::PhiMinus})
        for (PauliAxis axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
            double peak = 0.0;
            for (int k = 0; k <= 36; ++k) {
                const double theta = kPi * k / 36.0;
                peak = std::max(peak, su2_invariance_deviation(label, axis, theta));
            }
            if (is_invariant(label, axis))
                result.invariant_max = std::max(result.invariant_max, peak);
            else
                result.noninvariant_min = std::min(result.noninvariant_min, peak);
        }
    return result;
}

double check_pr_spectrum_formula(bool& monotone) {
    const ChshSettings slots = ChshSettings::slots();
    double worst = 0.0;
    double previous = -1.0;
    monotone = true;
    for (int k = 0; k <= 100; ++k) {
        const double c = 0.5 * k / 100.0;
        const double e = 0.5 - c;
        for (ReplacedCell cell :
             {ReplacedCell::FirstCorrelation, ReplacedCell::FourthCorrelation}) {
            const GeneralizedPrModel model(c, e, cell);
            worst = std::max(worst, std::abs(generalized_pr_chsh(model) -
                                             chsh_value(model, slots).value));
        }
        const double first =
            generalized_pr_chsh(GeneralizedPrModel(c, e, ReplacedCell::FirstCorrelation));
        if (k > 0 && first <= previous) monotone = false;
        previous = first;
    }
    return worst;
}

}  // namespace

nlohmann::json cmd_verify(const ExperimentConfig& config) {
    const double tol = config.tolerances.analytic;
    const auto configured_model = config.make_model();
    const ChshSettings configured_settings = config.make_settings();
    std::vector<Check> checks;

    checks.push_back(
        make_check("amplitudes-vs-distribution", check_amplitudes(tol), tol));
    checks.push_back(
        make_check("correlation-closed-form", check_correlation_closed_form(), tol));
    checks.push_back(
        make_check("conservation-solver-equivalence", check_solver_equivalence(), tol,
                   "721-point grid, both parities"));
    checks.push_back(
        make_check("conditional-average-consistency", check_conditional_average(), tol));
    checks.push_back(make_check(
        "no-signaling",
        check_no_signaling(*configured_model, configured_settings, tol, 1000), tol,
        "configured model, quantum, PR, generalized PR, 1000 LHV draws"));
    checks.push_back(
        make_check("nprf-marginals",
                   check_nprf(*configured_model, configured_settings, tol, 1000), tol,
                   "configured model, quantum, PR, generalized PR, 1000 symmetric LHV"));

    const Su2TableResult su2 = check_su2_table();
    {
        Check check = make_check("su2-invariance-table", su2.invariant_max, tol);
        check.pass = check.pass && su2.noninvariant_min > 1e-3;
        check.detail = "weakest non-invariant peak " + format_double(su2.noninvariant_min);
        checks.push_back(check);
    }

    {
        const BoundOrderingReport bounds = bound_ordering_report();
        Check check;
        check.name = "bound-ordering";
        check.tolerance = config.tolerances.optimizer;
        check.deviation = std::max({std::abs(bounds.classical - 2.0),
                                    std::abs(bounds.quantum - kTwoSqrt2),
                                    std::abs(bounds.pr - 4.0)});
        check.pass = check.deviation <= check.tolerance &&
                     bounds.classical < bounds.quantum && bounds.quantum < bounds.pr;
        check.detail = "(" + format_double(bounds.classical) + ", " +
                       format_double(bounds.quantum) + ", " + format_double(bounds.pr) +
                       ")";
        checks.push_back(check);
    }

    {
        bool monotone = true;
        const double gap = check_pr_spectrum_formula(monotone);
        Check check = make_check("pr-spectrum-formula", gap, tol,
                                 "closed form vs generic CHSH, 101-point grid");
        check.pass = check.pass && monotone;
        if (!monotone) check.detail += "; first-cell CHSH not strictly increasing";
        checks.push_back(check);
    }

    for (const bool unlike : {true, false}) {
        const BellState state = unlike ? BellState::spin_half(BellLabel::PsiMinus)
                                       : BellState::photon(BellLabel::PhiPlus);
        const EigenbasisFitReport fit = pr_eigenbasis_check(state);
        Check check;
        check.name = unlike ? "eigenbasis-configuration-unlike"
                            : "eigenbasis-configuration-like";
        check.tolerance = 1e-6;
        check.deviation = std::max(fit.fit_residual, std::abs(fit.contradiction - 1.0));
        check.pass = check.deviation <= check.tolerance;
        check.detail = "last three PR cells fit with residual " +
                       format_double(fit.fit_residual) + ", first cell contradicts by " +
                       format_double(fit.contradiction);
        checks.push_back(check);
    }

    {
        // Serial and OpenMP generation agree and reruns are bit-identical.
        const QuantumModel singlet(BellState::spin_half(BellLabel::PsiMinus));
        const auto pairs = ChshSettings::angles(kPi / 4, -kPi / 4, 0.0, kPi / 2).pairs();
        const std::vector<SettingPair> schedule(pairs.begin(), pairs.end());
        const Ensemble a = simulate_ensemble(singlet, schedule, 20000, 99);
        const Ensemble b = simulate_ensemble_serial(singlet, schedule, 20000, 99);
        const Ensemble c = simulate_ensemble(singlet, schedule, 20000, 99);
        const bool identical = a.cells() == b.cells() && a.cells() == c.cells();
        Check check;
        check.name = "ensemble-reproducibility";
        check.tolerance = 0.0;
        check.deviation = identical ? 0.0 : 1.0;
        check.pass = identical;
        check.detail = "OpenMP vs serial reference, plus rerun";
        checks.push_back(check);
    }

    nlohmann::json check_list = nlohmann::json::array();
    nlohmann::json failures = nlohmann::json::array();
    bool all_pass = true;
    for (const auto& check : checks) {
        check_list.push_back({{"name", check.name},
                              {"deviation", check.deviation},
                              {"tolerance", check.tolerance},
                              {"pass", check.pass},
                              {"detail", check.detail}});
        if (!check.pass) {
            failures.push_back(check.name);
            all_pass = false;
        }
    }

    nlohmann::json envelope = make_envelope(
        config, "verify",
        {{"checks", check_list}, {"failures", failures}, {"pass", all_pass}});
    envelope["pass"] = all_pass;
    return envelope;
}

}  // namespace bellscope
