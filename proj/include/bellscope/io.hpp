// Serialization: model descriptions and CHSH settings to/from JSON, trial
// ensembles to/from CSV and a JSON envelope, and the 17-significant-digit
// float formatting shared by every CSV writer.

#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "json.hpp"

#include "bellscope/ensemble.hpp"
#include "bellscope/models.hpp"
#include "bellscope/settings.hpp"

namespace bellscope {

// %.17g: enough digits to round-trip any double exactly.
std::string format_double(double value);

// Rejects keys outside the allowed set; every config object is closed.
void require_keys(const nlohmann::json& object,
                  std::initializer_list<const char*> allowed, const char* where);

// Settings encode as "<slot>" for discrete labels and "<slot>:<angle>" for
// angled ones, with slot in {a, a_prime} or {b, b_prime} by party.
std::string encode_setting(const SettingLabel& label);
SettingLabel decode_setting(Party party, const std::string& text);

nlohmann::json model_to_json(const CorrelationModel& model);
std::unique_ptr<CorrelationModel> model_from_json(const nlohmann::json& j);

nlohmann::json bell_state_to_json(const BellState& state);
BellState bell_state_from_json(const nlohmann::json& j);

// Accepts {"a":...,"a_prime":...,"b":...,"b_prime":...} for angled settings,
// {"preset":"slots"} for discrete labels, and
// {"preset":"paper_pr_assignment","base":...} for the PR angle identification.
nlohmann::json chsh_settings_to_json(const ChshSettings& settings);
ChshSettings chsh_settings_from_json(const nlohmann::json& j);

// CSV with header "index,alice_setting,bob_setting,alice_outcome,bob_outcome",
// LF line endings. Import expects trials grouped by consecutive equal
// setting pairs, which is how every writer in this project lays them out.
void write_ensemble_csv(const Ensemble& ensemble, std::ostream& out);
Ensemble read_ensemble_csv(std::istream& in);

nlohmann::json ensemble_to_json(const Ensemble& ensemble);
Ensemble ensemble_from_json(const nlohmann::json& j);

}  // namespace bellscope
