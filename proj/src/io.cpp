#include "bellscope/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "bellscope/errors.hpp"

namespace bellscope {

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void require_keys(const nlohmann::json& object,
                  std::initializer_list<const char*> allowed, const char* where) {
    if (!object.is_object())
        throw ConfigError(std::string(where) + " must be a JSON object");
    for (const auto& item : object.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
    }
}

namespace {

const char* slot_name(Party party, Slot slot) {
    if (party == Party::Alice) return slot == Slot::Unprimed ? "a" : "a_prime";
    return slot == Slot::Unprimed ? "b" : "b_prime";
}

Slot slot_from_name(Party party, const std::string& name) {
    if (party == Party::Alice) {
        if (name == "a") return Slot::Unprimed;
        if (name == "a_prime") return Slot::Primed;
    } else {
        if (name == "b") return Slot::Unprimed;
        if (name == "b_prime") return Slot::Primed;
    }
    throw ConfigError("unknown setting slot \"" + name + "\"");
}

double parse_double(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw ConfigError("");
        return value;
    } catch (const std::exception&) {
        throw ConfigError(std::string("cannot parse ") + what + " \"" + text + "\"");
    }
}

}  // namespace

std::string encode_setting(const SettingLabel& label) {
    std::string text = slot_name(label.party, label.slot);
    if (label.angle) {
        text += ':';
        text += format_double(label.angle->radians);
    }
    return text;
}

SettingLabel decode_setting(Party party, const std::string& text) {
    const auto colon = text.find(':');
    SettingLabel label;
    label.party = party;
    label.slot = slot_from_name(party, text.substr(0, colon));
    if (colon != std::string::npos)
        label.angle = Angle{parse_double(text.substr(colon + 1), "setting angle")};
    return label;
}

namespace {

const char* bell_label_name(BellLabel label) {
    switch (label) {
        case BellLabel::PsiMinus: return "psi_minus";
        case BellLabel::PsiPlus: return "psi_plus";
        case BellLabel::PhiPlus: return "phi_plus";
        case BellLabel::PhiMinus: return "phi_minus";
    }
    return "psi_minus";
}

BellLabel bell_label_from_name(const std::string& name) {
    if (name == "psi_minus") return BellLabel::PsiMinus;
    if (name == "psi_plus") return BellLabel::PsiPlus;
    if (name == "phi_plus") return BellLabel::PhiPlus;
    if (name == "phi_minus") return BellLabel::PhiMinus;
    throw ConfigError("unknown Bell state \"" + name + "\"");
}

nlohmann::json distribution_to_json(const JointDistribution& d) {
    return nlohmann::json::array({d.p_pp, d.p_pm, d.p_mp, d.p_mm});
}

JointDistribution distribution_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 4)
        throw ConfigError("a joint distribution must be an array of four numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
            j[3].get<double>()};
}

}  // namespace

nlohmann::json bell_state_to_json(const BellState& state) {
    return {{"state", bell_label_name(state.label)},
            {"realization", state.angle_factor == 0.5 ? "spin_half" : "photon"}};
}

BellState bell_state_from_json(const nlohmann::json& j) {
    require_keys(j, {"state", "realization"}, "state description");
    const BellLabel label = bell_label_from_name(j.value("state", "psi_minus"));
    const std::string realization = j.value("realization", "spin_half");
    if (realization == "spin_half") return BellState::spin_half(label);
    if (realization == "photon") return BellState::photon(label);
    throw ConfigError("unknown realization \"" + realization + "\"");
}

nlohmann::json model_to_json(const CorrelationModel& model) {
    nlohmann::json j;
    j["kind"] = model.kind();
    if (const auto* quantum = dynamic_cast<const QuantumModel*>(&model)) {
        const auto state = bell_state_to_json(quantum->state());
        j["state"] = state["state"];
        j["realization"] = state["realization"];
    } else if (const auto* lhv = dynamic_cast<const LhvModel*>(&model)) {
        j["weights"] = lhv->weights();
    } else if (const auto* gpr = dynamic_cast<const GeneralizedPrModel*>(&model)) {
        j["c"] = gpr->c();
        j["e"] = gpr->e();
        j["replaced_cell"] =
            gpr->replaced() == ReplacedCell::FirstCorrelation ? "first" : "fourth";
    } else if (const auto* table = dynamic_cast<const TableModel*>(&model)) {
        nlohmann::json cells = nlohmann::json::array();
        for (const auto& cell : table->cells()) cells.push_back(distribution_to_json(cell));
        j["cells"] = cells;
    }
    return j;
}

std::unique_ptr<CorrelationModel> model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("model description must be a JSON object");
    const std::string kind = j.value("kind", "");
    if (kind == "quantum") {
        require_keys(j, {"kind", "state", "realization"}, "quantum model");
        nlohmann::json state = j;
        state.erase("kind");
        return std::make_unique<QuantumModel>(bell_state_from_json(state));
    }
    if (kind == "lhv") {
        require_keys(j, {"kind", "weights"}, "lhv model");
        const auto& w = j.at("weights");
        if (!w.is_array() || w.size() != 16)
            throw ConfigError("lhv model needs exactly 16 weights");
        std::array<double, 16> weights{};
        for (int k = 0; k < 16; ++k) weights[std::size_t(k)] = w[std::size_t(k)].get<double>();
        return std::make_unique<LhvModel>(weights);
    }
    if (kind == "pr") {
        require_keys(j, {"kind"}, "pr model");
        return std::make_unique<PrBoxModel>();
    }
    if (kind == "generalized_pr") {
        require_keys(j, {"kind", "c", "e", "replaced_cell"}, "generalized_pr model");
        const std::string cell = j.value("replaced_cell", "first");
        if (cell != "first" && cell != "fourth")
            throw ConfigError("replaced_cell must be \"first\" or \"fourth\"");
        return std::make_unique<GeneralizedPrModel>(
            j.at("c").get<double>(), j.at("e").get<double>(),
            cell == "first" ? ReplacedCell::FirstCorrelation
                            : ReplacedCell::FourthCorrelation);
    }
    if (kind == "table") {
        require_keys(j, {"kind", "cells"}, "table model");
        const auto& cells = j.at("cells");
        if (!cells.is_array() || cells.size() != 4)
            throw ConfigError("table model needs exactly 4 cells");
        std::array<JointDistribution, 4> table;
        for (int k = 0; k < 4; ++k)
            table[std::size_t(k)] = distribution_from_json(cells[std::size_t(k)]);
        return std::make_unique<TableModel>(table);
    }
    throw ConfigError("unknown model kind \"" + kind + "\"");
}

nlohmann::json chsh_settings_to_json(const ChshSettings& settings) {
    const bool angled = settings.a.angle && settings.a_prime.angle &&
                        settings.b.angle && settings.b_prime.angle;
    if (angled)
        return {{"a", settings.a.angle->radians},
                {"a_prime", settings.a_prime.angle->radians},
                {"b", settings.b.angle->radians},
                {"b_prime", settings.b_prime.angle->radians}};
    return {{"preset", "slots"}};
}

ChshSettings chsh_settings_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("settings must be a JSON object");
    if (j.contains("preset")) {
        require_keys(j, {"preset", "base"}, "settings");
        const std::string preset = j.at("preset").get<std::string>();
        if (preset == "slots") return ChshSettings::slots();
        if (preset == "paper_pr_assignment")
            return ChshSettings::paper_pr_assignment(Angle{j.value("base", 0.0)});
        throw ConfigError("unknown settings preset \"" + preset + "\"");
    }
    require_keys(j, {"a", "a_prime", "b", "b_prime"}, "settings");
    for (const char* key : {"a", "a_prime", "b", "b_prime"})
        if (!j.contains(key))
            throw ConfigError(std::string("settings need \"") + key + "\"");
    return ChshSettings::angles(j.at("a").get<double>(), j.at("a_prime").get<double>(),
                                j.at("b").get<double>(), j.at("b_prime").get<double>());
}

void write_ensemble_csv(const Ensemble& ensemble, std::ostream& out) {
    out << "index,alice_setting,bob_setting,alice_outcome,bob_outcome\n";
    const auto& schedule = ensemble.schedule();
    for (std::size_t p = 0; p < schedule.size(); ++p) {
        const std::string alice = encode_setting(schedule[p].alice);
        const std::string bob = encode_setting(schedule[p].bob);
        for (std::int64_t i = ensemble.block_begin(p); i < ensemble.block_end(p); ++i) {
            const int cell = ensemble.cell(i);
            out << i << ',' << alice << ',' << bob << ','
                << alice_outcome_of_cell(cell) << ',' << bob_outcome_of_cell(cell)
                << '\n';
        }
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    return fields;
}

int parse_outcome(const std::string& text) {
    if (text == "1" || text == "+1") return +1;
    if (text == "-1") return -1;
    throw ConfigError("outcome must be +1 or -1, got \"" + text + "\"");
}

std::uint8_t cell_of_outcomes(int alice, int bob) {
    return std::uint8_t((alice > 0 ? 0 : 2) + (bob > 0 ? 0 : 1));
}

}  // namespace

Ensemble read_ensemble_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty ensemble CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "index,alice_setting,bob_setting,alice_outcome,bob_outcome")
        throw ConfigError("unexpected ensemble CSV header: " + line);

    std::vector<SettingPair> schedule;
    std::vector<std::int64_t> counts;
    std::vector<std::uint8_t> cells;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 5)
            throw ConfigError("ensemble CSV row needs 5 fields: " + line);
        SettingPair pair{decode_setting(Party::Alice, fields[1]),
                         decode_setting(Party::Bob, fields[2])};
        if (schedule.empty() || !(schedule.back() == pair)) {
            schedule.push_back(pair);
            counts.push_back(0);
        }
        ++counts.back();
        cells.push_back(cell_of_outcomes(parse_outcome(fields[3]), parse_outcome(fields[4])));
    }
    return Ensemble(0, std::move(schedule), std::move(counts), std::move(cells), "");
}

nlohmann::json ensemble_to_json(const Ensemble& ensemble) {
    nlohmann::json j;
    j["seed"] = ensemble.seed();
    if (ensemble.model_descriptor().empty()) {
        j["model"] = nullptr;
    } else {
        j["model"] = nlohmann::json::parse(ensemble.model_descriptor());
    }
    nlohmann::json schedule = nlohmann::json::array();
    nlohmann::json counts = nlohmann::json::array();
    const auto& pairs = ensemble.schedule();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        schedule.push_back({{"alice", encode_setting(pairs[p].alice)},
                            {"bob", encode_setting(pairs[p].bob)}});
        counts.push_back(ensemble.block_end(p) - ensemble.block_begin(p));
    }
    j["schedule"] = schedule;
    j["counts"] = counts;
    nlohmann::json rows = nlohmann::json::array();
    for (std::int64_t i = 0; i < ensemble.size(); ++i) {
        const int cell = ensemble.cell(i);
        rows.push_back(nlohmann::json::array(
            {i, alice_outcome_of_cell(cell), bob_outcome_of_cell(cell)}));
    }
    j["rows"] = rows;
    return j;
}

Ensemble ensemble_from_json(const nlohmann::json& j) {
    require_keys(j, {"seed", "model", "schedule", "counts", "rows"}, "ensemble");
    std::vector<SettingPair> schedule;
    for (const auto& entry : j.at("schedule")) {
        require_keys(entry, {"alice", "bob"}, "schedule entry");
        schedule.push_back(
            {decode_setting(Party::Alice, entry.at("alice").get<std::string>()),
             decode_setting(Party::Bob, entry.at("bob").get<std::string>())});
    }
    std::vector<std::int64_t> counts;
    for (const auto& c : j.at("counts")) counts.push_back(c.get<std::int64_t>());
    std::vector<std::uint8_t> cells;
    for (const auto& row : j.at("rows")) {
        if (!row.is_array() || row.size() != 3)
            throw ConfigError("ensemble row must be [index, alice_outcome, bob_outcome]");
        cells.push_back(cell_of_outcomes(row[1].get<int>(), row[2].get<int>()));
    }
    const std::string descriptor =
        j.at("model").is_null() ? std::string() : j.at("model").dump();
    return Ensemble(j.at("seed").get<std::uint64_t>(), std::move(schedule),
                    std::move(counts), std::move(cells), descriptor);
}

}  // namespace bellscope
