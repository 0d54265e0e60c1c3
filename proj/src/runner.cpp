// Copyright 2026 The qdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qdsim/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace qdsim {

namespace {

template <typename T>
void overlay(std::optional<T>& base, const std::optional<T>& top) {
    if (top) {
        base = top;
    }
}

ConfigOverrides merge(ConfigOverrides base, const ConfigOverrides& top) {
    overlay(base.encoding, top.encoding);
    overlay(base.n, top.n);
    overlay(base.delta1, top.delta1);
    overlay(base.decoys, top.decoys);
    overlay(base.theta_key, top.theta_key);
    overlay(base.noise, top.noise);
    overlay(base.noise_law, top.noise_law);
    overlay(base.attack, top.attack);
    overlay(base.attack_direction, top.attack_direction);
    overlay(base.substitution, top.substitution);
    overlay(base.ancilla_scope, top.ancilla_scope);
    overlay(base.ancilla_control, top.ancilla_control);
    overlay(base.trials, top.trials);
    overlay(base.seed, top.seed);
    overlay(base.format, top.format);
    overlay(base.out, top.out);
    overlay(base.introspect, top.introspect);
    overlay(base.encrypt, top.encrypt);
    overlay(base.transcript, top.transcript);
    overlay(base.counterfactual_public_m, top.counterfactual_public_m);
    return base;
}

// Re-throws parse failures of enumerations and angles as ConfigError.
template <typename F>
auto parsed(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

std::string require_string(const Json& v, const std::string& key) {
    if (!v.is_string()) {
        throw ConfigError("config key '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

std::uint64_t require_unsigned(const Json& v, const std::string& key) {
    if (!v.is_number_unsigned()) {
        throw ConfigError("config key '" + key + "' must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

bool require_bool(const Json& v, const std::string& key) {
    if (!v.is_boolean()) {
        throw ConfigError("config key '" + key + "' must be true or false");
    }
    return v.get<bool>();
}

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

Json bits_json(const Bits& b) { return Json(b); }

// Forwards every hook to each tap in order.
class TapChain : public ChannelTap {
  public:
    explicit TapChain(std::vector<ChannelTap*> taps) : taps_(std::move(taps)) {}

    bool on_key_flight(std::vector<QubitRegister>& slots, Rng& rng) override {
        for (auto* t : taps_) {
            if (!t->on_key_flight(slots, rng)) {
                return false;
            }
        }
        return true;
    }
    void on_forward(TravelingBlock& block, const std::vector<bool>& oracle, Rng& rng) override {
        for (auto* t : taps_) {
            t->on_forward(block, oracle, rng);
        }
    }
    void on_return(TravelingBlock& block, const std::vector<bool>& oracle, Rng& rng) override {
        for (auto* t : taps_) {
            t->on_return(block, oracle, rng);
        }
    }
    void on_announcement(const Bits& announced) override {
        for (auto* t : taps_) {
            t->on_announcement(announced);
        }
    }

  private:
    std::vector<ChannelTap*> taps_;
};

struct PerCheckOracle {
    double probability;
    std::size_t checks;
    const char* check;
};

std::optional<PerCheckOracle> per_check_oracle(const ProtocolConfig& p, const AttackSpec& a) {
    const std::size_t decoy_checks = p.decoy_count * (a.direction == AttackDirection::both ? 2 : 1);
    switch (a.kind) {
        case AttackKind::none:
            return std::nullopt;
        case AttackKind::capture_sc:
            return PerCheckOracle{capture_sc_sample_violation(p.encoding, a.substitution), p.delta1, "sample"};
        case AttackKind::entangle_ancilla:
            if (a.direction == AttackDirection::key_flight) {
                return PerCheckOracle{entangle_ancilla_sample_violation(p.encoding, a.control), p.delta1, "sample"};
            }
            if (a.scope == AncillaScope::ciphertext_only) {
                return PerCheckOracle{0.0, decoy_checks, "decoy"};
            }
            return PerCheckOracle{entangle_ancilla_decoy_detection(p.encoding, a.control), decoy_checks, "decoy"};
        case AttackKind::intercept_resend_logical:
            if (a.direction == AttackDirection::key_flight) {
                return std::nullopt;
            }
            return PerCheckOracle{intercept_logical_decoy_detection(p.encoding), decoy_checks, "decoy"};
        case AttackKind::intercept_resend_physical:
            if (a.direction == AttackDirection::key_flight) {
                return std::nullopt;
            }
            return PerCheckOracle{intercept_physical_decoy_detection(p.encoding), decoy_checks, "decoy"};
    }
    return std::nullopt;
}

Json stage_json(const std::optional<Stage>& s) { return s ? Json(to_string(*s)) : Json(nullptr); }

// Numbers in CSV cells use the JSON spelling so both formats agree.
std::string cell(const Json& v) {
    if (v.is_null()) {
        return "";
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    return v.dump();
}

void check_format(const Json& doc, const char* expected) {
    if (!doc.contains("format") || doc["format"] != expected) {
        throw std::invalid_argument(std::string("expected a ") + expected + " document");
    }
}

Transcript with_disclosed_m(const Transcript& t, const Bits& m) {
    Transcript out;
    for (const auto& ev : t.events()) {
        if (const auto* a = std::get_if<AnnouncementEvent>(&ev)) {
            out.add(AnnouncementEvent{a->bits, m});
        } else {
            out.add(ev);
        }
    }
    return out;
}

Transcript load_transcript(const std::string& path) {
    const Json doc = read_json_file(path);
    const std::string format = doc.value("format", "");
    return parsed("transcript", [&] {
        if (format == "qdsim-transcript/1") {
            return Transcript::from_json(doc);
        }
        if (format == "qdsim-dialogue/1") {
            Transcript all;
            for (const auto& round : doc.at("rounds")) {
                if (!round.contains("transcript")) {
                    throw std::invalid_argument("dialogue document has no transcripts (run with --introspect)");
                }
                all.append(Transcript::from_json(round["transcript"]));
            }
            return all;
        }
        throw std::invalid_argument("unrecognized document format '" + format + "'");
    });
}

}  // namespace

std::string to_string(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

OutputFormat parse_output_format(std::string_view s) {
    if (s == "json") {
        return OutputFormat::json;
    }
    if (s == "csv") {
        return OutputFormat::csv;
    }
    throw ConfigError("unknown format '" + std::string(s) + "' (expected json or csv)");
}

std::string to_string(Command c) {
    switch (c) {
        case Command::dialogue:
            return "dialogue";
        case Command::attack:
            return "attack";
        case Command::verify:
            return "verify";
        case Command::report:
            return "report";
    }
    return "?";
}

void RunConfig::validate() const {
    protocol.validate();
    if (trials == 0) {
        throw ConfigError("trials must be at least 1");
    }
    if (attack.control != 0 && attack.control != 1) {
        throw ConfigError("ancilla_control must be 0 (C1) or 1 (C2)");
    }
}

Json RunConfig::to_json() const {
    Json j;
    j["encoding"] = to_string(protocol.encoding);
    j["n"] = protocol.n;
    j["delta1"] = protocol.delta1;
    j["decoys"] = protocol.decoy_count;
    j["theta_key"] = protocol.theta_key;
    j["noise"] = to_string(protocol.noise.kind);
    j["noise_law"] = protocol.noise.law.to_string();
    j["encrypt"] = protocol.encrypt;
    j["attack"] = to_string(attack.kind);
    j["attack_direction"] = to_string(attack.direction);
    j["substitution"] = to_string(attack.substitution);
    j["ancilla_scope"] = to_string(attack.scope);
    j["ancilla_control"] = attack.control;
    j["trials"] = trials;
    j["seed"] = protocol.seed;
    j["introspect"] = introspect;
    return j;
}

ConfigOverrides overrides_from_json(const Json& doc) {
    if (!doc.is_object()) {
        throw ConfigError("config document must be a JSON object");
    }
    ConfigOverrides o;
    for (const auto& [key, v] : doc.items()) {
        if (key == "encoding") {
            o.encoding = require_string(v, key);
        } else if (key == "n") {
            o.n = require_unsigned(v, key);
        } else if (key == "delta1") {
            o.delta1 = require_unsigned(v, key);
        } else if (key == "decoys") {
            o.decoys = require_unsigned(v, key);
        } else if (key == "theta_key") {
            if (!v.is_number()) {
                throw ConfigError("config key 'theta_key' must be a number");
            }
            o.theta_key = v.get<double>();
        } else if (key == "noise") {
            o.noise = require_string(v, key);
        } else if (key == "noise_law") {
            o.noise_law = require_string(v, key);
        } else if (key == "attack") {
            o.attack = require_string(v, key);
        } else if (key == "attack_direction") {
            o.attack_direction = require_string(v, key);
        } else if (key == "substitution") {
            o.substitution = require_string(v, key);
        } else if (key == "ancilla_scope") {
            o.ancilla_scope = require_string(v, key);
        } else if (key == "ancilla_control") {
            o.ancilla_control = static_cast<int>(require_unsigned(v, key));
        } else if (key == "trials") {
            o.trials = require_unsigned(v, key);
        } else if (key == "seed") {
            o.seed = require_unsigned(v, key);
        } else if (key == "format") {
            o.format = require_string(v, key);
        } else if (key == "out") {
            o.out = require_string(v, key);
        } else if (key == "introspect") {
            o.introspect = require_bool(v, key);
        } else if (key == "encrypt") {
            o.encrypt = require_bool(v, key);
        } else if (key == "transcript") {
            o.transcript = require_string(v, key);
        } else if (key == "counterfactual_public_m") {
            o.counterfactual_public_m = require_bool(v, key);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return o;
}

RunConfig build_run_config(const std::optional<ConfigOverrides>& file, const ConfigOverrides& flags,
                           const char* env_seed) {
    const ConfigOverrides o = merge(file.value_or(ConfigOverrides{}), flags);
    RunConfig rc;
    auto& p = rc.protocol;
    if (o.encoding) {
        p.encoding = parsed("encoding", [&] { return parse_encoding(*o.encoding); });
        rc.encoding_explicit = true;
    }
    if (o.n) p.n = *o.n;
    if (o.delta1) p.delta1 = *o.delta1;
    if (o.decoys) p.decoy_count = *o.decoys;
    if (o.theta_key) p.theta_key = *o.theta_key;
    p.noise.kind = o.noise ? parsed("noise", [&] { return parse_noise_kind(*o.noise); }) : matching_noise(p.encoding);
    if (o.noise_law) {
        p.noise.law = parsed("noise_law", [&] { return NoiseLaw::parse(*o.noise_law); });
    }
    if (o.encrypt) p.encrypt = *o.encrypt;
    if (o.attack) {
        rc.attack.kind = parsed("attack", [&] { return parse_attack_kind(*o.attack); });
    }
    if (o.attack_direction) {
        rc.attack.direction = parsed("attack_direction", [&] { return parse_attack_direction(*o.attack_direction); });
    }
    if (o.substitution) {
        rc.attack.substitution = parsed("substitution", [&] { return parse_substitution_policy(*o.substitution); });
    }
    if (o.ancilla_scope) {
        rc.attack.scope = parsed("ancilla_scope", [&] { return parse_ancilla_scope(*o.ancilla_scope); });
    }
    if (o.ancilla_control) rc.attack.control = *o.ancilla_control;
    if (o.trials) rc.trials = *o.trials;
    if (o.seed) {
        p.seed = *o.seed;
    } else if (env_seed != nullptr && *env_seed != '\0') {
        const std::string s(env_seed);
        std::size_t used = 0;
        try {
            p.seed = std::stoull(s, &used, 10);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.front() == '-') {
            throw ConfigError("QDSIM_SEED must be a nonnegative integer, got '" + s + "'");
        }
    }
    if (o.format) rc.format = parse_output_format(*o.format);
    rc.out_path = o.out;
    if (o.introspect) rc.introspect = *o.introspect;
    rc.transcript_path = o.transcript;
    if (o.counterfactual_public_m) rc.counterfactual_public_m = *o.counterfactual_public_m;
    rc.validate();
    return rc;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

Json dialogue_document(const RunConfig& cfg) {
    cfg.validate();
    const auto& p = cfg.protocol;
    Rng rng(p.seed);

    Json doc;
    doc["format"] = "qdsim-dialogue/1";
    doc["config"] = cfg.to_json();
    doc["warnings"] = p.warnings();
    Json rounds = Json::array();

    std::optional<KeyRegister> key;
    std::size_t aborts = 0;
    std::size_t key_shares = 0;
    std::size_t errors = 0;
    std::size_t decoded = 0;
    double min_fidelity = 1;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        Json r;
        r["trial"] = t;
        Eavesdropper eve(cfg.attack, p.encoding);
        MixednessProbe probe(p.encoding);
        std::vector<ChannelTap*> taps;
        if (cfg.introspect) {
            taps.push_back(&probe);
        }
        taps.push_back(&eve);
        TapChain tap(taps);

        Transcript transcript;
        const bool fresh_key = !key.has_value();
        r["key_share"] = fresh_key;
        std::optional<Stage> stage;
        DialogueResult result;
        if (fresh_key) {
            ++key_shares;
            auto ks = share_key(p, &tap, rng);
            transcript.append(ks.transcript);
            if (ks.aborted()) {
                stage = ks.abort->stage;
            } else {
                key = std::move(ks.key);
            }
        }
        if (!stage) {
            const auto msgs = MessagePair::random(p.n, rng);
            auto round = run_dialogue(p, msgs, std::move(*key), &tap, rng);
            key.reset();
            transcript.append(round.transcript);
            result = round.result;
            stage = result.stage;
            if (!stage) {
                std::size_t e = 0;
                for (std::size_t i = 0; i < p.n; ++i) {
                    e += static_cast<std::size_t>(result.alice_decoded[i] != msgs.bob[i]);
                    e += static_cast<std::size_t>(result.bob_decoded[i] != msgs.alice[i]);
                }
                errors += e;
                decoded += 2 * p.n;
                const double fid = round.key->min_fidelity();
                min_fidelity = std::min(min_fidelity, fid);
                key = std::move(round.key);
                r["decode_errors"] = e;
                r["accuracy"] = 1 - static_cast<double>(e) / static_cast<double>(2 * p.n);
                r["key_fidelity"] = fid;
                r["j"] = bits_json(msgs.alice);
                r["k"] = bits_json(msgs.bob);
                r["announced"] = bits_json(result.announcements);
                r["alice_decoded"] = bits_json(result.alice_decoded);
                r["bob_decoded"] = bits_json(result.bob_decoded);
            }
        }
        r["aborted"] = stage.has_value();
        r["stage"] = stage_json(stage);
        if (stage) {
            ++aborts;
        }
        if (cfg.introspect) {
            r["mixedness_max_deviation"] = probe.report().qubits ? Json(probe.report().max_deviation) : Json(nullptr);
            r["transcript"] = transcript.to_json();
        }
        rounds.push_back(std::move(r));
    }
    doc["rounds"] = std::move(rounds);
    Json s;
    s["trials"] = cfg.trials;
    s["aborts"] = aborts;
    s["key_shares"] = key_shares;
    s["decode_errors"] = errors;
    s["decode_accuracy"] = decoded ? Json(1 - static_cast<double>(errors) / static_cast<double>(decoded)) : Json(nullptr);
    s["min_key_fidelity"] = min_fidelity;
    doc["summary"] = std::move(s);
    return doc;
}

Json attack_document(const RunConfig& cfg) {
    cfg.validate();
    const auto& p = cfg.protocol;
    const auto stats = estimate_detection(p, cfg.attack, cfg.trials);

    Json doc;
    doc["format"] = "qdsim-attack/1";
    doc["config"] = cfg.to_json();
    Json s;
    s["trials"] = stats.trials;
    s["detected"] = stats.detected;
    s["rate"] = stats.rate;
    s["wilson_low"] = stats.wilson_low;
    s["wilson_high"] = stats.wilson_high;
    s["analytic_rate"] = optional_number(stats.analytic);
    s["analytic_within_interval"] = stats.analytic ? Json(stats.interval_contains(*stats.analytic)) : Json(nullptr);
    Json by_stage;
    for (std::size_t i = 0; i < stats.by_stage.size(); ++i) {
        by_stage[to_string(static_cast<Stage>(i))] = stats.by_stage[i];
    }
    s["by_stage"] = std::move(by_stage);
    doc["stats"] = std::move(s);

    if (auto o = per_check_oracle(p, cfg.attack)) {
        doc["oracle"] = {{"check", o->check}, {"per_check_probability", o->probability}, {"checks", o->checks}};
    } else {
        doc["oracle"] = nullptr;
    }

    if (cfg.attack.kind == AttackKind::entangle_ancilla) {
        const auto info = ciphertext_ancilla_information(p.encoding, cfg.attack.control);
        doc["ancilla_information"] = {{"ancilla_deviation", info.ancilla_deviation},
                                      {"holevo_bits", info.holevo_bits}};
        if (cfg.attack.scope == AncillaScope::ciphertext_only && cfg.attack.direction == AttackDirection::forward) {
            const auto op = ciphertext_opacity(p, cfg.trials * p.n, cfg.attack.control);
            doc["opacity"] = {{"qubits", op.qubits},
                              {"correct", op.correct},
                              {"accuracy", op.accuracy},
                              {"baseline", 0.25},
                              {"sigma_distance", op.sigma_distance}};
        }
        Json scan = Json::array();
        for (int i = 0; i <= 16; ++i) {
            const auto c = key_reuse_correlation(std::numbers::pi * i / 32);
            scan.push_back({{"theta", c.theta}, {"mi_z", c.mi_z}, {"mi_x", c.mi_x}});
        }
        doc["key_reuse_scan"] = std::move(scan);
    }

    Json trials = Json::array();
    for (std::size_t t = 0; t < stats.per_trial.size(); ++t) {
        trials.push_back({{"trial", t}, {"detected", stats.per_trial[t].has_value()},
                          {"stage", stage_json(stats.per_trial[t])}});
    }
    doc["per_trial"] = std::move(trials);
    return doc;
}

Json verify_document(const RunConfig& cfg) {
    Rng rng(cfg.protocol.seed);
    const std::optional<Encoding> only =
        cfg.encoding_explicit ? std::optional<Encoding>(cfg.protocol.encoding) : std::nullopt;
    const auto checks = identity_suite(only, rng);

    Json doc;
    doc["format"] = "qdsim-verify/1";
    doc["filter"] = only ? Json(to_string(*only)) : Json(nullptr);
    doc["tolerance"] = kIdentityTol;
    Json rows = Json::array();
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.passed;
        rows.push_back({{"name", c.name},
                        {"encoding", c.encoding ? Json(to_string(*c.encoding)) : Json(nullptr)},
                        {"passed", c.passed},
                        {"max_error", c.max_error}});
    }
    doc["checks"] = std::move(rows);

    // Each code under the other encoding's channel: reported, never asserted.
    Json cross = Json::array();
    for (auto enc : {Encoding::dp, Encoding::r}) {
        if (only && *only != enc) {
            continue;
        }
        const NoiseKind other = matching_noise(enc) == NoiseKind::dephasing ? NoiseKind::rotation : NoiseKind::dephasing;
        const auto rep = df_invariance_suite(enc, other, 200, rng);
        Json states = Json::array();
        for (const auto& s : rep.states) {
            states.push_back({{"state", to_string(s.state)}, {"passed", s.passed}, {"trials", s.trials}});
        }
        cross.push_back({{"encoding", to_string(enc)}, {"channel", to_string(other)}, {"states", std::move(states)}});
    }
    doc["cross_channel"] = std::move(cross);
    doc["passed"] = all;
    return doc;
}

Json report_document(const RunConfig& cfg) {
    Json doc;
    doc["format"] = "qdsim-report/1";
    Json eff = Json::array();
    for (auto m : {EfficiencyMode::qd, EfficiencyMode::qd_with_key_amortization_off, EfficiencyMode::qkd_otp}) {
        const auto e = efficiency(m);
        eff.push_back({{"mode", to_string(m)},
                       {"b_s", e.b_s},
                       {"q_t", e.q_t},
                       {"b_t", e.b_t},
                       {"eta", e.eta},
                       {"eta_fraction", e.eta_fraction}});
    }
    doc["efficiency"] = std::move(eff);
    Json published = Json::array();
    for (const auto& pe : kPublishedComparison) {
        published.push_back({{"label", pe.label}, {"eta", pe.eta}, {"simulated", false}});
    }
    doc["published_comparison"] = std::move(published);

    Transcript transcript;
    std::string source;
    if (cfg.transcript_path) {
        transcript = load_transcript(*cfg.transcript_path);
        source = "file";
    } else {
        cfg.validate();
        Rng rng(cfg.protocol.seed);
        auto ks = share_key(cfg.protocol, nullptr, rng);
        if (ks.aborted()) {
            throw std::logic_error("report: honest key sharing aborted");
        }
        const auto msgs = MessagePair::random(cfg.protocol.n, rng);
        auto round = run_dialogue(cfg.protocol, msgs, std::move(*ks.key), nullptr, rng);
        transcript = round.transcript;
        if (cfg.counterfactual_public_m) {
            transcript = with_disclosed_m(transcript, round.result.initial_m);
        }
        source = "synthesized";
    }
    const auto leak = parsed("transcript", [&] { return leakage_report(transcript); });
    Json l;
    l["source"] = source;
    l["counterfactual_public_m"] = !cfg.transcript_path && cfg.counterfactual_public_m;
    l["qubits"] = leak.qubits;
    l["entropy_bits"] = leak.entropy_bits;
    l["leakage_bits"] = leak.leakage_bits;
    l["max_leakage_bits"] = leak.max_leakage_bits;
    Json per = Json::array();
    for (std::size_t i = 0; i < leak.per_qubit.size(); ++i) {
        const auto& r = leak.per_qubit[i];
        per.push_back({{"qubit", i},
                       {"posterior", r.posterior},
                       {"entropy_bits", r.entropy_bits},
                       {"leakage_bits", r.leakage_bits}});
    }
    l["per_qubit"] = std::move(per);
    doc["leakage"] = std::move(l);
    return doc;
}

std::string dialogue_csv(const Json& doc) {
    check_format(doc, "qdsim-dialogue/1");
    std::ostringstream os;
    os << "# qdsim-dialogue-csv/1\n";
    os << "trial,qubit,aborted,stage,j,k,announced,alice_decoded,bob_decoded,correct\n";
    for (const auto& r : doc.at("rounds")) {
        const std::string trial = cell(r["trial"]);
        if (r["aborted"].get<bool>()) {
            os << trial << ",,true," << cell(r["stage"]) << ",,,,,,\n";
            continue;
        }
        const auto& j = r["j"];
        const auto& k = r["k"];
        for (std::size_t i = 0; i < j.size(); ++i) {
            const bool ok = r["alice_decoded"][i] == k[i] && r["bob_decoded"][i] == j[i];
            os << trial << ',' << i << ",false,," << cell(j[i]) << ',' << cell(k[i]) << ','
               << cell(r["announced"][i]) << ',' << cell(r["alice_decoded"][i]) << ',' << cell(r["bob_decoded"][i])
               << ',' << (ok ? "true" : "false") << '\n';
        }
    }
    return os.str();
}

std::string attack_csv(const Json& doc) {
    check_format(doc, "qdsim-attack/1");
    std::ostringstream os;
    os << "# qdsim-attack-csv/1\n";
    os << "trial,detected,stage,analytic_rate\n";
    const std::string analytic = cell(doc["stats"]["analytic_rate"]);
    for (const auto& t : doc.at("per_trial")) {
        os << cell(t["trial"]) << ',' << cell(t["detected"]) << ',' << cell(t["stage"]) << ',' << analytic << '\n';
    }
    return os.str();
}

std::string verify_csv(const Json& doc) {
    check_format(doc, "qdsim-verify/1");
    std::ostringstream os;
    os << "# qdsim-verify-csv/1\n";
    os << "name,encoding,passed,max_error\n";
    for (const auto& c : doc.at("checks")) {
        os << cell(c["name"]) << ',' << cell(c["encoding"]) << ',' << cell(c["passed"]) << ','
           << cell(c["max_error"]) << '\n';
    }
    return os.str();
}

std::string report_csv(const Json& doc) {
    check_format(doc, "qdsim-report/1");
    std::ostringstream os;
    os << "# qdsim-report-csv/1\n";
    os << "section,name,b_s,q_t,b_t,eta,entropy_bits,leakage_bits\n";
    for (const auto& e : doc.at("efficiency")) {
        os << "efficiency," << cell(e["mode"]) << ',' << cell(e["b_s"]) << ',' << cell(e["q_t"]) << ','
           << cell(e["b_t"]) << ',' << cell(e["eta"]) << ",,\n";
    }
    for (const auto& e : doc.at("published_comparison")) {
        os << "published," << cell(e["label"]) << ",,,," << cell(e["eta"]) << ",,\n";
    }
    const auto& l = doc.at("leakage");
    os << "leakage," << cell(l["source"]) << ",,,,," << cell(l["entropy_bits"]) << ',' << cell(l["leakage_bits"])
       << '\n';
    return os.str();
}

int run_command(Command cmd, const RunConfig& cfg, std::ostream& stdout_stream, std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    try {
        Json doc;
        std::string (*csv)(const Json&) = nullptr;
        switch (cmd) {
            case Command::dialogue:
                doc = dialogue_document(cfg);
                csv = dialogue_csv;
                break;
            case Command::attack:
                doc = attack_document(cfg);
                csv = attack_csv;
                break;
            case Command::verify:
                doc = verify_document(cfg);
                csv = verify_csv;
                break;
            case Command::report:
                doc = report_document(cfg);
                csv = report_csv;
                break;
        }
        const std::string text = cfg.format == OutputFormat::json ? doc.dump(2) + "\n" : csv(doc);
        if (cfg.out_path) {
            std::ofstream out(*cfg.out_path, std::ios::binary);
            if (!out || !(out << text) || !out.flush()) {
                throw IoError("cannot write '" + *cfg.out_path + "'");
            }
        } else {
            stdout_stream << text;
        }

        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        log << "qdsim " << to_string(cmd) << ": ";
        switch (cmd) {
            case Command::dialogue:
                log << doc["summary"]["trials"] << " rounds, " << doc["summary"]["aborts"] << " aborts, "
                    << doc["summary"]["decode_errors"] << " decode errors";
                break;
            case Command::attack:
                log << "detected " << doc["stats"]["detected"] << "/" << doc["stats"]["trials"] << ", analytic "
                    << doc["stats"]["analytic_rate"].dump();
                break;
            case Command::verify:
                for (const auto& c : doc["checks"]) {
                    log << "\n  " << (c["passed"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>()
                        << "  max_error=" << c["max_error"].dump();
                }
                log << "\n";
                break;
            case Command::report:
                log << "qd eta " << doc["efficiency"][0]["eta_fraction"].get<std::string>() << ", leakage "
                    << doc["leakage"]["leakage_bits"].dump() << " bits";
                break;
        }
        log << " (" << secs << " s)\n";
        if (cmd == Command::verify && !doc["passed"].get<bool>()) {
            return kExitIdentityFailure;
        }
        return kExitOk;
    } catch (const IoError& e) {
        log << "qdsim: I/O error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::invalid_argument& e) {
        log << "qdsim: config error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

}  // namespace qdsim
