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


#include "qdsim/adversary.hpp"

#include <cmath>
#include <stdexcept>

namespace qdsim {

namespace {

constexpr const char* kC1 = "C1";
constexpr const char* kC2 = "C2";

const char* control_wire(int control) {
    if (control != 0 && control != 1) {
        throw std::invalid_argument("entangle_ancilla: control must be 0 (C1) or 1 (C2)");
    }
    return control == 0 ? kC1 : kC2;
}

LogicalState logical_state(int i) { return static_cast<LogicalState>(i); }

Family draw_family(const FamilyPolicy& policy, Rng& rng) {
    if (policy) {
        return policy(rng);
    }
    return rng.bit() == 0 ? Family::computational : Family::superposition;
}

// The old carriers are released after the new ones arrive so that a decoy
// slot is never left empty.
void replace_carrier(QubitRegister& slot, const Ket& resend) {
    slot.rename(kC1, "C1.read");
    slot.rename(kC2, "C2.read");
    slot.append(resend, {kC1, kC2});
    slot.release("C1.read");
    slot.release("C2.read");
}

double mutual_information(const std::array<double, 4>& joint) {
    const std::array<double, 2> pa{joint[0] + joint[1], joint[2] + joint[3]};
    const std::array<double, 2> pb{joint[0] + joint[2], joint[1] + joint[3]};
    return shannon_entropy(pa) + shannon_entropy(pb) - shannon_entropy(joint);
}

}  // namespace

std::string to_string(AttackKind k) {
    switch (k) {
        case AttackKind::none:
            return "none";
        case AttackKind::intercept_resend_logical:
            return "intercept_resend_logical";
        case AttackKind::intercept_resend_physical:
            return "intercept_resend_physical";
        case AttackKind::capture_sc:
            return "capture_sc";
        case AttackKind::entangle_ancilla:
            return "entangle_ancilla";
    }
    return "?";
}

std::string to_string(AttackDirection d) {
    switch (d) {
        case AttackDirection::key_flight:
            return "key_flight";
        case AttackDirection::forward:
            return "forward";
        case AttackDirection::return_:
            return "return";
        case AttackDirection::both:
            return "both";
    }
    return "?";
}

std::string to_string(SubstitutionPolicy p) {
    switch (p) {
        case SubstitutionPolicy::random_logical:
            return "random_logical";
        case SubstitutionPolicy::entangled:
            return "entangled";
        case SubstitutionPolicy::block:
            return "block";
    }
    return "?";
}

std::string to_string(AncillaScope s) { return s == AncillaScope::all ? "all" : "ciphertext_only"; }

AttackKind parse_attack_kind(std::string_view s) {
    for (auto k : {AttackKind::none, AttackKind::intercept_resend_logical, AttackKind::intercept_resend_physical,
                   AttackKind::capture_sc, AttackKind::entangle_ancilla}) {
        if (s == to_string(k)) {
            return k;
        }
    }
    throw std::invalid_argument("unknown attack '" + std::string(s) + "'");
}

AttackDirection parse_attack_direction(std::string_view s) {
    for (auto d : {AttackDirection::key_flight, AttackDirection::forward, AttackDirection::return_,
                   AttackDirection::both}) {
        if (s == to_string(d)) {
            return d;
        }
    }
    throw std::invalid_argument("unknown attack direction '" + std::string(s) + "'");
}

SubstitutionPolicy parse_substitution_policy(std::string_view s) {
    for (auto p : {SubstitutionPolicy::random_logical, SubstitutionPolicy::entangled, SubstitutionPolicy::block}) {
        if (s == to_string(p)) {
            return p;
        }
    }
    throw std::invalid_argument("unknown substitution policy '" + std::string(s) + "'");
}

AncillaScope parse_ancilla_scope(std::string_view s) {
    for (auto a : {AncillaScope::all, AncillaScope::ciphertext_only}) {
        if (s == to_string(a)) {
            return a;
        }
    }
    throw std::invalid_argument("unknown ancilla scope '" + std::string(s) + "'");
}

void intercept_resend_logical(TravelingBlock& block, Encoding enc, EveState& eve, Rng& rng,
                              const FamilyPolicy& policy, const std::string& direction) {
    for (std::size_t i = 0; i < block.slots.size(); ++i) {
        auto& slot = block.slots[i];
        const Family family = draw_family(policy, rng);
        const auto d = discriminate(slot, kC1, kC2, enc, family, rng);
        replace_carrier(slot, d.outcome ? encode(enc, *d.outcome) : Ket::bits({d.bits[0], d.bits[1]}));
        eve.records.push_back(EveRecord{direction, i, d.outcome, d.bits, std::nullopt});
    }
}

void intercept_resend_physical(TravelingBlock& block, EveState& eve, Rng& rng, const std::string& direction) {
    const auto z = SingleQubitBasis::z();
    for (std::size_t i = 0; i < block.slots.size(); ++i) {
        auto& slot = block.slots[i];
        const int b0 = slot.measure(kC1, z, rng);
        const int b1 = slot.measure(kC2, z, rng);
        replace_carrier(slot, Ket::bits({b0, b1}));
        eve.records.push_back(EveRecord{direction, i, std::nullopt, {b0, b1}, std::nullopt});
    }
}

bool capture_sc(std::vector<QubitRegister>& slots, Encoding enc, SubstitutionPolicy policy, EveState& eve,
                Rng& rng) {
    if (policy == SubstitutionPolicy::block) {
        return false;
    }
    for (std::size_t i = 0; i < slots.size(); ++i) {
        auto& slot = slots[i];
        const std::string tag = std::to_string(i);
        slot.rename(kC1, "E.C1." + tag);
        slot.rename(kC2, "E.C2." + tag);
        if (policy == SubstitutionPolicy::random_logical) {
            const auto s = logical_state(static_cast<int>(rng.below(4)));
            slot.append(encode(enc, s), {kC1, kC2});
            eve.records.push_back(EveRecord{"key_flight", i, s, {}, std::nullopt});
        } else {
            slot.append(prepare_resource(enc), {"E.A." + tag, kC1, kC2});
            eve.records.push_back(EveRecord{"key_flight", i, std::nullopt, {}, std::nullopt});
        }
    }
    return true;
}

int entangle_ancilla(QubitRegister& slot, std::string_view control, EveState& eve, Rng& rng) {
    const std::string name = "E" + std::to_string(eve.ancilla_count++);
    slot.append(Ket(1), {name});
    slot.apply(gates::cnot(), {control, name});
    const int bit = slot.measure(name, SingleQubitBasis::z(), rng);
    slot.release(name);
    return bit;
}

Eavesdropper::Eavesdropper(AttackSpec spec, Encoding enc) : spec_(std::move(spec)), enc_(enc) {
    control_wire(spec_.control);
}

bool Eavesdropper::on_key_flight(std::vector<QubitRegister>& slots, Rng& rng) {
    if (spec_.kind == AttackKind::capture_sc) {
        return capture_sc(slots, enc_, spec_.substitution, eve_, rng);
    }
    if (spec_.direction != AttackDirection::key_flight || spec_.kind == AttackKind::none) {
        return true;
    }
    TravelingBlock block{std::move(slots)};
    attack_block(block, std::vector<bool>(block.slots.size(), false), rng, "key_flight");
    slots = std::move(block.slots);
    return true;
}

void Eavesdropper::on_forward(TravelingBlock& block, const std::vector<bool>& decoy_oracle, Rng& rng) {
    message_ancillas_.clear();
    if (spec_.direction == AttackDirection::forward || spec_.direction == AttackDirection::both) {
        attack_block(block, decoy_oracle, rng, "forward");
    }
}

void Eavesdropper::on_return(TravelingBlock& block, const std::vector<bool>& decoy_oracle, Rng& rng) {
    if (spec_.direction == AttackDirection::return_ || spec_.direction == AttackDirection::both) {
        attack_block(block, decoy_oracle, rng, "return");
    }
}

void Eavesdropper::on_announcement(const Bits& announced) { eve_.announcements.push_back(announced); }

void Eavesdropper::attack_block(TravelingBlock& block, const std::vector<bool>& decoy_oracle, Rng& rng,
                                const std::string& direction) {
    switch (spec_.kind) {
        case AttackKind::none:
        case AttackKind::capture_sc:
            return;
        case AttackKind::intercept_resend_logical:
            intercept_resend_logical(block, enc_, eve_, rng, spec_.family_policy, direction);
            return;
        case AttackKind::intercept_resend_physical:
            intercept_resend_physical(block, eve_, rng, direction);
            return;
        case AttackKind::entangle_ancilla:
            break;
    }
    const char* control = control_wire(spec_.control);
    for (std::size_t i = 0; i < block.slots.size(); ++i) {
        const bool decoy = decoy_oracle.at(i);
        if (spec_.scope == AncillaScope::ciphertext_only && decoy) {
            continue;
        }
        const int bit = entangle_ancilla(block.slots[i], control, eve_, rng);
        eve_.records.push_back(EveRecord{direction, i, std::nullopt, {}, bit});
        if (direction == "forward" && !decoy) {
            message_ancillas_.push_back(bit);
        }
    }
}

std::vector<std::array<int, 2>> Eavesdropper::guess_messages() const {
    if (eve_.announcements.empty()) {
        return {};
    }
    const auto& f = eve_.announcements.back();
    if (f.size() != message_ancillas_.size()) {
        throw std::logic_error("guess_messages: ancilla records do not cover the announced qubits");
    }
    std::vector<std::array<int, 2>> out;
    out.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        out.push_back({message_ancillas_[i] ^ f[i], 0});
    }
    return out;
}

double intercept_logical_decoy_detection(Encoding enc) {
    double total = 0;
    for (int s = 0; s < 4; ++s) {
        const auto prepared = logical_state(s);
        for (auto family : {Family::computational, Family::superposition}) {
            const double w = 1.0 / 8;
            const auto eve_law = discrimination_law(encode(enc, prepared), 0, 1, enc, family);
            total += w * eve_law.tamper;
            for (int o = 0; o < 4; ++o) {
                const double p = eve_law.state[static_cast<std::size_t>(o)];
                if (p == 0) {
                    continue;
                }
                const auto check = discrimination_law(encode(enc, logical_state(o)), 0, 1, enc, family_of(prepared));
                total += w * p * (1 - check.state[static_cast<std::size_t>(s)]);
            }
        }
    }
    return total;
}

double intercept_physical_decoy_detection(Encoding enc) {
    const std::array<std::size_t, 2> qs{0, 1};
    const std::array<SingleQubitBasis, 2> zz{SingleQubitBasis::z(), SingleQubitBasis::z()};
    double total = 0;
    for (int s = 0; s < 4; ++s) {
        const auto prepared = logical_state(s);
        const auto p = joint_outcome_probabilities(encode(enc, prepared), qs, zz);
        for (std::uint64_t b = 0; b < 4; ++b) {
            if (p[b] == 0) {
                continue;
            }
            const auto check = discrimination_law(Ket::basis(2, b), 0, 1, enc, family_of(prepared));
            total += 0.25 * p[b] * (1 - check.state[static_cast<std::size_t>(s)]);
        }
    }
    return total;
}

double entangle_ancilla_decoy_detection(Encoding enc, int control) {
    control_wire(control);
    const auto z = SingleQubitBasis::z();
    double total = 0;
    for (int s = 0; s < 4; ++s) {
        const auto prepared = logical_state(s);
        Ket state = apply_gate(tensor(encode(enc, prepared), Ket(1)), gates::cnot(),
                               {static_cast<std::size_t>(control), 2});
        for (int e = 0; e < 2; ++e) {
            const double p = outcome_probability(state, 2, z, e);
            if (p < kIdentityTol) {
                continue;
            }
            const auto check = discrimination_law(project_qubit(state, 2, z, e), 0, 1, enc, family_of(prepared));
            total += 0.25 * p * (1 - check.state[static_cast<std::size_t>(s)]);
        }
    }
    return total;
}

namespace {

// Violation probability of the sampling check when Alice holds qubit 0 of
// `joint` and Bob measures qubits c1, c2, averaged over the two bases.
double sample_violation(const Ket& joint, Encoding enc, std::size_t c1, std::size_t c2) {
    const std::array<std::size_t, 3> qs{0, c1, c2};
    double total = 0;
    for (bool conj : {false, true}) {
        const auto basis = sampling_basis(enc, conj);
        const std::array<SingleQubitBasis, 3> bases{basis, basis, basis};
        const auto p = joint_outcome_probabilities(joint, qs, bases);
        for (int b = 0; b < 8; ++b) {
            if (!sample_consistent(enc, conj, b >> 2, (b >> 1) & 1, b & 1)) {
                total += 0.5 * p[static_cast<std::size_t>(b)];
            }
        }
    }
    return total;
}

}  // namespace

double capture_sc_sample_violation(Encoding enc, SubstitutionPolicy policy) {
    switch (policy) {
        case SubstitutionPolicy::block:
            return 1;
        case SubstitutionPolicy::entangled:
            // A, kept C1, kept C2, Eve's A, substitute C1, substitute C2.
            return sample_violation(tensor(prepare_resource(enc), prepare_resource(enc)), enc, 4, 5);
        case SubstitutionPolicy::random_logical:
            break;
    }
    double total = 0;
    for (int s = 0; s < 4; ++s) {
        total += 0.25 * sample_violation(tensor(prepare_resource(enc), encode(enc, logical_state(s))), enc, 3, 4);
    }
    return total;
}

double entangle_ancilla_sample_violation(Encoding enc, int control) {
    control_wire(control);
    const Ket joint = apply_gate(tensor(prepare_resource(enc), Ket(1)), gates::cnot(),
                                 {static_cast<std::size_t>(1 + control), 3});
    return sample_violation(joint, enc, 1, 2);
}

double detection_over(double per_check, std::size_t checks) {
    return 1 - std::pow(1 - per_check, static_cast<double>(checks));
}

std::optional<double> analytic_detection_rate(const ProtocolConfig& cfg, const AttackSpec& spec) {
    if (spec.kind == AttackKind::none) {
        return 0.0;
    }
    if (spec.kind == AttackKind::capture_sc) {
        return detection_over(capture_sc_sample_violation(cfg.encoding, spec.substitution), cfg.delta1);
    }
    if (spec.direction == AttackDirection::key_flight) {
        if (spec.kind == AttackKind::entangle_ancilla) {
            return detection_over(entangle_ancilla_sample_violation(cfg.encoding, spec.control), cfg.delta1);
        }
        return std::nullopt;
    }
    const std::size_t directions = spec.direction == AttackDirection::both ? 2 : 1;
    const std::size_t checks = cfg.decoy_count * directions;
    switch (spec.kind) {
        case AttackKind::intercept_resend_logical:
            return detection_over(intercept_logical_decoy_detection(cfg.encoding), checks);
        case AttackKind::intercept_resend_physical:
            return detection_over(intercept_physical_decoy_detection(cfg.encoding), checks);
        case AttackKind::entangle_ancilla:
            if (spec.scope == AncillaScope::ciphertext_only) {
                return 0.0;
            }
            return detection_over(entangle_ancilla_decoy_detection(cfg.encoding, spec.control), checks);
        default:
            return std::nullopt;
    }
}

std::array<double, 2> wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) {
        throw std::invalid_argument("wilson_interval: trials must be positive");
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

DetectionStats estimate_detection(const ProtocolConfig& cfg, const AttackSpec& spec, std::size_t trials) {
    if (trials == 0) {
        throw ConfigError("trials must be at least 1");
    }
    cfg.validate();
    DetectionStats stats;
    stats.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(cfg.seed, t));
        Eavesdropper eve(spec, cfg.encoding);
        auto ks = share_key(cfg, &eve, rng);
        std::optional<Stage> stage;
        if (ks.aborted()) {
            stage = ks.abort->stage;
        } else {
            const auto msgs = MessagePair::random(cfg.n, rng);
            auto round = run_dialogue(cfg, msgs, std::move(*ks.key), &eve, rng);
            stage = round.result.stage;
        }
        stats.per_trial.push_back(stage);
        if (stage) {
            ++stats.detected;
            ++stats.by_stage[static_cast<std::size_t>(*stage)];
        }
    }
    stats.rate = static_cast<double>(stats.detected) / static_cast<double>(trials);
    const auto ci = wilson_interval(stats.detected, trials);
    stats.wilson_low = ci[0];
    stats.wilson_high = ci[1];
    stats.analytic = analytic_detection_rate(cfg, spec);
    return stats;
}

OpacityResult ciphertext_opacity(const ProtocolConfig& cfg, std::size_t min_qubits, int control) {
    cfg.validate();
    AttackSpec spec;
    spec.kind = AttackKind::entangle_ancilla;
    spec.direction = AttackDirection::forward;
    spec.scope = AncillaScope::ciphertext_only;
    spec.control = control;

    OpacityResult out;
    for (std::uint64_t round = 0; out.qubits < min_qubits; ++round) {
        Rng rng(derive_seed(cfg.seed, round));
        auto ks = share_key(cfg, nullptr, rng);
        if (ks.aborted()) {
            throw std::logic_error("ciphertext_opacity: honest key sharing aborted");
        }
        const auto msgs = MessagePair::random(cfg.n, rng);
        Eavesdropper eve(spec, cfg.encoding);
        auto result = run_dialogue(cfg, msgs, std::move(*ks.key), &eve, rng);
        if (result.result.aborted) {
            throw std::logic_error("ciphertext_opacity: ciphertext-only attack caused an abort");
        }
        const auto guesses = eve.guess_messages();
        for (std::size_t i = 0; i < guesses.size(); ++i) {
            ++out.qubits;
            if (guesses[i][0] == msgs.alice[i] && guesses[i][1] == msgs.bob[i]) {
                ++out.correct;
            }
        }
    }
    out.accuracy = static_cast<double>(out.correct) / static_cast<double>(out.qubits);
    out.sigma_distance = std::abs(out.accuracy - 0.25) / std::sqrt(0.25 * 0.75 / static_cast<double>(out.qubits));
    return out;
}

AncillaInformation ciphertext_ancilla_information(Encoding enc, int control) {
    control_wire(control);
    // Qubits: A, B, C1, C2, E.
    const auto cu = controlled_logical_gate(enc);
    const auto cu_inv = cu.adjoint();
    const auto z = SingleQubitBasis::z();

    // Eve's ancilla and Bob's reading m' for each (m, carrier outcome).
    // The announcement is f = m' ^ j ^ k, so (j, k) only enters through f.
    struct Branch {
        double weight;
        int m_read;
        Eigen::MatrixXcd rho_e;
    };
    std::vector<Branch> branches;
    for (int m = 0; m < 2; ++m) {
        Ket s = tensor({bell_phi_plus(), encode(enc, state_from(Family::computational, m)), Ket(1)});
        s = apply_gate(s, cu, {0, 2, 3});
        s = apply_gate(s, gates::cnot(), {static_cast<std::size_t>(2 + control), 4});
        s = apply_gate(s, cu_inv, {1, 2, 3});
        for (int b1 = 0; b1 < 2; ++b1) {
            const double p1 = outcome_probability(s, 2, z, b1);
            if (p1 < kIdentityTol) {
                continue;
            }
            const Ket s1 = project_qubit(s, 2, z, b1);
            for (int b2 = 0; b2 < 2; ++b2) {
                const double p2 = outcome_probability(s1, 3, z, b2);
                if (p2 < kIdentityTol) {
                    continue;
                }
                int m_read;
                if (enc == Encoding::dp) {
                    if (b1 == b2) {
                        throw std::logic_error("ciphertext_ancilla_information: carrier left the code space");
                    }
                    m_read = b1;
                } else {
                    m_read = b1 ^ b2;
                }
                const Ket s2 = project_qubit(s1, 3, z, b2);
                branches.push_back({0.5 * p1 * p2, m_read, partial_trace(s2, {4}).matrix()});
            }
        }
    }

    AncillaInformation out;
    std::vector<DensityOp> per_jk;
    const DensityOp mixed(Eigen::MatrixXcd::Identity(2, 2) / 2.0);
    for (int jk = 0; jk < 4; ++jk) {
        const int j = jk >> 1;
        const int k = jk & 1;
        Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
        for (const auto& br : branches) {
            const int f = br.m_read ^ j ^ k;
            rho.block(2 * f, 2 * f, 2, 2) += br.weight * br.rho_e;
        }
        DensityOp joint(rho);
        const auto ancilla = partial_trace(joint, std::vector<std::size_t>{1});
        out.ancilla_deviation = std::max(out.ancilla_deviation, trace_distance(ancilla, mixed));
        per_jk.push_back(std::move(joint));
    }
    const std::array<double, 4> uniform{0.25, 0.25, 0.25, 0.25};
    const auto average = DensityOp::mixture(uniform, per_jk);
    double conditional = 0;
    for (const auto& r : per_jk) {
        conditional += 0.25 * von_neumann_entropy(r);
    }
    out.holevo_bits = std::max(0.0, von_neumann_entropy(average) - conditional);
    return out;
}

KeyReuseCorrelation key_reuse_correlation(double theta) {
    // Qubits: A, B, E.
    Ket s = apply_gate(tensor(bell_phi_plus(), Ket(1)), gates::cnot(), {1, 2});
    const auto r = rotation_gate(theta);
    s = apply_gate(s, r, {0});
    s = apply_gate(s, r, {1});
    const std::array<std::size_t, 2> qs{0, 2};
    auto mi = [&](const SingleQubitBasis& alice) {
        const std::array<SingleQubitBasis, 2> bases{alice, SingleQubitBasis::z()};
        const auto p = joint_outcome_probabilities(s, qs, bases);
        return mutual_information({p[0], p[1], p[2], p[3]});
    };
    return {theta, mi(SingleQubitBasis::z()), mi(SingleQubitBasis::x())};
}

}  // namespace qdsim
