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


#ifndef QDSIM_ADVERSARY_HPP
#define QDSIM_ADVERSARY_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdsim/protocol.hpp"

namespace qdsim {

enum class AttackKind { none, intercept_resend_logical, intercept_resend_physical, capture_sc, entangle_ancilla };

/// Which transmissions an attack touches. capture_sc always acts on the key
/// flight and ignores this setting.
enum class AttackDirection { key_flight, forward, return_, both };

/// What Eve forwards to Bob after keeping the genuine carrier qubits.
///   random_logical: a uniformly random logical state of the encoding.
///   entangled:      carrier halves of her own resource states.
///   block:          nothing; the key-sharing round never completes.
enum class SubstitutionPolicy { random_logical, entangled, block };

/// Which slots entangle_ancilla touches.
///   all:             every traveling logical qubit (decoys included).
///   ciphertext_only: message slots only, selected via the decoy oracle.
enum class AncillaScope { all, ciphertext_only };

std::string to_string(AttackKind k);
std::string to_string(AttackDirection d);
std::string to_string(SubstitutionPolicy p);
std::string to_string(AncillaScope s);
AttackKind parse_attack_kind(std::string_view s);
AttackDirection parse_attack_direction(std::string_view s);
SubstitutionPolicy parse_substitution_policy(std::string_view s);
AncillaScope parse_ancilla_scope(std::string_view s);

/// Eve's choice of measurement family for each intercepted logical qubit.
using FamilyPolicy = std::function<Family(Rng&)>;

struct AttackSpec {
    AttackKind kind = AttackKind::none;
    AttackDirection direction = AttackDirection::forward;
    SubstitutionPolicy substitution = SubstitutionPolicy::random_logical;
    AncillaScope scope = AncillaScope::all;
    /// Carrier qubit used as CNOT control by entangle_ancilla: 0 = C1, 1 = C2.
    int control = 0;
    /// Empty means a fair coin between the two families.
    FamilyPolicy family_policy;
};

/// One thing Eve learned about one traveling slot.
struct EveRecord {
    std::string direction;
    std::size_t slot = 0;
    /// Logical outcome of an intercept (empty for raw or tampered reads).
    std::optional<LogicalState> observed;
    std::array<int, 2> bits{};
    /// Z outcome of the ancilla attached to this slot, if any.
    std::optional<int> ancilla;
};

struct EveState {
    std::vector<EveRecord> records;
    /// Ancillas created so far; each gets wire name "E<index>".
    std::size_t ancilla_count = 0;
    /// Announcements seen on the public channel, one vector per round.
    std::vector<Bits> announcements;
    /// (j, k) guesses per message slot, filled by guess_messages().
    std::vector<std::array<int, 2>> guesses;
};

/// Eve measures every slot with discriminate() in a family drawn from
/// `policy` (fair coin when empty) and resends the logical state she saw.
/// Tampered reads are resent as the raw bit product state.
void intercept_resend_logical(TravelingBlock& block, Encoding enc, EveState& eve, Rng& rng,
                              const FamilyPolicy& policy = {}, const std::string& direction = "forward");

/// Eve measures both carrier qubits of every slot in Z and resends the
/// product state she read.
void intercept_resend_physical(TravelingBlock& block, EveState& eve, Rng& rng,
                               const std::string& direction = "forward");

/// Eve keeps the genuine carriers of every resource state (renamed
/// "E<index>.C1"/"E<index>.C2") and forwards substitutes on "C1", "C2".
/// Returns false for the blocking policy.
bool capture_sc(std::vector<QubitRegister>& slots, Encoding enc, SubstitutionPolicy policy, EveState& eve,
                Rng& rng);

/// Appends a fresh |0> ancilla, applies CNOT(control -> ancilla), then Eve
/// measures the ancilla in Z and keeps the outcome. Returns that outcome.
int entangle_ancilla(QubitRegister& slot, std::string_view control, EveState& eve, Rng& rng);

/// Channel tap running one attack. Per-run: create a fresh instance for
/// each trial.
class Eavesdropper : public ChannelTap {
  public:
    Eavesdropper(AttackSpec spec, Encoding enc);

    const EveState& state() const { return eve_; }
    const AttackSpec& spec() const { return spec_; }

    bool on_key_flight(std::vector<QubitRegister>& slots, Rng& rng) override;
    void on_forward(TravelingBlock& block, const std::vector<bool>& decoy_oracle, Rng& rng) override;
    void on_return(TravelingBlock& block, const std::vector<bool>& decoy_oracle, Rng& rng) override;
    void on_announcement(const Bits& announced) override;

    /// For ciphertext-only ancilla attacks on the forward block: guess
    /// j_i = e_i XOR f_i, k_i = 0 from the ancilla bit e_i and the
    /// announcement f_i of each message slot of the latest round.
    std::vector<std::array<int, 2>> guess_messages() const;

  private:
    void attack_block(TravelingBlock& block, const std::vector<bool>& decoy_oracle, Rng& rng,
                      const std::string& direction);

    AttackSpec spec_;
    Encoding enc_;
    EveState eve_;
    /// Ancilla bits of the message slots of the latest forward block.
    Bits message_ancillas_;
};

// Exact per-qubit probabilities, by enumeration over prepared states, Eve's
// choices and Born-rule outcomes. Channel noise is omitted: the matching
// collective channel leaves every code state unchanged up to phase.

/// Probability that one decoy fails its check after a logical intercept with
/// families drawn uniformly.
double intercept_logical_decoy_detection(Encoding enc);
/// Same for the physical Z intercept.
double intercept_physical_decoy_detection(Encoding enc);
/// Same for an ancilla CNOT controlled by carrier `control` (0 or 1).
double entangle_ancilla_decoy_detection(Encoding enc, int control);
/// Probability that one sampled resource state violates the sampling check
/// when Eve substitutes the carriers.
double capture_sc_sample_violation(Encoding enc, SubstitutionPolicy policy);
/// Same for an ancilla CNOT on a resource-state carrier during the key flight.
double entangle_ancilla_sample_violation(Encoding enc, int control);

/// 1 - (1 - p)^checks.
double detection_over(double per_check, std::size_t checks);

/// Exact abort probability of one key share plus one dialogue round under
/// the attack, when a closed form is available.
std::optional<double> analytic_detection_rate(const ProtocolConfig& cfg, const AttackSpec& spec);

struct DetectionStats {
    std::size_t trials = 0;
    std::size_t detected = 0;
    double rate = 0;
    /// 95% Wilson score interval.
    double wilson_low = 0;
    double wilson_high = 0;
    std::optional<double> analytic;
    /// Detected trials per abort stage, indexed by Stage.
    std::array<std::size_t, 5> by_stage{};
    /// Abort stage of each trial, empty when the trial went undetected.
    std::vector<std::optional<Stage>> per_trial;

    bool interval_contains(double p) const { return wilson_low <= p && p <= wilson_high; }
};

inline constexpr double kWilsonZ95 = 1.959963984540054;

/// Wilson score interval for `successes` out of `trials`.
std::array<double, 2> wilson_interval(std::size_t successes, std::size_t trials, double z = kWilsonZ95);

/// Runs key sharing plus one dialogue round `trials` times, trial t seeded
/// with derive_seed(cfg.seed, t), and counts aborts.
DetectionStats estimate_detection(const ProtocolConfig& cfg, const AttackSpec& spec, std::size_t trials);

struct OpacityResult {
    std::size_t qubits = 0;
    std::size_t correct = 0;
    double accuracy = 0;
    /// |accuracy - 1/4| in units of sqrt(p(1-p)/qubits) at p = 1/4.
    double sigma_distance = 0;
};

/// Ciphertext-only ancilla attack on the forward block: fresh key per round,
/// rounds until at least `min_qubits` message qubits were attacked. Eve's
/// guesses are scored against the true (j, k).
OpacityResult ciphertext_opacity(const ProtocolConfig& cfg, std::size_t min_qubits, int control = 0);

struct AncillaInformation {
    /// Trace distance of Eve's ancilla from I/2, maximized over (j, k).
    double ancilla_deviation = 0;
    /// Holevo quantity between (j, k) and Eve's ancilla plus the public
    /// announcement; bounds her mutual information with (j, k).
    double holevo_bits = 0;
};

/// Exact density-operator analysis of one ciphertext qubit attacked by
/// entangle_ancilla on the forward flight, averaged over Alice's random m
/// and Bob's measurement outcomes.
AncillaInformation ciphertext_ancilla_information(Encoding enc, int control = 0);

struct KeyReuseCorrelation {
    double theta = 0;
    /// Mutual information between Eve's ancilla and Alice's key qubit read
    /// in Z and in X after R(theta) x R(theta).
    double mi_z = 0;
    double mi_x = 0;
};

/// Eve entangles an ancilla with Bob's key qubit by CNOT(B -> E), then both
/// key qubits are rotated by theta. Exact 3-qubit computation.
KeyReuseCorrelation key_reuse_correlation(double theta);

}  // namespace qdsim

#endif  // QDSIM_ADVERSARY_HPP
