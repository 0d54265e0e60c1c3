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


#ifndef QDSIM_ANALYSIS_HPP
#define QDSIM_ANALYSIS_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdsim/protocol.hpp"

namespace qdsim {

/// What an outsider sees about one qubit of a dialogue round.
struct PublicQubitView {
    /// Alice's announced final logical bit.
    std::optional<int> announcement;
    /// The initial logical bit m, only in counterfactual studies.
    std::optional<int> public_m;
};

/// Posterior over (j, k), indexed 2*j + k.
struct LeakageReport {
    std::array<double, 4> posterior{};
    double entropy_bits = 0;
    double leakage_bits = 0;
};

/// Enumerates every (m, j, k) compatible with the view under
/// announced = m ^ j ^ k, with uniform priors, and returns the posterior
/// over (j, k). Throws std::invalid_argument on bits other than 0/1.
LeakageReport leakage_entropy(const PublicQubitView& view);

struct TranscriptLeakage {
    std::vector<LeakageReport> per_qubit;
    std::size_t qubits = 0;
    /// Sums over qubits (qubits are independent under uniform priors).
    double entropy_bits = 0;
    double leakage_bits = 0;
    double max_leakage_bits = 0;
};

/// Leakage for every announced qubit of a transcript. Announcements that
/// carry disclosed initial bits are treated as counterfactual public-m views.
/// Throws std::invalid_argument when a disclosure does not match its
/// announcement in length.
TranscriptLeakage leakage_report(const Transcript& transcript);

enum class EfficiencyMode { qd, qd_with_key_amortization_off, qkd_otp };

std::string to_string(EfficiencyMode m);
EfficiencyMode parse_efficiency_mode(std::string_view s);

/// eta = b_s / (q_t + b_t), per exchanged pair of secret bits.
struct EfficiencyReport {
    EfficiencyMode mode = EfficiencyMode::qd;
    int b_s = 0;
    int q_t = 0;
    int b_t = 0;
    double eta = 0;
    /// eta as a reduced fraction, e.g. "2/3".
    std::string eta_fraction;
};

/// qd: b_s=2, q_t=2, b_t=1 (key production amortized over reuse).
/// qd_with_key_amortization_off: the three qubits of the resource state are
/// charged to every pair, b_s=2, q_t=5, b_t=1.
/// qkd_otp: key distribution plus one-time pad, b_s=2, q_t=4, b_t=2.
EfficiencyReport efficiency(EfficiencyMode mode);
EfficiencyReport efficiency_from_counts(EfficiencyMode mode, int b_s, int q_t, int b_t);

/// Published efficiencies of two earlier collective-noise dialogue protocols,
/// echoed in comparison tables. Not simulated.
struct PublishedEfficiency {
    const char* label;
    double eta;
};
inline constexpr std::array<PublishedEfficiency, 2> kPublishedComparison{{
    {"earlier_df_dialogue_a", 0.40},
    {"earlier_df_dialogue_b", 1.0 / 3},
}};

struct StateInvariance {
    LogicalState state = LogicalState::L0;
    std::size_t trials = 0;
    std::size_t passed = 0;
    /// max over angles of min over phases of ||U psi - lambda psi||.
    double max_deviation = 0;
};

struct DfInvarianceReport {
    Encoding encoding = Encoding::dp;
    NoiseKind channel = NoiseKind::dephasing;
    std::vector<StateInvariance> states;

    bool all_passed() const;
};

/// Applies `channel` at `trials` uniform random angles to each of the four
/// logical states and checks equality up to global phase.
DfInvarianceReport df_invariance_suite(Encoding enc, NoiseKind channel, std::size_t trials, Rng& rng);

struct MixednessReport {
    std::size_t qubits = 0;
    /// max over in-flight message carriers of the trace distance between
    /// their reduced state and I/2 on the code space.
    double max_deviation = 0;
};

/// Introspecting tap: records, for every forward message carrier, the trace
/// distance between its reduced state and I/2 on the code space. Reads the
/// decoy oracle and never modifies the block.
class MixednessProbe : public ChannelTap {
  public:
    explicit MixednessProbe(Encoding enc);

    void on_forward(TravelingBlock& block, const std::vector<bool>& decoy_oracle, Rng& rng) override;

    const MixednessReport& report() const { return report_; }

  private:
    DensityOp mixed_;
    MixednessReport report_;
};

/// Shares a key and runs one dialogue round under a MixednessProbe. Uses
/// cfg.seed.
MixednessReport mixedness_check(const ProtocolConfig& cfg);

struct IdentityCheck {
    std::string name;
    /// Empty for checks that do not depend on the encoding.
    std::optional<Encoding> encoding;
    bool passed = false;
    double max_error = 0;
};

/// Algebraic identities behind the protocol: code invariance, logical
/// operator tables, resource states in both measurement bases, distillation
/// circuits, single-photon discrimination and key-rotation invariance.
/// With `only` set, encoding-neutral checks are still included.
std::vector<IdentityCheck> identity_suite(std::optional<Encoding> only, Rng& rng);

}  // namespace qdsim

#endif  // QDSIM_ANALYSIS_HPP
