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


#ifndef QDSIM_LOGICAL_HPP
#define QDSIM_LOGICAL_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qdsim/noise.hpp"
#include "qdsim/register.hpp"
#include "qdsim/statevec.hpp"

namespace qdsim {

/// Two-photon decoherence-free code.
///   dp: |0>_L = |01>,  |1>_L = |10>         (immune to collective dephasing)
///   r:  |0>_L = |phi+>, |1>_L = |psi->      (immune to collective rotation)
enum class Encoding { dp, r };

enum class LogicalState { L0, L1, Lplus, Lminus };
enum class LogicalOp { U0, U1 };
/// Measurement family: {L0, L1} or {Lplus, Lminus}.
enum class Family { computational, superposition };

std::string to_string(Encoding e);
std::string to_string(LogicalState s);
std::string to_string(Family f);
Encoding parse_encoding(std::string_view name);

Family family_of(LogicalState s);
/// The bit a state stands for inside its family (L0, Lplus -> 0).
int bit_of(LogicalState s);
LogicalState state_from(Family f, int bit);

/// The collective channel the encoding is built to survive.
NoiseKind matching_noise(Encoding e);

/// Physical two-qubit code ket.
Ket encode(Encoding enc, LogicalState s);

/// U0 = identity; U1 = (-i sigma_y) x sigma_x for dp, I x (-i sigma_y) for r.
/// On the code space U1 maps L0 -> L1, L1 -> -L0, Lplus -> -Lminus,
/// Lminus -> Lplus.
GateMatrix logical_gate(Encoding enc, LogicalOp op);
GateMatrix logical_gate(Encoding enc, int bit);

/// |0><0| x U0 + |1><1| x U1 on (control, code qubit 1, code qubit 2).
GateMatrix controlled_logical_gate(Encoding enc);

/// (|0>_A |0>_L + |1>_A |1>_L) / sqrt2 on qubits (A, C1, C2).
Ket prepare_resource(Encoding enc);

/// Raised when a distillation input is not the expected resource state.
class DistillationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Fidelity required of a distillation input (up to global phase).
inline constexpr double kResourceFidelity = 1 - 1e-9;

/// CNOT(C1 -> C2) on a dp resource state: result is |phi+>_{A,C1} |1>_{C2}.
/// Throws DistillationError if the input is not the dp resource up to phase.
Ket distill_key_dp(const Ket& resource);

/// S on all three qubits, then H on all three. Takes the r resource state to
/// (|1>|1>|0> + |0>|0>|1>)/sqrt2.
Ket align_resource_r(const Ket& resource);

/// align_resource_r then CNOT(C1 -> C2): |phi+>_{A,C1} |1>_{C2}.
/// Throws DistillationError if the input is not the r resource up to phase.
Ket distill_key_r(const Ket& resource);

Ket distill_key(Encoding enc, const Ket& resource);

/// The unchecked distillation circuit, on named wires of a larger register.
void apply_distillation(QubitRegister& reg, Encoding enc,
                        std::string_view a, std::string_view c1, std::string_view c2);

/// Result of a single-photon discrimination. `outcome` is empty when the raw
/// bits fall outside what an honest family member can produce (tampering).
struct Discrimination {
    std::optional<LogicalState> outcome;
    std::array<int, 2> bits{};

    bool tampered() const { return !outcome.has_value(); }
};

/// Distinguishes the two members of `family` using only single-qubit
/// operations and single-qubit Z measurements:
///   dp computational: Z Z; 01 -> L0, 10 -> L1, 00/11 -> tamper.
///   dp superposition: H H, Z Z; even parity -> Lplus, odd -> Lminus.
///   r computational:  Z Z; even -> L0, odd -> L1.
///   r superposition:  H on the second qubit, Z Z; even -> Lplus, odd -> Lminus.
/// Destructive: the two wires are left in the measured Z eigenstates.
Discrimination discriminate(QubitRegister& reg, std::string_view q1, std::string_view q2,
                            Encoding enc, Family family, Rng& rng);

/// Two-qubit convenience form.
Discrimination discriminate(const Ket& state, Encoding enc, Family family, Rng& rng);

/// Exact outcome distribution of discriminate(): entries for L0, L1, Lplus,
/// Lminus (indexed by LogicalState) and the tamper probability.
struct DiscriminationLaw {
    std::array<double, 4> state{};
    double tamper = 0;
};
DiscriminationLaw discrimination_law(const Ket& state, std::size_t q1, std::size_t q2,
                                     Encoding enc, Family family);

/// [[cos t, sin t], [-sin t, cos t]]: the key-refresh rotation.
GateMatrix rotation_gate(double theta);

/// (|00> + |11>)/sqrt2.
Ket bell_phi_plus();

}  // namespace qdsim

#endif  // QDSIM_LOGICAL_HPP
