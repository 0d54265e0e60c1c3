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


#include "qdsim/logical.hpp"

#include <cmath>
#include <numbers>

namespace qdsim {

std::string to_string(Encoding e) { return e == Encoding::dp ? "dp" : "r"; }

std::string to_string(LogicalState s) {
    switch (s) {
        case LogicalState::L0: return "L0";
        case LogicalState::L1: return "L1";
        case LogicalState::Lplus: return "Lplus";
        case LogicalState::Lminus: return "Lminus";
    }
    return "?";
}

std::string to_string(Family f) { return f == Family::computational ? "computational" : "superposition"; }

Encoding parse_encoding(std::string_view name) {
    if (name == "dp") return Encoding::dp;
    if (name == "r") return Encoding::r;
    throw std::invalid_argument("unknown encoding '" + std::string(name) + "' (dp | r)");
}

Family family_of(LogicalState s) {
    return (s == LogicalState::L0 || s == LogicalState::L1) ? Family::computational : Family::superposition;
}

int bit_of(LogicalState s) { return (s == LogicalState::L1 || s == LogicalState::Lminus) ? 1 : 0; }

LogicalState state_from(Family f, int bit) {
    if (f == Family::computational) {
        return bit ? LogicalState::L1 : LogicalState::L0;
    }
    return bit ? LogicalState::Lminus : LogicalState::Lplus;
}

NoiseKind matching_noise(Encoding e) { return e == Encoding::dp ? NoiseKind::dephasing : NoiseKind::rotation; }

namespace {

// Amplitudes over |00>, |01>, |10>, |11>.
std::array<Complex, 4> code_word(Encoding enc, int bit) {
    if (enc == Encoding::dp) {
        return bit ? std::array<Complex, 4>{0, 0, 1, 0} : std::array<Complex, 4>{0, 1, 0, 0};
    }
    const double h = std::numbers::sqrt2 / 2;
    return bit ? std::array<Complex, 4>{0, h, -h, 0} : std::array<Complex, 4>{h, 0, 0, h};
}

}  // namespace

Ket encode(Encoding enc, LogicalState s) {
    const auto zero = code_word(enc, 0);
    const auto one = code_word(enc, 1);
    std::vector<Complex> amps(4);
    switch (s) {
        case LogicalState::L0: amps.assign(zero.begin(), zero.end()); break;
        case LogicalState::L1: amps.assign(one.begin(), one.end()); break;
        case LogicalState::Lplus:
            for (int i = 0; i < 4; ++i) amps[i] = zero[i] + one[i];
            break;
        case LogicalState::Lminus:
            for (int i = 0; i < 4; ++i) amps[i] = zero[i] - one[i];
            break;
    }
    return Ket::from_amplitudes(std::move(amps));
}

GateMatrix logical_gate(Encoding enc, LogicalOp op) {
    if (op == LogicalOp::U0) {
        return gates::identity(2);
    }
    if (enc == Encoding::dp) {
        return gates::minus_i_sigma_y().kron(gates::pauli_x());
    }
    return gates::identity().kron(gates::minus_i_sigma_y());
}

GateMatrix logical_gate(Encoding enc, int bit) { return logical_gate(enc, bit ? LogicalOp::U1 : LogicalOp::U0); }

GateMatrix controlled_logical_gate(Encoding enc) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(8, 8);
    m.topLeftCorner(4, 4) = Eigen::MatrixXcd::Identity(4, 4);
    m.bottomRightCorner(4, 4) = logical_gate(enc, LogicalOp::U1).matrix();
    return GateMatrix(std::move(m));
}

Ket prepare_resource(Encoding enc) {
    auto branch0 = tensor(Ket::bits({0}), encode(enc, LogicalState::L0));
    auto branch1 = tensor(Ket::bits({1}), encode(enc, LogicalState::L1));
    std::vector<Complex> amps(8);
    for (std::size_t i = 0; i < 8; ++i) {
        amps[i] = branch0[i] + branch1[i];
    }
    return Ket::from_amplitudes(std::move(amps));
}

namespace {

void require_resource(Encoding enc, const Ket& state) {
    if (state.n_qubits() != 3) {
        throw DistillationError("distill_key: expected a 3-qubit (A, C1, C2) state");
    }
    const double f = fidelity(prepare_resource(enc), state);
    if (f < kResourceFidelity) {
        throw DistillationError("distill_key: input fidelity " + std::to_string(f) +
                                " with the " + to_string(enc) + " resource state is below threshold");
    }
}

Ket align_unchecked(const Ket& state) {
    Ket out = state;
    for (std::size_t q = 0; q < 3; ++q) {
        out = apply_gate(out, gates::phase_s(), {q});
    }
    for (std::size_t q = 0; q < 3; ++q) {
        out = apply_gate(out, gates::hadamard(), {q});
    }
    return out;
}

}  // namespace

Ket distill_key_dp(const Ket& resource) {
    require_resource(Encoding::dp, resource);
    return apply_gate(resource, gates::cnot(), {1, 2});
}

Ket align_resource_r(const Ket& resource) {
    if (resource.n_qubits() != 3) {
        throw std::invalid_argument("align_resource_r: expected a 3-qubit state");
    }
    return align_unchecked(resource);
}

Ket distill_key_r(const Ket& resource) {
    require_resource(Encoding::r, resource);
    return apply_gate(align_unchecked(resource), gates::cnot(), {1, 2});
}

Ket distill_key(Encoding enc, const Ket& resource) {
    return enc == Encoding::dp ? distill_key_dp(resource) : distill_key_r(resource);
}

void apply_distillation(QubitRegister& reg, Encoding enc,
                        std::string_view a, std::string_view c1, std::string_view c2) {
    if (enc == Encoding::r) {
        for (auto w : {a, c1, c2}) {
            reg.apply(gates::phase_s(), {w});
        }
        for (auto w : {a, c1, c2}) {
            reg.apply(gates::hadamard(), {w});
        }
    }
    reg.apply(gates::cnot(), {c1, c2});
}

namespace {

std::optional<LogicalState> classify(Encoding enc, Family family, int b1, int b2) {
    const int parity = b1 ^ b2;
    if (enc == Encoding::dp && family == Family::computational) {
        if (parity == 0) {
            return std::nullopt;
        }
        return b1 == 0 ? LogicalState::L0 : LogicalState::L1;
    }
    return state_from(family, parity);
}

// Single-qubit pre-rotations that turn the family into a parity readout.
void pre_rotate(QubitRegister& reg, std::string_view q1, std::string_view q2, Encoding enc, Family family) {
    if (family != Family::superposition) {
        return;
    }
    if (enc == Encoding::dp) {
        reg.apply(gates::hadamard(), {q1});
    }
    reg.apply(gates::hadamard(), {q2});
}

}  // namespace

Discrimination discriminate(QubitRegister& reg, std::string_view q1, std::string_view q2,
                            Encoding enc, Family family, Rng& rng) {
    pre_rotate(reg, q1, q2, enc, family);
    const auto z = SingleQubitBasis::z();
    Discrimination d;
    d.bits[0] = reg.measure(q1, z, rng);
    d.bits[1] = reg.measure(q2, z, rng);
    d.outcome = classify(enc, family, d.bits[0], d.bits[1]);
    return d;
}

Discrimination discriminate(const Ket& state, Encoding enc, Family family, Rng& rng) {
    if (state.n_qubits() != 2) {
        throw std::invalid_argument("discriminate: expected a 2-qubit state");
    }
    QubitRegister reg(state, {"q1", "q2"});
    return discriminate(reg, "q1", "q2", enc, family, rng);
}

DiscriminationLaw discrimination_law(const Ket& state, std::size_t q1, std::size_t q2,
                                     Encoding enc, Family family) {
    Ket rotated = state;
    if (family == Family::superposition) {
        if (enc == Encoding::dp) {
            rotated = apply_gate(rotated, gates::hadamard(), {q1});
        }
        rotated = apply_gate(rotated, gates::hadamard(), {q2});
    }
    const std::array<std::size_t, 2> qs{q1, q2};
    const std::array<SingleQubitBasis, 2> zz{SingleQubitBasis::z(), SingleQubitBasis::z()};
    const auto p = joint_outcome_probabilities(rotated, qs, zz);
    DiscriminationLaw law;
    for (int b = 0; b < 4; ++b) {
        auto s = classify(enc, family, b >> 1, b & 1);
        if (s) {
            law.state[static_cast<std::size_t>(*s)] += p[static_cast<std::size_t>(b)];
        } else {
            law.tamper += p[static_cast<std::size_t>(b)];
        }
    }
    return law;
}

GateMatrix rotation_gate(double theta) {
    Eigen::MatrixXcd m(2, 2);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    m << c, s, -s, c;
    return GateMatrix(std::move(m));
}

Ket bell_phi_plus() { return Ket::from_amplitudes({1, 0, 0, 1}); }

}  // namespace qdsim
