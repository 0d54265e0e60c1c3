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


#ifndef QDSIM_NOISE_HPP
#define QDSIM_NOISE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdsim/statevec.hpp"

namespace qdsim {

enum class NoiseKind { ideal, dephasing, rotation };

std::string to_string(NoiseKind kind);
/// Throws std::invalid_argument for an unknown name.
NoiseKind parse_noise_kind(std::string_view name);

/// How the per-block noise angle is drawn.
struct NoiseLaw {
    enum class Kind { uniform, fixed, list };

    Kind kind = Kind::uniform;
    /// fixed: one value; list: candidates drawn uniformly.
    std::vector<double> values;

    static NoiseLaw uniform() { return {}; }
    static NoiseLaw fixed(double angle) { return {Kind::fixed, {angle}}; }
    static NoiseLaw list(std::vector<double> angles);

    /// Parses "uniform", "fixed:<rad>" or "list:<rad>,<rad>,...".
    static NoiseLaw parse(std::string_view text);
    std::string to_string() const;
};

struct NoiseModel {
    NoiseKind kind = NoiseKind::ideal;
    NoiseLaw law;

    /// Angle for the next block: uniform in [0, 2pi) by default. Always 0 for
    /// the ideal channel (no randomness is consumed).
    double draw(Rng& rng) const;
};

/// One collective-noise event: every qubit of block `block_id` saw `angle`.
struct NoiseDraw {
    double angle = 0;
    std::uint64_t block_id = 0;
};

/// diag(1, e^{i phi}) on each listed qubit.
Ket apply_dephasing(const Ket& state, std::span<const std::size_t> qubits, double phi);

/// U|0> = cos t|0> + sin t|1>, U|1> = -sin t|0> + cos t|1> on each listed qubit.
Ket apply_rotation(const Ket& state, std::span<const std::size_t> qubits, double theta);

/// Single-qubit unitary of the channel at a given angle.
GateMatrix channel_gate(NoiseKind kind, double angle);

/// The channel of `kind` at a fixed angle, on each listed qubit.
Ket apply_channel(const Ket& state, std::span<const std::size_t> qubits, NoiseKind kind, double angle);

/// Draws one angle from `model` and applies the matching channel to every
/// qubit in `block_qubits`.
std::pair<Ket, NoiseDraw> transmit_block(const Ket& state,
                                         std::span<const std::size_t> block_qubits,
                                         const NoiseModel& model,
                                         Rng& rng,
                                         std::uint64_t block_id = 0);

}  // namespace qdsim

#endif  // QDSIM_NOISE_HPP
