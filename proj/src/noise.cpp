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


#include "qdsim/noise.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qdsim {

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::ideal: return "ideal";
        case NoiseKind::dephasing: return "dephasing";
        case NoiseKind::rotation: return "rotation";
    }
    return "?";
}

NoiseKind parse_noise_kind(std::string_view name) {
    if (name == "ideal") return NoiseKind::ideal;
    if (name == "dephasing") return NoiseKind::dephasing;
    if (name == "rotation") return NoiseKind::rotation;
    throw std::invalid_argument("unknown noise kind '" + std::string(name) + "'");
}

namespace {

double parse_angle(std::string_view text) {
    std::string s(text);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty() || !std::isfinite(v)) {
        throw std::invalid_argument("bad noise angle '" + s + "'");
    }
    return v;
}

}  // namespace

NoiseLaw NoiseLaw::list(std::vector<double> angles) {
    if (angles.empty()) {
        throw std::invalid_argument("NoiseLaw::list: need at least one angle");
    }
    return {Kind::list, std::move(angles)};
}

NoiseLaw NoiseLaw::parse(std::string_view text) {
    if (text == "uniform") {
        return uniform();
    }
    if (text.starts_with("fixed:")) {
        return fixed(parse_angle(text.substr(6)));
    }
    if (text.starts_with("list:")) {
        std::vector<double> angles;
        auto rest = text.substr(5);
        while (!rest.empty()) {
            auto comma = rest.find(',');
            angles.push_back(parse_angle(rest.substr(0, comma)));
            if (comma == std::string_view::npos) {
                break;
            }
            rest = rest.substr(comma + 1);
        }
        return list(std::move(angles));
    }
    throw std::invalid_argument("unknown noise law '" + std::string(text) + "' (uniform | fixed:<rad> | list:<rad>,...)");
}

std::string NoiseLaw::to_string() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::uniform: return "uniform";
        case Kind::fixed: os << "fixed:" << values.at(0); break;
        case Kind::list:
            os << "list:";
            for (std::size_t i = 0; i < values.size(); ++i) {
                os << (i ? "," : "") << values[i];
            }
            break;
    }
    return os.str();
}

double NoiseModel::draw(Rng& rng) const {
    if (kind == NoiseKind::ideal) {
        return 0;
    }
    switch (law.kind) {
        case NoiseLaw::Kind::uniform: return 2 * std::numbers::pi * rng.uniform();
        case NoiseLaw::Kind::fixed: return law.values.at(0);
        case NoiseLaw::Kind::list: return law.values.at(rng.below(law.values.size()));
    }
    return 0;
}

GateMatrix channel_gate(NoiseKind kind, double angle) {
    switch (kind) {
        case NoiseKind::ideal: return gates::identity();
        case NoiseKind::dephasing: return gates::phase(angle);
        case NoiseKind::rotation: {
            // Columns are the images of |0> and |1>.
            Eigen::MatrixXcd m(2, 2);
            const double c = std::cos(angle);
            const double s = std::sin(angle);
            m << c, -s, s, c;
            return GateMatrix(std::move(m));
        }
    }
    throw std::invalid_argument("channel_gate: bad kind");
}

Ket apply_channel(const Ket& state, std::span<const std::size_t> qubits, NoiseKind kind, double angle) {
    const auto g = channel_gate(kind, angle);
    Ket out = state;
    for (auto q : qubits) {
        out = apply_gate(out, g, {q});
    }
    return out;
}

Ket apply_dephasing(const Ket& state, std::span<const std::size_t> qubits, double phi) {
    return apply_channel(state, qubits, NoiseKind::dephasing, phi);
}

Ket apply_rotation(const Ket& state, std::span<const std::size_t> qubits, double theta) {
    return apply_channel(state, qubits, NoiseKind::rotation, theta);
}

std::pair<Ket, NoiseDraw> transmit_block(const Ket& state,
                                         std::span<const std::size_t> block_qubits,
                                         const NoiseModel& model,
                                         Rng& rng,
                                         std::uint64_t block_id) {
    if (block_qubits.empty()) {
        throw std::invalid_argument("transmit_block: empty block");
    }
    NoiseDraw d{model.draw(rng), block_id};
    return {apply_channel(state, block_qubits, model.kind, d.angle), d};
}

}  // namespace qdsim
