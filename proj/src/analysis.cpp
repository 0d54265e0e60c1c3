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


#include "qdsim/analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qdsim {

namespace {

void require_bit(int b, const char* what) {
    if (b != 0 && b != 1) {
        throw std::invalid_argument(std::string(what) + " must be 0 or 1");
    }
}

double exact_distance(const Ket& a, const Ket& b) {
    if (a.dim() != b.dim()) {
        return std::numeric_limits<double>::infinity();
    }
    double s = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        s += std::norm(a[i] - b[i]);
    }
    return std::sqrt(s);
}

Ket amplitudes(std::initializer_list<Complex> amps) { return Ket::from_amplitudes(std::vector<Complex>(amps)); }

Ket add(const Ket& a, const Ket& b, Complex wb = 1) {
    std::vector<Complex> v(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        v[i] = a[i] + wb * b[i];
    }
    return Ket::from_amplitudes(std::move(v));
}

DensityOp code_space_mixed(Encoding enc) {
    const std::array<double, 2> w{0.5, 0.5};
    const std::array<DensityOp, 2> parts{DensityOp::from_ket(encode(enc, LogicalState::L0)),
                                         DensityOp::from_ket(encode(enc, LogicalState::L1))};
    return DensityOp::mixture(w, parts);
}

const std::array<LogicalState, 4> kStates{LogicalState::L0, LogicalState::L1, LogicalState::Lplus,
                                          LogicalState::Lminus};

}  // namespace

LeakageReport leakage_entropy(const PublicQubitView& view) {
    if (view.announcement) {
        require_bit(*view.announcement, "announcement");
    }
    if (view.public_m) {
        require_bit(*view.public_m, "public m");
    }
    LeakageReport r;
    double total = 0;
    for (int m = 0; m < 2; ++m) {
        if (view.public_m && *view.public_m != m) {
            continue;
        }
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                if (view.announcement && (m ^ j ^ k) != *view.announcement) {
                    continue;
                }
                r.posterior[static_cast<std::size_t>(2 * j + k)] += 1;
                total += 1;
            }
        }
    }
    for (auto& p : r.posterior) {
        p /= total;
    }
    r.entropy_bits = shannon_entropy(r.posterior);
    r.leakage_bits = 2 - r.entropy_bits;
    return r;
}

TranscriptLeakage leakage_report(const Transcript& transcript) {
    TranscriptLeakage out;
    for (const auto& ev : transcript.announcements()) {
        if (ev.disclosed_initial && ev.disclosed_initial->size() != ev.bits.size()) {
            throw std::invalid_argument("leakage_report: disclosed bits do not match the announcement");
        }
        for (std::size_t i = 0; i < ev.bits.size(); ++i) {
            PublicQubitView view{ev.bits[i], std::nullopt};
            if (ev.disclosed_initial) {
                view.public_m = (*ev.disclosed_initial)[i];
            }
            auto r = leakage_entropy(view);
            out.entropy_bits += r.entropy_bits;
            out.leakage_bits += r.leakage_bits;
            out.max_leakage_bits = std::max(out.max_leakage_bits, r.leakage_bits);
            out.per_qubit.push_back(r);
        }
    }
    out.qubits = out.per_qubit.size();
    return out;
}

std::string to_string(EfficiencyMode m) {
    switch (m) {
        case EfficiencyMode::qd:
            return "qd";
        case EfficiencyMode::qd_with_key_amortization_off:
            return "qd_with_key_amortization_off";
        case EfficiencyMode::qkd_otp:
            return "qkd_otp";
    }
    return "?";
}

EfficiencyMode parse_efficiency_mode(std::string_view s) {
    for (auto m : {EfficiencyMode::qd, EfficiencyMode::qd_with_key_amortization_off, EfficiencyMode::qkd_otp}) {
        if (s == to_string(m)) {
            return m;
        }
    }
    throw std::invalid_argument("unknown efficiency mode '" + std::string(s) + "'");
}

EfficiencyReport efficiency_from_counts(EfficiencyMode mode, int b_s, int q_t, int b_t) {
    if (b_s < 0 || q_t < 0 || b_t < 0 || q_t + b_t == 0) {
        throw std::invalid_argument("efficiency: counts must be nonnegative with q_t + b_t > 0");
    }
    EfficiencyReport r{mode, b_s, q_t, b_t, 0, "0"};
    const int den = q_t + b_t;
    r.eta = static_cast<double>(b_s) / den;
    if (b_s != 0) {
        const int g = std::gcd(b_s, den);
        r.eta_fraction = std::to_string(b_s / g) + "/" + std::to_string(den / g);
    }
    return r;
}

EfficiencyReport efficiency(EfficiencyMode mode) {
    switch (mode) {
        case EfficiencyMode::qd:
            return efficiency_from_counts(mode, 2, 2, 1);
        case EfficiencyMode::qd_with_key_amortization_off:
            return efficiency_from_counts(mode, 2, 5, 1);
        case EfficiencyMode::qkd_otp:
            return efficiency_from_counts(mode, 2, 4, 2);
    }
    throw std::invalid_argument("efficiency: bad mode");
}

bool DfInvarianceReport::all_passed() const {
    for (const auto& s : states) {
        if (s.passed != s.trials) {
            return false;
        }
    }
    return !states.empty();
}

DfInvarianceReport df_invariance_suite(Encoding enc, NoiseKind channel, std::size_t trials, Rng& rng) {
    if (trials == 0) {
        throw std::invalid_argument("df_invariance_suite: trials must be at least 1");
    }
    DfInvarianceReport out{enc, channel, {}};
    for (auto s : kStates) {
        out.states.push_back(StateInvariance{s, trials, 0, 0});
    }
    const std::array<std::size_t, 2> qubits{0, 1};
    for (std::size_t t = 0; t < trials; ++t) {
        const double angle = 2 * std::numbers::pi * rng.uniform();
        for (auto& st : out.states) {
            const Ket psi = encode(enc, st.state);
            const Ket noisy = apply_channel(psi, qubits, channel, angle);
            const double dev = phase_distance(noisy, psi);
            st.max_deviation = std::max(st.max_deviation, dev);
            if (equal_up_to_phase(noisy, psi)) {
                ++st.passed;
            }
        }
    }
    return out;
}

MixednessProbe::MixednessProbe(Encoding enc) : mixed_(code_space_mixed(enc)) {}

void MixednessProbe::on_forward(TravelingBlock& block, const std::vector<bool>& decoy_oracle, Rng& /*rng*/) {
    for (std::size_t i = 0; i < block.slots.size(); ++i) {
        if (decoy_oracle.at(i)) {
            continue;
        }
        const auto& slot = block.slots[i];
        const auto rho = partial_trace(slot.state(), slot.indices({"C1", "C2"}));
        report_.max_deviation = std::max(report_.max_deviation, trace_distance(rho, mixed_));
        ++report_.qubits;
    }
}

MixednessReport mixedness_check(const ProtocolConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    auto ks = share_key(cfg, nullptr, rng);
    if (ks.aborted()) {
        throw std::logic_error("mixedness_check: key sharing aborted");
    }
    MixednessProbe probe(cfg.encoding);
    const auto msgs = MessagePair::random(cfg.n, rng);
    run_dialogue(cfg, msgs, std::move(*ks.key), &probe, rng);
    return probe.report();
}

std::vector<IdentityCheck> identity_suite(std::optional<Encoding> only, Rng& rng) {
    std::vector<IdentityCheck> out;
    auto record = [&](std::string name, std::optional<Encoding> enc, double err) {
        out.push_back(IdentityCheck{std::move(name), enc, err < kIdentityTol, err});
    };

    const double h = 1 / std::numbers::sqrt2;
    const Complex i1(0, 1);
    const Ket one = Ket::bits({1});
    const Ket plus = amplitudes({h, h});
    const Ket minus = amplitudes({h, -h});
    const Ket phi_plus = amplitudes({h, 0, 0, h});

    for (auto enc : {Encoding::dp, Encoding::r}) {
        if (only && *only != enc) {
            continue;
        }
        const std::string p = to_string(enc) + "_";

        // Code states written out amplitude by amplitude.
        std::array<Ket, 4> literal = enc == Encoding::dp
                                         ? std::array<Ket, 4>{amplitudes({0, 1, 0, 0}), amplitudes({0, 0, 1, 0}),
                                                              amplitudes({0, h, h, 0}), amplitudes({0, h, -h, 0})}
                                         : std::array<Ket, 4>{amplitudes({h, 0, 0, h}), amplitudes({0, h, -h, 0}),
                                                              amplitudes({0.5, 0.5, -0.5, 0.5}),
                                                              amplitudes({0.5, -0.5, 0.5, 0.5})};
        double err = 0;
        for (std::size_t s = 0; s < 4; ++s) {
            err = std::max(err, exact_distance(encode(enc, kStates[s]), literal[s]));
        }
        record(p + "code_states", enc, err);

        auto inv = df_invariance_suite(enc, matching_noise(enc), 200, rng);
        err = 0;
        for (const auto& s : inv.states) {
            err = std::max(err, s.max_deviation);
        }
        record(p + "collective_noise_invariance", enc, inv.all_passed() ? err : std::max(err, kIdentityTol));

        // U1: L0 -> L1, L1 -> -L0, L+ -> -L-, L- -> L+; U0 is the identity.
        const std::array<std::pair<std::size_t, double>, 4> table{{{1, 1.0}, {0, -1.0}, {3, -1.0}, {2, 1.0}}};
        err = 0;
        for (std::size_t s = 0; s < 4; ++s) {
            const Ket u1 = apply_gate(literal[s], logical_gate(enc, LogicalOp::U1), {0, 1});
            err = std::max(err, exact_distance(u1, literal[table[s].first].with_phase(table[s].second)));
            const Ket u0 = apply_gate(literal[s], logical_gate(enc, LogicalOp::U0), {0, 1});
            err = std::max(err, exact_distance(u0, literal[s]));
        }
        record(p + "logical_operator_table", enc, err);

        // Resource state in the computational basis and in the conjugate basis.
        const Ket resource = prepare_resource(enc);
        Ket conj_form(1);
        if (enc == Encoding::dp) {
            const Ket r = amplitudes({0, h, 0, 0, 0, 0, h, 0});
            err = exact_distance(resource, r);
            // (|+>(|++> - |-->) - |->(|+-> - |-+>)) / 2
            conj_form = add(add(tensor({plus, plus, plus}), tensor({plus, minus, minus}), -1.0),
                            add(tensor({minus, plus, minus}), tensor({minus, minus, plus}), -1.0), -1.0);
        } else {
            const Ket r = amplitudes({0.5, 0, 0, 0.5, 0, 0.5, -0.5, 0});
            err = exact_distance(resource, r);
            const Ket cp = amplitudes({h, h * i1});
            const Ket cm = amplitudes({h, -h * i1});
            conj_form = add(tensor({cp, cp, cm}), tensor({cm, cm, cp}));
        }
        record(p + "resource_state", enc, err);
        record(p + "resource_conjugate_basis", enc, exact_distance(resource, conj_form));

        // Every sampling-check outcome allowed by the resource correlations.
        err = 0;
        const std::array<std::size_t, 3> abc{0, 1, 2};
        for (bool conj : {false, true}) {
            const auto b = sampling_basis(enc, conj);
            const std::array<SingleQubitBasis, 3> bases{b, b, b};
            const auto probs = joint_outcome_probabilities(resource, abc, bases);
            for (int o = 0; o < 8; ++o) {
                if (!sample_consistent(enc, conj, o >> 2, (o >> 1) & 1, o & 1)) {
                    err += probs[static_cast<std::size_t>(o)];
                }
            }
        }
        record(p + "sampling_correlations", enc, err);

        if (enc == Encoding::r) {
            record("r_resource_alignment", enc,
                   exact_distance(align_resource_r(resource), amplitudes({0, h, 0, 0, 0, 0, h, 0})));
        }
        record(p + "key_distillation", enc, exact_distance(distill_key(enc, resource), tensor(phi_plus, one)));

        // Single-photon discrimination of both families.
        err = 0;
        for (std::size_t s = 0; s < 4; ++s) {
            const auto law = discrimination_law(literal[s], 0, 1, enc, family_of(kStates[s]));
            err = std::max(err, 1 - law.state[s]);
        }
        record(p + "single_photon_discrimination", enc, err);

        // Encrypt with A, decrypt with B: key and message both restored.
        const auto cu = controlled_logical_gate(enc);
        err = 0;
        double mixed_err = 0;
        for (int m = 0; m < 2; ++m) {
            const Ket start = tensor(phi_plus, literal[static_cast<std::size_t>(m)]);
            const Ket cipher = apply_gate(start, cu, {0, 2, 3});
            mixed_err = std::max(mixed_err, trace_distance(partial_trace(cipher, {2, 3}), code_space_mixed(enc)));
            err = std::max(err, exact_distance(apply_gate(cipher, cu.adjoint(), {1, 2, 3}), start));
        }
        record(p + "encryption_roundtrip", enc, err);
        record(p + "ciphertext_maximally_mixed", enc, mixed_err);
    }

    double err = 0;
    for (int t = 0; t < 64; ++t) {
        const double theta = 2 * std::numbers::pi * t / 64;
        const auto r = rotation_gate(theta);
        err = std::max(err, exact_distance(apply_gate(apply_gate(phi_plus, r, {0}), r, {1}), phi_plus));
    }
    record("key_rotation_invariance", std::nullopt, err);
    return out;
}

}  // namespace qdsim
