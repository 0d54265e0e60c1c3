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
#include <numbers>

#include <gtest/gtest.h>

#include "oracle.hpp"

using namespace qdsim;
using oracle::Vec;

namespace {

constexpr double kPi = std::numbers::pi;

Vec code(Encoding e, int s) { return e == Encoding::dp ? oracle::dp(s) : oracle::r(s); }

Vec resource(Encoding e) {
    auto a = oracle::kron({1, 0}, code(e, 0));
    const auto b = oracle::kron({0, 1}, code(e, 1));
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = (a[i] + b[i]) * oracle::kH;
    }
    return a;
}

std::size_t n_of(const Vec& v) { return static_cast<std::size_t>(std::log2(v.size()) + 0.5); }

// Probability of bit `b` on each of `qs` after the per-qubit rotations,
// summed over every other qubit. Entry index packs qs[0] as the MSB.
std::vector<double> readout_bits(Vec v, const std::vector<std::size_t>& qs, const std::vector<oracle::M2>& rot) {
    const std::size_t n = n_of(v);
    for (std::size_t i = 0; i < qs.size(); ++i) {
        v = oracle::apply1(v, n, qs[i], rot[i]);
    }
    std::vector<double> p(std::size_t{1} << qs.size(), 0);
    for (std::uint64_t idx = 0; idx < v.size(); ++idx) {
        std::size_t key = 0;
        for (auto q : qs) {
            key = (key << 1) | ((idx >> (n - 1 - q)) & 1);
        }
        p[key] += std::norm(v[idx]);
    }
    return p;
}

const oracle::M2 kI{{{1, 0}, {0, 1}}};
// Maps (|0> + i|1>)/sqrt2 to |0>.
const oracle::M2 kYcircToZ{{{oracle::kH, Complex(0, -oracle::kH)}, {oracle::kH, Complex(0, oracle::kH)}}};

// Receiver's readout of carriers (0, 1) in `fam`: L0, L1, L+, L-, tamper.
std::array<double, 5> readout(Encoding e, Family fam, const Vec& v) {
    const bool sup = fam == Family::superposition;
    std::vector<oracle::M2> rot{kI, kI};
    if (sup) {
        rot[1] = oracle::H;
        if (e == Encoding::dp) {
            rot[0] = oracle::H;
        }
    }
    const auto p = readout_bits(v, {0, 1}, rot);
    std::array<double, 5> out{};
    const int base = sup ? 2 : 0;
    if (e == Encoding::dp && !sup) {
        out[0] = p[1];
        out[1] = p[2];
        out[4] = p[0] + p[3];
    } else {
        out[base] = p[0] + p[3];
        out[base + 1] = p[1] + p[2];
    }
    return out;
}

Family fam_of(int s) { return s < 2 ? Family::computational : Family::superposition; }

double oracle_intercept_logical(Encoding e) {
    double det = 0;
    for (int s = 0; s < 4; ++s) {
        for (auto f : {Family::computational, Family::superposition}) {
            const auto eve = readout(e, f, code(e, s));
            for (int t = 0; t < 4; ++t) {
                if (eve[t] > 0) {
                    det += 0.125 * eve[t] * (1 - readout(e, fam_of(s), code(e, t))[s]);
                }
            }
        }
    }
    return det;
}

double oracle_intercept_physical(Encoding e) {
    double det = 0;
    for (int s = 0; s < 4; ++s) {
        const auto v = code(e, s);
        for (int ab = 0; ab < 4; ++ab) {
            Vec product(4, 0);
            product[ab] = 1;
            det += 0.25 * std::norm(v[ab]) * (1 - readout(e, fam_of(s), product)[s]);
        }
    }
    return det;
}

double oracle_ancilla_decoy(Encoding e, int control) {
    double det = 0;
    for (int s = 0; s < 4; ++s) {
        const auto v = oracle::cnot(oracle::kron(code(e, s), {1, 0}), 3, control, 2);
        det += 0.25 * (1 - readout(e, fam_of(s), v)[s]);
    }
    return det;
}

// Sampling-check violation probability with Alice's qubit at `a` and the
// received carriers at (c1, c2), averaged over the two sampling bases.
double oracle_violation(Encoding e, const Vec& v, std::size_t a, std::size_t c1, std::size_t c2) {
    double bad = 0;
    for (bool conj : {false, true}) {
        const oracle::M2 m = !conj ? kI : (e == Encoding::dp ? oracle::H : kYcircToZ);
        const auto p = readout_bits(v, {a, c1, c2}, {m, m, m});
        for (int o = 0; o < 8; ++o) {
            if (!sample_consistent(e, conj, (o >> 2) & 1, (o >> 1) & 1, o & 1)) {
                bad += 0.5 * p[o];
            }
        }
    }
    return bad;
}

double oracle_capture_random(Encoding e) {
    double bad = 0;
    for (int s = 0; s < 4; ++s) {
        bad += 0.25 * oracle_violation(e, oracle::kron(resource(e), code(e, s)), 0, 3, 4);
    }
    return bad;
}

double oracle_capture_entangled(Encoding e) {
    return oracle_violation(e, oracle::kron(resource(e), resource(e)), 0, 4, 5);
}

double oracle_ancilla_sample(Encoding e, int control) {
    const auto v = oracle::cnot(oracle::kron(resource(e), {1, 0}), 4, 1 + control, 3);
    return oracle_violation(e, v, 0, 1, 2);
}

ProtocolConfig small_config(Encoding e, std::size_t decoys) {
    ProtocolConfig cfg;
    cfg.encoding = e;
    cfg.n = 4;
    cfg.delta1 = 4;
    cfg.decoy_count = decoys;
    cfg.noise = NoiseModel{matching_noise(e), NoiseLaw::uniform()};
    cfg.seed = 2026;
    return cfg;
}

}  // namespace

TEST(adversary, names_round_trip) {
    for (auto k : {AttackKind::none, AttackKind::intercept_resend_logical, AttackKind::intercept_resend_physical,
                   AttackKind::capture_sc, AttackKind::entangle_ancilla}) {
        ASSERT_EQ(parse_attack_kind(to_string(k)), k);
    }
    for (auto d : {AttackDirection::key_flight, AttackDirection::forward, AttackDirection::return_,
                   AttackDirection::both}) {
        ASSERT_EQ(parse_attack_direction(to_string(d)), d);
    }
    ASSERT_EQ(to_string(AttackDirection::return_), "return");
    for (auto p : {SubstitutionPolicy::random_logical, SubstitutionPolicy::entangled, SubstitutionPolicy::block}) {
        ASSERT_EQ(parse_substitution_policy(to_string(p)), p);
    }
    for (auto s : {AncillaScope::all, AncillaScope::ciphertext_only}) {
        ASSERT_EQ(parse_ancilla_scope(to_string(s)), s);
    }
    ASSERT_THROW(parse_attack_kind("photon_number_splitting"), std::invalid_argument);
}

TEST(adversary, reference_values) {
    for (auto e : {Encoding::dp, Encoding::r}) {
        ASSERT_NEAR(oracle_intercept_logical(e), 0.25, kIdentityTol);
        ASSERT_NEAR(oracle_intercept_physical(e), 0.25, kIdentityTol);
        ASSERT_NEAR(oracle_ancilla_decoy(e, 1), 0.25, kIdentityTol);
        ASSERT_NEAR(oracle_capture_random(e), 0.5, kIdentityTol);
        ASSERT_NEAR(oracle_capture_entangled(e), 0.5, kIdentityTol);
        ASSERT_NEAR(oracle_ancilla_sample(e, 0), 0.25, kIdentityTol);
        ASSERT_NEAR(oracle_ancilla_sample(e, 1), 0.25, kIdentityTol);
    }
    ASSERT_NEAR(oracle_ancilla_decoy(Encoding::dp, 0), 0.25, kIdentityTol);
    // CNOT from the first qubit of |phi+>, |psi-> and their rotated pair
    // leaves the r decoys intact.
    ASSERT_NEAR(oracle_ancilla_decoy(Encoding::r, 0), 0, kIdentityTol);
}

TEST(adversary, per_qubit_probabilities_match_reference) {
    for (auto e : {Encoding::dp, Encoding::r}) {
        ASSERT_NEAR(intercept_logical_decoy_detection(e), oracle_intercept_logical(e), 1e-12);
        ASSERT_NEAR(intercept_physical_decoy_detection(e), oracle_intercept_physical(e), 1e-12);
        for (int c : {0, 1}) {
            ASSERT_NEAR(entangle_ancilla_decoy_detection(e, c), oracle_ancilla_decoy(e, c), 1e-12);
            ASSERT_NEAR(entangle_ancilla_sample_violation(e, c), oracle_ancilla_sample(e, c), 1e-12);
        }
        ASSERT_NEAR(capture_sc_sample_violation(e, SubstitutionPolicy::random_logical), oracle_capture_random(e),
                    1e-12);
        ASSERT_NEAR(capture_sc_sample_violation(e, SubstitutionPolicy::entangled), oracle_capture_entangled(e),
                    1e-12);
    }
}

TEST(adversary, detection_over) {
    ASSERT_DOUBLE_EQ(detection_over(0.25, 0), 0);
    ASSERT_NEAR(detection_over(0.25, 16), 1 - std::pow(0.75, 16), 1e-15);
    ASSERT_DOUBLE_EQ(detection_over(1, 3), 1);
}

TEST(adversary, wilson_interval_values) {
    auto w = wilson_interval(5, 10);
    ASSERT_NEAR(w[0], 0.236593, 1e-6);
    ASSERT_NEAR(w[1], 0.763407, 1e-6);
    w = wilson_interval(0, 10);
    ASSERT_NEAR(w[0], 0, 1e-12);
    ASSERT_NEAR(w[1], 0.277533, 1e-6);
    w = wilson_interval(10, 10);
    ASSERT_NEAR(w[0], 0.722467, 1e-6);
    ASSERT_NEAR(w[1], 1, 1e-12);
    // Independent evaluation of the score interval at 37/120.
    const double n = 120, p = 37 / n, z = kWilsonZ95;
    const double c = (p + z * z / (2 * n)) / (1 + z * z / n);
    const double h = z / (1 + z * z / n) * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
    w = wilson_interval(37, 120);
    ASSERT_NEAR(w[0], c - h, 1e-12);
    ASSERT_NEAR(w[1], c + h, 1e-12);
}

TEST(adversary, analytic_rates) {
    auto cfg = small_config(Encoding::dp, 16);
    AttackSpec spec;
    spec.kind = AttackKind::intercept_resend_logical;
    ASSERT_NEAR(*analytic_detection_rate(cfg, spec), 1 - std::pow(0.75, 16), 1e-12);
    spec.direction = AttackDirection::both;
    ASSERT_NEAR(*analytic_detection_rate(cfg, spec), 1 - std::pow(0.75, 32), 1e-12);

    AttackSpec cap;
    cap.kind = AttackKind::capture_sc;
    cfg.delta1 = 16;
    ASSERT_NEAR(*analytic_detection_rate(cfg, cap), 1 - std::pow(0.5, 16), 1e-12);
    cap.substitution = SubstitutionPolicy::block;
    ASSERT_DOUBLE_EQ(*analytic_detection_rate(cfg, cap), 1);

    AttackSpec none;
    ASSERT_DOUBLE_EQ(*analytic_detection_rate(cfg, none), 0);
}

TEST(adversary, intercept_keeps_slot_layout) {
    const auto cfg = small_config(Encoding::r, 3);
    Rng rng(5);
    auto enc = alice_prepare_and_encrypt(cfg, KeyRegister::ideal(cfg.n), rng);
    std::vector<std::size_t> sizes;
    for (const auto& s : enc.block.slots) {
        sizes.push_back(s.size());
    }
    EveState eve;
    intercept_resend_logical(enc.block, cfg.encoding, eve, rng);
    intercept_resend_physical(enc.block, eve, rng);
    ASSERT_EQ(eve.records.size(), 2 * (cfg.n + cfg.decoy_count));
    for (std::size_t i = 0; i < enc.block.slots.size(); ++i) {
        ASSERT_EQ(enc.block.slots[i].size(), sizes[i]);
        ASSERT_TRUE(enc.block.slots[i].has("C1"));
        ASSERT_TRUE(enc.block.slots[i].has("C2"));
    }
}

TEST(adversary, entangle_ancilla_records_bit) {
    QubitRegister slot(encode(Encoding::dp, LogicalState::L1), {"C1", "C2"});
    EveState eve;
    Rng rng(1);
    ASSERT_EQ(entangle_ancilla(slot, "C1", eve, rng), 1);
    ASSERT_EQ(eve.ancilla_count, 1u);
    ASSERT_EQ(slot.size(), 2u);
    ASSERT_LT(phase_distance(slot.state(), encode(Encoding::dp, LogicalState::L1)), kIdentityTol);
}

TEST(adversary, capture_sc_policies) {
    for (auto policy : {SubstitutionPolicy::random_logical, SubstitutionPolicy::entangled}) {
        std::vector<QubitRegister> slots;
        for (int i = 0; i < 3; ++i) {
            slots.emplace_back(prepare_resource(Encoding::dp), std::vector<std::string>{"A", "C1", "C2"});
        }
        EveState eve;
        Rng rng(2);
        ASSERT_TRUE(capture_sc(slots, Encoding::dp, policy, eve, rng));
        for (const auto& s : slots) {
            ASSERT_TRUE(s.has("C1"));
            ASSERT_TRUE(s.has("C2"));
            ASSERT_TRUE(s.has("A"));
        }
    }
    std::vector<QubitRegister> slots;
    slots.emplace_back(prepare_resource(Encoding::r), std::vector<std::string>{"A", "C1", "C2"});
    EveState eve;
    Rng rng(2);
    ASSERT_FALSE(capture_sc(slots, Encoding::r, SubstitutionPolicy::block, eve, rng));
}

TEST(adversary, monte_carlo_matches_analytic) {
    struct Case {
        Encoding enc;
        AttackKind kind;
        AttackDirection dir;
        int control;
    };
    const std::vector<Case> cases{
        {Encoding::dp, AttackKind::intercept_resend_logical, AttackDirection::forward, 0},
        {Encoding::r, AttackKind::intercept_resend_physical, AttackDirection::return_, 0},
        {Encoding::dp, AttackKind::entangle_ancilla, AttackDirection::key_flight, 1},
        {Encoding::r, AttackKind::capture_sc, AttackDirection::key_flight, 0},
        {Encoding::dp, AttackKind::entangle_ancilla, AttackDirection::both, 0},
    };
    for (const auto& c : cases) {
        const auto cfg = small_config(c.enc, 3);
        AttackSpec spec;
        spec.kind = c.kind;
        spec.direction = c.dir;
        spec.control = c.control;
        const auto stats = estimate_detection(cfg, spec, 400);
        ASSERT_TRUE(stats.analytic.has_value()) << to_string(c.kind);
        // 99.9% interval keeps the five-case family-wise false alarm rate low.
        const auto w = wilson_interval(stats.detected, stats.trials, 3.29);
        ASSERT_LE(w[0], *stats.analytic) << to_string(c.kind) << " " << stats.rate;
        ASSERT_GE(w[1], *stats.analytic) << to_string(c.kind) << " " << stats.rate;
        ASSERT_EQ(stats.per_trial.size(), 400u);
    }
}

TEST(adversary, r_first_carrier_ancilla_is_invisible_to_decoys) {
    auto cfg = small_config(Encoding::r, 8);
    AttackSpec spec;
    spec.kind = AttackKind::entangle_ancilla;
    spec.direction = AttackDirection::forward;
    spec.control = 0;
    const auto stats = estimate_detection(cfg, spec, 50);
    ASSERT_EQ(stats.detected, 0u);
}

TEST(adversary, abort_stages) {
    auto cfg = small_config(Encoding::dp, 8);
    AttackSpec spec;
    spec.kind = AttackKind::capture_sc;
    spec.substitution = SubstitutionPolicy::block;
    auto stats = estimate_detection(cfg, spec, 20);
    ASSERT_EQ(stats.detected, 20u);
    ASSERT_EQ(stats.by_stage[static_cast<int>(Stage::key_share)], 20u);

    spec = {};
    spec.kind = AttackKind::intercept_resend_logical;
    spec.direction = AttackDirection::return_;
    stats = estimate_detection(cfg, spec, 40);
    ASSERT_EQ(stats.by_stage[static_cast<int>(Stage::forward_transmission)], 0u);
    ASSERT_GT(stats.by_stage[static_cast<int>(Stage::return_transmission)], 0u);
}

TEST(adversary, honest_runs_never_abort) {
    for (auto e : {Encoding::dp, Encoding::r}) {
        const auto stats = estimate_detection(small_config(e, 4), AttackSpec{}, 30);
        ASSERT_EQ(stats.detected, 0u);
        ASSERT_DOUBLE_EQ(*stats.analytic, 0);
    }
}

TEST(adversary, estimate_detection_is_deterministic) {
    const auto cfg = small_config(Encoding::r, 4);
    AttackSpec spec;
    spec.kind = AttackKind::intercept_resend_logical;
    const auto a = estimate_detection(cfg, spec, 30);
    const auto b = estimate_detection(cfg, spec, 30);
    ASSERT_EQ(a.per_trial, b.per_trial);
    ASSERT_THROW(estimate_detection(cfg, spec, 0), ConfigError);
}

TEST(adversary, ciphertext_reveals_nothing) {
    for (auto e : {Encoding::dp, Encoding::r}) {
        for (int c : {0, 1}) {
            const auto info = ciphertext_ancilla_information(e, c);
            ASSERT_LT(info.ancilla_deviation, 1e-9);
            ASSERT_LT(info.holevo_bits, 1e-9);
        }
    }
}

TEST(adversary, ciphertext_opacity) {
    ProtocolConfig cfg;
    cfg.encoding = Encoding::dp;
    cfg.n = 32;
    cfg.delta1 = 4;
    cfg.decoy_count = 4;
    cfg.seed = 31;
    const auto op = ciphertext_opacity(cfg, 1000);
    ASSERT_GE(op.qubits, 1000u);
    ASSERT_LT(op.sigma_distance, 5);
    ASSERT_NEAR(op.accuracy, 0.25, 5 * std::sqrt(0.1875 / op.qubits));
}

TEST(adversary, key_reuse_correlation) {
    for (double t : {0.0, kPi / 16, kPi / 8, 0.3, kPi / 4}) {
        const auto c = key_reuse_correlation(t);
        const double s = std::sin(t);
        ASSERT_NEAR(c.mi_z, 1 - oracle::binary_entropy(s * s), 1e-9) << t;
        ASSERT_NEAR(c.mi_x, 1 - oracle::binary_entropy((1 - std::sin(2 * t)) / 2), 1e-9) << t;
    }
    const auto c = key_reuse_correlation(kPi / 8);
    ASSERT_NEAR(c.mi_z, 0.399124, 1e-6);
    ASSERT_NEAR(c.mi_x, 0.399124, 1e-6);
}
