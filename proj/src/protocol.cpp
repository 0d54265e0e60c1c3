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


#include "qdsim/protocol.hpp"

#include <cmath>

namespace qdsim {

namespace {

constexpr const char* kA = "A";
constexpr const char* kB = "B";
constexpr const char* kC1 = "C1";
constexpr const char* kC2 = "C2";

void require_bits(const Bits& bits, std::size_t n, const char* what) {
    if (bits.size() != n) {
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n) + " bits, got " +
                                    std::to_string(bits.size()));
    }
    for (int b : bits) {
        if (b != 0 && b != 1) {
            throw std::invalid_argument(std::string(what) + ": bits must be 0 or 1");
        }
    }
}

LogicalState random_logical_state(Rng& rng) { return static_cast<LogicalState>(rng.below(4)); }

// Builds a block of `messages` followed by freshly prepared decoys at random
// positions.
std::pair<TravelingBlock, BlockLayout> interleave_decoys(std::vector<QubitRegister> messages,
                                                         Encoding enc, std::size_t decoy_count, Rng& rng) {
    const std::size_t total = messages.size() + decoy_count;
    BlockLayout layout;
    layout.decoy_positions = rng.sample_indices(total, decoy_count);
    for (std::size_t i = 0; i < decoy_count; ++i) {
        layout.decoy_states.push_back(random_logical_state(rng));
    }
    TravelingBlock block;
    block.slots.reserve(total);
    std::size_t next_msg = 0;
    std::size_t next_decoy = 0;
    for (std::size_t pos = 0; pos < total; ++pos) {
        if (next_decoy < decoy_count && layout.decoy_positions[next_decoy] == pos) {
            block.slots.emplace_back(encode(enc, layout.decoy_states[next_decoy]),
                                     std::vector<std::string>{kC1, kC2});
            ++next_decoy;
        } else {
            block.slots.push_back(std::move(messages[next_msg++]));
        }
    }
    return {std::move(block), std::move(layout)};
}

void apply_carrier_noise(QubitRegister& slot, NoiseKind kind, double angle) {
    if (kind == NoiseKind::ideal) {
        return;
    }
    auto idx = slot.indices({kC1, kC2});
    slot.set_state(apply_channel(slot.state(), idx, kind, angle));
}

// Releases the measured carrier wires so only the key (and environment)
// remains in the register.
void drop_carrier(QubitRegister& slot) {
    slot.release(kC1);
    slot.release(kC2);
}

}  // namespace

bool forbidden_key_angle(double theta) {
    // k*pi +- pi/4 is exactly pi/4 + (pi/2) * integer.
    const double half_pi = std::numbers::pi / 2;
    const double x = (theta - std::numbers::pi / 4) / half_pi;
    return std::abs(x - std::round(x)) * half_pi < 1e-9;
}

void ProtocolConfig::validate() const {
    if (n == 0) {
        throw ConfigError("n must be at least 1");
    }
    if (delta1 == 0) {
        throw ConfigError("delta1 must be at least 1");
    }
    if (!std::isfinite(theta_key)) {
        throw ConfigError("theta_key must be finite");
    }
    if (forbidden_key_angle(theta_key)) {
        throw ConfigError("theta_key = " + std::to_string(theta_key) +
                          " is forbidden: the key-refresh angle must satisfy theta != k*pi +- pi/4");
    }
}

std::vector<std::string> ProtocolConfig::warnings() const {
    std::vector<std::string> out;
    const double x = theta_key / std::numbers::pi;
    if (std::abs(x - std::round(x)) * std::numbers::pi < 1e-9) {
        out.emplace_back("theta_key is a multiple of pi: the key refresh is a null rotation");
    }
    return out;
}

double key_pair_fidelity(const QubitRegister& pair) {
    auto rho = partial_trace(pair.state(), pair.indices({kA, kB}));
    return rho.expectation(bell_phi_plus());
}

double KeyRegister::min_fidelity() const {
    double f = 1;
    for (const auto& p : pairs) {
        f = std::min(f, key_pair_fidelity(p));
    }
    return f;
}

KeyRegister KeyRegister::ideal(std::size_t n) {
    KeyRegister key;
    key.pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        key.pairs.emplace_back(bell_phi_plus(), std::vector<std::string>{kA, kB});
    }
    return key;
}

MessagePair MessagePair::random(std::size_t n, Rng& rng) {
    MessagePair m;
    for (std::size_t i = 0; i < n; ++i) {
        m.alice.push_back(rng.bit());
    }
    for (std::size_t i = 0; i < n; ++i) {
        m.bob.push_back(rng.bit());
    }
    return m;
}

std::vector<bool> BlockLayout::decoy_mask(std::size_t block_size) const {
    std::vector<bool> mask(block_size, false);
    for (auto p : decoy_positions) {
        mask.at(p) = true;
    }
    return mask;
}

SingleQubitBasis sampling_basis(Encoding enc, bool conjugate_basis) {
    if (!conjugate_basis) {
        return SingleQubitBasis::z();
    }
    return enc == Encoding::dp ? SingleQubitBasis::x() : SingleQubitBasis::ycirc();
}

bool sample_consistent(Encoding enc, bool conjugate_basis, int a, int c1, int c2) {
    const int parity = c1 ^ c2;
    if (enc == Encoding::dp) {
        if (!conjugate_basis) {
            return parity == 1 && c1 == a;
        }
        return parity == a;
    }
    if (!conjugate_basis) {
        return parity == a;
    }
    return parity == 1 && c2 == 1 - a;
}

KeyShareOutcome share_key(const ProtocolConfig& cfg, ChannelTap* tap, Rng& rng) {
    cfg.validate();
    KeyShareOutcome out;
    auto& transcript = out.transcript;
    const std::size_t total = cfg.n + cfg.delta1;

    std::vector<QubitRegister> slots;
    slots.reserve(total);
    const auto resource = prepare_resource(cfg.encoding);
    for (std::size_t i = 0; i < total; ++i) {
        slots.emplace_back(resource, std::vector<std::string>{kA, kC1, kC2});
    }

    const double angle = cfg.noise.draw(rng);
    for (auto& s : slots) {
        apply_carrier_noise(s, cfg.noise.kind, angle);
    }
    transcript.add(TransmissionEvent{"key_share", {angle, transcript.next_block_id()}, total});

    if (tap && !tap->on_key_flight(slots, rng)) {
        out.abort = Abort{Stage::key_share, "carrier sequence never arrived"};
        transcript.add(AbortEvent{*out.abort});
        return out;
    }
    if (slots.size() != total) {
        throw std::logic_error("share_key: tap changed the number of slots");
    }

    SamplingCheckEvent check;
    const auto sampled = rng.sample_indices(total, cfg.delta1);
    std::vector<bool> is_sample(total, false);
    for (auto pos : sampled) {
        is_sample[pos] = true;
        auto& s = slots[pos];
        const bool conj = rng.bit() == 1;
        const auto basis = sampling_basis(cfg.encoding, conj);
        SampleRecord r;
        r.position = pos;
        r.basis = basis.label;
        r.bob_bits[0] = s.measure(kC1, basis, rng);
        r.bob_bits[1] = s.measure(kC2, basis, rng);
        r.alice_bit = s.measure(kA, basis, rng);
        r.consistent = sample_consistent(cfg.encoding, conj, r.alice_bit, r.bob_bits[0], r.bob_bits[1]);
        check.passed = check.passed && r.consistent;
        check.samples.push_back(r);
    }
    const bool passed = check.passed;
    transcript.add(std::move(check));
    if (!passed) {
        out.abort = Abort{Stage::key_share, "sampling check found broken resource-state correlations"};
        transcript.add(AbortEvent{*out.abort});
        return out;
    }

    KeyRegister key;
    key.pairs.reserve(cfg.n);
    for (std::size_t pos = 0; pos < total; ++pos) {
        if (is_sample[pos]) {
            continue;
        }
        auto& s = slots[pos];
        apply_distillation(s, cfg.encoding, kA, kC1, kC2);
        // Honest runs leave C2 in |1>; anything else stays as environment.
        if (!s.try_release(kC2)) {
            s.rename(kC2, "residual.C2." + std::to_string(pos));
        }
        s.rename(kC1, kB);
        key.pairs.push_back(std::move(s));
    }
    out.key = std::move(key);
    return out;
}

EncryptedBlock alice_prepare_and_encrypt(const ProtocolConfig& cfg, KeyRegister key, Rng& rng) {
    if (key.size() != cfg.n) {
        throw std::invalid_argument("alice_prepare_and_encrypt: key has " + std::to_string(key.size()) +
                                    " pairs, config needs " + std::to_string(cfg.n));
    }
    EncryptedBlock out;
    out.key_rotation_count = key.rotation_count;
    const auto cu = controlled_logical_gate(cfg.encoding);
    std::vector<QubitRegister> messages;
    messages.reserve(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const int m = rng.bit();
        out.m_record.push_back(m);
        auto slot = std::move(key.pairs[i]);
        slot.append(encode(cfg.encoding, state_from(Family::computational, m)), {kC1, kC2});
        if (cfg.encrypt) {
            slot.apply(cu, {kA, kC1, kC2});
        }
        messages.push_back(std::move(slot));
    }
    auto [block, layout] = interleave_decoys(std::move(messages), cfg.encoding, cfg.decoy_count, rng);
    out.block = std::move(block);
    out.layout = std::move(layout);
    return out;
}

NoiseDraw transmit(TravelingBlock& block, const NoiseModel& noise, Rng& rng, std::uint64_t block_id) {
    NoiseDraw d{noise.draw(rng), block_id};
    for (auto& s : block.slots) {
        apply_carrier_noise(s, noise.kind, d.angle);
    }
    return d;
}

std::vector<Discrimination> measure_decoys(TravelingBlock& block, const BlockLayout& layout,
                                           Encoding enc, Rng& rng) {
    std::vector<Discrimination> out;
    out.reserve(layout.decoy_positions.size());
    for (std::size_t i = 0; i < layout.decoy_positions.size(); ++i) {
        auto& slot = block.slots.at(layout.decoy_positions[i]);
        out.push_back(discriminate(slot, kC1, kC2, enc, family_of(layout.decoy_states[i]), rng));
    }
    return out;
}

DecoyCheck check_decoys(const BlockLayout& layout, std::span<const Discrimination> outcomes,
                        const std::string& direction) {
    if (outcomes.size() != layout.decoy_positions.size()) {
        throw std::invalid_argument("check_decoys: one outcome per decoy required");
    }
    DecoyCheck out;
    out.event.direction = direction;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        DecoyRecord r;
        r.position = layout.decoy_positions[i];
        r.prepared = layout.decoy_states[i];
        r.measured = outcomes[i].outcome;
        r.match = r.measured && *r.measured == r.prepared;
        out.passed = out.passed && r.match;
        out.event.decoys.push_back(r);
    }
    out.event.passed = out.passed;
    return out;
}

std::vector<QubitRegister> strip_decoys(TravelingBlock block, const BlockLayout& layout) {
    const auto mask = layout.decoy_mask(block.slots.size());
    std::vector<QubitRegister> out;
    out.reserve(block.slots.size() - layout.decoy_positions.size());
    for (std::size_t i = 0; i < block.slots.size(); ++i) {
        if (!mask[i]) {
            out.push_back(std::move(block.slots[i]));
        }
    }
    return out;
}

BobStep bob_decrypt_reencode(const ProtocolConfig& cfg, std::vector<QubitRegister> message_slots,
                             std::uint64_t key_rotation_count, const Bits& k_bits, Rng& rng) {
    require_bits(k_bits, message_slots.size(), "bob_decrypt_reencode");
    BobStep out;
    out.key.rotation_count = key_rotation_count;
    const auto decrypt = controlled_logical_gate(cfg.encoding).adjoint();
    std::vector<QubitRegister> fresh;
    fresh.reserve(message_slots.size());
    for (std::size_t i = 0; i < message_slots.size(); ++i) {
        auto& slot = message_slots[i];
        if (cfg.encrypt) {
            slot.apply(decrypt, {kB, kC1, kC2});
        }
        auto d = discriminate(slot, kC1, kC2, cfg.encoding, Family::computational, rng);
        if (d.tampered() && !out.tamper) {
            out.tamper = Abort{Stage::bob_decrypt, "decrypted carrier " + std::to_string(i) +
                                                       " fell outside the computational code states"};
        }
        const int m = d.tampered() ? 0 : bit_of(*d.outcome);
        out.m_seen.push_back(m);
        drop_carrier(slot);
        out.key.pairs.push_back(std::move(slot));

        QubitRegister carrier(encode(cfg.encoding, state_from(Family::computational, m)),
                              std::vector<std::string>{kC1, kC2});
        carrier.apply(logical_gate(cfg.encoding, k_bits[i]), {kC1, kC2});
        fresh.push_back(std::move(carrier));
    }
    auto [block, layout] = interleave_decoys(std::move(fresh), cfg.encoding, cfg.decoy_count, rng);
    out.return_block = std::move(block);
    out.layout = std::move(layout);
    return out;
}

AliceStep alice_encode_announce(const ProtocolConfig& cfg, std::vector<QubitRegister> message_slots,
                                const Bits& j_bits, Rng& rng) {
    require_bits(j_bits, message_slots.size(), "alice_encode_announce");
    AliceStep out;
    for (std::size_t i = 0; i < message_slots.size(); ++i) {
        auto& slot = message_slots[i];
        slot.apply(logical_gate(cfg.encoding, j_bits[i]), {kC1, kC2});
        auto d = discriminate(slot, kC1, kC2, cfg.encoding, Family::computational, rng);
        if (d.tampered() && !out.tamper) {
            out.tamper = Abort{Stage::alice_decode, "returned carrier " + std::to_string(i) +
                                                        " fell outside the computational code states"};
        }
        out.announcements.push_back(d.tampered() ? 0 : bit_of(*d.outcome));
    }
    return out;
}

Bits decode_bits(Role /*role*/, const Bits& own_bits, const Bits& m_knowledge, const Bits& announcements) {
    // Both roles use the same relation: announced = m ^ j ^ k.
    if (own_bits.size() != m_knowledge.size() || own_bits.size() != announcements.size()) {
        throw std::invalid_argument("decode_bits: length mismatch");
    }
    Bits out(own_bits.size());
    for (std::size_t i = 0; i < own_bits.size(); ++i) {
        out[i] = own_bits[i] ^ m_knowledge[i] ^ announcements[i];
    }
    return out;
}

KeyRegister rotate_key(KeyRegister key, double theta) {
    if (forbidden_key_angle(theta)) {
        throw ConfigError("rotate_key: theta = k*pi +- pi/4 is forbidden");
    }
    const auto r = rotation_gate(theta);
    for (auto& p : key.pairs) {
        p.apply(r, {kA});
        p.apply(r, {kB});
    }
    ++key.rotation_count;
    return key;
}

DialogueOutcome run_dialogue(const ProtocolConfig& cfg, const MessagePair& msgs, KeyRegister key,
                             ChannelTap* tap, Rng& rng) {
    cfg.validate();
    require_bits(msgs.alice, cfg.n, "run_dialogue (alice)");
    require_bits(msgs.bob, cfg.n, "run_dialogue (bob)");

    DialogueOutcome out;
    auto& t = out.transcript;
    auto fail = [&](Abort a) {
        out.result.aborted = true;
        out.result.stage = a.stage;
        t.add(AbortEvent{std::move(a)});
        return std::move(out);
    };

    // Alice -> Bob.
    auto enc = alice_prepare_and_encrypt(cfg, std::move(key), rng);
    out.result.initial_m = enc.m_record;
    auto draw = transmit(enc.block, cfg.noise, rng, t.next_block_id());
    t.add(TransmissionEvent{"forward", draw, enc.block.slots.size()});
    if (tap) {
        tap->on_forward(enc.block, enc.layout.decoy_mask(enc.block.slots.size()), rng);
    }
    {
        auto outcomes = measure_decoys(enc.block, enc.layout, cfg.encoding, rng);
        auto check = check_decoys(enc.layout, outcomes, "forward");
        t.add(check.event);
        if (!check.passed) {
            return fail({Stage::forward_transmission, "forward decoy check failed"});
        }
    }

    // Bob decrypts, encodes k and sends back.
    auto bob = bob_decrypt_reencode(cfg, strip_decoys(std::move(enc.block), enc.layout),
                                    enc.key_rotation_count, msgs.bob, rng);
    if (bob.tamper) {
        return fail(*bob.tamper);
    }
    draw = transmit(bob.return_block, cfg.noise, rng, t.next_block_id());
    t.add(TransmissionEvent{"return", draw, bob.return_block.slots.size()});
    if (tap) {
        tap->on_return(bob.return_block, bob.layout.decoy_mask(bob.return_block.slots.size()), rng);
    }
    {
        auto outcomes = measure_decoys(bob.return_block, bob.layout, cfg.encoding, rng);
        auto check = check_decoys(bob.layout, outcomes, "return");
        t.add(check.event);
        if (!check.passed) {
            return fail({Stage::return_transmission, "return decoy check failed"});
        }
    }

    // Alice encodes j and announces.
    auto alice = alice_encode_announce(cfg, strip_decoys(std::move(bob.return_block), bob.layout),
                                       msgs.alice, rng);
    if (alice.tamper) {
        return fail(*alice.tamper);
    }
    t.add(AnnouncementEvent{alice.announcements, std::nullopt});
    if (tap) {
        tap->on_announcement(alice.announcements);
    }

    out.result.announcements = alice.announcements;
    out.result.alice_decoded = decode_bits(Role::alice, msgs.alice, enc.m_record, alice.announcements);
    out.result.bob_decoded = decode_bits(Role::bob, msgs.bob, bob.m_seen, alice.announcements);

    auto rotated = rotate_key(std::move(bob.key), cfg.theta_key);
    t.add(KeyRotationEvent{cfg.theta_key, rotated.rotation_count, !cfg.warnings().empty()});
    out.key = std::move(rotated);
    return out;
}

}  // namespace qdsim
