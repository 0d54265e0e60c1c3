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


#ifndef QDSIM_PROTOCOL_HPP
#define QDSIM_PROTOCOL_HPP

#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdsim/logical.hpp"
#include "qdsim/noise.hpp"
#include "qdsim/register.hpp"
#include "qdsim/transcript.hpp"

namespace qdsim {

/// Invalid protocol or run configuration.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// True when theta is within 1e-9 of k*pi +- pi/4 for some integer k.
/// Those key-refresh angles map the key's Z basis onto its X basis.
bool forbidden_key_angle(double theta);

struct ProtocolConfig {
    Encoding encoding = Encoding::dp;
    /// Message length in bits (also the number of key pairs).
    std::size_t n = 64;
    /// Resource states sacrificed to the key-sharing sampling check.
    std::size_t delta1 = 16;
    /// Decoy logical qubits per transmitted block.
    std::size_t decoy_count = 16;
    /// Key-refresh rotation angle in radians.
    double theta_key = std::numbers::pi / 8;
    NoiseModel noise{NoiseKind::dephasing, NoiseLaw::uniform()};
    std::uint64_t seed = 1;
    /// Control switch for mixedness studies: when false Alice sends |m_i>
    /// unencrypted and Bob skips decryption.
    bool encrypt = true;

    /// Throws ConfigError on n == 0, delta1 == 0 or a forbidden theta_key.
    void validate() const;
    /// Non-fatal remarks (e.g. theta_key = 0 refreshes nothing).
    std::vector<std::string> warnings() const;
};

/// Fidelity of the (A, B) wires of `pair` with |phi+>, environment traced out.
double key_pair_fidelity(const QubitRegister& pair);

/// Alice's and Bob's halves of the shared EPR pairs. Pair i holds wires "A"
/// and "B"; any further wires are environment (e.g. qubits an eavesdropper
/// entangled with the pair) that neither party can touch.
struct KeyRegister {
    std::vector<QubitRegister> pairs;
    std::uint64_t rotation_count = 0;

    std::size_t size() const { return pairs.size(); }
    double min_fidelity() const;

    /// N noiseless |phi+> pairs (for tests and key-reuse studies).
    static KeyRegister ideal(std::size_t n);
};

struct MessagePair {
    Bits alice;  // j_1..j_N
    Bits bob;    // k_1..k_N

    static MessagePair random(std::size_t n, Rng& rng);
};

/// Quantum payload of one block transmission. Each slot carries one logical
/// qubit on wires "C1", "C2"; message slots also hold the key wires.
struct TravelingBlock {
    std::vector<QubitRegister> slots;
};

/// Secret layout of a block, known only to the sender until announced.
struct BlockLayout {
    std::vector<std::size_t> decoy_positions;
    std::vector<LogicalState> decoy_states;

    std::vector<bool> decoy_mask(std::size_t block_size) const;
};

/// Hook for eavesdroppers and observers. Called after the collective channel
/// has acted on a block and before the receiver touches it. Implementations
/// may only operate on carrier wires ("C1", "C2") and their own ancillas.
///
/// `decoy_oracle` reveals which slots are decoys. An honest attack model
/// must ignore it; it exists for idealized ciphertext-only studies and
/// state introspection.
class ChannelTap {
  public:
    virtual ~ChannelTap() = default;
    /// Resource states in flight during key sharing. Return false to block
    /// the transmission entirely.
    virtual bool on_key_flight(std::vector<QubitRegister>& /*slots*/, Rng& /*rng*/) { return true; }
    virtual void on_forward(TravelingBlock& /*block*/, const std::vector<bool>& /*decoy_oracle*/, Rng& /*rng*/) {}
    virtual void on_return(TravelingBlock& /*block*/, const std::vector<bool>& /*decoy_oracle*/, Rng& /*rng*/) {}
    /// Classical announcements, visible to everyone.
    virtual void on_announcement(const Bits& /*announced*/) {}
};

/// Whether Alice's A outcome and Bob's two carrier outcomes agree with the
/// resource-state correlations for the given basis choice.
///   dp: Z  -> a=0 <=> 01, a=1 <=> 10;   X -> a=0 <=> even parity
///   r:  Z  -> a=0 <=> even parity;      Ycirc -> a=0 <=> (0,1), a=1 <=> (1,0)
bool sample_consistent(Encoding enc, bool conjugate_basis, int a, int c1, int c2);

/// Basis used on every qubit of a sampled resource state.
SingleQubitBasis sampling_basis(Encoding enc, bool conjugate_basis);

struct KeyShareOutcome {
    std::optional<KeyRegister> key;
    Transcript transcript;
    std::optional<Abort> abort;

    bool aborted() const { return abort.has_value(); }
};

/// Key sharing: N + delta1 resource states, carrier transmission, sampling
/// check on delta1 random positions, distillation of the remaining N.
KeyShareOutcome share_key(const ProtocolConfig& cfg, ChannelTap* tap, Rng& rng);

struct EncryptedBlock {
    TravelingBlock block;
    BlockLayout layout;
    Bits m_record;
    std::uint64_t key_rotation_count = 0;
};

/// Prepares N random |m_i>, inserts decoys and encrypts slot i with
/// controller A_i. Consumes the key: its pairs travel inside the block's
/// message slots until Bob's decryption hands them back.
EncryptedBlock alice_prepare_and_encrypt(const ProtocolConfig& cfg, KeyRegister key, Rng& rng);

/// Applies one collective-noise draw to every carrier of the block.
NoiseDraw transmit(TravelingBlock& block, const NoiseModel& noise, Rng& rng, std::uint64_t block_id);

/// Receiver measures every decoy in the family of its announced state.
std::vector<Discrimination> measure_decoys(TravelingBlock& block, const BlockLayout& layout,
                                           Encoding enc, Rng& rng);

struct DecoyCheck {
    bool passed = true;
    DecoyCheckEvent event;
};

DecoyCheck check_decoys(const BlockLayout& layout, std::span<const Discrimination> outcomes,
                        const std::string& direction);

/// Removes decoy slots, keeping message slots in order.
std::vector<QubitRegister> strip_decoys(TravelingBlock block, const BlockLayout& layout);

struct BobStep {
    TravelingBlock return_block;
    BlockLayout layout;
    Bits m_seen;
    KeyRegister key;
    std::optional<Abort> tamper;
};

/// Decrypts with controller B_i, reads m_i, prepares a fresh |m_i>, applies
/// U_{k_i} and inserts fresh decoys.
///
/// Decryption applies the inverse controlled gate. U1 squares to -1 on the
/// code space, so repeating the encryption gate would leave the key pair in
/// |phi->; the inverse leaves it in |phi+> and yields the same m_i.
BobStep bob_decrypt_reencode(const ProtocolConfig& cfg, std::vector<QubitRegister> message_slots,
                             std::uint64_t key_rotation_count, const Bits& k_bits, Rng& rng);

struct AliceStep {
    Bits announcements;
    std::optional<Abort> tamper;
};

/// Applies U_{j_i} and reads the final logical state of each returned qubit.
AliceStep alice_encode_announce(const ProtocolConfig& cfg, std::vector<QubitRegister> message_slots,
                                const Bits& j_bits, Rng& rng);

enum class Role { alice, bob };

/// own_i XOR m_i XOR announced_i: Alice recovers k, Bob recovers j.
Bits decode_bits(Role role, const Bits& own_bits, const Bits& m_knowledge, const Bits& announcements);

/// R(theta) on every A_i and B_i.
KeyRegister rotate_key(KeyRegister key, double theta);

struct DialogueResult {
    Bits alice_decoded;
    Bits bob_decoded;
    Bits announcements;
    /// Alice's private initial logical bits m_i (empty if she never sent).
    Bits initial_m;
    bool aborted = false;
    std::optional<Stage> stage;
};

struct DialogueOutcome {
    DialogueResult result;
    Transcript transcript;
    /// Rotated key ready for the next round; empty after an abort.
    std::optional<KeyRegister> key;
};

/// One full dialogue round: encrypt, forward transmission and decoy check,
/// decrypt and re-encode, return transmission and decoy check, encode and
/// announce, decode, key refresh.
DialogueOutcome run_dialogue(const ProtocolConfig& cfg, const MessagePair& msgs, KeyRegister key,
                             ChannelTap* tap, Rng& rng);

}  // namespace qdsim

#endif  // QDSIM_PROTOCOL_HPP
