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


#ifndef QDSIM_TRANSCRIPT_HPP
#define QDSIM_TRANSCRIPT_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdsim/logical.hpp"
#include "qdsim/noise.hpp"

namespace qdsim {

using Json = nlohmann::ordered_json;
using Bits = std::vector<int>;

/// Protocol stage at which a run stopped.
enum class Stage { key_share, forward_transmission, bob_decrypt, return_transmission, alice_decode };

std::string to_string(Stage s);
Stage parse_stage(const std::string& s);

struct Abort {
    Stage stage;
    std::string reason;
};

/// Channel metadata: not announced by anyone, kept for replay and debugging.
struct TransmissionEvent {
    std::string direction;  // "key_share" | "forward" | "return"
    NoiseDraw draw;
    std::size_t slots = 0;
};

struct SampleRecord {
    std::size_t position = 0;
    SingleQubitBasis::Label basis = SingleQubitBasis::Label::Z;
    int alice_bit = 0;
    std::array<int, 2> bob_bits{};
    bool consistent = true;
};

struct SamplingCheckEvent {
    std::vector<SampleRecord> samples;
    bool passed = true;
};

struct DecoyRecord {
    std::size_t position = 0;
    LogicalState prepared = LogicalState::L0;
    std::optional<LogicalState> measured;
    bool match = true;
};

struct DecoyCheckEvent {
    std::string direction;  // "forward" | "return"
    std::vector<DecoyRecord> decoys;
    bool passed = true;
};

/// Alice's public announcement of the final logical outcomes of one round.
/// `disclosed_initial` exists only for counterfactual leakage studies; the
/// protocol itself never sets it.
struct AnnouncementEvent {
    Bits bits;
    std::optional<Bits> disclosed_initial;
};

struct KeyRotationEvent {
    double theta = 0;
    std::uint64_t rotation_count = 0;
    bool null_rotation = false;
};

struct AbortEvent {
    Abort abort;
};

using TranscriptEvent = std::variant<TransmissionEvent, SamplingCheckEvent, DecoyCheckEvent,
                                     AnnouncementEvent, KeyRotationEvent, AbortEvent>;

/// Ordered record of one run. Never contains Alice's traveling-state bits.
class Transcript {
  public:
    void add(TranscriptEvent e) { events_.push_back(std::move(e)); }
    void append(const Transcript& other);
    const std::vector<TranscriptEvent>& events() const { return events_; }

    std::uint64_t next_block_id() { return next_block_id_++; }

    /// Every announcement event, in order.
    std::vector<AnnouncementEvent> announcements() const;
    std::optional<Abort> abort() const;

    /// Full deterministic document (fixed field order).
    Json to_json() const;
    /// Only what Alice and Bob actually exchange over the classical channel:
    /// sampling checks, decoy checks, announcements, key rotations, aborts.
    Json public_view() const;

    /// Reads a document produced by to_json() or public_view().
    /// Throws std::invalid_argument on malformed input.
    static Transcript from_json(const Json& doc);

  private:
    std::vector<TranscriptEvent> events_;
    std::uint64_t next_block_id_ = 0;
};

}  // namespace qdsim

#endif  // QDSIM_TRANSCRIPT_HPP
