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


#include "qdsim/transcript.hpp"

#include <algorithm>
#include <stdexcept>

namespace qdsim {

std::string to_string(Stage s) {
    switch (s) {
        case Stage::key_share: return "key_share";
        case Stage::forward_transmission: return "forward_transmission";
        case Stage::bob_decrypt: return "bob_decrypt";
        case Stage::return_transmission: return "return_transmission";
        case Stage::alice_decode: return "alice_decode";
    }
    return "?";
}

Stage parse_stage(const std::string& s) {
    for (auto st : {Stage::key_share, Stage::forward_transmission, Stage::bob_decrypt,
                    Stage::return_transmission, Stage::alice_decode}) {
        if (to_string(st) == s) {
            return st;
        }
    }
    throw std::invalid_argument("unknown stage '" + s + "'");
}

namespace {

LogicalState parse_state(const std::string& s) {
    for (auto st : {LogicalState::L0, LogicalState::L1, LogicalState::Lplus, LogicalState::Lminus}) {
        if (to_string(st) == s) {
            return st;
        }
    }
    throw std::invalid_argument("unknown logical state '" + s + "'");
}

SingleQubitBasis::Label parse_label(const std::string& s) {
    for (auto l : {SingleQubitBasis::Label::Z, SingleQubitBasis::Label::X, SingleQubitBasis::Label::Ycirc,
                   SingleQubitBasis::Label::Custom}) {
        if (to_string(l) == s) {
            return l;
        }
    }
    throw std::invalid_argument("unknown basis label '" + s + "'");
}

struct EventWriter {
    Json operator()(const TransmissionEvent& e) const {
        Json j;
        j["type"] = "transmission";
        j["direction"] = e.direction;
        j["block_id"] = e.draw.block_id;
        j["noise_angle"] = e.draw.angle;
        j["slots"] = e.slots;
        return j;
    }
    Json operator()(const SamplingCheckEvent& e) const {
        Json j;
        j["type"] = "sampling_check";
        j["passed"] = e.passed;
        Json samples = Json::array();
        for (const auto& s : e.samples) {
            Json r;
            r["position"] = s.position;
            r["basis"] = to_string(s.basis);
            r["alice"] = s.alice_bit;
            r["bob"] = {s.bob_bits[0], s.bob_bits[1]};
            r["consistent"] = s.consistent;
            samples.push_back(std::move(r));
        }
        j["samples"] = std::move(samples);
        return j;
    }
    Json operator()(const DecoyCheckEvent& e) const {
        Json j;
        j["type"] = "decoy_check";
        j["direction"] = e.direction;
        j["passed"] = e.passed;
        Json decoys = Json::array();
        for (const auto& d : e.decoys) {
            Json r;
            r["position"] = d.position;
            r["prepared"] = to_string(d.prepared);
            r["measured"] = d.measured ? Json(to_string(*d.measured)) : Json("tamper");
            r["match"] = d.match;
            decoys.push_back(std::move(r));
        }
        j["decoys"] = std::move(decoys);
        return j;
    }
    Json operator()(const AnnouncementEvent& e) const {
        Json j;
        j["type"] = "announcement";
        j["bits"] = e.bits;
        if (e.disclosed_initial) {
            j["disclosed_initial"] = *e.disclosed_initial;
        }
        return j;
    }
    Json operator()(const KeyRotationEvent& e) const {
        Json j;
        j["type"] = "key_rotation";
        j["theta"] = e.theta;
        j["rotation_count"] = e.rotation_count;
        j["null_rotation"] = e.null_rotation;
        return j;
    }
    Json operator()(const AbortEvent& e) const {
        Json j;
        j["type"] = "abort";
        j["stage"] = to_string(e.abort.stage);
        j["reason"] = e.abort.reason;
        return j;
    }
};

TranscriptEvent read_event(const Json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "transmission") {
        TransmissionEvent e;
        e.direction = j.at("direction").get<std::string>();
        e.draw.block_id = j.at("block_id").get<std::uint64_t>();
        e.draw.angle = j.at("noise_angle").get<double>();
        e.slots = j.at("slots").get<std::size_t>();
        return e;
    }
    if (type == "sampling_check") {
        SamplingCheckEvent e;
        e.passed = j.at("passed").get<bool>();
        for (const auto& r : j.at("samples")) {
            SampleRecord s;
            s.position = r.at("position").get<std::size_t>();
            s.basis = parse_label(r.at("basis").get<std::string>());
            s.alice_bit = r.at("alice").get<int>();
            s.bob_bits = {r.at("bob").at(0).get<int>(), r.at("bob").at(1).get<int>()};
            s.consistent = r.at("consistent").get<bool>();
            e.samples.push_back(s);
        }
        return e;
    }
    if (type == "decoy_check") {
        DecoyCheckEvent e;
        e.direction = j.at("direction").get<std::string>();
        e.passed = j.at("passed").get<bool>();
        for (const auto& r : j.at("decoys")) {
            DecoyRecord d;
            d.position = r.at("position").get<std::size_t>();
            d.prepared = parse_state(r.at("prepared").get<std::string>());
            const auto m = r.at("measured").get<std::string>();
            if (m != "tamper") {
                d.measured = parse_state(m);
            }
            d.match = r.at("match").get<bool>();
            e.decoys.push_back(d);
        }
        return e;
    }
    if (type == "announcement") {
        AnnouncementEvent e;
        e.bits = j.at("bits").get<Bits>();
        if (j.contains("disclosed_initial")) {
            e.disclosed_initial = j.at("disclosed_initial").get<Bits>();
            if (e.disclosed_initial->size() != e.bits.size()) {
                throw std::invalid_argument("announcement: disclosed_initial length mismatch");
            }
        }
        for (int b : e.bits) {
            if (b != 0 && b != 1) {
                throw std::invalid_argument("announcement: bits must be 0 or 1");
            }
        }
        return e;
    }
    if (type == "key_rotation") {
        KeyRotationEvent e;
        e.theta = j.at("theta").get<double>();
        e.rotation_count = j.at("rotation_count").get<std::uint64_t>();
        e.null_rotation = j.at("null_rotation").get<bool>();
        return e;
    }
    if (type == "abort") {
        return AbortEvent{{parse_stage(j.at("stage").get<std::string>()), j.at("reason").get<std::string>()}};
    }
    throw std::invalid_argument("unknown transcript event type '" + type + "'");
}

}  // namespace

void Transcript::append(const Transcript& other) {
    events_.insert(events_.end(), other.events_.begin(), other.events_.end());
    next_block_id_ = std::max(next_block_id_, other.next_block_id_);
}

std::vector<AnnouncementEvent> Transcript::announcements() const {
    std::vector<AnnouncementEvent> out;
    for (const auto& e : events_) {
        if (const auto* a = std::get_if<AnnouncementEvent>(&e)) {
            out.push_back(*a);
        }
    }
    return out;
}

std::optional<Abort> Transcript::abort() const {
    for (const auto& e : events_) {
        if (const auto* a = std::get_if<AbortEvent>(&e)) {
            return a->abort;
        }
    }
    return std::nullopt;
}

Json Transcript::to_json() const {
    Json doc;
    doc["format"] = "qdsim-transcript/1";
    Json events = Json::array();
    for (const auto& e : events_) {
        events.push_back(std::visit(EventWriter{}, e));
    }
    doc["events"] = std::move(events);
    return doc;
}

Json Transcript::public_view() const {
    Json doc;
    doc["format"] = "qdsim-transcript/1";
    Json events = Json::array();
    for (const auto& e : events_) {
        if (std::holds_alternative<TransmissionEvent>(e)) {
            continue;
        }
        events.push_back(std::visit(EventWriter{}, e));
    }
    doc["events"] = std::move(events);
    return doc;
}

Transcript Transcript::from_json(const Json& doc) {
    Transcript t;
    try {
        if (!doc.is_object() || !doc.contains("events") || !doc.at("events").is_array()) {
            throw std::invalid_argument("transcript: expected an object with an 'events' array");
        }
        for (const auto& e : doc.at("events")) {
            t.add(read_event(e));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw std::invalid_argument(std::string("transcript: ") + ex.what());
    }
    return t;
}

}  // namespace qdsim
