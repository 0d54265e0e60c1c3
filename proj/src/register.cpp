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


#include "qdsim/register.hpp"

#include <algorithm>
#include <stdexcept>

namespace qdsim {

QubitRegister::QubitRegister(Ket state, std::vector<std::string> wires)
    : state_(std::move(state)), wires_(std::move(wires)) {
    if (wires_.size() != state_.n_qubits()) {
        throw std::invalid_argument("QubitRegister: one name per qubit required");
    }
    auto sorted = wires_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("QubitRegister: duplicate wire name");
    }
}

bool QubitRegister::has(std::string_view wire) const {
    return std::find(wires_.begin(), wires_.end(), wire) != wires_.end();
}

std::size_t QubitRegister::index(std::string_view wire) const {
    auto it = std::find(wires_.begin(), wires_.end(), wire);
    if (it == wires_.end()) {
        throw std::out_of_range("QubitRegister: no wire named '" + std::string(wire) + "'");
    }
    return static_cast<std::size_t>(it - wires_.begin());
}

std::vector<std::size_t> QubitRegister::indices(std::initializer_list<std::string_view> wires) const {
    std::vector<std::size_t> out;
    for (auto w : wires) {
        out.push_back(index(w));
    }
    return out;
}

std::vector<std::size_t> QubitRegister::indices(const std::vector<std::string>& wires) const {
    std::vector<std::size_t> out;
    for (const auto& w : wires) {
        out.push_back(index(w));
    }
    return out;
}

void QubitRegister::append(const Ket& part, std::vector<std::string> names) {
    if (names.size() != part.n_qubits()) {
        throw std::invalid_argument("QubitRegister::append: one name per qubit required");
    }
    for (const auto& n : names) {
        if (has(n)) {
            throw std::invalid_argument("QubitRegister::append: wire '" + n + "' already exists");
        }
    }
    state_ = tensor(state_, part);
    wires_.insert(wires_.end(), std::make_move_iterator(names.begin()), std::make_move_iterator(names.end()));
}

void QubitRegister::apply(const GateMatrix& gate, std::initializer_list<std::string_view> targets) {
    auto idx = indices(targets);
    state_ = apply_gate(state_, gate, idx);
}

void QubitRegister::apply(const GateMatrix& gate, const std::vector<std::string>& targets) {
    auto idx = indices(targets);
    state_ = apply_gate(state_, gate, idx);
}

int QubitRegister::measure(std::string_view wire, const SingleQubitBasis& basis, Rng& rng) {
    auto m = measure_qubit(state_, index(wire), basis, rng);
    state_ = std::move(m.state);
    return m.bit;
}

int QubitRegister::release(std::string_view wire) {
    auto q = index(wire);
    auto [reduced, bit] = release_qubit(state_, q);
    state_ = std::move(reduced);
    wires_.erase(wires_.begin() + static_cast<std::ptrdiff_t>(q));
    return bit;
}

std::optional<int> QubitRegister::try_release(std::string_view wire) {
    index(wire);
    if (size() == 1) {
        return std::nullopt;
    }
    try {
        return release(wire);
    } catch (const std::logic_error&) {
        return std::nullopt;
    }
}

void QubitRegister::rename(std::string_view from, std::string to) {
    if (has(to)) {
        throw std::invalid_argument("QubitRegister::rename: wire '" + to + "' already exists");
    }
    wires_[index(from)] = std::move(to);
}

void QubitRegister::set_state(Ket state) {
    if (state.n_qubits() != wires_.size()) {
        throw std::invalid_argument("QubitRegister::set_state: qubit count mismatch");
    }
    state_ = std::move(state);
}

}  // namespace qdsim
