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


#ifndef QDSIM_REGISTER_HPP
#define QDSIM_REGISTER_HPP

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdsim/statevec.hpp"

namespace qdsim {

/// A Ket whose qubits carry names ("A", "B", "C1", "eve0", ...).
///
/// Protocol code addresses qubits by role instead of by index, so appending
/// an eavesdropper ancilla or releasing a measured carrier never invalidates
/// anyone's bookkeeping.
class QubitRegister {
  public:
    QubitRegister(Ket state, std::vector<std::string> wires);

    const Ket& state() const { return state_; }
    const std::vector<std::string>& wires() const { return wires_; }
    std::size_t size() const { return wires_.size(); }

    bool has(std::string_view wire) const;
    /// Throws std::out_of_range for an unknown wire.
    std::size_t index(std::string_view wire) const;
    std::vector<std::size_t> indices(std::initializer_list<std::string_view> wires) const;
    std::vector<std::size_t> indices(const std::vector<std::string>& wires) const;

    /// Tensors `part` onto the end of the register under fresh names.
    void append(const Ket& part, std::vector<std::string> names);

    void apply(const GateMatrix& gate, std::initializer_list<std::string_view> targets);
    void apply(const GateMatrix& gate, const std::vector<std::string>& targets);

    int measure(std::string_view wire, const SingleQubitBasis& basis, Rng& rng);

    /// Drops a wire that is in a computational basis state. Returns its bit.
    int release(std::string_view wire);
    /// Releases the wire if it is in a computational basis state; otherwise
    /// leaves the register unchanged and returns nullopt.
    std::optional<int> try_release(std::string_view wire);

    void rename(std::string_view from, std::string to);

    /// Replaces the state (qubit count must match).
    void set_state(Ket state);

  private:
    Ket state_;
    std::vector<std::string> wires_;
};

}  // namespace qdsim

#endif  // QDSIM_REGISTER_HPP
