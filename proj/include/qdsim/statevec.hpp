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

#ifndef QDSIM_STATEVEC_HPP
#define QDSIM_STATEVEC_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdsim/rng.hpp"

namespace qdsim {

using Complex = std::complex<double>;

/// Tolerance for algebraic identities (unitarity, normalization, equality).
inline constexpr double kIdentityTol = 1e-12;
/// Tolerance for eigenvalue positivity of density operators.
inline constexpr double kEigenTol = 1e-10;
/// Largest register the dense engine accepts.
inline constexpr std::size_t kMaxQubits = 16;

/// Dense pure state over n physical qubits.
///
/// Basis index bit (n - 1 - q) holds qubit q, i.e. qubit 0 is the most
/// significant bit. Every public operation returns a state normalized to
/// within kIdentityTol. Global phase is never discarded.
class Ket {
  public:
    /// |0...0> on n qubits.
    explicit Ket(std::size_t n_qubits);

    /// Computational basis state |index> on n qubits.
    static Ket basis(std::size_t n_qubits, std::uint64_t index);

    /// Builds a state from raw amplitudes; rescales to unit norm.
    /// Throws on zero norm or a length that is not a power of two.
    static Ket from_amplitudes(std::vector<Complex> amps);

    /// Shorthand for a computational basis state written as bits, e.g. {0, 1}.
    static Ket bits(std::initializer_list<int> bits);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const Complex> amplitudes() const { return amps_; }
    Complex operator[](std::size_t i) const { return amps_[i]; }

    double norm() const;

    /// Multiplies by a unit-modulus scalar.
    Ket with_phase(Complex phase) const;

  private:
    Ket(std::size_t n_qubits, std::vector<Complex> amps);

    std::size_t n_qubits_;
    std::vector<Complex> amps_;
};

/// Unitary on k qubits, stored as a 2^k x 2^k matrix. Row/column index bits
/// follow the target order passed to apply_gate (first target = MSB).
class GateMatrix {
  public:
    /// Throws std::invalid_argument unless `m` is 2^k square and unitary to
    /// within kIdentityTol.
    explicit GateMatrix(Eigen::MatrixXcd m);

    std::size_t arity() const { return arity_; }
    const Eigen::MatrixXcd& matrix() const { return m_; }

    GateMatrix adjoint() const;
    /// this * other (other acts first).
    GateMatrix then_after(const GateMatrix& other) const;
    /// this on the leading qubits, other on the trailing ones.
    GateMatrix kron(const GateMatrix& other) const;

  private:
    std::size_t arity_;
    Eigen::MatrixXcd m_;
};

namespace gates {
GateMatrix identity(std::size_t arity = 1);
GateMatrix pauli_x();
GateMatrix pauli_z();
/// -i*sigma_y = |1><0| - |0><1|.
GateMatrix minus_i_sigma_y();
GateMatrix hadamard();
/// Phase gate diag(1, i).
GateMatrix phase_s();
/// diag(1, e^{i phi}).
GateMatrix phase(double phi);
/// Two-qubit CNOT, first target is the control.
GateMatrix cnot();
}  // namespace gates

/// Product state; qubits of `b` are renumbered after those of `a`.
Ket tensor(const Ket& a, const Ket& b);
Ket tensor(std::initializer_list<Ket> parts);

/// Applies `gate` to `targets` (distinct, in range, size == arity).
Ket apply_gate(const Ket& state, const GateMatrix& gate, std::span<const std::size_t> targets);
Ket apply_gate(const Ket& state, const GateMatrix& gate, std::initializer_list<std::size_t> targets);

/// Orthonormal single-qubit measurement basis. kets[b] is the state reported
/// as outcome bit b.
struct SingleQubitBasis {
    enum class Label { Z, X, Ycirc, Custom };

    Label label;
    std::array<std::array<Complex, 2>, 2> kets;

    static SingleQubitBasis z();
    /// {|+>, |->}; |+> is outcome 0.
    static SingleQubitBasis x();
    /// {(|0> + i|1>)/sqrt2, (|0> - i|1>)/sqrt2}; the first is outcome 0.
    static SingleQubitBasis ycirc();
    /// Throws unless the pair is orthonormal within kIdentityTol.
    static SingleQubitBasis custom(std::array<Complex, 2> zero, std::array<Complex, 2> one);

    /// Unitary mapping kets[b] to |b>.
    GateMatrix to_computational() const;
    /// The basis ket for `bit` as a one-qubit state.
    Ket ket(int bit) const;
};

std::string to_string(SingleQubitBasis::Label label);

struct Measurement {
    int bit;
    Ket state;
};

/// Born-rule probability of reading `bit` on `qubit` in `basis`.
double outcome_probability(const Ket& state, std::size_t qubit, const SingleQubitBasis& basis, int bit);

/// Projective single-qubit measurement. The collapsed state keeps the
/// measured qubit in the selected basis ket, renormalized.
/// Throws std::logic_error if a zero-probability branch is selected.
Measurement measure_qubit(const Ket& state, std::size_t qubit, const SingleQubitBasis& basis, Rng& rng);

/// Collapses `qubit` onto `basis.kets[bit]` without sampling. Throws
/// std::logic_error when that branch has zero probability.
Ket project_qubit(const Ket& state, std::size_t qubit, const SingleQubitBasis& basis, int bit);

/// Joint outcome distribution for measuring several distinct qubits, each
/// in its own basis. Entry b lists outcome bits with the first measured
/// qubit as the most significant bit of b.
std::vector<double> joint_outcome_probabilities(const Ket& state,
                                                std::span<const std::size_t> qubits,
                                                std::span<const SingleQubitBasis> bases);

/// <a|b>.
Complex inner(const Ket& a, const Ket& b);
/// |<a|b>|^2.
double fidelity(const Ket& a, const Ket& b);

/// min over unit lambda of ||a - lambda b||. Throws on a qubit-count mismatch.
double phase_distance(const Ket& a, const Ket& b);

/// True iff some unit lambda gives ||a - lambda b|| < tol.
bool equal_up_to_phase(const Ket& a, const Ket& b, double tol = kIdentityTol);

/// Removes `qubit`, which must be in a computational basis state (e.g. just
/// measured in Z). Returns the reduced state and the qubit's bit.
/// Throws std::logic_error if the qubit is entangled or in superposition.
std::pair<Ket, int> release_qubit(const Ket& state, std::size_t qubit);

/// Density operator over n qubits. Same index convention as Ket.
class DensityOp {
  public:
    /// Throws unless Hermitian, unit trace and positive semidefinite.
    explicit DensityOp(Eigen::MatrixXcd m);

    static DensityOp from_ket(const Ket& k);
    /// Convex mixture; weights must be nonnegative and sum to one.
    static DensityOp mixture(std::span<const double> weights, std::span<const DensityOp> parts);

    std::size_t n_qubits() const { return n_qubits_; }
    const Eigen::MatrixXcd& matrix() const { return m_; }

    Complex trace() const { return m_.trace(); }
    /// Ascending eigenvalues.
    Eigen::VectorXd eigenvalues() const;
    double expectation(const Ket& k) const;

  private:
    std::size_t n_qubits_;
    Eigen::MatrixXcd m_;
};

/// Reduced state over `keep` (output qubit order = order in `keep`).
/// Throws std::invalid_argument on an empty or out-of-range keep set.
DensityOp partial_trace(const Ket& state, std::span<const std::size_t> keep);
DensityOp partial_trace(const DensityOp& rho, std::span<const std::size_t> keep);
DensityOp partial_trace(const Ket& state, std::initializer_list<std::size_t> keep);

/// (1/2) * sum |eigenvalues of (a - b)|.
double trace_distance(const DensityOp& a, const DensityOp& b);

/// -tr(rho log2 rho), in bits.
double von_neumann_entropy(const DensityOp& rho);

/// Shannon entropy in bits; zero entries contribute nothing.
double shannon_entropy(std::span<const double> p);

}  // namespace qdsim

#endif  // QDSIM_STATEVEC_HPP
