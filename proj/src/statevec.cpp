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

#include "qdsim/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qdsim {

namespace {

constexpr std::uint64_t bit_of(std::size_t n, std::size_t q) {
    return std::uint64_t{1} << (n - 1 - q);
}

bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

std::size_t log2_exact(std::size_t x) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < x) {
        ++n;
    }
    return n;
}

void check_qubit(std::size_t n, std::size_t q, const char* where) {
    if (q >= n) {
        throw std::out_of_range(std::string(where) + ": qubit index " + std::to_string(q) +
                                " out of range for " + std::to_string(n) + " qubits");
    }
}

double squared_norm(const std::vector<Complex>& v) {
    double s = 0;
    for (const auto& a : v) {
        s += std::norm(a);
    }
    return s;
}

}  // namespace

// ---------------------------------------------------------------- Ket

Ket::Ket(std::size_t n_qubits) : Ket(n_qubits, {}) {
    amps_.assign(std::size_t{1} << n_qubits, Complex{0, 0});
    amps_[0] = 1;
}

Ket::Ket(std::size_t n_qubits, std::vector<Complex> amps) : n_qubits_(n_qubits), amps_(std::move(amps)) {
    if (n_qubits == 0 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("Ket: qubit count must be in [1, " + std::to_string(kMaxQubits) + "]");
    }
}

Ket Ket::basis(std::size_t n_qubits, std::uint64_t index) {
    Ket k(n_qubits);
    if (index >= k.dim()) {
        throw std::out_of_range("Ket::basis: index out of range");
    }
    k.amps_[0] = 0;
    k.amps_[index] = 1;
    return k;
}

Ket Ket::from_amplitudes(std::vector<Complex> amps) {
    if (!is_power_of_two(amps.size()) || amps.size() < 2) {
        throw std::invalid_argument("Ket::from_amplitudes: length must be a power of two >= 2");
    }
    double n2 = squared_norm(amps);
    if (!(n2 > 0) || !std::isfinite(n2)) {
        throw std::invalid_argument("Ket::from_amplitudes: zero or non-finite norm");
    }
    double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amps) {
        a *= inv;
    }
    auto n = log2_exact(amps.size());
    return Ket(n, std::move(amps));
}

Ket Ket::bits(std::initializer_list<int> bits) {
    std::uint64_t index = 0;
    for (int b : bits) {
        if (b != 0 && b != 1) {
            throw std::invalid_argument("Ket::bits: entries must be 0 or 1");
        }
        index = (index << 1) | static_cast<std::uint64_t>(b);
    }
    return basis(bits.size(), index);
}

double Ket::norm() const { return std::sqrt(squared_norm(amps_)); }

Ket Ket::with_phase(Complex phase) const {
    if (std::abs(std::abs(phase) - 1.0) > kIdentityTol) {
        throw std::invalid_argument("Ket::with_phase: phase must have unit modulus");
    }
    auto out = amps_;
    for (auto& a : out) {
        a *= phase;
    }
    return Ket(n_qubits_, std::move(out));
}

// ---------------------------------------------------------------- GateMatrix

GateMatrix::GateMatrix(Eigen::MatrixXcd m) : arity_(0), m_(std::move(m)) {
    auto rows = static_cast<std::size_t>(m_.rows());
    if (m_.rows() != m_.cols() || !is_power_of_two(rows) || rows < 2) {
        throw std::invalid_argument("GateMatrix: matrix must be 2^k x 2^k with k >= 1");
    }
    arity_ = log2_exact(rows);
    Eigen::MatrixXcd err = m_ * m_.adjoint() - Eigen::MatrixXcd::Identity(m_.rows(), m_.cols());
    if (err.cwiseAbs().maxCoeff() > kIdentityTol) {
        throw std::invalid_argument("GateMatrix: matrix is not unitary");
    }
}

GateMatrix GateMatrix::adjoint() const { return GateMatrix(m_.adjoint()); }

GateMatrix GateMatrix::then_after(const GateMatrix& other) const {
    if (other.arity_ != arity_) {
        throw std::invalid_argument("GateMatrix::then_after: arity mismatch");
    }
    return GateMatrix(m_ * other.m_);
}

GateMatrix GateMatrix::kron(const GateMatrix& other) const {
    const auto& b = other.m_;
    Eigen::MatrixXcd out(m_.rows() * b.rows(), m_.cols() * b.cols());
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
        for (Eigen::Index j = 0; j < m_.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = m_(i, j) * b;
        }
    }
    return GateMatrix(std::move(out));
}

namespace gates {

namespace {
GateMatrix two_by_two(Complex a, Complex b, Complex c, Complex d) {
    Eigen::MatrixXcd m(2, 2);
    m << a, b, c, d;
    return GateMatrix(std::move(m));
}
}  // namespace

GateMatrix identity(std::size_t arity) {
    auto d = static_cast<Eigen::Index>(std::size_t{1} << arity);
    return GateMatrix(Eigen::MatrixXcd::Identity(d, d));
}

GateMatrix pauli_x() { return two_by_two(0, 1, 1, 0); }
GateMatrix pauli_z() { return two_by_two(1, 0, 0, -1); }
GateMatrix minus_i_sigma_y() { return two_by_two(0, -1, 1, 0); }

GateMatrix hadamard() {
    const double h = std::numbers::sqrt2 / 2;
    return two_by_two(h, h, h, -h);
}

GateMatrix phase_s() { return two_by_two(1, 0, 0, Complex{0, 1}); }
GateMatrix phase(double phi) { return two_by_two(1, 0, 0, std::polar(1.0, phi)); }

GateMatrix cnot() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 3) = 1;
    m(3, 2) = 1;
    return GateMatrix(std::move(m));
}

}  // namespace gates

// ---------------------------------------------------------------- tensor / apply

Ket tensor(const Ket& a, const Ket& b) {
    std::vector<Complex> out(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            out[i * b.dim() + j] = a[i] * b[j];
        }
    }
    return Ket::from_amplitudes(std::move(out));
}

Ket tensor(std::initializer_list<Ket> parts) {
    if (parts.size() == 0) {
        throw std::invalid_argument("tensor: empty product");
    }
    auto it = parts.begin();
    Ket acc = *it;
    for (++it; it != parts.end(); ++it) {
        acc = tensor(acc, *it);
    }
    return acc;
}

Ket apply_gate(const Ket& state, const GateMatrix& gate, std::span<const std::size_t> targets) {
    const auto n = state.n_qubits();
    const auto k = gate.arity();
    if (targets.size() != k) {
        throw std::invalid_argument("apply_gate: gate arity " + std::to_string(k) + " != " +
                                    std::to_string(targets.size()) + " targets");
    }
    std::uint64_t target_mask = 0;
    std::vector<std::uint64_t> masks(k);
    for (std::size_t t = 0; t < k; ++t) {
        check_qubit(n, targets[t], "apply_gate");
        masks[t] = bit_of(n, targets[t]);
        if (target_mask & masks[t]) {
            throw std::invalid_argument("apply_gate: repeated target qubit");
        }
        target_mask |= masks[t];
    }

    const std::size_t sub = std::size_t{1} << k;
    // offsets[s] = index contribution of sub-index s (first target is MSB of s).
    std::vector<std::uint64_t> offsets(sub, 0);
    for (std::size_t s = 0; s < sub; ++s) {
        for (std::size_t t = 0; t < k; ++t) {
            if (s & (std::size_t{1} << (k - 1 - t))) {
                offsets[s] |= masks[t];
            }
        }
    }

    auto amps = std::vector<Complex>(state.amplitudes().begin(), state.amplitudes().end());
    const auto& m = gate.matrix();
    std::vector<Complex> in(sub);
    for (std::uint64_t base = 0; base < state.dim(); ++base) {
        if (base & target_mask) {
            continue;
        }
        for (std::size_t s = 0; s < sub; ++s) {
            in[s] = amps[base | offsets[s]];
        }
        for (std::size_t r = 0; r < sub; ++r) {
            Complex acc{0, 0};
            for (std::size_t c = 0; c < sub; ++c) {
                acc += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
            }
            amps[base | offsets[r]] = acc;
        }
    }
    return Ket::from_amplitudes(std::move(amps));
}

Ket apply_gate(const Ket& state, const GateMatrix& gate, std::initializer_list<std::size_t> targets) {
    std::vector<std::size_t> t(targets);
    return apply_gate(state, gate, std::span<const std::size_t>(t));
}

// ---------------------------------------------------------------- bases & measurement

SingleQubitBasis SingleQubitBasis::z() { return {Label::Z, {{{1, 0}, {0, 1}}}}; }

SingleQubitBasis SingleQubitBasis::x() {
    const double h = std::numbers::sqrt2 / 2;
    return {Label::X, {{{h, h}, {h, -h}}}};
}

SingleQubitBasis SingleQubitBasis::ycirc() {
    const double h = std::numbers::sqrt2 / 2;
    return {Label::Ycirc, {{{h, Complex{0, h}}, {h, Complex{0, -h}}}}};
}

SingleQubitBasis SingleQubitBasis::custom(std::array<Complex, 2> zero, std::array<Complex, 2> one) {
    auto nz = std::norm(zero[0]) + std::norm(zero[1]);
    auto no = std::norm(one[0]) + std::norm(one[1]);
    auto ov = std::conj(zero[0]) * one[0] + std::conj(zero[1]) * one[1];
    if (std::abs(nz - 1) > kIdentityTol || std::abs(no - 1) > kIdentityTol || std::abs(ov) > kIdentityTol) {
        throw std::invalid_argument("SingleQubitBasis::custom: kets are not orthonormal");
    }
    return {Label::Custom, {zero, one}};
}

GateMatrix SingleQubitBasis::to_computational() const {
    // Rows are the bras <k_b|.
    Eigen::MatrixXcd m(2, 2);
    m << std::conj(kets[0][0]), std::conj(kets[0][1]), std::conj(kets[1][0]), std::conj(kets[1][1]);
    return GateMatrix(std::move(m));
}

Ket SingleQubitBasis::ket(int bit) const {
    const auto& k = kets.at(static_cast<std::size_t>(bit));
    return Ket::from_amplitudes({k[0], k[1]});
}

std::string to_string(SingleQubitBasis::Label label) {
    switch (label) {
        case SingleQubitBasis::Label::Z: return "Z";
        case SingleQubitBasis::Label::X: return "X";
        case SingleQubitBasis::Label::Ycirc: return "Ycirc";
        case SingleQubitBasis::Label::Custom: return "custom";
    }
    return "?";
}

namespace {

// Amplitudes of the branch where `qubit` reads `bit` in `basis`, unnormalized.
// The measured qubit is left in basis.kets[bit].
std::vector<Complex> branch(const Ket& state, std::size_t qubit, const SingleQubitBasis& basis, int bit) {
    const auto n = state.n_qubits();
    check_qubit(n, qubit, "measure");
    if (bit != 0 && bit != 1) {
        throw std::invalid_argument("measure: bit must be 0 or 1");
    }
    const auto mask = bit_of(n, qubit);
    const auto& b = basis.kets[static_cast<std::size_t>(bit)];
    std::vector<Complex> out(state.dim());
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        if (i & mask) {
            continue;
        }
        // <b| applied to the qubit, then |b> re-inserted.
        Complex c = std::conj(b[0]) * state[i] + std::conj(b[1]) * state[i | mask];
        out[i] = c * b[0];
        out[i | mask] = c * b[1];
    }
    return out;
}

}  // namespace

double outcome_probability(const Ket& state, std::size_t qubit, const SingleQubitBasis& basis, int bit) {
    return squared_norm(branch(state, qubit, basis, bit));
}

Ket project_qubit(const Ket& state, std::size_t qubit, const SingleQubitBasis& basis, int bit) {
    auto amps = branch(state, qubit, basis, bit);
    if (squared_norm(amps) < 1e-300) {
        throw std::logic_error("project_qubit: selected branch has zero probability");
    }
    return Ket::from_amplitudes(std::move(amps));
}

Measurement measure_qubit(const Ket& state, std::size_t qubit, const SingleQubitBasis& basis, Rng& rng) {
    const double p0 = outcome_probability(state, qubit, basis, 0);
    const int bit = rng.uniform() < p0 ? 0 : 1;
    return {bit, project_qubit(state, qubit, basis, bit)};
}

std::vector<double> joint_outcome_probabilities(const Ket& state,
                                                std::span<const std::size_t> qubits,
                                                std::span<const SingleQubitBasis> bases) {
    if (qubits.size() != bases.size() || qubits.empty()) {
        throw std::invalid_argument("joint_outcome_probabilities: need one basis per qubit");
    }
    Ket rotated = state;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        rotated = apply_gate(rotated, bases[i].to_computational(), {qubits[i]});
    }
    const auto n = state.n_qubits();
    std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
    for (std::uint64_t idx = 0; idx < rotated.dim(); ++idx) {
        std::size_t key = 0;
        for (auto q : qubits) {
            key = (key << 1) | ((idx & bit_of(n, q)) ? 1u : 0u);
        }
        probs[key] += std::norm(rotated[idx]);
    }
    return probs;
}

Complex inner(const Ket& a, const Ket& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("inner: qubit count mismatch");
    }
    Complex s{0, 0};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

double fidelity(const Ket& a, const Ket& b) { return std::norm(inner(a, b)); }

double phase_distance(const Ket& a, const Ket& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("phase_distance: qubit count mismatch");
    }
    const Complex ov = inner(b, a);
    const Complex lambda = std::abs(ov) < 1e-300 ? Complex(1) : ov / std::abs(ov);
    double d2 = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        d2 += std::norm(a[i] - lambda * b[i]);
    }
    return std::sqrt(d2);
}

bool equal_up_to_phase(const Ket& a, const Ket& b, double tol) { return phase_distance(a, b) < tol; }

std::pair<Ket, int> release_qubit(const Ket& state, std::size_t qubit) {
    const auto n = state.n_qubits();
    check_qubit(n, qubit, "release_qubit");
    if (n == 1) {
        throw std::invalid_argument("release_qubit: cannot release the last qubit");
    }
    const auto mask = bit_of(n, qubit);
    double p1 = 0;
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        if (i & mask) {
            p1 += std::norm(state[i]);
        }
    }
    int bit;
    if (p1 < kIdentityTol) {
        bit = 0;
    } else if (p1 > 1 - kIdentityTol) {
        bit = 1;
    } else {
        throw std::logic_error("release_qubit: qubit is not in a computational basis state");
    }
    std::vector<Complex> out;
    out.reserve(state.dim() / 2);
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        if (((i & mask) != 0) == (bit == 1)) {
            out.push_back(state[i]);
        }
    }
    return {Ket::from_amplitudes(std::move(out)), bit};
}

// ---------------------------------------------------------------- DensityOp

DensityOp::DensityOp(Eigen::MatrixXcd m) : n_qubits_(0), m_(std::move(m)) {
    auto rows = static_cast<std::size_t>(m_.rows());
    if (m_.rows() != m_.cols() || !is_power_of_two(rows)) {
        throw std::invalid_argument("DensityOp: matrix must be 2^n x 2^n");
    }
    n_qubits_ = log2_exact(rows);
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kIdentityTol) {
        throw std::invalid_argument("DensityOp: matrix is not Hermitian");
    }
    if (std::abs(m_.trace() - Complex{1, 0}) > kIdentityTol) {
        throw std::invalid_argument("DensityOp: trace is not 1");
    }
    if (eigenvalues().minCoeff() < -kEigenTol) {
        throw std::invalid_argument("DensityOp: matrix is not positive semidefinite");
    }
}

DensityOp DensityOp::from_ket(const Ket& k) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(k.dim()));
    for (std::size_t i = 0; i < k.dim(); ++i) {
        v(static_cast<Eigen::Index>(i)) = k[i];
    }
    return DensityOp(v * v.adjoint());
}

DensityOp DensityOp::mixture(std::span<const double> weights, std::span<const DensityOp> parts) {
    if (weights.size() != parts.size() || parts.empty()) {
        throw std::invalid_argument("DensityOp::mixture: need one weight per part");
    }
    double total = 0;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(parts[0].m_.rows(), parts[0].m_.cols());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (weights[i] < 0 || parts[i].n_qubits_ != parts[0].n_qubits_) {
            throw std::invalid_argument("DensityOp::mixture: bad weight or size");
        }
        total += weights[i];
        acc += weights[i] * parts[i].m_;
    }
    if (std::abs(total - 1) > kIdentityTol) {
        throw std::invalid_argument("DensityOp::mixture: weights must sum to 1");
    }
    return DensityOp(std::move(acc));
}

Eigen::VectorXd DensityOp::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double DensityOp::expectation(const Ket& k) const {
    if (k.n_qubits() != n_qubits_) {
        throw std::invalid_argument("DensityOp::expectation: qubit count mismatch");
    }
    Eigen::VectorXcd v(static_cast<Eigen::Index>(k.dim()));
    for (std::size_t i = 0; i < k.dim(); ++i) {
        v(static_cast<Eigen::Index>(i)) = k[i];
    }
    return (v.adjoint() * m_ * v)(0, 0).real();
}

namespace {

std::vector<std::size_t> validate_keep(std::size_t n, std::span<const std::size_t> keep) {
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set is empty");
    }
    std::vector<std::size_t> k(keep.begin(), keep.end());
    for (auto q : k) {
        check_qubit(n, q, "partial_trace");
    }
    auto sorted = k;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("partial_trace: repeated qubit in keep set");
    }
    return k;
}

// Splits a full index into (kept sub-index, traced sub-index).
struct IndexSplit {
    std::vector<std::uint64_t> keep_masks;
    std::vector<std::uint64_t> env_masks;

    IndexSplit(std::size_t n, const std::vector<std::size_t>& keep) {
        std::vector<bool> kept(n, false);
        for (auto q : keep) {
            keep_masks.push_back(bit_of(n, q));
            kept[q] = true;
        }
        for (std::size_t q = 0; q < n; ++q) {
            if (!kept[q]) {
                env_masks.push_back(bit_of(n, q));
            }
        }
    }

    static std::uint64_t gather(std::uint64_t idx, const std::vector<std::uint64_t>& masks) {
        std::uint64_t out = 0;
        for (auto m : masks) {
            out = (out << 1) | ((idx & m) ? 1u : 0u);
        }
        return out;
    }
};

}  // namespace

DensityOp partial_trace(const Ket& state, std::span<const std::size_t> keep) {
    auto k = validate_keep(state.n_qubits(), keep);
    IndexSplit split(state.n_qubits(), k);
    const auto dk = static_cast<Eigen::Index>(std::size_t{1} << k.size());
    const auto de = static_cast<Eigen::Index>(std::size_t{1} << split.env_masks.size());
    // psi(kept, env) as a dk x de matrix; rho = psi psi^dagger.
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(dk, de);
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        psi(static_cast<Eigen::Index>(IndexSplit::gather(i, split.keep_masks)),
            static_cast<Eigen::Index>(IndexSplit::gather(i, split.env_masks))) = state[i];
    }
    return DensityOp(psi * psi.adjoint());
}

DensityOp partial_trace(const Ket& state, std::initializer_list<std::size_t> keep) {
    std::vector<std::size_t> k(keep);
    return partial_trace(state, std::span<const std::size_t>(k));
}

DensityOp partial_trace(const DensityOp& rho, std::span<const std::size_t> keep) {
    auto k = validate_keep(rho.n_qubits(), keep);
    IndexSplit split(rho.n_qubits(), k);
    const auto dk = static_cast<Eigen::Index>(std::size_t{1} << k.size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
    const auto dim = static_cast<std::uint64_t>(rho.matrix().rows());
    const auto& m = rho.matrix();
    for (std::uint64_t i = 0; i < dim; ++i) {
        const auto ei = IndexSplit::gather(i, split.env_masks);
        const auto ki = static_cast<Eigen::Index>(IndexSplit::gather(i, split.keep_masks));
        for (std::uint64_t j = 0; j < dim; ++j) {
            if (IndexSplit::gather(j, split.env_masks) != ei) {
                continue;
            }
            const auto kj = static_cast<Eigen::Index>(IndexSplit::gather(j, split.keep_masks));
            out(ki, kj) += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return DensityOp(std::move(out));
}

double trace_distance(const DensityOp& a, const DensityOp& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("trace_distance: qubit count mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double von_neumann_entropy(const DensityOp& rho) {
    const auto ev = rho.eigenvalues();
    double s = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > kEigenTol) {
            s -= ev(i) * std::log2(ev(i));
        }
    }
    return s;
}

double shannon_entropy(std::span<const double> p) {
    double s = 0;
    for (double x : p) {
        if (x > 0) {
            s -= x * std::log2(x);
        }
    }
    return s;
}

}  // namespace qdsim
