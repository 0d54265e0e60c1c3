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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracle.hpp"

using namespace qdsim;

namespace {

Ket random_ket(std::size_t n, Rng& rng) {
    std::vector<Complex> v(std::size_t{1} << n);
    for (auto& a : v) {
        a = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
    }
    return Ket::from_amplitudes(v);
}

GateMatrix random_unitary(std::size_t arity, Rng& rng) {
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << arity);
    Eigen::MatrixXcd m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            m(i, j) = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    return GateMatrix(qr.householderQ() * Eigen::MatrixXcd::Identity(d, d));
}

}  // namespace

TEST(statevec, ket_construction) {
    Ket z(3);
    ASSERT_EQ(z.n_qubits(), 3u);
    ASSERT_EQ(z.dim(), 8u);
    ASSERT_EQ(z[0], Complex(1));
    ASSERT_EQ(Ket::bits({0, 1})[1], Complex(1));
    ASSERT_EQ(Ket::basis(3, 6)[6], Complex(1));
    ASSERT_THROW(Ket(0), std::invalid_argument);
    ASSERT_THROW(Ket::from_amplitudes({0, 0}), std::invalid_argument);
    ASSERT_THROW(Ket::from_amplitudes({1, 0, 0}), std::invalid_argument);
    ASSERT_NEAR(Ket::from_amplitudes({3, 4}).norm(), 1, kIdentityTol);
}

TEST(statevec, tensor) {
    ASSERT_LT(oracle::distance(tensor(Ket::bits({0}), Ket::bits({1})), {0, 1, 0, 0}), kIdentityTol);
    const Ket plus = Ket::from_amplitudes({1, 1});
    ASSERT_LT(oracle::distance(tensor(plus, Ket::bits({0})), {oracle::kH, 0, oracle::kH, 0}), kIdentityTol);
    const auto k = tensor(Ket::bits({0}), Ket::bits({0, 1}));
    ASSERT_EQ(k[1], Complex(1));
}

TEST(statevec, gates_are_unitary_and_literal) {
    for (const auto& g : {gates::pauli_x(), gates::pauli_z(), gates::minus_i_sigma_y(), gates::hadamard(),
                          gates::phase_s(), gates::phase(0.3), gates::cnot(), gates::identity(2)}) {
        const auto& m = g.matrix();
        ASSERT_LT((m * m.adjoint() - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).norm(), kIdentityTol);
    }
    const auto& y = gates::minus_i_sigma_y().matrix();
    ASSERT_EQ(y(0, 1), Complex(-1));
    ASSERT_EQ(y(1, 0), Complex(1));
    ASSERT_EQ(gates::phase_s().matrix()(1, 1), Complex(0, 1));
    Eigen::MatrixXcd bad(2, 2);
    bad << 1, 1, 0, 1;
    ASSERT_THROW(GateMatrix{bad}, std::invalid_argument);
}

TEST(statevec, apply_gate_examples) {
    const Ket x01 = apply_gate(Ket::bits({0, 1}), gates::pauli_x(), {0});
    ASSERT_LT(oracle::distance(x01, {0, 0, 0, 1}), kIdentityTol);
    const Ket h0 = apply_gate(Ket(1), gates::hadamard(), {0});
    ASSERT_LT(oracle::distance(h0, {oracle::kH, oracle::kH}), kIdentityTol);

    // CNOT(C1 -> C2) on (|0>|01> + |1>|10>)/sqrt2 gives (|0>|01> + |1>|11>)/sqrt2.
    const Ket res = Ket::from_amplitudes({0, 1, 0, 0, 0, 0, 1, 0});
    const Ket out = apply_gate(res, gates::cnot(), {1, 2});
    ASSERT_LT(oracle::distance(out, {0, oracle::kH, 0, 0, 0, 0, 0, oracle::kH}), kIdentityTol);
}

TEST(statevec, apply_gate_matches_oracle) {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        const Ket s = random_ket(4, rng);
        const auto q = static_cast<std::size_t>(rng.below(4));
        auto v = oracle::apply1(oracle::to_vec(s), 4, q, oracle::H);
        ASSERT_LT(oracle::distance(apply_gate(s, gates::hadamard(), {q}), v), 1e-12);

        const auto c = static_cast<std::size_t>(rng.below(4));
        const auto tq = (c + 1 + rng.below(3)) % 4;
        v = oracle::cnot(oracle::to_vec(s), 4, c, tq);
        ASSERT_LT(oracle::distance(apply_gate(s, gates::cnot(), {c, tq}), v), 1e-12);
    }
}

TEST(statevec, apply_gate_rejects_bad_targets) {
    const Ket s(3);
    ASSERT_THROW(apply_gate(s, gates::cnot(), {0, 0}), std::invalid_argument);
    ASSERT_THROW(apply_gate(s, gates::cnot(), {0}), std::invalid_argument);
    ASSERT_THROW(apply_gate(s, gates::hadamard(), {3}), std::out_of_range);
}

TEST(statevec, norm_preserved_under_random_gates) {
    Rng rng(5);
    for (int t = 0; t < 1000; ++t) {
        const Ket s = random_ket(3, rng);
        const auto arity = 1 + rng.below(2);
        const auto g = random_unitary(arity, rng);
        std::vector<std::size_t> targets{0, 1, 2};
        const auto picked = rng.sample_indices(3, arity);
        targets.assign(picked.begin(), picked.end());
        if (rng.bit()) {
            std::reverse(targets.begin(), targets.end());
        }
        const Ket out = apply_gate(s, g, targets);
        ASSERT_LT(std::abs(out.norm() - 1), kIdentityTol);
        const Ket back = apply_gate(out, g.adjoint(), targets);
        ASSERT_LT(oracle::distance(back, oracle::to_vec(s)), kIdentityTol);
    }
}

TEST(statevec, measure_basis_states) {
    Rng rng(1);
    auto m = measure_qubit(Ket(1), 0, SingleQubitBasis::z(), rng);
    ASSERT_EQ(m.bit, 0);
    ASSERT_LT(oracle::distance(m.state, {1, 0}), kIdentityTol);
    ASSERT_DOUBLE_EQ(outcome_probability(Ket::bits({1}), 0, SingleQubitBasis::z(), 1), 1.0);
}

TEST(statevec, measure_plus_statistics) {
    Rng rng(2026);
    const Ket plus = Ket::from_amplitudes({1, 1});
    const int trials = 100000;
    int zeros = 0;
    for (int t = 0; t < trials; ++t) {
        zeros += measure_qubit(plus, 0, SingleQubitBasis::z(), rng).bit == 0;
    }
    const double sigma = std::sqrt(0.25 / trials);
    ASSERT_LT(std::abs(zeros / static_cast<double>(trials) - 0.5), 5 * sigma);
}

TEST(statevec, measure_resource_alice_in_x) {
    // (|0>|01> + |1>|10>)/sqrt2 with A read as |+> leaves (|++> - |-->)/sqrt2.
    const Ket res = Ket::from_amplitudes({0, 1, 0, 0, 0, 0, 1, 0});
    const Ket after = project_qubit(res, 0, SingleQubitBasis::x(), 0);
    const auto rho = partial_trace(after, {1, 2});
    oracle::Vec pp = oracle::kron({oracle::kH, oracle::kH}, {oracle::kH, oracle::kH});
    oracle::Vec mm = oracle::kron({oracle::kH, -oracle::kH}, {oracle::kH, -oracle::kH});
    oracle::Vec expect(4);
    for (int i = 0; i < 4; ++i) {
        expect[i] = (pp[i] - mm[i]) * oracle::kH;
    }
    ASSERT_NEAR(rho.expectation(Ket::from_amplitudes(expect)), 1, kIdentityTol);
}

TEST(statevec, project_zero_branch_throws) {
    ASSERT_THROW(project_qubit(Ket(1), 0, SingleQubitBasis::z(), 1), std::logic_error);
}

TEST(statevec, bases) {
    for (const auto& b : {SingleQubitBasis::z(), SingleQubitBasis::x(), SingleQubitBasis::ycirc()}) {
        ASSERT_NEAR(std::abs(inner(b.ket(0), b.ket(1))), 0, kIdentityTol);
        const auto u = b.to_computational();
        ASSERT_LT(oracle::distance(apply_gate(b.ket(1), u, {0}), {0, 1}), kIdentityTol);
    }
    const auto yc = SingleQubitBasis::ycirc();
    ASSERT_LT(oracle::distance(yc.ket(0), {oracle::kH, Complex(0, oracle::kH)}), kIdentityTol);
    ASSERT_THROW(SingleQubitBasis::custom({1, 0}, {1, 0}), std::invalid_argument);
}

TEST(statevec, joint_outcome_probabilities) {
    const Ket phi = Ket::from_amplitudes({1, 0, 0, 1});
    const std::array<std::size_t, 2> q{0, 1};
    const std::array<SingleQubitBasis, 2> xx{SingleQubitBasis::x(), SingleQubitBasis::x()};
    const auto p = joint_outcome_probabilities(phi, q, xx);
    ASSERT_NEAR(p[0], 0.5, kIdentityTol);
    ASSERT_NEAR(p[3], 0.5, kIdentityTol);
    ASSERT_NEAR(p[1] + p[2], 0, kIdentityTol);
    const Ket k01 = Ket::bits({0, 1});
    const std::array<SingleQubitBasis, 2> zz{SingleQubitBasis::z(), SingleQubitBasis::z()};
    const std::array<std::size_t, 2> rev{1, 0};
    ASSERT_NEAR(joint_outcome_probabilities(k01, rev, zz)[2], 1, kIdentityTol);
}

TEST(statevec, equal_up_to_phase) {
    const Ket a = Ket::bits({0, 1});
    for (double phi : {0.0, 0.4, 2.0, std::numbers::pi}) {
        ASSERT_TRUE(equal_up_to_phase(a, a.with_phase(std::polar(1.0, phi))));
    }
    ASSERT_FALSE(equal_up_to_phase(Ket::bits({0, 1}), Ket::bits({1, 0})));
    // (-i sigma_y) x sigma_x maps |10> to -|01>.
    const Ket u = apply_gate(Ket::bits({1, 0}), gates::minus_i_sigma_y().kron(gates::pauli_x()), {0, 1});
    ASSERT_TRUE(equal_up_to_phase(u, Ket::bits({0, 1})));
    ASSERT_LT(oracle::distance(u, {0, -1, 0, 0}), kIdentityTol);
}

TEST(statevec, release_qubit) {
    const auto [k, bit] = release_qubit(Ket::bits({1, 0, 1}), 1);
    ASSERT_EQ(bit, 0);
    ASSERT_LT(oracle::distance(k, {0, 0, 0, 1}), kIdentityTol);
    ASSERT_THROW(release_qubit(Ket::from_amplitudes({1, 0, 0, 1}), 0), std::logic_error);
}

TEST(statevec, partial_trace_examples) {
    const Ket phi = Ket::from_amplitudes({1, 0, 0, 1});
    const auto rho = partial_trace(phi, {0});
    ASSERT_NEAR(std::abs(rho.matrix()(0, 0) - 0.5), 0, kIdentityTol);
    ASSERT_NEAR(std::abs(rho.matrix()(0, 1)), 0, kIdentityTol);
    ASSERT_NEAR(std::abs(rho.matrix()(1, 1) - 0.5), 0, kIdentityTol);

    const auto full = partial_trace(phi, {0, 1});
    ASSERT_NEAR(full.expectation(phi), 1, kIdentityTol);

    // Keep order is output order.
    const auto swapped = partial_trace(Ket::bits({0, 1}), {1, 0});
    ASSERT_NEAR(std::abs(swapped.matrix()(2, 2) - 1.0), 0, kIdentityTol);

    ASSERT_THROW(partial_trace(phi, std::initializer_list<std::size_t>{}), std::invalid_argument);
}

TEST(statevec, upsilon_carrier_is_code_space_mixture) {
    // (|0>|0>|01> + |1>|1>|10>)/sqrt2 on A, B, C1, C2.
    std::vector<Complex> v(16, 0);
    v[0b0001] = 1;
    v[0b1110] = 1;
    const auto rho = partial_trace(Ket::from_amplitudes(v), {2, 3});
    ASSERT_NEAR(std::abs(rho.matrix()(1, 1) - 0.5), 0, kIdentityTol);
    ASSERT_NEAR(std::abs(rho.matrix()(2, 2) - 0.5), 0, kIdentityTol);
    ASSERT_NEAR(std::abs(rho.matrix()(1, 2)), 0, kIdentityTol);
}

TEST(statevec, partial_trace_is_a_density_operator) {
    Rng rng(9);
    for (int t = 0; t < 200; ++t) {
        const Ket s = random_ket(4, rng);
        const auto keep = rng.sample_indices(4, 1 + rng.below(3));
        const auto rho = partial_trace(s, keep);
        const auto& m = rho.matrix();
        ASSERT_LT((m - m.adjoint()).norm(), kIdentityTol);
        ASSERT_NEAR(std::abs(rho.trace() - Complex(1)), 0, kIdentityTol);
        ASSERT_GE(rho.eigenvalues().minCoeff(), -kEigenTol);
    }
}

TEST(statevec, density_validation) {
    Eigen::MatrixXcd neg(2, 2);
    neg << 1.5, 0, 0, -0.5;
    ASSERT_THROW(DensityOp{neg}, std::invalid_argument);
    Eigen::MatrixXcd non_herm(2, 2);
    non_herm << 0.5, 0.5, 0, 0.5;
    ASSERT_THROW(DensityOp{non_herm}, std::invalid_argument);
}

TEST(statevec, entropies_and_distance) {
    const DensityOp mixed(Eigen::MatrixXcd::Identity(2, 2) / 2.0);
    ASSERT_NEAR(von_neumann_entropy(mixed), 1, kIdentityTol);
    const auto pure = DensityOp::from_ket(Ket(1));
    ASSERT_NEAR(von_neumann_entropy(pure), 0, kIdentityTol);
    ASSERT_NEAR(trace_distance(pure, mixed), 0.5, kIdentityTol);
    const std::array<double, 4> u{0.25, 0.25, 0.25, 0.25};
    ASSERT_NEAR(shannon_entropy(u), 2, kIdentityTol);
    const std::array<double, 2> d{1, 0};
    ASSERT_EQ(shannon_entropy(d), 0);
}
