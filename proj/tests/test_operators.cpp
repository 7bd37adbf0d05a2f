// Copyright 2026 The waygate Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "waygate/operators.hpp"

using namespace waygate;

namespace {

const Operator X = pauli(Pauli::X);
const Operator Y = pauli(Pauli::Y);
const Operator Z = pauli(Pauli::Z);
const Operator I2 = Operator::Identity(2, 2);

Ket ket(std::initializer_list<cplx> v) {
    Ket k(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (auto c : v) k(i++) = c;
    return k;
}

}  // namespace

TEST(SystemLayout, validates_invariants) {
    EXPECT_THROW(SystemLayout({2, 1}, {"C", "T"}), precondition_error);
    EXPECT_THROW(SystemLayout({2, 2}, {"C"}), precondition_error);
    EXPECT_THROW(SystemLayout({2, 2}, {"C", "C"}), label_error);
    const SystemLayout l({2, 3, 4}, {"C", "T", "A"});
    EXPECT_EQ(l.total_dim(), 24u);
    EXPECT_EQ(l.index_of("T"), 1u);
    EXPECT_EQ(l.dim_of("A"), 4u);
    EXPECT_THROW(l.index_of("Q"), label_error);
    EXPECT_EQ(gate_layout(1).size(), 2u);
    EXPECT_EQ(gate_layout(8).total_dim(), 32u);
}

TEST(Tensor, reference_values) {
    EXPECT_EQ(tensor(I2, I2), Operator(Operator::Identity(4, 4)));
    Operator zi = Operator::Zero(4, 4);
    zi.diagonal() << 1, 1, -1, -1;
    EXPECT_EQ(tensor(Z, I2), zi);
    EXPECT_EQ(tensor(X, X) * basis_ket(4, 0), basis_ket(4, 3));
}

TEST(Tensor, matches_loop_oracle_and_mixed_product) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = oracle::random_hermitian(2, rng), b = oracle::random_hermitian(3, rng);
        const auto c = oracle::random_hermitian(2, rng), d = oracle::random_hermitian(3, rng);
        const auto e = oracle::random_hermitian(2, rng);
        EXPECT_EQ(tensor(a, b), oracle::kron(a, b));
        EXPECT_LE(max_abs(tensor(tensor(a, b), e) - tensor(a, tensor(b, e))), 1e-14);  // rounding only
        EXPECT_LE(max_abs(tensor(a, b) * tensor(c, d) - tensor(Operator(a * c), Operator(b * d))), 1e-12);
    }
}

TEST(PartialTrace, product_state_factorizes) {
    std::mt19937_64 rng(3);
    const auto rho = oracle::random_density(4, rng);
    const auto sigma = oracle::random_density(3, rng);
    const SystemLayout l({2, 2, 3}, {"C", "T", "A"});
    EXPECT_LE(max_abs(partial_trace(tensor(rho, sigma), l, {"C", "T"}) - rho), 1e-12);
}

TEST(PartialTrace, bell_state_reduces_to_maximally_mixed) {
    const double r = 1.0 / std::sqrt(2.0);
    const Ket phi = ket({r, 0, 0, r});
    const SystemLayout l({2, 2}, {"C", "T"});
    EXPECT_LE(max_abs(partial_trace(projector(phi), l, {"C"}) - 0.5 * I2), 1e-15);
}

TEST(PartialTrace, random_three_qubit_matches_index_contraction) {
    std::mt19937_64 rng(5);
    const SystemLayout l({2, 2, 2}, {"C", "T", "A"});
    for (int trial = 0; trial < 10; ++trial) {
        const Operator rho = projector(oracle::random_ket(8, rng));
        EXPECT_LE(max_abs(partial_trace(rho, l, {"C", "T"}) - oracle::partial_trace(rho, {2, 2, 2}, {true, true, false})), 1e-12);
        EXPECT_LE(max_abs(partial_trace(rho, l, {"T"}) - oracle::partial_trace(rho, {2, 2, 2}, {false, true, false})), 1e-12);
        EXPECT_LE(max_abs(partial_trace(rho, l, {"C", "A"}) - oracle::partial_trace(rho, {2, 2, 2}, {true, false, true})), 1e-12);
    }
}

TEST(PartialTrace, mixed_radix_matches_oracle) {
    std::mt19937_64 rng(6);
    const SystemLayout l({3, 2, 4}, {"C", "T", "A"});
    const auto rho = oracle::random_density(24, rng);
    EXPECT_LE(max_abs(partial_trace(rho, l, {"C", "A"}) - oracle::partial_trace(rho, {3, 2, 4}, {true, false, true})), 1e-12);
}

TEST(PartialTrace, invariant_under_local_ancilla_unitary) {
    std::mt19937_64 rng(7);
    const SystemLayout l({2, 2, 3}, {"C", "T", "A"});
    for (int trial = 0; trial < 10; ++trial) {
        const auto rho = oracle::random_density(12, rng);
        const Operator u = tensor(Operator(Operator::Identity(4, 4)), oracle::random_unitary(3, rng));
        EXPECT_LE(max_abs(partial_trace(u * rho * u.adjoint(), l, {"C", "T"}) - partial_trace(rho, l, {"C", "T"})), 1e-10);
    }
}

TEST(PartialTrace, rejects_bad_input) {
    const SystemLayout l({2, 2}, {"C", "T"});
    const Operator rho = 0.25 * Operator::Identity(4, 4);
    EXPECT_THROW(partial_trace(rho, l, {"A"}), label_error);
    EXPECT_THROW(partial_trace(Operator(Operator::Identity(8, 8)), l, {"C"}), dimension_error);
}

TEST(DensityOperator, enforces_invariants) {
    EXPECT_THROW(DensityOperator(Operator(Operator::Identity(2, 2))), precondition_error);  // trace 2
    Operator neg = Operator::Zero(2, 2);
    neg.diagonal() << 1.5, -0.5;
    EXPECT_THROW(DensityOperator{neg}, precondition_error);
    EXPECT_THROW(DensityOperator{Operator(X * I_UNIT + 0.5 * I2)}, precondition_error);  // not hermitian
    EXPECT_NO_THROW(DensityOperator::pure(basis_ket(2, 1)));
}

TEST(HermitianExp, reference_values) {
    EXPECT_LE(max_abs(hermitian_exp(X, M_PI / 2) - I_UNIT * X), 1e-15);
    EXPECT_LE(max_abs(hermitian_exp(Z, 0.0) - I2), 0.0);
    EXPECT_LE(max_abs(hermitian_exp(swap_generator(), -M_PI / 4) - swap_matrix()), 1e-10);
    EXPECT_THROW(hermitian_exp(Operator(I_UNIT * X), 1.0), precondition_error);
}

TEST(HermitianExp, agrees_with_taylor_oracle_and_is_unitary) {
    std::mt19937_64 rng(13);
    for (int d : {2, 3, 5, 8}) {
        const auto h = oracle::random_hermitian(d, rng);
        const Operator u = hermitian_exp(h, 0.7);
        EXPECT_LE(max_abs(u - oracle::expm(I_UNIT * 0.7 * h)), 1e-10);
        EXPECT_TRUE(is_unitary(u, 1e-10));
        Eigen::ComplexEigenSolver<Operator> es(u);
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) EXPECT_NEAR(std::abs(es.eigenvalues()(k)), 1.0, 1e-10);
    }
}

TEST(Pauli, algebra_at_embed_sites) {
    EXPECT_EQ(X * X, I2);
    EXPECT_EQ(Y * Y, I2);
    EXPECT_EQ(Z * Z, I2);
    EXPECT_EQ(X * Y, Operator(I_UNIT * Z));
    EXPECT_EQ(Y * Z, Operator(I_UNIT * X));
    EXPECT_EQ(Z * X, Operator(I_UNIT * Y));
    const SystemLayout l({2, 2, 3}, {"C", "T", "A"});
    const Operator x1 = pauli_embed(Pauli::X, "C", l), y1 = pauli_embed(Pauli::Y, "C", l), z1 = pauli_embed(Pauli::Z, "C", l);
    EXPECT_EQ(x1 * y1, Operator(I_UNIT * z1));
    EXPECT_EQ(z1 * z1, Operator(Operator::Identity(12, 12)));
    EXPECT_THROW(pauli_embed(Pauli::X, "A", l), precondition_error);
    EXPECT_THROW(pauli_embed(Pauli::X, "Q", l), label_error);
}

TEST(Pauli, reference_values) {
    const SystemLayout l({2, 2}, {"C", "T"});
    const Operator z1 = pauli_embed(Pauli::Z, "C", l), x1 = pauli_embed(Pauli::X, "C", l), y1 = pauli_embed(Pauli::Y, "C", l);
    const Operator x2 = pauli_embed(Pauli::X, "T", l);
    for (std::size_t b = 0; b < 2; ++b) EXPECT_EQ(z1 * basis_ket(4, b), basis_ket(4, b));
    EXPECT_EQ(commutator(z1, x1), Operator(2.0 * I_UNIT * y1));
    EXPECT_EQ(max_abs(commutator(z1, x2)), 0.0);
}

TEST(Coherent, statistics) {
    const auto vac = coherent_state(0.0, 16);
    EXPECT_LE((vac.state - basis_ket(16, 0)).norm(), 0.0);
    const auto cs = coherent_state(2.0, 64);
    const Operator n = number_operator(64);
    EXPECT_NEAR(expectation(n, cs.state).real(), 4.0, 1e-6);
    EXPECT_NEAR(std::pow(std_dev(n, cs.state), 2), 4.0, 1e-6);
    EXPECT_FALSE(cs.truncation_warning);
    EXPECT_LT(cs.tail_mass, 1e-8);
    EXPECT_TRUE(coherent_state(4.0, 16).truncation_warning);  // |alpha|^2 > trunc/4
    EXPECT_EQ(coherent_truncation(2.0), 24u);
    EXPECT_EQ(coherent_truncation(0.0), 16u);
    EXPECT_EQ(coherent_truncation(3.0), 36u);
    for (double a : {0.5, 2.0, 3.0, 4.0, 6.0}) EXPECT_FALSE(coherent_state(a, coherent_truncation(a)).truncation_warning) << a;
}

TEST(Statistics, reference_values) {
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_EQ(std_dev(Z, basis_ket(2, 0)), 0.0);
    EXPECT_NEAR(std_dev(Z, ket({r, r})), 1.0, 1e-15);
    EXPECT_THROW(expectation(Z, basis_ket(3, 0)), dimension_error);
    // |<[Z1, X1]>| = 2 |<Y1>|: maximal (2) on the Y eigenstate, zero on |+>.
    const SystemLayout l({2, 2}, {"C", "T"});
    const Operator c = commutator(pauli_embed(Pauli::Z, "C", l), pauli_embed(Pauli::X, "C", l));
    std::mt19937_64 rng(1);
    const Ket other = oracle::random_ket(2, rng);
    EXPECT_NEAR(std::abs(expectation(c, tensor(ket({r, cplx(0, r)}), other))), 2.0, 1e-12);
    EXPECT_NEAR(std::abs(expectation(c, tensor(ket({r, r}), other))), 0.0, 1e-12);
}

TEST(TraceDistance, reference_values) {
    const double r = 1.0 / std::sqrt(2.0);
    const auto p0 = DensityOperator::pure(basis_ket(2, 0));
    const auto p1 = DensityOperator::pure(basis_ket(2, 1));
    const auto pp = DensityOperator::pure(ket({r, r}));
    EXPECT_EQ(trace_distance(p0, p0), 0.0);
    EXPECT_NEAR(trace_distance(p0, p1), 1.0, 1e-15);
    EXPECT_NEAR(trace_distance(p0, pp), r, 1e-12);
    // pure-state oracle: D = sqrt(1 - |<a|b>|^2)
    EXPECT_NEAR(trace_distance(p0, pp), std::sqrt(1.0 - 0.5), 1e-12);
}

TEST(TraceDistance, triangle_and_unitary_invariance) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = oracle::random_density(4, rng), b = oracle::random_density(4, rng), c = oracle::random_density(4, rng);
        const auto u = oracle::random_unitary(4, rng);
        EXPECT_LE(trace_distance(a, c), trace_distance(a, b) + trace_distance(b, c) + 1e-10);
        EXPECT_NEAR(trace_distance(u * a * u.adjoint(), u * b * u.adjoint()), trace_distance(a, b), 1e-10);
        EXPECT_NEAR(trace_distance(a, b), oracle::trace_distance(a, b), 1e-10);
        EXPECT_GE(trace_distance(a, b), 0.0);
        EXPECT_LE(trace_distance(a, b), 1.0 + 1e-12);
    }
}

TEST(Gates, cnot_and_swap_tables) {
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            EXPECT_EQ(cnot_matrix() * basis_ket(4, std::size_t(2 * a + b)), basis_ket(4, std::size_t(2 * a + (a ^ b))));
            EXPECT_EQ(swap_matrix() * basis_ket(4, std::size_t(2 * a + b)), basis_ket(4, std::size_t(2 * b + a)));
        }
    }
    EXPECT_EQ(swap_generator(), Operator(-Operator::Identity(4, 4) + tensor(X, X) + tensor(Y, Y) + tensor(Z, Z)));
}
