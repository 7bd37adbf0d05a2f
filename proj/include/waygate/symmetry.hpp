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

#pragma once

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "waygate/operators.hpp"

namespace waygate {

/// Largest singular value; for hermitian input, the largest |eigenvalue|.
inline double operator_norm(const Operator &m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Operator> svd(m);
    return svd.singularValues()(0);
}

/// Additive conserved quantity L1 + L2 + L3 with L1 on the control qubit,
/// L2 on the target qubit and L3 on the ancilla. A 1x1 ancilla part stands
/// for "no ancilla".
class ConservedQuantity {
  public:
    ConservedQuantity(Operator control, Operator target, Operator ancilla)
        : control_(std::move(control)), target_(std::move(target)), ancilla_(std::move(ancilla)) {
        if (control_.rows() != 2 || target_.rows() != 2) {
            throw dimension_error("ConservedQuantity: control and target charges must be 2x2");
        }
        for (const Operator *m : {&control_, &target_, &ancilla_}) {
            if (!is_hermitian(*m, tol::algebraic)) throw precondition_error("ConservedQuantity: local charge not hermitian");
        }
        if (std::abs(operator_norm(control_) - operator_norm(target_)) > tol::unitary) {
            throw precondition_error("ConservedQuantity: control and target charges differ in operator norm");
        }
    }

    const Operator &control() const { return control_; }
    const Operator &target() const { return target_; }
    const Operator &ancilla() const { return ancilla_; }
    std::size_t ancilla_dim() const { return static_cast<std::size_t>(ancilla_.rows()); }
    SystemLayout layout() const { return gate_layout(ancilla_dim()); }

    /// Local charges placed on the full C+T+A space.
    Operator embedded_control() const { return tensor_all({control_, Operator::Identity(2, 2), identity_ancilla()}); }
    Operator embedded_target() const { return tensor_all({Operator::Identity(2, 2), target_, identity_ancilla()}); }
    Operator embedded_ancilla() const { return tensor(Operator(Operator::Identity(4, 4)), ancilla_); }

  private:
    Operator identity_ancilla() const {
        const auto d = ancilla_.rows();
        return Operator::Identity(d, d);
    }

    Operator control_;
    Operator target_;
    Operator ancilla_;
};

inline Operator total_charge(const ConservedQuantity &cq) {
    return cq.embedded_control() + cq.embedded_target() + cq.embedded_ancilla();
}

/// Angular momentum along x: X on C and T, sum of X over each ancilla qubit.
inline ConservedQuantity x_charge(std::size_t ancilla_qubits) {
    const auto da = Eigen::Index(1) << ancilla_qubits;
    Operator l3 = Operator::Zero(da, da);
    for (std::size_t q = 0; q < ancilla_qubits; ++q) {
        Operator term = Operator::Identity(1, 1);
        for (std::size_t s = 0; s < ancilla_qubits; ++s) {
            term = tensor(term, s == q ? pauli(Pauli::X) : Operator(Operator::Identity(2, 2)));
        }
        l3 += term;
    }
    return ConservedQuantity(pauli(Pauli::X), pauli(Pauli::X), l3);
}

/// X on C and T, 2N on a truncated Fock-space ancilla.
inline ConservedQuantity fock_charge(std::size_t trunc) {
    return ConservedQuantity(pauli(Pauli::X), pauli(Pauli::X), 2.0 * number_operator(trunc));
}

// ---------------------------------------------------------------------------
// Commutant
// ---------------------------------------------------------------------------

/// Contiguous group of columns of the eigenframe spanning one eigenspace.
struct EigenBlock {
    Eigen::Index offset = 0;
    Eigen::Index size = 0;
    double eigenvalue = 0.0;
};

/// Hermitian matrix acting inside one eigenspace block.
struct BlockPart {
    std::size_t block = 0;
    Operator h;
};

/// A commutant element Q * blockdiag(h_b) * Q^dagger, stored by its parts.
struct CommutantElement {
    std::vector<BlockPart> parts;
};

inline double trace_inner(const CommutantElement &a, const CommutantElement &b) {
    double acc = 0.0;
    for (const auto &pa : a.parts) {
        for (const auto &pb : b.parts) {
            if (pa.block == pb.block) acc += (pa.h * pb.h).trace().real();
        }
    }
    return acc;
}

/// Orthonormal (trace inner product) basis of hermitian operators commuting
/// with a charge, expressed in an eigenframe of that charge.
class CommutantBasis {
  public:
    CommutantBasis(Operator charge, Operator frame, std::vector<EigenBlock> blocks,
                   std::vector<CommutantElement> elements)
        : charge_(std::move(charge)), frame_(std::move(frame)), blocks_(std::move(blocks)),
          elements_(std::move(elements)) {
        if (!is_unitary(frame_, tol::unitary)) throw precondition_error("CommutantBasis: frame is not unitary");
        Eigen::Index covered = 0;
        for (const auto &b : blocks_) {
            if (b.offset != covered) throw precondition_error("CommutantBasis: blocks must tile the frame");
            covered += b.size;
            const Operator cols = frame_.middleCols(b.offset, b.size);
            if (max_abs(charge_ * cols - b.eigenvalue * cols) > 1e-8) {
                throw precondition_error("CommutantBasis: frame block is not an eigenspace of the charge");
            }
        }
        if (covered != frame_.cols()) throw precondition_error("CommutantBasis: blocks must tile the frame");
    }

    const Operator &charge() const { return charge_; }
    const Operator &frame() const { return frame_; }
    const std::vector<EigenBlock> &blocks() const { return blocks_; }
    const std::vector<CommutantElement> &elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    Eigen::Index dim() const { return frame_.rows(); }

    Operator element(std::size_t k) const {
        std::vector<double> theta(size(), 0.0);
        theta.at(k) = 1.0;
        return generator(theta);
    }

    /// sum_k theta_k B_k on the full space.
    Operator generator(std::span<const double> theta) const {
        Operator out = Operator::Zero(dim(), dim());
        const auto hs = block_generators(theta);
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            const auto &blk = blocks_[b];
            const Operator cols = frame_.middleCols(blk.offset, blk.size);
            out += cols * hs[b] * cols.adjoint();
        }
        return out;
    }

    /// Per-block hermitian matrices sum_k theta_k h_{k,b}.
    std::vector<Operator> block_generators(std::span<const double> theta) const {
        if (theta.size() != size()) throw dimension_error("CommutantBasis: coefficient count != basis size");
        std::vector<Operator> hs;
        hs.reserve(blocks_.size());
        for (const auto &b : blocks_) hs.push_back(Operator::Zero(b.size, b.size));
        for (std::size_t k = 0; k < elements_.size(); ++k) {
            if (theta[k] == 0.0) continue;
            for (const auto &p : elements_[k].parts) hs[p.block] += theta[k] * p.h;
        }
        return hs;
    }

    /// Coefficients of the orthogonal projection of a hermitian H onto the span.
    std::vector<double> coordinates(const Operator &h) const {
        const Operator local = frame_.adjoint() * h * frame_;
        std::vector<double> theta(size(), 0.0);
        for (std::size_t k = 0; k < elements_.size(); ++k) {
            double acc = 0.0;
            for (const auto &p : elements_[k].parts) {
                const auto &b = blocks_[p.block];
                acc += (p.h * local.block(b.offset, b.offset, b.size, b.size)).trace().real();
            }
            theta[k] = acc;
        }
        return theta;
    }

  private:
    Operator charge_;
    Operator frame_;
    std::vector<EigenBlock> blocks_;
    std::vector<CommutantElement> elements_;
};

/// Orthonormal hermitian basis of d x d matrices: E_aa, (E_ab + E_ba)/sqrt2,
/// i(E_ba - E_ab)/sqrt2.
inline std::vector<Operator> hermitian_unit_basis(Eigen::Index d) {
    std::vector<Operator> out;
    const double r = 1.0 / std::sqrt(2.0);
    for (Eigen::Index a = 0; a < d; ++a) {
        Operator e = Operator::Zero(d, d);
        e(a, a) = 1.0;
        out.push_back(e);
        for (Eigen::Index b = a + 1; b < d; ++b) {
            Operator s = Operator::Zero(d, d);
            s(a, b) = r;
            s(b, a) = r;
            out.push_back(s);
            Operator t = Operator::Zero(d, d);
            t(a, b) = -I_UNIT * r;
            t(b, a) = I_UNIT * r;
            out.push_back(t);
        }
    }
    return out;
}

/// Modified Gram-Schmidt under the trace inner product. Elements whose
/// residual norm falls below `drop` are discarded as linearly dependent.
inline std::vector<CommutantElement> orthonormalize(std::vector<CommutantElement> elems, double drop = 1e-10) {
    std::vector<CommutantElement> out;
    for (auto &e : elems) {
        for (const auto &q : out) {
            const double c = trace_inner(q, e);
            if (c == 0.0) continue;
            for (const auto &qp : q.parts) {
                bool merged = false;
                for (auto &ep : e.parts) {
                    if (ep.block == qp.block) {
                        ep.h -= c * qp.h;
                        merged = true;
                    }
                }
                if (!merged) e.parts.push_back({qp.block, -c * qp.h});
            }
        }
        const double nrm = std::sqrt(std::max(0.0, trace_inner(e, e)));
        if (nrm < drop) continue;
        for (auto &ep : e.parts) ep.h /= nrm;
        out.push_back(std::move(e));
    }
    return out;
}

/// Eigenvalues within `threshold` of the first member of a run are grouped.
inline std::vector<EigenBlock> cluster_eigenvalues(const Eigen::VectorXd &evals, double threshold = tol::degeneracy) {
    std::vector<EigenBlock> blocks;
    Eigen::Index i = 0;
    while (i < evals.size()) {
        Eigen::Index j = i + 1;
        while (j < evals.size() && evals(j) - evals(i) <= threshold) ++j;
        blocks.push_back({i, j - i, evals.segment(i, j - i).mean()});
        i = j;
    }
    return blocks;
}

inline CommutantBasis commutant_basis(const Operator &charge) {
    if (!is_hermitian(charge, tol::algebraic)) throw precondition_error("commutant_basis: charge is not hermitian");
    Eigen::SelfAdjointEigenSolver<Operator> es(charge);
    auto blocks = cluster_eigenvalues(es.eigenvalues());
    std::vector<CommutantElement> elems;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (auto &h : hermitian_unit_basis(blocks[b].size)) elems.push_back({{{b, std::move(h)}}});
    }
    return CommutantBasis(charge, es.eigenvectors(), std::move(blocks), std::move(elems));
}

/// exp(i h_b) for every block generator h_b of sum_k theta_k B_k.
inline std::vector<Operator> block_exponentials(std::span<const double> theta, const CommutantBasis &basis) {
    auto hs = basis.block_generators(theta);
    for (auto &h : hs) {
        if (h.rows() == 1) {
            h(0, 0) = std::exp(I_UNIT * h(0, 0).real());
        } else {
            h = hermitian_exp(0.5 * (h + h.adjoint()), 1.0);
        }
    }
    return hs;
}

/// exp(i sum_k theta_k B_k), assembled block by block in the eigenframe.
inline Operator invariant_unitary(std::span<const double> theta, const CommutantBasis &basis) {
    const auto exps = block_exponentials(theta, basis);
    Operator u = Operator::Zero(basis.dim(), basis.dim());
    for (std::size_t b = 0; b < exps.size(); ++b) {
        const auto &blk = basis.blocks()[b];
        const auto cols = basis.frame().middleCols(blk.offset, blk.size);
        u.noalias() += cols * exps[b] * cols.adjoint();
    }
    return u;
}

/// exp(i sum_k theta_k B_k) * m without forming the full unitary.
inline Operator apply_invariant_unitary(std::span<const double> theta, const CommutantBasis &basis, const Operator &m) {
    if (m.rows() != basis.dim()) throw dimension_error("apply_invariant_unitary: dimension mismatch");
    const auto exps = block_exponentials(theta, basis);
    const Operator local = basis.frame().adjoint() * m;
    Operator rotated(local.rows(), local.cols());
    for (std::size_t b = 0; b < exps.size(); ++b) {
        const auto &blk = basis.blocks()[b];
        rotated.middleRows(blk.offset, blk.size).noalias() = exps[b] * local.middleRows(blk.offset, blk.size);
    }
    return basis.frame() * rotated;
}

/// Seeded random element of the invariant group: exp(i sum_k theta_k B_k)
/// with theta_k ~ N(0, scale^2).
template <class Rng>
Operator random_invariant_unitary(const CommutantBasis &basis, Rng &rng, double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    std::vector<double> theta(basis.size());
    for (auto &t : theta) t = gauss(rng);
    return invariant_unitary(theta, basis);
}

/// Seeded Haar-like random unit vector of dimension d.
template <class Rng>
Ket random_state(std::size_t d, Rng &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Ket v(static_cast<Eigen::Index>(d));
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = cplx(gauss(rng), gauss(rng));
    return v / v.norm();
}

/// max-abs entry of [U, charge].
inline double conservation_defect(const Operator &u, const Operator &charge) {
    if (u.rows() != charge.rows()) throw dimension_error("conservation_defect: dimension mismatch");
    return max_abs(commutator(u, charge));
}

/// Largest |<a,0| L - U_CN^dagger L U_CN |b,0>| over a != b, with L = L1 + L2
/// on two qubits. Nonzero means U_CN cannot conserve L.
inline double nogo_offdiagonal_witness(const Operator &l1, const Operator &l2) {
    if (l1.rows() != 2 || l2.rows() != 2) throw dimension_error("nogo_offdiagonal_witness: charges must be 2x2");
    const Operator id = Operator::Identity(2, 2);
    const Operator l = tensor(l1, id) + tensor(id, l2);
    const Operator cn = cnot_matrix();
    const Operator diff = l - cn.adjoint() * l * cn;
    double best = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            if (a != b) best = std::max(best, std::abs(diff(2 * a, 2 * b)));
        }
    }
    return best;
}

}  // namespace waygate
