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
#include <initializer_list>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>

#include "waygate/core.hpp"

namespace waygate {

// ---------------------------------------------------------------------------
// Tensor structure
// ---------------------------------------------------------------------------

inline Operator tensor(const Operator &a, const Operator &b) {
    if (!is_square(a) || !is_square(b)) throw dimension_error("tensor: operands must be square");
    const Eigen::Index da = a.rows();
    const Eigen::Index db = b.rows();
    Operator out(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index j = 0; j < da; ++j) {
            out.block(i * db, j * db, db, db) = a(i, j) * b;
        }
    }
    return out;
}

inline Operator tensor_all(std::initializer_list<Operator> factors) {
    Operator out = Operator::Identity(1, 1);
    for (const auto &f : factors) out = tensor(out, f);
    return out;
}

inline Ket tensor(const Ket &a, const Ket &b) {
    Ket out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

inline Ket product_state(std::initializer_list<Ket> factors) {
    Ket out = Ket::Ones(1);
    for (const auto &f : factors) out = tensor(out, f);
    return out;
}

inline Operator projector(const Ket &v) { return v * v.adjoint(); }

/// Unit-trace positive semidefinite operator.
class DensityOperator {
  public:
    explicit DensityOperator(Operator m) : m_(std::move(m)) {
        if (!is_square(m_) || !is_finite(m_)) throw precondition_error("DensityOperator: not a finite square matrix");
        if (!is_hermitian(m_, tol::algebraic)) throw precondition_error("DensityOperator: not hermitian");
        if (std::abs(m_.trace() - cplx(1.0)) > tol::trace) throw precondition_error("DensityOperator: trace != 1");
        Eigen::SelfAdjointEigenSolver<Operator> es(m_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol::positivity) {
            throw precondition_error("DensityOperator: negative eigenvalue");
        }
    }

    static DensityOperator pure(const Ket &psi) {
        if (!is_normalized(psi)) throw precondition_error("DensityOperator::pure: state not normalized");
        return DensityOperator(projector(psi));
    }

    const Operator &matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

  private:
    Operator m_;
};

/// Reduced operator on the subsystems named in `keep`, in layout order.
/// Works for any square operator of matching dimension, not only states.
inline Operator partial_trace(const Operator &m, const SystemLayout &layout, const std::set<std::string> &keep) {
    if (keep.empty()) throw precondition_error("partial_trace: keep set is empty");
    for (const auto &label : keep) layout.index_of(label);
    if (static_cast<std::size_t>(m.rows()) != layout.total_dim() || !is_square(m)) {
        throw dimension_error("partial_trace: operator does not match layout");
    }

    const std::size_t n = layout.size();
    std::vector<std::size_t> kept;
    std::vector<std::size_t> traced;
    for (std::size_t s = 0; s < n; ++s) {
        (keep.count(layout.labels()[s]) ? kept : traced).push_back(s);
    }
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t s = n; s-- > 1;) stride[s - 1] = stride[s] * layout.dims()[s];

    auto dim_of = [&](const std::vector<std::size_t> &subs) {
        std::size_t d = 1;
        for (auto s : subs) d *= layout.dims()[s];
        return d;
    };
    // Full index contributed by a mixed-radix index over the given subsystems.
    auto offsets = [&](const std::vector<std::size_t> &subs) {
        std::vector<std::size_t> out(dim_of(subs), 0);
        for (std::size_t r = 0; r < out.size(); ++r) {
            std::size_t rem = r;
            std::size_t off = 0;
            for (std::size_t k = subs.size(); k-- > 0;) {
                const std::size_t d = layout.dims()[subs[k]];
                off += (rem % d) * stride[subs[k]];
                rem /= d;
            }
            out[r] = off;
        }
        return out;
    };

    const auto keep_off = offsets(kept);
    const auto trace_off = offsets(traced);
    const auto dk = static_cast<Eigen::Index>(keep_off.size());
    Operator out = Operator::Zero(dk, dk);
    for (Eigen::Index i = 0; i < dk; ++i) {
        for (Eigen::Index j = 0; j < dk; ++j) {
            cplx acc = 0.0;
            for (std::size_t t : trace_off) {
                acc += m(static_cast<Eigen::Index>(keep_off[i] + t), static_cast<Eigen::Index>(keep_off[j] + t));
            }
            out(i, j) = acc;
        }
    }
    return out;
}

inline DensityOperator partial_trace(const DensityOperator &rho, const SystemLayout &layout,
                                     const std::set<std::string> &keep) {
    return DensityOperator(partial_trace(rho.matrix(), layout, keep));
}

// ---------------------------------------------------------------------------
// Spectral functions
// ---------------------------------------------------------------------------

/// exp(i * scale * H) for hermitian H, through the spectral decomposition.
inline Operator hermitian_exp(const Operator &h, double scale) {
    if (!is_hermitian(h, tol::algebraic)) throw precondition_error("hermitian_exp: generator is not hermitian");
    Eigen::SelfAdjointEigenSolver<Operator> es(h);
    Eigen::VectorXcd phases(es.eigenvalues().size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) {
        phases(k) = std::exp(I_UNIT * (scale * es.eigenvalues()(k)));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------
// Named operators
// ---------------------------------------------------------------------------

enum class Pauli { X, Y, Z };

inline Operator pauli(Pauli kind) {
    Operator p(2, 2);
    switch (kind) {
    case Pauli::X: p << 0.0, 1.0, 1.0, 0.0; break;
    case Pauli::Y: p << 0.0, -I_UNIT, I_UNIT, 0.0; break;
    case Pauli::Z: p << 1.0, 0.0, 0.0, -1.0; break;
    }
    return p;
}

/// Places `local` on subsystem `site`, identity elsewhere.
inline Operator embed(const Operator &local, const std::string &site, const SystemLayout &layout) {
    const std::size_t idx = layout.index_of(site);
    if (static_cast<std::size_t>(local.rows()) != layout.dims()[idx] || !is_square(local)) {
        throw dimension_error("embed: local operator does not match site '" + site + "'");
    }
    Operator out = Operator::Identity(1, 1);
    for (std::size_t s = 0; s < layout.size(); ++s) {
        const auto d = static_cast<Eigen::Index>(layout.dims()[s]);
        out = tensor(out, s == idx ? local : Operator(Operator::Identity(d, d)));
    }
    return out;
}

inline Operator pauli_embed(Pauli kind, const std::string &site, const SystemLayout &layout) {
    if (layout.dim_of(site) != 2) throw precondition_error("pauli_embed: site '" + site + "' is not a qubit");
    return embed(pauli(kind), site, layout);
}

inline Operator number_operator(std::size_t trunc) {
    if (trunc < 2) throw precondition_error("number_operator: truncation must be >= 2");
    Operator n = Operator::Zero(static_cast<Eigen::Index>(trunc), static_cast<Eigen::Index>(trunc));
    for (std::size_t k = 0; k < trunc; ++k) n(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = double(k);
    return n;
}

/// Smallest Fock truncation that keeps the neglected coherent-state tail
/// below 1e-8.
inline std::size_t coherent_truncation(cplx alpha) {
    const double a = std::abs(alpha);
    // Second term keeps |alpha|^2 <= trunc/4 so the chosen truncation never triggers its own warning.
    const double need = std::max(std::ceil(a * a + 6.0 * a + 8.0), std::ceil(4.0 * a * a));
    return std::max<std::size_t>(16, static_cast<std::size_t>(need));
}

struct CoherentState {
    Ket state;
    double tail_mass = 0.0;          // Poisson weight beyond the truncation
    bool truncation_warning = false;  // |alpha|^2 > trunc/4 or tail_mass > 1e-8
};

inline CoherentState coherent_state(cplx alpha, std::size_t trunc) {
    if (trunc < 2) throw precondition_error("coherent_state: truncation must be >= 2");
    const double mean = std::norm(alpha);
    CoherentState out;
    out.state = Ket::Zero(static_cast<Eigen::Index>(trunc));
    // amplitudes alpha^n / sqrt(n!) accumulated by recurrence
    cplx amp = 1.0;
    double kept = 0.0;
    for (std::size_t n = 0; n < trunc; ++n) {
        if (n > 0) amp *= alpha / std::sqrt(double(n));
        out.state(static_cast<Eigen::Index>(n)) = amp;
        kept += std::norm(amp);
    }
    out.tail_mass = std::max(0.0, 1.0 - kept * std::exp(-mean));
    out.state /= out.state.norm();
    out.truncation_warning = mean > double(trunc) / 4.0 || out.tail_mass > 1e-8;
    return out;
}

/// Controlled-NOT on C+T: |a,b> -> |a, b xor a>.
inline Operator cnot_matrix() {
    Operator u = Operator::Zero(4, 4);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) u(2 * a + (b ^ a), 2 * a + b) = 1.0;
    }
    return u;
}

/// SWAP on C+T: |a,b> -> |b,a>.
inline Operator swap_matrix() {
    Operator u = Operator::Zero(4, 4);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) u(2 * b + a, 2 * a + b) = 1.0;
    }
    return u;
}

/// Hermitian generator -I + X1X2 + Y1Y2 + Z1Z2; exp(-i pi/4 * it) is SWAP.
inline Operator swap_generator() {
    Operator h = -Operator::Identity(4, 4);
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) h += tensor(pauli(p), pauli(p));
    return h;
}

// ---------------------------------------------------------------------------
// State statistics
// ---------------------------------------------------------------------------

inline cplx expectation(const Operator &a, const Ket &psi) {
    if (a.rows() != psi.size() || !is_square(a)) throw dimension_error("expectation: dimension mismatch");
    return psi.dot(a * psi);
}

inline double std_dev(const Operator &a, const Ket &psi) {
    if (a.rows() != psi.size() || !is_square(a)) throw dimension_error("std_dev: dimension mismatch");
    const Ket apsi = a * psi;
    const double mean = psi.dot(apsi).real();
    const double second = apsi.squaredNorm();
    return std::sqrt(std::max(0.0, second - mean * mean));
}

inline Eigen::VectorXd hermitian_eigenvalues(const Operator &h) {
    Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double trace_norm_hermitian(const Operator &h) { return hermitian_eigenvalues(h).cwiseAbs().sum(); }

inline double trace_distance(const Operator &s1, const Operator &s2) {
    if (s1.rows() != s2.rows() || !is_square(s1) || !is_square(s2)) {
        throw dimension_error("trace_distance: dimension mismatch");
    }
    return 0.5 * trace_norm_hermitian(s1 - s2);
}

inline double trace_distance(const DensityOperator &s1, const DensityOperator &s2) {
    return trace_distance(s1.matrix(), s2.matrix());
}

}  // namespace waygate
