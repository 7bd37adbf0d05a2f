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

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "waygate/operators.hpp"
#include "waygate/parallel.hpp"
#include "waygate/simplex.hpp"

namespace waygate {

/// A physical implementation (U, |xi>): a unitary on C+T+A together with the
/// ancilla state it is started in.
class Implementation {
  public:
    Implementation(Operator u, Ket xi) : u_(std::move(u)), xi_(std::move(xi)) {
        if (!is_normalized(xi_, tol::algebraic)) throw precondition_error("Implementation: ancilla state not normalized");
        if (u_.rows() != 4 * xi_.size() || !is_square(u_)) {
            throw dimension_error("Implementation: dim(U) must equal 4 * dim(A)");
        }
        if (!is_unitary(u_, tol::unitary)) throw precondition_error("Implementation: U is not unitary");
    }

    /// V (x) I_A for a two-qubit gate V.
    static Implementation ideal(const Operator &v, Ket xi) {
        const auto da = xi.size();
        return Implementation(tensor(v, Operator(Operator::Identity(da, da))), std::move(xi));
    }

    static Ket no_ancilla() { return Ket::Ones(1); }

    const Operator &unitary() const { return u_; }
    const Ket &ancilla_state() const { return xi_; }
    std::size_t ancilla_dim() const { return static_cast<std::size_t>(xi_.size()); }
    SystemLayout layout() const { return gate_layout(ancilla_dim()); }

    /// U (|psi> (x) |xi>) for a state of C+T.
    Ket evolve(const Ket &psi) const {
        if (psi.size() != 4) throw dimension_error("Implementation::evolve: input must live on C+T");
        return u_ * tensor(psi, xi_);
    }

  private:
    Operator u_;
    Ket xi_;
};

/// Ideal two-qubit gate the implementation is compared against.
struct GateTarget {
    std::string name;
    Operator v;

    static GateTarget cnot() { return {"CNOT", cnot_matrix()}; }
    static GateTarget swap() { return {"SWAP", swap_matrix()}; }
};

/// Trace-preserving operation on C+T in Choi form
/// Choi = sum_ij E(|i><j|) (x) |i><j|, output factor first.
class QuantumOperation {
  public:
    explicit QuantumOperation(Operator choi) : choi_(std::move(choi)) {
        if (choi_.rows() != 16 || !is_square(choi_)) throw dimension_error("QuantumOperation: Choi matrix must be 16x16");
    }

    const Operator &choi() const { return choi_; }

    /// E(rho)[o, o'] = sum_ij rho_ij Choi[(o,i), (o',j)].
    Operator apply(const Operator &rho) const {
        if (rho.rows() != 4 || !is_square(rho)) throw dimension_error("QuantumOperation::apply: input must be 4x4");
        Operator out = Operator::Zero(4, 4);
        for (int o = 0; o < 4; ++o) {
            for (int p = 0; p < 4; ++p) {
                cplx acc = 0.0;
                for (int i = 0; i < 4; ++i) {
                    for (int j = 0; j < 4; ++j) acc += rho(i, j) * choi_(4 * o + i, 4 * p + j);
                }
                out(o, p) = acc;
            }
        }
        return out;
    }

    /// max-abs deviation of Tr_out(Choi) from the identity.
    double trace_preservation_residual() const {
        Operator reduced = Operator::Zero(4, 4);
        for (int o = 0; o < 4; ++o) reduced += choi_.block(4 * o, 4 * o, 4, 4);
        return max_abs(reduced - Operator::Identity(4, 4));
    }

    double min_choi_eigenvalue() const { return hermitian_eigenvalues(0.5 * (choi_ + choi_.adjoint())).minCoeff(); }

    bool is_cptp(double tolerance = tol::channel) const {
        return trace_preservation_residual() <= tolerance && min_choi_eigenvalue() >= -tolerance;
    }

  private:
    Operator choi_;
};

inline QuantumOperation unitary_operation(const Operator &v) {
    Ket vec = Ket::Zero(16);
    for (int i = 0; i < 4; ++i) vec += tensor(Ket(v.col(i)), basis_ket(4, i));
    return QuantumOperation(projector(vec));
}

/// rho -> Tr_A[U (rho (x) |xi><xi|) U^dagger] in Choi form, built one matrix
/// unit |i><j| at a time.
inline QuantumOperation induced_operation(const Implementation &impl) {
    const auto layout = impl.layout();
    std::array<Ket, 4> images;
    for (int i = 0; i < 4; ++i) images[i] = impl.evolve(basis_ket(4, i));
    Operator choi = Operator::Zero(16, 16);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            // U (|i><j| (x) |xi><xi|) U^dagger
            const Operator full = images[i] * images[j].adjoint();
            const Operator out = layout.contains("A") ? partial_trace(full, layout, {"C", "T"}) : full;
            for (int o = 0; o < 4; ++o) {
                for (int p = 0; p < 4; ++p) choi(4 * o + i, 4 * p + j) = out(o, p);
            }
        }
    }
    return QuantumOperation(std::move(choi));
}

/// Operators K_k = (I (x) <k|) U (I (x) |xi>) on C+T, one per ancilla basis state.
inline std::vector<Operator> kraus_operators(const Implementation &impl) {
    const auto da = static_cast<Eigen::Index>(impl.ancilla_dim());
    Operator cols(4 * da, 4);
    for (int j = 0; j < 4; ++j) cols.col(j) = impl.evolve(basis_ket(4, j));
    std::vector<Operator> ks(static_cast<std::size_t>(da), Operator::Zero(4, 4));
    for (Eigen::Index k = 0; k < da; ++k) {
        for (int o = 0; o < 4; ++o) ks[static_cast<std::size_t>(k)].row(o) = cols.row(o * da + k);
    }
    return ks;
}

/// Ancilla vectors |E^{ab}_{cd}> with U|a,b>|xi> = sum_cd |c,d>|E^{ab}_{cd}>.
class KrausVectorTable {
  public:
    explicit KrausVectorTable(std::array<Ket, 16> entries) : entries_(std::move(entries)) {}

    const Ket &at(int a, int b, int c, int d) const { return entries_[index(a, b, c, d)]; }
    double norm_sq(int a, int b, int c, int d) const { return at(a, b, c, d).squaredNorm(); }

    /// E(|a,b><a,b|) = sum_{ijkl} |i,j> <E^{ab}_{kl}|E^{ab}_{ij}> <k,l|.
    Operator basis_output(int a, int b) const {
        Operator out(4, 4);
        for (int ij = 0; ij < 4; ++ij) {
            for (int kl = 0; kl < 4; ++kl) {
                out(ij, kl) = at(a, b, kl / 2, kl % 2).dot(at(a, b, ij / 2, ij % 2));
            }
        }
        return out;
    }

  private:
    static std::size_t index(int a, int b, int c, int d) {
        return static_cast<std::size_t>(((a * 2 + b) * 2 + c) * 2 + d);
    }
    std::array<Ket, 16> entries_;
};

inline KrausVectorTable kraus_vectors(const Implementation &impl) {
    const auto da = static_cast<Eigen::Index>(impl.ancilla_dim());
    std::array<Ket, 16> entries;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const Ket out = impl.evolve(basis_ket(4, static_cast<std::size_t>(2 * a + b)));
            for (int cd = 0; cd < 4; ++cd) {
                entries[static_cast<std::size_t>((a * 2 + b) * 4 + cd)] = out.segment(cd * da, da);
            }
        }
    }
    return KrausVectorTable(std::move(entries));
}

/// F(a,b) = || E^{a,b}_{a, b xor a} ||, the CNOT basis-state fidelity.
inline double basis_fidelity(const KrausVectorTable &table, int a, int b) {
    return table.at(a, b, a, b ^ a).norm();
}

inline double min_basis_fidelity(const KrausVectorTable &table) {
    double f = 1.0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) f = std::min(f, basis_fidelity(table, a, b));
    }
    return f;
}

/// Squared pure-state fidelity F(psi)^2 = sum_k |<psi| V^dagger K_k |psi>|^2,
/// with the Kraus operators precomputed once per implementation.
class FidelityEvaluator {
  public:
    FidelityEvaluator(const Implementation &impl, const GateTarget &target)
        : FidelityEvaluator(image_columns(impl), impl.ancilla_dim(), target) {}

    /// From the columns U(|j> (x) |xi>), j = 0..3, stacked as a (4 dA) x 4 matrix.
    FidelityEvaluator(const Operator &images, std::size_t ancilla_dim, const GateTarget &target) {
        if (target.v.rows() != 4 || !is_unitary(target.v)) throw precondition_error("GateTarget: V must be a 4x4 unitary");
        const auto da = static_cast<Eigen::Index>(ancilla_dim);
        if (images.rows() != 4 * da || images.cols() != 4) throw dimension_error("FidelityEvaluator: bad image matrix");
        Operator k(4, 4);
        for (Eigen::Index anc = 0; anc < da; ++anc) {
            for (int o = 0; o < 4; ++o) k.row(o) = images.row(o * da + anc);
            Operator a = target.v.adjoint() * k;
            if (max_abs(a) > 0.0) terms_.push_back(std::move(a));
        }
    }

    static Operator image_columns(const Implementation &impl) {
        Operator cols(4 * static_cast<Eigen::Index>(impl.ancilla_dim()), 4);
        for (int j = 0; j < 4; ++j) cols.col(j) = impl.evolve(basis_ket(4, j));
        return cols;
    }

    double fidelity_sq(const Ket &psi) const {
        double acc = 0.0;
        for (const auto &a : terms_) acc += std::norm(psi.dot(a * psi));
        return acc;
    }

  private:
    std::vector<Operator> terms_;
};

inline double state_fidelity(const Implementation &impl, const GateTarget &target, const Ket &psi) {
    if (psi.size() != 4 || !is_normalized(psi, 1e-10)) throw precondition_error("state_fidelity: psi must be a normalized C+T state");
    return std::sqrt(std::min(1.0, FidelityEvaluator(impl, target).fidelity_sq(psi)));
}

// ---------------------------------------------------------------------------
// Gate fidelity: minimum of F(psi) over pure states
// ---------------------------------------------------------------------------

struct SearchConfig {
    std::size_t starts = 16;
    std::size_t max_iterations = 2000;
    double diameter_tolerance = 1e-9;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    void validate() const {
        if (starts < 8) throw precondition_error("SearchConfig: at least 8 starts required");
        if (max_iterations < 200) throw precondition_error("SearchConfig: at least 200 iterations required");
        if (!(diameter_tolerance > 0.0)) throw precondition_error("SearchConfig: diameter tolerance must be positive");
    }
};

/// Pure two-qubit state from 7 reals: a real first amplitude followed by
/// three complex amplitudes, normalized. The global phase is fixed by the
/// real first amplitude.
inline Ket state_from_params(const std::vector<double> &x) {
    Ket psi(4);
    psi(0) = x[0];
    for (int k = 1; k < 4; ++k) psi(k) = cplx(x[2 * k - 1], x[2 * k]);
    const double n = psi.norm();
    if (n < 1e-300) return basis_ket(4, 0);
    return psi / n;
}

inline std::vector<double> params_from_state(Ket psi) {
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
        if (std::abs(psi(k)) > 1e-14) {
            psi *= std::conj(psi(k)) / std::abs(psi(k));
            break;
        }
    }
    std::vector<double> x(7);
    x[0] = psi(0).real();
    for (int k = 1; k < 4; ++k) {
        x[2 * k - 1] = psi(k).real();
        x[2 * k] = psi(k).imag();
    }
    return x;
}

/// Starting states: the 4 computational basis states, 4 fixed superpositions,
/// then seeded random states up to `count`.
inline std::vector<Ket> fidelity_start_states(std::size_t count, std::uint64_t seed) {
    std::vector<Ket> out;
    for (std::size_t k = 0; k < 4; ++k) out.push_back(basis_ket(4, k));
    const double r = 1.0 / std::sqrt(2.0);
    Ket plus(2), minus(2), yplus(2), zero = basis_ket(2, 0);
    plus << r, r;
    minus << r, -r;
    yplus << r, cplx(0.0, r);
    out.push_back(tensor(plus, zero));
    out.push_back(tensor(plus, plus));
    out.push_back(tensor(minus, minus));
    out.push_back(tensor(yplus, zero));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (out.size() < count) {
        Ket v(4);
        for (int k = 0; k < 4; ++k) v(k) = cplx(gauss(rng), gauss(rng));
        out.push_back(v / v.norm());
    }
    out.resize(std::min(out.size(), count));
    return out;
}

struct GateFidelity {
    double value = 1.0;
    Ket argmin;
    bool converged = false;
};

/// Minimum over pure inputs of F(psi) by multistart simplex descent.
inline GateFidelity minimize_fidelity(const FidelityEvaluator &eval, const SearchConfig &cfg) {
    const auto starts = fidelity_start_states(cfg.starts, cfg.seed);
    std::vector<SimplexResult> runs(starts.size());
    SimplexOptions opt;
    opt.max_iterations = cfg.max_iterations;
    opt.diameter_tolerance = cfg.diameter_tolerance;
    opt.initial_step = 0.2;
    auto objective = [&](const std::vector<double> &x) { return eval.fidelity_sq(state_from_params(x)); };
    parallel_for_index(starts.size(), cfg.threads, [&](std::size_t i) {
        runs[i] = nelder_mead(objective, params_from_state(starts[i]), opt);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < runs.size(); ++i) {
        if (runs[i].value < runs[best].value) best = i;
    }
    GateFidelity out;
    out.value = std::sqrt(std::clamp(runs[best].value, 0.0, 1.0));
    out.argmin = state_from_params(runs[best].x);
    out.converged = runs[best].converged;
    return out;
}

inline GateFidelity gate_fidelity(const Implementation &impl, const GateTarget &target, const SearchConfig &cfg = {}) {
    cfg.validate();
    return minimize_fidelity(FidelityEvaluator(impl, target), cfg);
}

/// Certified lower bounds on the CB distance.
struct CbLowerBounds {
    double fidelity_bound = 0.0;    // 1 - F^2
    double choi_probe_bound = 0.0;  // trace distance on the maximally entangled probe
    double best = 0.0;
};

inline CbLowerBounds cb_lower_bounds(const Implementation &impl, const GateTarget &target, const SearchConfig &cfg = {}) {
    const double f = gate_fidelity(impl, target, cfg).value;
    CbLowerBounds out;
    out.fidelity_bound = std::clamp(1.0 - f * f, 0.0, 1.0);
    const Operator actual = induced_operation(impl).choi() / 4.0;
    const Operator ideal = unitary_operation(target.v).choi() / 4.0;
    out.choi_probe_bound = std::clamp(trace_distance(actual, ideal), 0.0, 1.0);
    out.best = std::max(out.fidelity_bound, out.choi_probe_bound);
    return out;
}

}  // namespace waygate
