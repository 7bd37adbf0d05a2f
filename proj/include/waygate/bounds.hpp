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
#include <string_view>

#include "waygate/channel.hpp"
#include "waygate/symmetry.hpp"

namespace waygate {

/// (|0> + |1>)/sqrt2.
inline Ket plus_state() {
    Ket v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return v;
}

/// (|0> + i|1>)/sqrt2, the +1 eigenstate of Y. This is the input on C at
/// which |<[Z1, X1]>| = 2|<Y1>| reaches its maximum of 2.
inline Ket y_spin_state() {
    Ket v(2);
    v << 1.0 / std::sqrt(2.0), cplx(0.0, 1.0 / std::sqrt(2.0));
    return v;
}

inline Operator z_control(std::size_t ancilla_dim) {
    const auto da = static_cast<Eigen::Index>(ancilla_dim);
    return tensor_all({pauli(Pauli::Z), Operator::Identity(2, 2), Operator::Identity(da, da)});
}

inline Operator z_target(std::size_t ancilla_dim) {
    const auto da = static_cast<Eigen::Index>(ancilla_dim);
    return tensor_all({Operator::Identity(2, 2), pauli(Pauli::Z), Operator::Identity(da, da)});
}

/// |psi> (x) |0> (x) |xi>, the state all deviation statistics are taken in.
inline Ket deviation_input(const Implementation &impl, const Ket &psi) {
    if (psi.size() != 2 || !is_normalized(psi, 1e-10)) throw precondition_error("deviation input must be a normalized state of C");
    return product_state({psi, basis_ket(2, 0), impl.ancilla_state()});
}

/// A' = U^dagger A U.
inline Operator heisenberg(const Implementation &impl, const Operator &a) {
    return impl.unitary().adjoint() * a * impl.unitary();
}

/// D_ij = Z_i' - Z_j for i, j in {1, 2}.
struct DeviationOperators {
    std::array<Operator, 4> d;

    const Operator &operator()(int i, int j) const { return d.at(static_cast<std::size_t>((i - 1) * 2 + (j - 1))); }
};

inline DeviationOperators deviation_operators(const Implementation &impl) {
    const auto da = impl.ancilla_dim();
    const std::array<Operator, 2> z{z_control(da), z_target(da)};
    const std::array<Operator, 2> zp{heisenberg(impl, z[0]), heisenberg(impl, z[1])};
    DeviationOperators out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) out.d[static_cast<std::size_t>(i * 2 + j)] = zp[i] - z[j];
    }
    return out;
}

/// delta_ij(psi) = <D_ij^2>^{1/2} in |psi, 0, xi>.
inline double rms_deviation(const Implementation &impl, const Ket &psi, int i, int j) {
    if (i < 1 || i > 2 || j < 1 || j > 2) throw precondition_error("rms_deviation: indices must be 1 or 2");
    const Ket in = deviation_input(impl, psi);
    const auto da = impl.ancilla_dim();
    const Operator zi = i == 1 ? z_control(da) : z_target(da);
    const Operator zj = j == 1 ? z_control(da) : z_target(da);
    // D|in> = U^dagger Z_i U |in> - Z_j |in>
    const Ket dv = impl.unitary().adjoint() * (zi * (impl.unitary() * in)) - zj * in;
    return dv.norm();
}

struct DeviationAnalysis {
    DeviationOperators ops;
    std::array<double, 4> delta{};  // delta_11, delta_12, delta_21, delta_22
    Ket input_psi;

    double rms(int i, int j) const { return delta.at(static_cast<std::size_t>((i - 1) * 2 + (j - 1))); }
};

inline DeviationAnalysis analyze_deviation(const Implementation &impl, const Ket &psi) {
    DeviationAnalysis out;
    out.ops = deviation_operators(impl);
    out.input_psi = psi;
    for (int i = 1; i <= 2; ++i) {
        for (int j = 1; j <= 2; ++j) out.delta[static_cast<std::size_t>((i - 1) * 2 + (j - 1))] = rms_deviation(impl, psi, i, j);
    }
    return out;
}

/// Std-dev of L3' = U^dagger L3 U in |psi, 0, xi>.
inline double delta_l3_prime(const Implementation &impl, const ConservedQuantity &cq, const Ket &psi) {
    if (cq.ancilla_dim() != impl.ancilla_dim()) throw dimension_error("charge and implementation ancillas differ");
    const Ket evolved = impl.unitary() * deviation_input(impl, psi);
    return std_dev(cq.embedded_ancilla(), evolved);
}

// ---------------------------------------------------------------------------
// Noise commutation relations
// ---------------------------------------------------------------------------

struct NoiseResiduals {
    double r1 = 0.0;  // || [Z1,L1] - [L1',D21] - [L2',D11] - [L3',D11] ||
    double r2 = 0.0;  // || [Z1,L1] - [L1',D21] - [L2',D11] - [L3',D21] ||
    double defect = 0.0;
    bool conservation_violated = false;  // identities need not hold when set
};

/// Residuals of the two noise commutation relations (max-abs norm). They are
/// operator identities, so no input state is involved.
inline NoiseResiduals noise_commutation_residuals(const Implementation &impl, const ConservedQuantity &cq) {
    if (cq.ancilla_dim() != impl.ancilla_dim()) throw dimension_error("charge and implementation ancillas differ");
    const auto dev = deviation_operators(impl);
    const Operator z1 = z_control(impl.ancilla_dim());
    const Operator l1 = cq.embedded_control();
    const Operator l1p = heisenberg(impl, l1);
    const Operator l2p = heisenberg(impl, cq.embedded_target());
    const Operator l3p = heisenberg(impl, cq.embedded_ancilla());
    const Operator lhs = commutator(z1, l1);
    const Operator common = commutator(l1p, dev(2, 1)) + commutator(l2p, dev(1, 1));
    NoiseResiduals out;
    out.r1 = max_abs(lhs - common - commutator(l3p, dev(1, 1)));
    out.r2 = max_abs(lhs - common - commutator(l3p, dev(2, 1)));
    out.defect = conservation_defect(impl.unitary(), total_charge(cq));
    out.conservation_violated = out.defect > 1e-8;
    return out;
}

// ---------------------------------------------------------------------------
// Imperfection bound
// ---------------------------------------------------------------------------

struct ImperfectionBound {
    double lhs = 0.0;  // |<[Z1,L1]>|^2 / (2 (2||L1|| + dL3')^2)
    double rhs = 0.0;  // delta_11^2 + delta_21^2
    double delta_l3_prime = 0.0;
    bool holds = false;
};

inline ImperfectionBound imperfection_lower_bound(const Implementation &impl, const ConservedQuantity &cq, const Ket &psi) {
    if (conservation_defect(impl.unitary(), total_charge(cq)) > 1e-8) {
        throw precondition_error("imperfection_lower_bound: U does not conserve the charge");
    }
    const Ket in = deviation_input(impl, psi);
    const Operator z1 = z_control(impl.ancilla_dim());
    const double comm = std::abs(expectation(commutator(z1, cq.embedded_control()), in));
    ImperfectionBound out;
    out.delta_l3_prime = delta_l3_prime(impl, cq, psi);
    const double denom = 2.0 * operator_norm(cq.control()) + out.delta_l3_prime;
    out.lhs = denom > 0.0 ? comm * comm / (2.0 * denom * denom) : 0.0;
    const double d11 = rms_deviation(impl, psi, 1, 1);
    const double d21 = rms_deviation(impl, psi, 2, 1);
    out.rhs = d11 * d11 + d21 * d21;
    out.holds = out.lhs <= out.rhs + tol::inequality;
    return out;
}

struct DeltaSquared {
    double d11sq = 0.0;
    double d21sq = 0.0;
};

/// delta_11^2 and delta_21^2 at an equal-weight input on C, read off the
/// Kraus vector norms.
inline DeltaSquared delta_squared_closed_form(const KrausVectorTable &t) {
    DeltaSquared out;
    out.d11sq = 2.0 * (t.norm_sq(1, 0, 0, 0) + t.norm_sq(1, 0, 0, 1) + t.norm_sq(0, 0, 1, 0) + t.norm_sq(0, 0, 1, 1));
    out.d21sq = 2.0 * (t.norm_sq(1, 0, 0, 0) + t.norm_sq(0, 0, 0, 1) + t.norm_sq(1, 0, 1, 0) + t.norm_sq(0, 0, 1, 1));
    return out;
}

/// |<[A,B]>| <= 2 dA dB; returns the slack 2 dA dB - |<[A,B]>|.
inline double robertson_slack(const Operator &a, const Operator &b, const Ket &psi) {
    return 2.0 * std_dev(a, psi) * std_dev(b, psi) - std::abs(expectation(commutator(a, b), psi));
}

// ---------------------------------------------------------------------------
// Closed-form bounds
// ---------------------------------------------------------------------------

enum class BoundKind { fundamental, qubit_size, bosonic, chain };

inline std::string_view to_string(BoundKind k) {
    switch (k) {
    case BoundKind::fundamental: return "fundamental";
    case BoundKind::qubit_size: return "qubit_size";
    case BoundKind::bosonic: return "bosonic";
    case BoundKind::chain: return "chain";
    }
    return "unknown";
}

struct BoundReport {
    BoundKind kind = BoundKind::fundamental;
    double lower_bound = 0.0;
    double measured_infidelity = 0.0;  // 1 - F^2
    double measured_cb_lower = 0.0;
    double delta_l3_prime = 0.0;
    double size = 2.0;
    bool satisfied = false;
    double margin = 0.0;  // measured_infidelity - lower_bound
};

/// 1/(4 n^2): CNOT error floor for n qubits in total.
inline double qubit_size_bound(int n) {
    if (n < 2) throw precondition_error("qubit_size_bound: n must be >= 2");
    return 1.0 / (4.0 * double(n) * double(n));
}

/// 1/(16 <N>) for a coherent ancilla with mean photon number <N>.
inline double bosonic_bound(double mean_photons) {
    if (!(mean_photons > 0.0)) throw precondition_error("bosonic_bound: mean photon number must be positive");
    return 1.0 / (16.0 * mean_photons);
}

inline double bosonic_size(double mean_photons) {
    if (!(mean_photons > 0.0)) throw precondition_error("bosonic_size: mean photon number must be positive");
    return 2.0 * std::sqrt(mean_photons);
}

/// 1/(4 m^3 s^2): some gate of an m-gate CNOT decomposition at size s must
/// have at least this CB error.
inline double chain_bound(int m, double s) {
    if (m < 1) throw precondition_error("chain_bound: m must be >= 1");
    if (!(s >= 2.0)) throw precondition_error("chain_bound: s must be >= 2");
    return 1.0 / (4.0 * double(m) * double(m) * double(m) * s * s);
}

inline BoundReport make_report(BoundKind kind, double lower, double infidelity, double cb_lower, double dl3, double size) {
    BoundReport r;
    r.kind = kind;
    r.lower_bound = lower;
    r.measured_infidelity = infidelity;
    r.measured_cb_lower = cb_lower;
    r.delta_l3_prime = dl3;
    r.size = size;
    r.margin = infidelity - lower;
    r.satisfied = lower <= infidelity + tol::inequality;
    return r;
}

/// Checks 1/(4 (2 + dL3')^2) <= 1 - F^2 for a CNOT implementation under an
/// x-type charge with ||L1|| = ||L2|| = 1. dL3' is taken at the y spin state.
inline BoundReport fundamental_bound(const Implementation &impl, const ConservedQuantity &cq, const SearchConfig &cfg = {}) {
    if (std::abs(operator_norm(cq.control()) - 1.0) > tol::unitary || std::abs(operator_norm(cq.target()) - 1.0) > tol::unitary) {
        throw precondition_error("fundamental_bound: charges on C and T must have unit operator norm");
    }
    if (conservation_defect(impl.unitary(), total_charge(cq)) > 1e-8) {
        throw precondition_error("fundamental_bound: U does not conserve the charge");
    }
    const double dl3 = delta_l3_prime(impl, cq, y_spin_state());
    const auto cb = cb_lower_bounds(impl, GateTarget::cnot(), cfg);
    const double lower = 1.0 / (4.0 * (2.0 + dl3) * (2.0 + dl3));
    return make_report(BoundKind::fundamental, lower, cb.fidelity_bound, cb.best, dl3, 2.0 + dl3);
}

struct BosonicDeltaL3 {
    double measured = 0.0;    // dL3' = 2 dN'
    double cap = 0.0;         // 2 (<N> + 2)^{1/2}
    double mean_photons = 0.0;
    bool within_cap = false;
    bool truncation_warning = false;  // evolved state reaches the top Fock level
};

inline BosonicDeltaL3 bosonic_delta_l3(const Implementation &impl, const Ket &psi = y_spin_state(), double slack = 1e-6) {
    const std::size_t trunc = impl.ancilla_dim();
    const Operator n = number_operator(trunc);
    const ConservedQuantity cq(pauli(Pauli::X), pauli(Pauli::X), 2.0 * n);
    BosonicDeltaL3 out;
    out.mean_photons = expectation(n, impl.ancilla_state()).real();
    out.measured = delta_l3_prime(impl, cq, psi);
    out.cap = 2.0 * std::sqrt(out.mean_photons + 2.0);
    out.within_cap = out.measured <= out.cap + slack;
    const Ket evolved = impl.unitary() * deviation_input(impl, psi);
    double top = 0.0;
    const auto da = static_cast<Eigen::Index>(trunc);
    for (int ct = 0; ct < 4; ++ct) top += std::norm(evolved(ct * da + da - 1));
    out.truncation_warning = top > 1e-8;
    return out;
}

}  // namespace waygate
