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

#include <algorithm>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace waygate {

using cplx = std::complex<double>;

/// Dense complex square matrix. Every operator in the library (gates,
/// Paulis, charges, deviation operators, Choi matrices) is one of these.
using Operator = Eigen::MatrixXcd;

/// Dense complex column vector (kets, possibly unnormalized).
using Ket = Eigen::VectorXcd;

inline constexpr cplx I_UNIT{0.0, 1.0};

namespace tol {
inline constexpr double algebraic = 1e-12;
inline constexpr double unitary = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double positivity = 1e-10;
inline constexpr double channel = 1e-9;
inline constexpr double conservation = 1e-9;
inline constexpr double inequality = 1e-9;
inline constexpr double degeneracy = 1e-8;
}  // namespace tol

struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct label_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline double max_abs(const Operator &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline Operator dagger(const Operator &m) { return m.adjoint(); }

inline Operator commutator(const Operator &a, const Operator &b) {
    if (a.rows() != b.rows()) {
        throw dimension_error("commutator: dimension mismatch");
    }
    return a * b - b * a;
}

inline bool is_square(const Operator &m) { return m.rows() == m.cols(); }

inline bool is_finite(const Operator &m) { return m.allFinite(); }

inline bool is_hermitian(const Operator &m, double tolerance = tol::algebraic) {
    return is_square(m) && max_abs(m - m.adjoint()) <= tolerance;
}

inline bool is_unitary(const Operator &m, double tolerance = tol::unitary) {
    if (!is_square(m)) return false;
    Operator id = Operator::Identity(m.rows(), m.cols());
    return max_abs(m.adjoint() * m - id) <= tolerance;
}

inline bool is_normalized(const Ket &v, double tolerance = tol::algebraic) {
    return std::abs(v.norm() - 1.0) <= tolerance;
}

inline Ket basis_ket(std::size_t dim, std::size_t index) {
    Ket k = Ket::Zero(static_cast<Eigen::Index>(dim));
    k(static_cast<Eigen::Index>(index)) = 1.0;
    return k;
}

/// Ordered list of subsystems, most significant first. A basis index on the
/// composite space is the mixed-radix number formed by the local indices.
class SystemLayout {
  public:
    SystemLayout() = default;

    SystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels)
        : dims_(std::move(dims)), labels_(std::move(labels)) {
        if (dims_.size() != labels_.size()) {
            throw precondition_error("SystemLayout: dims and labels differ in length");
        }
        for (std::size_t d : dims_) {
            if (d < 2) throw precondition_error("SystemLayout: subsystem dimension must be >= 2");
        }
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            for (std::size_t j = i + 1; j < labels_.size(); ++j) {
                if (labels_[i] == labels_[j]) {
                    throw label_error("SystemLayout: duplicate label '" + labels_[i] + "'");
                }
            }
        }
    }

    const std::vector<std::size_t> &dims() const { return dims_; }
    const std::vector<std::string> &labels() const { return labels_; }
    std::size_t size() const { return dims_.size(); }

    std::size_t total_dim() const {
        std::size_t d = 1;
        for (std::size_t x : dims_) d *= x;
        return d;
    }

    bool contains(const std::string &label) const {
        return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
    }

    std::size_t index_of(const std::string &label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) throw label_error("unknown subsystem label '" + label + "'");
        return static_cast<std::size_t>(it - labels_.begin());
    }

    std::size_t dim_of(const std::string &label) const { return dims_[index_of(label)]; }

    /// Concatenation, used for tensor products.
    SystemLayout operator+(const SystemLayout &other) const {
        auto d = dims_;
        auto l = labels_;
        d.insert(d.end(), other.dims_.begin(), other.dims_.end());
        l.insert(l.end(), other.labels_.begin(), other.labels_.end());
        return SystemLayout(std::move(d), std::move(l));
    }

    bool operator==(const SystemLayout &) const = default;

  private:
    std::vector<std::size_t> dims_;
    std::vector<std::string> labels_;
};

/// Layout of control C, target T and ancilla A. An ancilla of dimension 1
/// means "no ancilla" and is left out of the layout.
inline SystemLayout gate_layout(std::size_t ancilla_dim) {
    if (ancilla_dim == 0) throw precondition_error("gate_layout: ancilla dimension must be >= 1");
    if (ancilla_dim == 1) return SystemLayout({2, 2}, {"C", "T"});
    return SystemLayout({2, 2, ancilla_dim}, {"C", "T", "A"});
}

}  // namespace waygate
