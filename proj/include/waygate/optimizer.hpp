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
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "waygate/bounds.hpp"

namespace waygate {

// ---------------------------------------------------------------------------
// Search spaces
// ---------------------------------------------------------------------------

struct AncillaSpec {
    enum class Kind { qubits, fock };
    Kind kind = Kind::qubits;
    std::size_t qubits = 0;
    std::size_t trunc = 0;
    cplx alpha = 0.0;

    static AncillaSpec qubit_register(std::size_t k) { return {Kind::qubits, k, 0, 0.0}; }
    static AncillaSpec coherent(std::size_t trunc, cplx alpha) { return {Kind::fock, 0, trunc, alpha}; }

    std::size_t dim() const { return kind == Kind::qubits ? std::size_t{1} << qubits : trunc; }
};

enum class Objective { min_basis_fidelity, worst_case_fidelity };

struct OptimizationProblem {
    AncillaSpec ancilla;
    Objective objective = Objective::min_basis_fidelity;
    bool optimize_ancilla_state = false;

    void validate() const {
        if (ancilla.kind == AncillaSpec::Kind::fock && ancilla.trunc < 2) {
            throw precondition_error("OptimizationProblem: Fock truncation must be >= 2");
        }
        if (ancilla.kind == AncillaSpec::Kind::qubits && ancilla.qubits > 8) {
            throw precondition_error("OptimizationProblem: at most 8 ancilla qubits");
        }
    }
};

/// Sector-tied basis for the Fock ancilla. In the eigenbasis of X1 + X2
/// (|++>, triplet-0, singlet, |-->) the charge X1 + X2 + 2N has eigenspaces
///   {|++>|m-1>, |t0>|m>, |s0>|m>, |-->|m+1>}  with eigenvalue 2m,
/// truncated at the Fock edges. Each basis element applies the same 4x4
/// hermitian pattern in every sector, weighted by 1 or sqrt(m+1).
inline CommutantBasis fock_sector_basis(std::size_t trunc) {
    if (trunc < 2) throw precondition_error("fock_sector_basis: truncation must be >= 2");
    const auto t = static_cast<long>(trunc);
    const double r = 1.0 / std::sqrt(2.0);
    Ket p(2), m(2);
    p << r, r;
    m << r, -r;
    const std::array<Ket, 4> ct{tensor(p, p), Ket(r * (tensor(p, m) + tensor(m, p))), Ket(r * (tensor(p, m) - tensor(m, p))),
                                tensor(m, m)};
    const std::array<long, 4> shift{-1, 0, 0, 1};  // Fock level = sector index + shift

    const Operator charge = total_charge(fock_charge(trunc));
    const auto dim = static_cast<Eigen::Index>(4 * trunc);
    Operator frame(dim, dim);
    std::vector<EigenBlock> blocks;
    std::vector<std::vector<int>> slots;  // which of the 4 members each block holds
    std::vector<long> sector;
    Eigen::Index col = 0;
    for (long s = -1; s <= t; ++s) {
        std::vector<int> present;
        for (int k = 0; k < 4; ++k) {
            const long level = s + shift[static_cast<std::size_t>(k)];
            if (level < 0 || level >= t) continue;
            frame.col(col + static_cast<Eigen::Index>(present.size())) = tensor(ct[static_cast<std::size_t>(k)], basis_ket(trunc, static_cast<std::size_t>(level)));
            present.push_back(k);
        }
        if (present.empty()) continue;
        blocks.push_back({col, static_cast<Eigen::Index>(present.size()), 2.0 * double(s)});
        col += static_cast<Eigen::Index>(present.size());
        slots.push_back(std::move(present));
        sector.push_back(s);
    }

    std::vector<CommutantElement> raw;
    const auto patterns = hermitian_unit_basis(4);
    for (int profile = 0; profile < 2; ++profile) {
        for (const auto &pat : patterns) {
            CommutantElement e;
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                const auto &sl = slots[b];
                const double w = profile == 0 ? 1.0 : std::sqrt(double(std::max(sector[b], 0L) + 1));
                Operator h(static_cast<Eigen::Index>(sl.size()), static_cast<Eigen::Index>(sl.size()));
                for (std::size_t i = 0; i < sl.size(); ++i) {
                    for (std::size_t j = 0; j < sl.size(); ++j) h(Eigen::Index(i), Eigen::Index(j)) = w * pat(sl[i], sl[j]);
                }
                if (max_abs(h) > 0.0) e.parts.push_back({b, std::move(h)});
            }
            raw.push_back(std::move(e));
        }
    }
    return CommutantBasis(charge, std::move(frame), std::move(blocks), orthonormalize(std::move(raw)));
}

/// Everything fixed about a problem: the charge, the commutant coordinates
/// and the default ancilla state.
struct SearchSpace {
    ConservedQuantity charge;
    CommutantBasis basis;
    Ket default_xi;
    double coefficient_scale = 1.0;  // typical size of a commutant coefficient
};

inline SearchSpace make_search_space(const OptimizationProblem &problem) {
    problem.validate();
    if (problem.ancilla.kind == AncillaSpec::Kind::qubits) {
        const std::size_t k = problem.ancilla.qubits;
        auto cq = x_charge(k);
        auto basis = commutant_basis(total_charge(cq));
        Ket xi = basis_ket(std::size_t{1} << k, 0);
        return {std::move(cq), std::move(basis), std::move(xi), 1.0};
    }
    const std::size_t trunc = problem.ancilla.trunc;
    auto cq = fock_charge(trunc);
    auto basis = fock_sector_basis(trunc);
    const auto cs = coherent_state(problem.ancilla.alpha, trunc);
    const double scale = std::sqrt(double(basis.blocks().size()));
    return {std::move(cq), std::move(basis), cs.state, scale};
}

// ---------------------------------------------------------------------------
// Optimization
// ---------------------------------------------------------------------------

struct OptimizerConfig {
    std::size_t restarts = 8;
    std::size_t max_iterations = 4000;  // simplex iterations per round
    std::size_t rounds = 3;             // simplex restarts from the incumbent
    std::uint64_t seed = 0;
    unsigned threads = 1;
    SearchConfig fidelity;              // final gate-fidelity evaluation
    std::size_t inner_starts = 10;      // worst-case objective: inner multistart count
    std::size_t inner_iterations = 300;

    void validate() const {
        if (restarts < 4) throw precondition_error("OptimizerConfig: at least 4 restarts required");
        if (max_iterations < 1 || rounds < 1) throw precondition_error("OptimizerConfig: empty iteration budget");
        fidelity.validate();
    }
};

struct OptimizationResult {
    std::vector<double> theta_star;
    Ket xi_star;
    double objective = 0.0;      // best objective value reached by the search
    double best_fidelity = 0.0;  // gate fidelity at the optimum
    double infidelity = 1.0;     // 1 - F^2
    BoundReport bound_report;
    BoundReport fundamental;
    std::vector<double> trace;  // best objective per iteration, nondecreasing
    bool converged = false;
    std::uint64_t seed = 0;
    std::size_t n_params = 0;
    std::size_t restart = 0;
    double conservation_defect = 0.0;
    std::size_t evaluations = 0;
};

/// Ancilla state from 2 dA - 1 reals (real first amplitude), normalized.
inline Ket ancilla_from_params(std::span<const double> x, std::size_t da) {
    Ket xi(static_cast<Eigen::Index>(da));
    xi(0) = x[0];
    for (std::size_t k = 1; k < da; ++k) xi(Eigen::Index(k)) = cplx(x[2 * k - 1], x[2 * k]);
    const double n = xi.norm();
    if (n < 1e-300) return basis_ket(da, 0);
    return xi / n;
}

inline std::vector<double> ancilla_params(const Ket &xi) {
    std::vector<double> x(static_cast<std::size_t>(2 * xi.size() - 1));
    x[0] = std::abs(xi(0));
    const cplx phase = std::abs(xi(0)) > 0.0 ? std::conj(xi(0)) / std::abs(xi(0)) : cplx(1.0);
    for (Eigen::Index k = 1; k < xi.size(); ++k) {
        x[static_cast<std::size_t>(2 * k - 1)] = (phase * xi(k)).real();
        x[static_cast<std::size_t>(2 * k)] = (phase * xi(k)).imag();
    }
    return x;
}

namespace detail {

struct Candidate {
    std::span<const double> theta;
    Ket xi;
};

inline Candidate split(const SearchSpace &space, const OptimizationProblem &problem, const std::vector<double> &x) {
    const std::size_t nt = space.basis.size();
    Candidate c{std::span<const double>(x.data(), nt), space.default_xi};
    if (problem.optimize_ancilla_state) {
        c.xi = ancilla_from_params(std::span<const double>(x.data() + nt, x.size() - nt), space.charge.ancilla_dim());
    }
    return c;
}

/// Columns U(|j> (x) |xi>), j = 0..3.
inline Operator images(const SearchSpace &space, const Candidate &c) {
    const auto da = c.xi.size();
    Operator in = Operator::Zero(4 * da, 4);
    for (int j = 0; j < 4; ++j) in.col(j).segment(j * da, da) = c.xi;
    return apply_invariant_unitary(c.theta, space.basis, in);
}

}  // namespace detail

/// Objective value (a fidelity, larger is better) at one search point.
inline double evaluate_objective(const SearchSpace &space, const OptimizationProblem &problem, const OptimizerConfig &cfg,
                                 const std::vector<double> &x) {
    const auto c = detail::split(space, problem, x);
    const FidelityEvaluator eval(detail::images(space, c), static_cast<std::size_t>(c.xi.size()), GateTarget::cnot());
    double worst = 1.0;
    for (std::size_t k = 0; k < 4; ++k) worst = std::min(worst, eval.fidelity_sq(basis_ket(4, k)));
    if (problem.objective == Objective::worst_case_fidelity) {
        SimplexOptions opt;
        opt.max_iterations = cfg.inner_iterations;
        opt.diameter_tolerance = 1e-7;
        opt.initial_step = 0.2;
        auto f = [&](const std::vector<double> &p) { return eval.fidelity_sq(state_from_params(p)); };
        for (const auto &s : fidelity_start_states(cfg.inner_starts, 0x5eed)) {
            worst = std::min(worst, nelder_mead(f, params_from_state(s), opt).value);
        }
    }
    return std::sqrt(std::clamp(worst, 0.0, 1.0));
}

inline Implementation implementation_at(const SearchSpace &space, const OptimizationProblem &problem, const std::vector<double> &x) {
    const auto c = detail::split(space, problem, x);
    return Implementation(invariant_unitary(c.theta, space.basis), c.xi);
}

inline BoundReport size_bound_report(const OptimizationProblem &problem, const Implementation &impl, double infidelity,
                                     double cb_lower, double dl3) {
    if (problem.ancilla.kind == AncillaSpec::Kind::qubits) {
        const int n = static_cast<int>(problem.ancilla.qubits) + 2;
        return make_report(BoundKind::qubit_size, qubit_size_bound(n), infidelity, cb_lower, dl3, double(n));
    }
    const double mean = expectation(number_operator(impl.ancilla_dim()), impl.ancilla_state()).real();
    auto r = make_report(BoundKind::bosonic, bosonic_bound(mean), infidelity, cb_lower, dl3, bosonic_size(mean));
    r.satisfied = r.lower_bound <= infidelity + 1e-6;
    return r;
}

/// Runs one restart: random start, then `rounds` simplex descents, each
/// restarted from the incumbent with a smaller initial step.
inline OptimizationResult optimize_single(const SearchSpace &space, const OptimizationProblem &problem, const OptimizerConfig &cfg,
                                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(space.basis.size());
    for (auto &v : x) v = gauss(rng) * space.coefficient_scale;
    if (problem.optimize_ancilla_state) {
        auto extra = ancilla_params(space.default_xi);
        x.insert(x.end(), extra.begin(), extra.end());
    }

    OptimizationResult res;
    res.seed = seed;
    res.n_params = x.size();
    double step = 0.5 * space.coefficient_scale;
    auto neg = [&](const std::vector<double> &p) { return -evaluate_objective(space, problem, cfg, p); };
    double incumbent = -neg(x);
    res.trace.push_back(incumbent);
    for (std::size_t round = 0; round < cfg.rounds; ++round) {
        SimplexOptions opt;
        opt.max_iterations = cfg.max_iterations;
        opt.diameter_tolerance = 1e-9;
        opt.initial_step = step;
        opt.record_trace = true;
        auto run = nelder_mead(neg, x, opt);
        res.evaluations += run.evaluations;
        for (double v : run.trace) {
            incumbent = std::max(incumbent, -v);
            res.trace.push_back(incumbent);
        }
        x = run.x;
        incumbent = std::max(incumbent, -run.value);
        res.converged = run.converged;
        step *= 0.25;
    }
    res.trace.push_back(incumbent);

    const auto impl = implementation_at(space, problem, x);
    const auto c = detail::split(space, problem, x);
    res.theta_star.assign(c.theta.begin(), c.theta.end());
    res.xi_star = c.xi;
    res.objective = incumbent;
    res.conservation_defect = conservation_defect(impl.unitary(), total_charge(space.charge));
    SearchConfig fcfg = cfg.fidelity;
    fcfg.seed = seed;
    const auto gf = gate_fidelity(impl, GateTarget::cnot(), fcfg);
    res.best_fidelity = gf.value;
    res.infidelity = std::clamp(1.0 - gf.value * gf.value, 0.0, 1.0);
    res.converged = res.converged && gf.converged;

    const double dl3 = delta_l3_prime(impl, space.charge, y_spin_state());
    const Operator actual = induced_operation(impl).choi() / 4.0;
    const Operator ideal = unitary_operation(cnot_matrix()).choi() / 4.0;
    const double cb = std::max(res.infidelity, trace_distance(actual, ideal));
    res.fundamental = make_report(BoundKind::fundamental, 1.0 / (4.0 * (2.0 + dl3) * (2.0 + dl3)), res.infidelity, cb, dl3, 2.0 + dl3);
    res.bound_report = size_bound_report(problem, impl, res.infidelity, cb, dl3);
    return res;
}

/// Multistart search over the conservation-respecting unitaries. Restart i
/// uses seed cfg.seed + i; the reported optimum is the restart with the
/// lowest measured infidelity, ties going to the lowest index.
inline OptimizationResult optimize_implementation(const OptimizationProblem &problem, const OptimizerConfig &cfg) {
    cfg.validate();
    const auto space = make_search_space(problem);
    std::vector<OptimizationResult> runs(cfg.restarts);
    parallel_for_index(cfg.restarts, cfg.threads, [&](std::size_t i) {
        runs[i] = optimize_single(space, problem, cfg, cfg.seed + i);
        runs[i].restart = i;
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < runs.size(); ++i) {
        if (runs[i].infidelity < runs[best].infidelity) best = i;
    }
    return runs[best];
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepSpec {
    std::vector<int> sizes;  // total qubit counts n >= 2
    std::size_t restarts = 8;
    std::uint64_t master_seed = 0;

    void validate() const {
        if (sizes.empty()) throw precondition_error("SweepSpec: sizes must be nonempty");
        for (int n : sizes) {
            if (n < 2) throw precondition_error("SweepSpec: sizes must be >= 2");
        }
    }
};

struct SweepRow {
    int size = 0;
    std::size_t n_params = 0;
    double best_infidelity = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    bool converged = false;
    std::uint64_t seed = 0;
};

/// Row seed for size n: master_seed + 1000 n, restarts add their index.
inline std::vector<SweepRow> sweep_sizes(const SweepSpec &spec, OptimizerConfig cfg,
                                         Objective objective = Objective::min_basis_fidelity) {
    spec.validate();
    std::vector<SweepRow> rows;
    for (int n : spec.sizes) {
        OptimizationProblem problem;
        problem.ancilla = AncillaSpec::qubit_register(static_cast<std::size_t>(n - 2));
        problem.objective = objective;
        cfg.restarts = spec.restarts;
        cfg.seed = spec.master_seed + 1000u * static_cast<std::uint64_t>(n);
        const auto res = optimize_implementation(problem, cfg);
        SweepRow row;
        row.size = n;
        row.n_params = res.n_params;
        row.best_infidelity = res.infidelity;
        row.bound = qubit_size_bound(n);
        row.ratio = res.infidelity / row.bound;
        row.converged = res.converged;
        row.seed = cfg.seed;
        rows.push_back(row);
    }
    return rows;
}

struct BosonicRow {
    double mean_photons = 0.0;
    std::size_t trunc = 0;
    double best_infidelity = 0.0;
    double bound = 0.0;
    double delta_l3_prime = 0.0;
    double delta_l3_cap = 0.0;
    bool converged = false;
    bool truncation_warning = false;
    std::uint64_t seed = 0;
};

inline std::vector<BosonicRow> bosonic_sweep(const std::vector<double> &mean_photons, OptimizerConfig cfg, std::uint64_t master_seed,
                                             Objective objective = Objective::min_basis_fidelity,
                                             std::optional<std::size_t> trunc_override = std::nullopt) {
    if (mean_photons.empty()) throw precondition_error("bosonic_sweep: no mean photon numbers given");
    std::vector<BosonicRow> rows;
    for (std::size_t i = 0; i < mean_photons.size(); ++i) {
        const double mean = mean_photons[i];
        if (!(mean > 0.0)) throw precondition_error("bosonic_sweep: mean photon number must be positive");
        const cplx alpha = std::sqrt(mean);
        OptimizationProblem problem;
        problem.ancilla = AncillaSpec::coherent(trunc_override.value_or(coherent_truncation(alpha)), alpha);
        problem.objective = objective;
        cfg.seed = master_seed + 1000u * i;
        const auto res = optimize_implementation(problem, cfg);
        const Implementation impl = implementation_at(make_search_space(problem), problem, [&] {
            auto x = res.theta_star;
            if (problem.optimize_ancilla_state) {
                auto extra = ancilla_params(res.xi_star);
                x.insert(x.end(), extra.begin(), extra.end());
            }
            return x;
        }());
        const auto dl3 = bosonic_delta_l3(impl);
        BosonicRow row;
        row.mean_photons = mean;
        row.trunc = problem.ancilla.trunc;
        row.best_infidelity = res.infidelity;
        row.bound = bosonic_bound(mean);
        row.delta_l3_prime = dl3.measured;
        row.delta_l3_cap = dl3.cap;
        row.converged = res.converged;
        row.truncation_warning = coherent_state(alpha, problem.ancilla.trunc).truncation_warning || dl3.truncation_warning;
        row.seed = cfg.seed;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace waygate
