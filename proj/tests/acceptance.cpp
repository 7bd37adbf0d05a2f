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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "waygate/cli.hpp"

using namespace waygate;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) { return cli::format_number(v); }

const Operator X = pauli(Pauli::X);
const Operator Z = pauli(Pauli::Z);
const Operator I2 = Operator::Identity(2, 2);

// 1. SWAP from its generator, exactly conserving X1 + X2.
Outcome swap_construction() {
    const auto t0 = Clock::now();
    const Operator u = hermitian_exp(swap_generator(), -M_PI / 4.0);
    const double err = max_abs(u - swap_matrix());
    const double defect = max_abs(commutator(u, tensor(X, I2) + tensor(I2, X)));
    const double ms = seconds_since(t0) * 1e3;
    return {err <= 1e-10 && defect <= 1e-12 && ms < 1.0,
            "max|U-SWAP|=" + fmt(err) + " |[U,X1+X2]|=" + fmt(defect) + " t=" + fmt(ms) + "ms"};
}

// 2. No invariant two-qubit unitary gets below 1/16.
Outcome nogo_two_qubits() {
    const auto t0 = Clock::now();
    OptimizerConfig cfg;
    cfg.restarts = 64;
    cfg.max_iterations = 2000;
    cfg.rounds = 2;
    cfg.seed = 2;
    const OptimizationProblem p{AncillaSpec::qubit_register(0)};
    const auto space = make_search_space(p);
    double best = 1.0;
    bool all = true;
    for (std::size_t i = 0; i < cfg.restarts; ++i) {
        const auto r = optimize_single(space, p, cfg, cfg.seed + i);
        best = std::min(best, r.infidelity);
        all = all && r.infidelity >= 1.0 / 16.0 - 1e-9 && r.conservation_defect <= 1e-9;
    }
    const double s = seconds_since(t0);
    return {all && s < 10.0, "restarts=64 params=" + std::to_string(space.basis.size()) + " best 1-F^2=" + fmt(best) + " t=" + fmt(s) + "s"};
}

// 3. Size sweep n = 2, 3, 4 stays above 1/(4 n^2) and improves with n.
Outcome size_sweep() {
    const auto t0 = Clock::now();
    OptimizerConfig cfg;
    cfg.max_iterations = 3000;
    cfg.rounds = 3;
    const auto rows = sweep_sizes(SweepSpec{{2, 3, 4}, 8, 0}, cfg);
    bool ok = rows.size() == 3;
    std::string detail;
    for (const auto &r : rows) {
        ok = ok && r.best_infidelity >= r.bound - 1e-9;
        detail += "n=" + std::to_string(r.size) + ":" + fmt(r.best_infidelity) + ">=" + fmt(r.bound) + " ";
    }
    ok = ok && rows[2].best_infidelity < rows[0].best_infidelity;
    const double s = seconds_since(t0);
    return {ok && s < 300.0, detail + "t=" + fmt(s) + "s"};
}

// 4. Deviation operators of U_CN (x) I and vanishing delta_11, delta_21.
Outcome deviation_closed_forms() {
    std::mt19937_64 rng(4);
    const auto impl = Implementation::ideal(cnot_matrix(), basis_ket(2, 0));
    const auto d = deviation_operators(impl);
    const Operator z1 = tensor_all({Z, I2, I2}), z2 = tensor_all({I2, Z, I2}), i8 = Operator::Identity(8, 8);
    double err = max_abs(d(1, 1));
    err = std::max(err, max_abs(d(1, 2) - (z1 - z2)));
    err = std::max(err, max_abs(d(2, 1) - z1 * (z2 - i8)));
    err = std::max(err, max_abs(d(2, 2) - (z1 - i8) * z2));
    double rms = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Ket psi = random_state(2, rng);
        rms = std::max({rms, rms_deviation(impl, psi, 1, 1), rms_deviation(impl, psi, 2, 1)});
    }
    return {err <= 1e-12 && rms <= 1e-12, "max entry error=" + fmt(err) + " max delta_11,delta_21=" + fmt(rms)};
}

// 5. Noise commutation identities.
Outcome noise_identities() {
    std::mt19937_64 rng(5);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Eigen::Index da = 1 + i % 4;
        const Operator l1 = oracle::random_hermitian(2, rng);
        Operator l2 = oracle::random_hermitian(2, rng);
        l2 *= operator_norm(l1) / operator_norm(l2);
        const ConservedQuantity cq(l1, l2, oracle::random_hermitian(da, rng));
        const auto basis = commutant_basis(total_charge(cq));
        const Implementation impl(random_invariant_unitary(basis, rng), random_state(std::size_t(da), rng));
        const auto r = noise_commutation_residuals(impl, cq);
        worst = std::max({worst, r.r1, r.r2});
    }
    const auto cn = noise_commutation_residuals(Implementation::ideal(cnot_matrix(), basis_ket(2, 0)), x_charge(1));
    const double cn_min = std::min(cn.r1, cn.r2);
    return {worst <= 1e-8 && cn_min > 1e-3 && cn.conservation_violated,
            "invariant max residual=" + fmt(worst) + " U_CN min residual=" + fmt(cn_min)};
}

// Shared by criteria 6 and 7: 500 seeded invariant implementations.
struct SampleStats {
    std::size_t samples = 0;
    std::size_t chain_violations = 0;
    double worst_chain = -std::numeric_limits<double>::infinity();
    double worst_closed = 0.0;
};

SampleStats sample_suite() {
    SampleStats st;
    std::mt19937_64 rng(6);
    std::array<std::optional<CommutantBasis>, 4> bases;
    SearchConfig fcfg;
    for (std::size_t s = 0; s < 500; ++s) {
        const std::size_t k = s % 4;
        const auto cq = x_charge(k);
        if (!bases[k]) bases[k] = commutant_basis(total_charge(cq));
        const Implementation impl(random_invariant_unitary(*bases[k], rng), random_state(cq.ancilla_dim(), rng));
        fcfg.seed = s;
        const double f = gate_fidelity(impl, GateTarget::cnot(), fcfg).value;
        const auto imp = imperfection_lower_bound(impl, cq, y_spin_state());
        const double v = std::max(imp.lhs - imp.rhs, imp.rhs - 8.0 * (1.0 - f * f));
        st.worst_chain = std::max(st.worst_chain, v);
        st.chain_violations += v > 1e-8 ? 1 : 0;
        const auto cf = delta_squared_closed_form(kraus_vectors(impl));
        const double d11 = rms_deviation(impl, plus_state(), 1, 1), d21 = rms_deviation(impl, plus_state(), 2, 1);
        st.worst_closed = std::max({st.worst_closed, std::abs(cf.d11sq - d11 * d11), std::abs(cf.d21sq - d21 * d21)});
        ++st.samples;
    }
    return st;
}

// 8. Coherent ancilla, alpha = 2, trunc = 64.
Outcome bosonic_bound_check() {
    const auto t0 = Clock::now();
    const std::size_t trunc = 64;
    const auto cs = coherent_state(2.0, trunc);
    const Operator n = number_operator(trunc);
    const double mean = expectation(n, cs.state).real();
    const double var = std::pow(std_dev(n, cs.state), 2);
    bool ok = std::abs(var - mean) <= 1e-6;

    std::mt19937_64 rng(8);
    const auto basis = fock_sector_basis(trunc);
    const auto full = commutant_basis(total_charge(fock_charge(trunc)));
    double cap_margin = INFINITY;
    for (int i = 0; i < 10; ++i) {
        const auto &b = i % 2 ? basis : full;
        const auto r = bosonic_delta_l3(Implementation(random_invariant_unitary(b, rng), cs.state));
        cap_margin = std::min(cap_margin, r.cap - r.measured);
    }
    ok = ok && cap_margin >= -1e-6;

    OptimizerConfig cfg;
    cfg.max_iterations = 1500;
    cfg.rounds = 2;
    const OptimizationProblem p{AncillaSpec::coherent(trunc, 2.0)};
    const auto space = make_search_space(p);
    double best = 1.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto r = optimize_single(space, p, cfg, i);
        best = std::min(best, r.infidelity);
        ok = ok && r.infidelity >= 1.0 / 64.0 - 1e-6 && r.conservation_defect <= 1e-9;
    }
    const double s = seconds_since(t0);
    return {ok && s < 120.0, "(dN)^2-<N>=" + fmt(var - mean) + " min cap margin=" + fmt(cap_margin) + " best 1-F^2=" + fmt(best) +
                                 " bound=" + fmt(1.0 / 64.0) + " t=" + fmt(s) + "s"};
}

// 9. Closed-form values, exact and rendered to 17 significant digits.
Outcome closed_form_values() {
    struct Case {
        double got, want;
        const char *text;
    };
    const Case cases[] = {{qubit_size_bound(2), 0.0625, "0.0625"},
                          {qubit_size_bound(3), 1.0 / 36.0, "0.027777777777777776"},
                          {bosonic_bound(1.0), 0.0625, "0.0625"},
                          {chain_bound(3, 2.0), 1.0 / 432.0, "0.0023148148148148147"}};
    bool ok = true;
    std::string detail;
    for (const auto &c : cases) {
        ok = ok && c.got == c.want && cli::format_number(c.got) == c.text;
        detail += cli::format_number(c.got) + " ";
    }
    return {ok, detail};
}

// 10. Byte-identical sweep output across runs and thread counts.
Outcome determinism() {
    cli::CommonOptions a;
    a.seed = 7;
    cli::CommonOptions b = a;
    b.threads = 4;
    const auto r1 = cli::sweep(a, {2, 3}, 8);
    const auto r2 = cli::sweep(a, {2, 3}, 8);
    const auto r3 = cli::sweep(b, {2, 3}, 8);
    bool ok = true;
    for (auto f : {cli::Format::csv, cli::Format::json, cli::Format::text}) {
        ok = ok && cli::render(r1, f) == cli::render(r2, f) && cli::render(r1, f) == cli::render(r3, f);
    }
    return {ok, "csv/json/text identical for threads 1,1,4"};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char *title, const Outcome &o) {
        std::printf("%s criterion %d: %s -- %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    };
    report(1, "SWAP construction", swap_construction());
    report(2, "no-go theorem, 2-qubit case", nogo_two_qubits());
    report(3, "size-bound sweep n=2,3,4", size_sweep());
    report(4, "deviation closed forms", deviation_closed_forms());
    report(5, "noise commutation identities", noise_identities());
    const auto t0 = Clock::now();
    const auto st = sample_suite();
    const double s = seconds_since(t0);
    report(6, "imperfection chain over 500 samples",
           {st.samples >= 500 && st.chain_violations == 0,
            "samples=" + std::to_string(st.samples) + " violations=" + std::to_string(st.chain_violations) + " worst=" + fmt(st.worst_chain) +
                " t=" + fmt(s) + "s"});
    report(7, "closed-form delta^2 cross-check", {st.worst_closed <= 1e-9, "max |closed-rms^2|=" + fmt(st.worst_closed)});
    report(8, "bosonic bound, alpha=2, trunc=64", bosonic_bound_check());
    report(9, "closed-form bound values", closed_form_values());
    report(10, "sweep determinism", determinism());
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
