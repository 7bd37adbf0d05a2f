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

// Report assembly and formatting for the waygate command line tool. Kept free
// of argument parsing and I/O so every command can be exercised in tests.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "waygate/bounds.hpp"
#include "waygate/optimizer.hpp"

namespace waygate::cli {

enum class Format { json, csv, text };

inline Format parse_format(std::string_view s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    if (s == "text") return Format::text;
    throw precondition_error("unknown format '" + std::string(s) + "' (expected json, csv or text)");
}

/// General notation with 17 significant digits (trailing zeros dropped), so
/// every value reads back bit-exactly and output does not depend on locale.
inline std::string format_number(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

inline std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

inline std::string json_string(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char esc[8];
                    std::snprintf(esc, sizeof esc, "\\u%04x", c);
                    out += esc;
                } else {
                    out += c;
                }
        }
    }
    return out + "\"";
}

/// How a record's measured value is judged against its tolerance.
enum class Check {
    equal,     // |measured - expected| <= tolerance
    at_most,   // measured <= tolerance
    at_least,  // measured >= tolerance
    report,    // informational, always passes
};

struct Record {
    std::string name;
    std::optional<double> expected;
    double measured = 0.0;
    double tolerance = 0.0;
    Check check = Check::report;
    bool pass = true;
};

inline Record make_record(std::string name, std::optional<double> expected, double measured, double tolerance, Check check) {
    Record r{std::move(name), expected, measured, tolerance, check, true};
    switch (check) {
        case Check::equal: r.pass = expected && std::abs(measured - *expected) <= tolerance; break;
        case Check::at_most: r.pass = measured <= tolerance; break;
        case Check::at_least: r.pass = measured >= tolerance; break;
        case Check::report: r.pass = std::isfinite(measured); break;
    }
    return r;
}

/// Optional table emitted next to the records (sweeps).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;  // cells already formatted
};

struct Report {
    std::string command;
    std::vector<Record> records;
    std::optional<Table> table;

    std::size_t passed() const {
        std::size_t n = 0;
        for (const auto &r : records) n += r.pass ? 1 : 0;
        return n;
    }
    std::size_t failed() const { return records.size() - passed(); }
    bool ok() const { return failed() == 0; }
};

inline std::string to_json(const Report &rep) {
    std::ostringstream os;
    os << "{\"schema_version\":\"1\",\"command\":" << json_string(rep.command) << ",\"records\":[";
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
        const auto &r = rep.records[i];
        if (i) os << ',';
        os << "{\"name\":" << json_string(r.name) << ",\"expected\":" << (r.expected ? json_number(*r.expected) : "null")
           << ",\"measured\":" << json_number(r.measured) << ",\"tolerance\":" << json_number(r.tolerance)
           << ",\"pass\":" << (r.pass ? "true" : "false") << '}';
    }
    os << ']';
    if (rep.table) {
        os << ",\"table\":{\"columns\":[";
        for (std::size_t c = 0; c < rep.table->columns.size(); ++c) os << (c ? "," : "") << json_string(rep.table->columns[c]);
        os << "],\"rows\":[";
        for (std::size_t i = 0; i < rep.table->rows.size(); ++i) {
            os << (i ? "," : "") << '[';
            const auto &row = rep.table->rows[i];
            for (std::size_t c = 0; c < row.size(); ++c) {
                const auto &cell = row[c];
                const bool literal = cell == "true" || cell == "false" || cell == "null" ||
                                     (!cell.empty() && (std::isdigit(static_cast<unsigned char>(cell[0])) || cell[0] == '-'));
                os << (c ? "," : "") << (literal && cell != "nan" && cell != "inf" && cell != "-inf" ? cell : json_string(cell));
            }
            os << ']';
        }
        os << "]}";
    }
    os << ",\"summary\":{\"passed\":" << rep.passed() << ",\"failed\":" << rep.failed() << "}}\n";
    return os.str();
}

/// Records as CSV, or the table when one is present.
inline std::string to_csv(const Report &rep) {
    std::ostringstream os;
    if (rep.table) {
        for (std::size_t c = 0; c < rep.table->columns.size(); ++c) os << (c ? "," : "") << rep.table->columns[c];
        os << '\n';
        for (const auto &row : rep.table->rows) {
            for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
            os << '\n';
        }
        return os.str();
    }
    os << "name,expected,measured,tolerance,pass\n";
    for (const auto &r : rep.records) {
        os << r.name << ',' << (r.expected ? format_number(*r.expected) : "") << ',' << format_number(r.measured) << ','
           << format_number(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
    }
    return os.str();
}

inline std::string to_text(const Report &rep) {
    std::ostringstream os;
    if (rep.table) {
        for (std::size_t c = 0; c < rep.table->columns.size(); ++c) os << (c ? "  " : "") << rep.table->columns[c];
        os << '\n';
        for (const auto &row : rep.table->rows) {
            for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "  " : "") << row[c];
            os << '\n';
        }
    }
    for (const auto &r : rep.records) {
        os << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << format_number(r.measured);
        switch (r.check) {
            case Check::equal: os << " (expected " << format_number(r.expected.value_or(NAN)) << " +/- " << format_number(r.tolerance) << ')'; break;
            case Check::at_most: os << " (<= " << format_number(r.tolerance) << ')'; break;
            case Check::at_least: os << " (>= " << format_number(r.tolerance) << ')'; break;
            case Check::report: break;
        }
        os << '\n';
    }
    os << rep.passed() << " passed, " << rep.failed() << " failed\n";
    return os.str();
}

inline std::string render(const Report &rep, Format f) {
    switch (f) {
        case Format::json: return to_json(rep);
        case Format::csv: return to_csv(rep);
        case Format::text: return to_text(rep);
    }
    return {};
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct CommonOptions {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::optional<double> tolerance;  // overrides every per-check default

    double tol_or(double fallback) const { return tolerance.value_or(fallback); }
};

/// Self-checks of the algebra, the no-go witness and the inequality chain on
/// `samples` seeded random invariant implementations.
inline Report verify(const CommonOptions &opt, std::size_t samples = 24) {
    Report rep{"verify", {}, std::nullopt};
    const Operator x = pauli(Pauli::X), y = pauli(Pauli::Y), z = pauli(Pauli::Z);
    const Operator id2 = Operator::Identity(2, 2);

    const Operator swap = hermitian_exp(swap_generator(), -M_PI / 4.0);
    rep.records.push_back(make_record("swap_from_generator", 0.0, max_abs(swap - swap_matrix()), opt.tol_or(tol::unitary), Check::at_most));
    const Operator lx = tensor(x, id2) + tensor(id2, x);
    rep.records.push_back(make_record("swap_conserves_x", 0.0, conservation_defect(swap, lx), opt.tol_or(tol::algebraic), Check::at_most));

    double pauli_res = 0.0;
    pauli_res = std::max(pauli_res, max_abs(x * y - I_UNIT * z));
    pauli_res = std::max(pauli_res, max_abs(y * z - I_UNIT * x));
    pauli_res = std::max(pauli_res, max_abs(z * x - I_UNIT * y));
    for (const auto *p : {&x, &y, &z}) pauli_res = std::max(pauli_res, max_abs(*p * *p - id2));
    rep.records.push_back(make_record("pauli_algebra", 0.0, pauli_res, opt.tol_or(tol::algebraic), Check::at_most));

    rep.records.push_back(make_record("cnot_x_charge_witness", 1.0, nogo_offdiagonal_witness(x, x), opt.tol_or(tol::algebraic), Check::equal));

    const auto cn = Implementation::ideal(cnot_matrix(), Implementation::no_ancilla());
    const auto cn_res = noise_commutation_residuals(cn, x_charge(0));
    rep.records.push_back(make_record("cnot_noise_residual", std::nullopt, std::max(cn_res.r1, cn_res.r2), 1e-3, Check::at_least));

    // Deviation operators of U_CN (x) I against their closed forms.
    const auto dev = deviation_operators(Implementation::ideal(cnot_matrix(), basis_ket(2, 0)));
    const Operator i2 = Operator::Identity(2, 2);
    const Operator z1 = tensor_all({z, i2, i2}), z2 = tensor_all({i2, z, i2}), i8 = Operator::Identity(8, 8);
    double dev_res = max_abs(dev(1, 1));
    dev_res = std::max(dev_res, max_abs(dev(1, 2) - (z1 - z2)));
    dev_res = std::max(dev_res, max_abs(dev(2, 1) - z1 * (z2 - i8)));
    dev_res = std::max(dev_res, max_abs(dev(2, 2) - (z1 - i8) * z2));
    rep.records.push_back(make_record("cnot_deviation_closed_form", 0.0, dev_res, opt.tol_or(tol::algebraic), Check::at_most));

    double noise = 0.0, chain = -INFINITY, closed = 0.0, robertson = -INFINITY;
    std::mt19937_64 rng(opt.seed);
    std::array<std::optional<CommutantBasis>, 3> bases;
    SearchConfig fcfg;
    fcfg.starts = 8;
    fcfg.max_iterations = 800;
    fcfg.threads = opt.threads;
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t k = s % bases.size();
        const auto cq = x_charge(k);
        if (!bases[k]) bases[k] = commutant_basis(total_charge(cq));
        const Implementation impl(random_invariant_unitary(*bases[k], rng), random_state(cq.ancilla_dim(), rng));
        const auto nr = noise_commutation_residuals(impl, cq);
        noise = std::max({noise, nr.r1, nr.r2});

        const auto imp = imperfection_lower_bound(impl, cq, y_spin_state());
        fcfg.seed = opt.seed + s;
        const double f = gate_fidelity(impl, GateTarget::cnot(), fcfg).value;
        chain = std::max({chain, imp.lhs - imp.rhs, imp.rhs - 8.0 * (1.0 - f * f)});

        const auto cf = delta_squared_closed_form(kraus_vectors(impl));
        const double d11 = rms_deviation(impl, plus_state(), 1, 1), d21 = rms_deviation(impl, plus_state(), 2, 1);
        closed = std::max({closed, std::abs(cf.d11sq - d11 * d11), std::abs(cf.d21sq - d21 * d21)});

        const Ket in = deviation_input(impl, y_spin_state());
        robertson = std::max(robertson, -robertson_slack(heisenberg(impl, z_control(impl.ancilla_dim())), cq.embedded_control(), in));
    }
    rep.records.push_back(make_record("invariant_noise_residual", 0.0, noise, opt.tol_or(1e-8), Check::at_most));
    rep.records.push_back(make_record("imperfection_chain_violation", std::nullopt, chain, opt.tol_or(1e-8), Check::at_most));
    rep.records.push_back(make_record("delta_squared_closed_form", 0.0, closed, opt.tol_or(tol::channel), Check::at_most));
    rep.records.push_back(make_record("robertson_violation", std::nullopt, robertson, opt.tol_or(tol::inequality), Check::at_most));

    rep.records.push_back(make_record("qubit_size_bound_n2", 1.0 / 16.0, qubit_size_bound(2), opt.tol_or(0.0), Check::equal));
    rep.records.push_back(make_record("qubit_size_bound_n3", 1.0 / 36.0, qubit_size_bound(3), opt.tol_or(0.0), Check::equal));
    rep.records.push_back(make_record("bosonic_bound_mean1", 1.0 / 16.0, bosonic_bound(1.0), opt.tol_or(0.0), Check::equal));
    rep.records.push_back(make_record("chain_bound_m3_s2", 1.0 / 432.0, chain_bound(3, 2.0), opt.tol_or(0.0), Check::equal));
    return rep;
}

/// Closed-form lower bounds: any combination of the three families.
struct BoundQuery {
    std::optional<int> qubits;
    std::optional<double> mean_photons;
    std::optional<std::pair<int, double>> chain;
};

inline Report bound(const BoundQuery &q) {
    if (!q.qubits && !q.mean_photons && !q.chain) throw precondition_error("bound: give --qubits, --mean-photons or --chain");
    Report rep{"bound", {}, std::nullopt};
    if (q.qubits) {
        rep.records.push_back(make_record("qubit_size_bound(n=" + std::to_string(*q.qubits) + ")", std::nullopt, qubit_size_bound(*q.qubits), 0.0,
                                          Check::report));
    }
    if (q.mean_photons) {
        rep.records.push_back(make_record("bosonic_bound(mean=" + format_number(*q.mean_photons) + ")", std::nullopt,
                                          bosonic_bound(*q.mean_photons), 0.0, Check::report));
    }
    if (q.chain) {
        rep.records.push_back(make_record("chain_bound(m=" + std::to_string(q.chain->first) + ",s=" + format_number(q.chain->second) + ")",
                                          std::nullopt, chain_bound(q.chain->first, q.chain->second), 0.0, Check::report));
    }
    return rep;
}

inline OptimizerConfig optimizer_config(const CommonOptions &opt, std::size_t restarts, std::size_t iterations) {
    OptimizerConfig cfg;
    cfg.restarts = restarts;
    cfg.max_iterations = iterations;
    cfg.seed = opt.seed;
    cfg.threads = opt.threads;
    return cfg;
}

/// Qubit-ancilla sweep. The table is the deliverable; one record per size
/// checks the bound.
inline Report sweep(const CommonOptions &opt, const std::vector<int> &sizes, std::size_t restarts, std::size_t iterations = 3000) {
    SweepSpec spec{sizes, restarts, opt.seed};
    const auto rows = sweep_sizes(spec, optimizer_config(opt, restarts, iterations));
    Report rep{"sweep", {}, Table{{"size", "n_params", "best_infidelity", "bound", "ratio", "converged", "seed"}, {}}};
    for (const auto &r : rows) {
        rep.table->rows.push_back({std::to_string(r.size), std::to_string(r.n_params), format_number(r.best_infidelity), format_number(r.bound),
                                   format_number(r.ratio), r.converged ? "true" : "false", std::to_string(r.seed)});
        rep.records.push_back(make_record("size_bound_margin(n=" + std::to_string(r.size) + ")", std::nullopt, r.best_infidelity - r.bound,
                                          -opt.tol_or(tol::inequality), Check::at_least));
    }
    return rep;
}

inline Report bosonic(const CommonOptions &opt, const std::vector<double> &means, std::size_t restarts, std::optional<std::size_t> trunc,
                      std::size_t iterations = 1500) {
    const auto rows = bosonic_sweep(means, optimizer_config(opt, restarts, iterations), opt.seed, Objective::min_basis_fidelity, trunc);
    Report rep{"bosonic",
               {},
               Table{{"mean_photons", "trunc", "best_infidelity", "bound", "delta_l3_prime", "delta_l3_cap", "converged", "truncation_warning", "seed"},
                     {}}};
    for (const auto &r : rows) {
        rep.table->rows.push_back({format_number(r.mean_photons), std::to_string(r.trunc), format_number(r.best_infidelity), format_number(r.bound),
                                   format_number(r.delta_l3_prime), format_number(r.delta_l3_cap), r.converged ? "true" : "false",
                                   r.truncation_warning ? "true" : "false", std::to_string(r.seed)});
        const std::string tag = "(mean=" + format_number(r.mean_photons) + ")";
        rep.records.push_back(make_record("bosonic_bound_margin" + tag, std::nullopt, r.best_infidelity - r.bound, -opt.tol_or(1e-6), Check::at_least));
        rep.records.push_back(make_record("delta_l3_cap_margin" + tag, std::nullopt, r.delta_l3_cap - r.delta_l3_prime, -opt.tol_or(1e-6),
                                          Check::at_least));
    }
    return rep;
}

/// Per-gate CB error floor of an m-gate decomposition at sizes s.
inline Report chain(int gates, const std::vector<double> &sizes) {
    Report rep{"chain", {}, Table{{"gates", "size", "per_gate_bound", "single_gate_bound"}, {}}};
    for (double s : sizes) {
        const double b = chain_bound(gates, s);
        rep.table->rows.push_back({std::to_string(gates), format_number(s), format_number(b), format_number(1.0 / (4.0 * s * s))});
        rep.records.push_back(make_record("chain_bound(m=" + std::to_string(gates) + ",s=" + format_number(s) + ")", std::nullopt, b, 0.0, Check::report));
    }
    return rep;
}

struct OptimizeQuery {
    AncillaSpec ancilla = AncillaSpec::qubit_register(0);
    Objective objective = Objective::min_basis_fidelity;
    bool optimize_ancilla_state = false;
    std::size_t restarts = 8;
    std::size_t iterations = 3000;
};

inline Report optimize(const CommonOptions &opt, const OptimizeQuery &q) {
    OptimizationProblem problem{q.ancilla, q.objective, q.optimize_ancilla_state};
    const auto res = optimize_implementation(problem, optimizer_config(opt, q.restarts, q.iterations));
    Report rep{"optimize", {}, std::nullopt};
    rep.records.push_back(make_record("n_params", std::nullopt, double(res.n_params), 0.0, Check::report));
    rep.records.push_back(make_record("best_restart", std::nullopt, double(res.restart), 0.0, Check::report));
    rep.records.push_back(make_record("gate_fidelity", std::nullopt, res.best_fidelity, 0.0, Check::report));
    rep.records.push_back(make_record("infidelity", std::nullopt, res.infidelity, 0.0, Check::report));
    rep.records.push_back(make_record("cb_lower", std::nullopt, res.bound_report.measured_cb_lower, 0.0, Check::report));
    rep.records.push_back(make_record("delta_l3_prime", std::nullopt, res.bound_report.delta_l3_prime, 0.0, Check::report));
    rep.records.push_back(make_record("conservation_defect", std::nullopt, res.conservation_defect, opt.tol_or(1e-8), Check::at_most));
    const double slack = problem.ancilla.kind == AncillaSpec::Kind::fock ? 1e-6 : tol::inequality;
    rep.records.push_back(make_record(std::string(to_string(res.bound_report.kind)) + "_bound_margin", std::nullopt, res.bound_report.margin,
                                      -opt.tol_or(slack), Check::at_least));
    rep.records.push_back(make_record("fundamental_bound_margin", std::nullopt, res.fundamental.margin, -opt.tol_or(tol::inequality), Check::at_least));
    return rep;
}

}  // namespace waygate::cli
