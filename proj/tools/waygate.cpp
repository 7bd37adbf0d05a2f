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

// waygate: verification suites, closed-form bounds and optimizer sweeps.
//
// Exit status: 0 all checks pass, 1 some check failed, 2 usage error.

#include <cmath>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "waygate/cli.hpp"

namespace {

namespace wc = waygate::cli;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Shared {
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "text";
    double tolerance = 0.0;
    unsigned threads = 1;
};

void add_shared(CLI::App *cmd, Shared &s) {
    cmd->add_option("--seed", s.seed, "Master seed (default 0)");
    cmd->add_option("--out", s.out, "Write the report to this path instead of stdout");
    cmd->add_option("--format", s.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    cmd->add_option("--tolerance", s.tolerance, "Override every check tolerance")->check(CLI::NonNegativeNumber);
    cmd->add_option("--threads", s.threads, "Worker threads; results do not depend on it")->check(CLI::Range(1u, 1024u));
}

wc::CommonOptions common(const Shared &s, const CLI::App &active) {
    wc::CommonOptions opt;
    opt.seed = s.seed;
    opt.threads = s.threads;
    if (active.get_option("--tolerance")->count() > 0) opt.tolerance = s.tolerance;
    return opt;
}

int emit(const wc::Report &rep, const Shared &s) {
    const std::string text = wc::render(rep, wc::parse_format(s.format));
    if (s.out.empty()) {
        std::cout << text << std::flush;
    } else {
        std::ofstream f(s.out, std::ios::binary);
        if (!f) {
            std::cerr << "waygate: cannot open " << s.out << " for writing\n";
            return kExitUsage;
        }
        f << text;
    }
    return rep.ok() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Gate implementations under additive conservation laws: checks and bounds"};
    app.require_subcommand(1);
    Shared shared;

    auto *verify = app.add_subcommand("verify", "Run the identity and inequality suite");
    std::size_t samples = 24;
    verify->add_option("--samples", samples, "Random invariant implementations to test")->check(CLI::PositiveNumber);
    add_shared(verify, shared);

    auto *bound = app.add_subcommand("bound", "Print closed-form lower bounds");
    int qubits = 0;
    double mean_photons = 0.0;
    std::vector<double> chain_args;
    auto *q_opt = bound->add_option("--qubits", qubits, "Total qubit count n (>= 2)");
    auto *m_opt = bound->add_option("--mean-photons", mean_photons, "Coherent ancilla mean photon number (> 0)");
    auto *c_opt = bound->add_option("--chain", chain_args, "Gate count m and size s")->expected(2);
    add_shared(bound, shared);

    auto *sweep = app.add_subcommand("sweep", "Optimize over qubit-ancilla sizes");
    std::vector<int> sizes{2, 3, 4};
    std::size_t restarts = 8;
    std::size_t iterations = 3000;
    sweep->add_option("--sizes", sizes, "Comma-separated total qubit counts")->delimiter(',')->check(CLI::Range(2, 6));
    sweep->add_option("--restarts", restarts, "Restarts per size (>= 4)")->check(CLI::Range(std::size_t{4}, std::size_t{100000}));
    sweep->add_option("--iterations", iterations, "Simplex iterations per round")->check(CLI::PositiveNumber);
    add_shared(sweep, shared);

    auto *bosonic = app.add_subcommand("bosonic", "Optimize with a coherent-state ancilla");
    std::vector<double> means{4.0};
    std::size_t trunc = 0;
    std::size_t b_restarts = 4;
    std::size_t b_iterations = 1500;
    bosonic->add_option("--mean-photons", means, "Comma-separated mean photon numbers")->delimiter(',')->check(CLI::PositiveNumber);
    auto *trunc_opt = bosonic->add_option("--trunc", trunc, "Fock truncation (default: from alpha)")->check(CLI::Range(std::size_t{4}, std::size_t{512}));
    bosonic->add_option("--restarts", b_restarts, "Restarts (>= 4)")->check(CLI::Range(std::size_t{4}, std::size_t{100000}));
    bosonic->add_option("--iterations", b_iterations, "Simplex iterations per round")->check(CLI::PositiveNumber);
    add_shared(bosonic, shared);

    auto *chain = app.add_subcommand("chain", "Per-gate error floor of an m-gate decomposition");
    int gates = 3;
    std::vector<double> chain_sizes{2.0};
    chain->add_option("--gates", gates, "Number of gates m (>= 1)");
    chain->add_option("--sizes", chain_sizes, "Comma-separated implementation sizes s (>= 2)")->delimiter(',');
    add_shared(chain, shared);

    auto *optimize = app.add_subcommand("optimize", "Search for the best conservation-respecting implementation");
    std::size_t anc_qubits = 0;
    std::size_t fock_trunc = 0;
    double alpha = 2.0;
    std::string objective = "min-basis";
    bool co_opt = false;
    wc::OptimizeQuery oq;
    auto *aq_opt = optimize->add_option("--ancilla-qubits", anc_qubits, "Qubit ancilla register size")->check(CLI::Range(0, 4));
    auto *fock_opt = optimize->add_option("--fock", fock_trunc, "Bosonic ancilla with this truncation")->check(CLI::Range(std::size_t{4}, std::size_t{512}));
    aq_opt->excludes(fock_opt);
    optimize->add_option("--alpha", alpha, "Coherent amplitude for --fock");
    optimize->add_option("--objective", objective, "Search objective")->check(CLI::IsMember({"min-basis", "worst-case"}));
    optimize->add_flag("--optimize-ancilla", co_opt, "Co-optimize the ancilla state");
    optimize->add_option("--restarts", oq.restarts, "Restarts (>= 4)")->check(CLI::Range(std::size_t{4}, std::size_t{100000}));
    optimize->add_option("--iterations", oq.iterations, "Simplex iterations per round")->check(CLI::PositiveNumber);
    add_shared(optimize, shared);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        const auto opt = common(shared, *app.get_subcommands().front());
        if (*verify) return emit(wc::verify(opt, samples), shared);
        if (*bound) {
            wc::BoundQuery q;
            if (q_opt->count()) q.qubits = qubits;
            if (m_opt->count()) q.mean_photons = mean_photons;
            if (c_opt->count()) q.chain = std::pair{static_cast<int>(chain_args.at(0)), chain_args.at(1)};
            if (c_opt->count() && chain_args.at(0) != std::floor(chain_args.at(0))) throw waygate::precondition_error("--chain: m must be an integer");
            return emit(wc::bound(q), shared);
        }
        if (*sweep) return emit(wc::sweep(opt, sizes, restarts, iterations), shared);
        if (*bosonic) {
            std::optional<std::size_t> t;
            if (trunc_opt->count()) t = trunc;
            return emit(wc::bosonic(opt, means, b_restarts, t, b_iterations), shared);
        }
        if (*chain) return emit(wc::chain(gates, chain_sizes), shared);
        if (*optimize) {
            oq.ancilla = fock_opt->count() ? waygate::AncillaSpec::coherent(fock_trunc, alpha) : waygate::AncillaSpec::qubit_register(anc_qubits);
            oq.objective = objective == "worst-case" ? waygate::Objective::worst_case_fidelity : waygate::Objective::min_basis_fidelity;
            oq.optimize_ancilla_state = co_opt;
            return emit(wc::optimize(opt, oq), shared);
        }
    } catch (const std::invalid_argument &e) {
        std::cerr << "waygate: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "waygate: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitUsage;
}
