/* sfa_cli.cc -- command-line front end: simulation preorders, reduction,
 * mintermisation stats, regex compilation, random generation, benchmarking
 * and cross-algorithm agreement checks over SFA files.
 *
 * Exit codes: 0 success, 1 usage error, 2 resource guard, 3 agreement
 * failure.  Diagnostics go to stderr.
 */

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include "sfa/bench.hh"
#include "sfa/generator.hh"
#include "sfa/reduction.hh"
#include "sfa/regex.hh"
#include "sfa/sfa_io.hh"
#include "sfa/simulation.hh"

namespace {

using namespace sfa;

AlgebraRef parse_algebra_arg(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "interval") {
        if (arg.empty()) return Algebra::make_interval(0, kMaxCodepoint);
        const auto dash = arg.find('-');
        if (dash == std::string::npos)
            throw UsageError("expected interval:<lo>-<hi>, got '" + spec + "'");
        return Algebra::make_interval(static_cast<std::uint32_t>(std::stoul(arg.substr(0, dash))),
                                      static_cast<std::uint32_t>(std::stoul(arg.substr(dash + 1))));
    }
    if (kind == "bitvector") {
        if (arg.empty()) throw UsageError("expected bitvector:<width>");
        return Algebra::make_bitvector(static_cast<unsigned>(std::stoul(arg)));
    }
    if (kind == "explicit") {
        if (arg.empty()) throw UsageError("expected explicit:<characters>");
        std::vector<std::uint32_t> syms;
        std::size_t i = 0;
        while (i < arg.size()) syms.push_back(sfa::detail::utf8_next(arg, i));
        return Algebra::make_explicit(std::move(syms));
    }
    throw UsageError("unknown algebra '" + spec + "' (interval[:lo-hi], bitvector:k, explicit:chars)");
}

Relation run_algo(const std::string& algo, const Sfa& m, const ResourceLimits& lim) {
    if (algo == "oracle") return oracle_sim(m, lim);
    if (algo == "iny") return iny_sim(m, lim);
    if (algo == "global") return global_sim(m, lim);
    if (algo == "local") return local_sim(m, lim);
    return nocount_sim(m, lim);
}

void write_relation(const std::string& out_path, const Relation& rel, const std::string& algo) {
    if (out_path.empty()) {
        rel.write_csv(std::cout, algo);
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw UsageError("cannot open '" + out_path + "' for writing");
    rel.write_csv(out, algo);
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const auto comma = csv.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(csv.substr(start));
            break;
        }
        out.push_back(csv.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"simulation preorders and reduction for symbolic finite automata"};
    app.require_subcommand(1);

    // --- sim ---
    auto* sim = app.add_subcommand("sim", "compute a simulation preorder, emit relation CSV");
    std::string sim_algo, sim_in, sim_out;
    bool sim_complete = false;
    std::size_t sim_cap = std::size_t{1} << 20;
    sim->add_option("--algo", sim_algo, "oracle|iny|global|local|nocount")
        ->required()
        ->check(CLI::IsMember({"oracle", "iny", "global", "local", "nocount"}));
    sim->add_option("--in", sim_in, "input .sfa file")->required();
    sim->add_option("--out", sim_out, "relation CSV (default: stdout)");
    sim->add_flag("--complete", sim_complete, "complete the automaton first");
    sim->add_option("--cap", sim_cap, "minterm cap for global mintermisation");

    // --- reduce ---
    auto* red = app.add_subcommand("reduce", "language-preserving reduction");
    std::string red_method, red_in, red_out, red_report;
    bool red_iterative = false;
    std::size_t red_max_iters = 10;
    red->add_option("--method", red_method, "sim|bisim")
        ->required()
        ->check(CLI::IsMember({"sim", "bisim"}));
    red->add_flag("--iterative", red_iterative, "reverse and repeat until stable");
    red->add_option("--max-iters", red_max_iters, "iteration cap (with --iterative)");
    red->add_option("--in", red_in)->required();
    red->add_option("--out", red_out, "reduced automaton file")->required();
    red->add_option("--report", red_report, "per-iteration CSV report");

    // --- minterms ---
    auto* mint = app.add_subcommand("minterms", "mintermisation statistics");
    std::string mint_scope, mint_in;
    mint->add_option("--scope", mint_scope, "global|local")
        ->required()
        ->check(CLI::IsMember({"global", "local"}));
    mint->add_option("--in", mint_in)->required();

    // --- regex ---
    auto* rex = app.add_subcommand("regex", "compile a regex to an SFA");
    std::string rex_pattern, rex_out;
    rex->add_option("--pattern", rex_pattern)->required();
    rex->add_option("--out", rex_out)->required();

    // --- gen ---
    auto* gen = app.add_subcommand("gen", "generate a seeded random SFA");
    std::uint64_t gen_seed = 0;
    StateId gen_n = 8;
    double gen_density = 2.5;
    std::string gen_algebra = "interval:97-122", gen_out;
    std::uint32_t gen_pool = 4;
    gen->add_option("--seed", gen_seed)->required();
    gen->add_option("--n", gen_n, "number of states");
    gen->add_option("--density", gen_density, "transitions per state");
    gen->add_option("--algebra", gen_algebra, "interval[:lo-hi] | bitvector:k | explicit:chars");
    gen->add_option("--pool", gen_pool, "predicate pool size");
    gen->add_option("--out", gen_out)->required();

    // --- bench ---
    auto* ben = app.add_subcommand("bench", "benchmark a corpus directory");
    std::string ben_dir, ben_algos = "oracle,global,local,nocount", ben_out;
    std::uint64_t ben_timeout = 100000;
    std::size_t ben_cap = std::size_t{1} << 20;
    double ben_min_ms = 0;
    ben->add_option("--dir", ben_dir, "directory of .sfa files")->required();
    ben->add_option("--algos", ben_algos, "comma-separated algorithm list");
    ben->add_option("--timeout", ben_timeout, "per-cell timeout in ms");
    ben->add_option("--cap", ben_cap, "minterm cap");
    ben->add_option("--out", ben_out, "output CSV (default: stdout)");
    ben->add_option("--min-ms", ben_min_ms, "drop automata all algorithms finish faster than this");

    // --- check ---
    auto* chk = app.add_subcommand("check", "cross-algorithm agreement check");
    std::string chk_in;
    std::size_t chk_cap = std::size_t{1} << 20;
    chk->add_option("--in", chk_in)->required();
    chk->add_option("--cap", chk_cap, "minterm cap for global_sim");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, exits 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (sim->parsed()) {
        Sfa m = io::read_sfa_file(sim_in);
        if (sim_complete) m = complete(m).sfa;
        ResourceLimits lim;
        lim.minterm_cap = sim_cap;
        const Relation rel = run_algo(sim_algo, m, lim);
        write_relation(sim_out, rel, sim_algo);
        return 0;
    }

    if (red->parsed()) {
        const Sfa m = io::read_sfa_file(red_in);
        const ReductionMethod method =
            red_method == "sim" ? ReductionMethod::Simulation : ReductionMethod::Bisimulation;
        Sfa out;
        ReductionReport report;
        report.method = method;
        if (red_iterative) {
            std::tie(out, report) = reduce_iterative(m, method, red_max_iters);
        } else {
            const auto t0 = std::chrono::steady_clock::now();
            out = reduce_once(m, method);
            const double ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
            report.iterations.push_back({true, m.n(), out.n(), m.transition_count(),
                                         out.transition_count(), ms});
        }
        io::write_sfa_file(red_out, out);
        if (!red_report.empty()) {
            std::ofstream rep(red_report);
            if (!rep) throw UsageError("cannot open '" + red_report + "' for writing");
            report.write_csv(rep);
        }
        std::cerr << "reduced " << m.n() << " -> " << out.n() << " states, "
                  << m.transition_count() << " -> " << out.transition_count() << " transitions in "
                  << report.iterations.size() << " pass(es)\n";
        return 0;
    }

    if (mint->parsed()) {
        const Sfa m = io::read_sfa_file(mint_in);
        if (mint_scope == "global") {
            const auto [gm, stats] = global_mintermise(m);
            std::cout << "scope global\n"
                      << "minterms " << stats.minterm_count << "\n"
                      << "transitions " << stats.transitions_before << " -> "
                      << stats.transitions_after << "\n";
            if (stats.transitions_before)
                std::cout << "blowup "
                          << static_cast<double>(stats.transitions_after) /
                                 static_cast<double>(stats.transitions_before)
                          << "\n";
        } else {
            const auto [lm, stats] = local_mintermise(m);
            std::cout << "scope local\n"
                      << "minterms " << stats.minterm_count << "\n"
                      << "transitions " << stats.transitions_before << " -> "
                      << stats.transitions_after << "\n";
            for (StateId q = 0; q < m.n(); ++q)
                std::cout << "state " << q << " minterms " << stats.per_state_minterms[q] << "\n";
        }
        return 0;
    }

    if (rex->parsed()) {
        io::write_sfa_file(rex_out, regex_compile(rex_pattern));
        return 0;
    }

    if (gen->parsed()) {
        const AlgebraRef alg = parse_algebra_arg(gen_algebra);
        io::write_sfa_file(gen_out, random_sfa(gen_seed, gen_n, gen_density, alg, gen_pool));
        return 0;
    }

    if (ben->parsed()) {
        BenchOptions opt;
        opt.algos = split_list(ben_algos);
        opt.timeout = std::chrono::milliseconds(ben_timeout);
        opt.minterm_cap = ben_cap;
        opt.min_ms = ben_min_ms;
        const auto rows = bench_corpus(ben_dir, opt, std::cerr);
        if (ben_out.empty()) {
            write_bench_csv(std::cout, rows);
        } else {
            std::ofstream out(ben_out);
            if (!out) throw UsageError("cannot open '" + ben_out + "' for writing");
            write_bench_csv(out, rows);
        }
        return 0;
    }

    // check
    const Sfa m = io::read_sfa_file(chk_in);
    ResourceLimits lim;
    lim.minterm_cap = chk_cap;
    const AgreementReport rep = check_agreement(m, lim);
    std::cout << "states " << rep.states << "\n";
    for (const auto& [name, digest] : rep.digests) {
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
        std::cout << name << " " << buf << "\n";
    }
    if (rep.global_skipped) std::cout << "global skipped (minterm cap)\n";
    if (rep.all_equal) {
        std::cout << "agreement ok\n";
        return 0;
    }
    const auto& d = *rep.discrepancy;
    std::cout << "DISAGREE " << d.algo_a << " vs " << d.algo_b << " at pair (" << d.i << ","
              << d.j << "), present in " << (d.in_a ? d.algo_a : d.algo_b) << "\n";
    if (d.word) {
        std::cout << "distinguishing word:";
        for (Symbol a : *d.word) std::cout << ' ' << a;
        std::cout << "\n";
    }
    return 3;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const sfa::ResourceError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 2;
    } catch (const sfa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
