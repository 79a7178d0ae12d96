/* bench.hh -- corpus benchmarking.  Each (automaton, algorithm) cell runs
 * under a timeout and a minterm cap; outcomes, wall time, algebra operation
 * counts and a relation digest land in one CSV row.  Failed cells are billed
 * the full timeout. */

#pragma once

#include <algorithm>
#include <cstdio>
#include <chrono>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sfa_io.hh"
#include "simulation.hh"

namespace sfa {

struct BenchRecord {
    std::string id;
    StateId n = 0;                        // states of the input automaton
    std::size_t m = 0;                    // its transitions
    std::size_t max_outdeg = 0;
    std::optional<std::size_t> minterms;  // global minterm count, if under cap
    std::optional<double> blowup;         // mintermised transitions / m
    std::string algo;
    double ms = 0;
    OpCounters ops;                       // algebra operations used by this cell
    std::string outcome;                  // ok | timeout | minterm-cap | oom-guard
    std::optional<std::uint64_t> digest;  // relation digest on ok
};

struct BenchOptions {
    std::vector<std::string> algos{"oracle", "global", "local", "nocount"};
    std::chrono::milliseconds timeout{100000};
    std::size_t minterm_cap = std::size_t{1} << 20;
    double min_ms = 0; // drop automata every algorithm finishes faster than this
};

namespace detail {

inline OpCounters counter_delta(const OpCounters& before, const OpCounters& after) {
    return {after.conj - before.conj, after.disj - before.disj, after.neg - before.neg,
            after.sat - before.sat, after.minterms - before.minterms};
}

} // namespace detail

/// Runs one algorithm cell: completion plus the algorithm itself are timed,
/// resource errors become outcomes rather than exceptions.
inline BenchRecord bench_cell(const Sfa& m, const std::string& algo, const BenchOptions& opt) {
    BenchRecord rec;
    rec.algo = algo;
    ResourceLimits lim;
    lim.minterm_cap = opt.minterm_cap;
    lim.deadline = std::chrono::steady_clock::now() + opt.timeout;
    const OpCounters before = m.algebra()->counters();
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Sfa mc = complete(m).sfa;
        Relation rel;
        if (algo == "oracle")
            rel = oracle_sim(mc, lim);
        else if (algo == "iny")
            rel = iny_sim(mc, lim);
        else if (algo == "global")
            rel = global_sim(mc, lim);
        else if (algo == "local")
            rel = local_sim(mc, lim);
        else if (algo == "nocount")
            rel = nocount_sim(mc, lim);
        else
            throw UsageError("unknown algorithm '" + algo + "'");
        // a run that crossed the deadline between cooperative checks is still
        // a timeout; ok rows never exceed the configured budget
        detail::check_deadline(lim);
        rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                     .count();
        rec.outcome = "ok";
        rec.digest = rel.digest();
    } catch (const ResourceError& e) {
        rec.outcome = to_string(e.kind);
        rec.ms = static_cast<double>(opt.timeout.count()); // failed runs get the timeout
    }
    rec.ops = detail::counter_delta(before, m.algebra()->counters());
    return rec;
}

/// All cells for one automaton, with the shared size/minterm columns filled.
inline std::vector<BenchRecord> bench_automaton(const std::string& id, const Sfa& m,
                                                const BenchOptions& opt) {
    std::optional<std::size_t> minterms;
    std::optional<double> blowup;
    try {
        const auto [gm, stats] = global_mintermise(m, opt.minterm_cap);
        minterms = stats.minterm_count;
        if (stats.transitions_before)
            blowup = static_cast<double>(stats.transitions_after) /
                     static_cast<double>(stats.transitions_before);
    } catch (const ResourceError&) {
        // columns stay empty when the blowup itself is out of reach
    }
    std::vector<BenchRecord> rows;
    for (const std::string& algo : opt.algos) {
        BenchRecord rec = bench_cell(m, algo, opt);
        rec.id = id;
        rec.n = m.n();
        rec.m = m.transition_count();
        rec.max_outdeg = m.max_out_degree();
        rec.minterms = minterms;
        rec.blowup = blowup;
        rows.push_back(std::move(rec));
    }
    return rows;
}

/// Benchmarks every *.sfa file in the directory (sorted by name).  Unreadable
/// files produce a diagnostic on `diag` and are skipped; the run continues.
inline std::vector<BenchRecord> bench_corpus(const std::filesystem::path& dir,
                                             const BenchOptions& opt, std::ostream& diag) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".sfa")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<BenchRecord> rows;
    for (const auto& path : files) {
        Sfa m;
        try {
            m = io::read_sfa_file(path);
        } catch (const Error& e) {
            diag << path.string() << ": " << e.what() << "\n";
            continue;
        }
        auto batch = bench_automaton(path.stem().string(), m, opt);
        rows.insert(rows.end(), std::make_move_iterator(batch.begin()),
                    std::make_move_iterator(batch.end()));
    }

    if (opt.min_ms > 0) {
        // noise filter: drop automata all of whose cells finished ok under the
        // floor, keeping only measurements above timer jitter
        std::vector<BenchRecord> kept;
        for (std::size_t k = 0; k < rows.size();) {
            std::size_t end = k;
            while (end < rows.size() && rows[end].id == rows[k].id) ++end;
            bool all_fast = true;
            for (std::size_t x = k; x < end; ++x)
                if (rows[x].outcome != "ok" || rows[x].ms >= opt.min_ms) all_fast = false;
            if (!all_fast)
                for (std::size_t x = k; x < end; ++x) kept.push_back(std::move(rows[x]));
            k = end;
        }
        rows = std::move(kept);
    }
    return rows;
}

inline void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& rows) {
    os << "id,n,m,maxoutdeg,minterms,blowup,algo,ms,ops_and,ops_or,ops_not,ops_sat,outcome,"
          "digest\n";
    for (const BenchRecord& r : rows) {
        os << r.id << ',' << r.n << ',' << r.m << ',' << r.max_outdeg << ',';
        if (r.minterms) os << *r.minterms;
        os << ',';
        if (r.blowup) os << *r.blowup;
        os << ',' << r.algo << ',' << r.ms << ',' << r.ops.conj << ',' << r.ops.disj << ','
           << r.ops.neg << ',' << r.ops.sat << ',' << r.outcome << ',';
        if (r.digest) {
            char buf[20];
            std::snprintf(buf, sizeof buf, "%016llx",
                          static_cast<unsigned long long>(*r.digest));
            os << buf;
        }
        os << "\n";
    }
}

} // namespace sfa
