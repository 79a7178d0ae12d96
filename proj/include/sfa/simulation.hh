/* simulation.hh -- simulation preorders over SFAs.
 *
 * Five routes to the same relation:
 *   oracle_sim   level-synchronous fixpoint of the nonsimulation relation,
 *                evaluated symbolically; quadratic per level, kept simple
 *   iny_sim      worklist algorithm with counters over an NFA whose symbols
 *                are the guards compared syntactically
 *   global_sim   iny_sim after global mintermisation
 *   local_sim    counters indexed by per-state local minterms, semantic
 *                intersection tests against the original transitions
 *   nocount_sim  no counters and no minterms at all; per pivot row, one
 *                reach predicate per predecessor answers a whole batch of
 *                satisfiability questions
 *
 * plus the bisimulation equivalence for comparison.  All worklists are FIFO
 * and pivots are least-index, so every run is deterministic.
 */

#pragma once

#include <cassert>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "automaton.hh"
#include "relation.hh"

namespace sfa {

struct ResourceLimits {
    std::size_t minterm_cap = std::size_t{1} << 20;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::size_t max_table_bytes = std::size_t{1} << 28; // counter-table guard
};

namespace detail {

inline void check_deadline(const ResourceLimits& lim) {
    if (lim.deadline && std::chrono::steady_clock::now() > *lim.deadline)
        throw ResourceError(ResourceKind::Timeout, "simulation computation timed out");
}

inline void require_complete(const Sfa& m, const char* algo) {
    if (auto w = incompleteness_witness(m))
        throw UsageError(std::string(algo) + " needs a complete SFA: state " +
                         std::to_string(w->first) + " has no transition for symbol " +
                         std::to_string(w->second) + " (complete the automaton first)");
}

} // namespace detail

/// FIFO worklist of state pairs.  A pair is accepted once, ever; processed
/// pairs are gone from Sim, so the ever-flag doubles as the pending flag.
class PairWorklist {
public:
    explicit PairWorklist(StateId n) : n_(n), flag_(std::size_t{n} * n, 0) {}

    bool push(StateId i, StateId j) {
        char& f = flag_[std::size_t{i} * n_ + j];
        if (f) return false;
        f = 1;
        queue_.emplace_back(i, j);
        return true;
    }

    bool ever_enqueued(StateId i, StateId j) const { return flag_[std::size_t{i} * n_ + j]; }
    bool empty() const { return head_ == queue_.size(); }
    std::pair<StateId, StateId> pop() { return queue_[head_++]; }

private:
    StateId n_;
    std::vector<char> flag_;
    std::vector<std::pair<StateId, StateId>> queue_;
    std::size_t head_ = 0;
};

// ---------------------------------------------------------------------------
// oracle

/// Nonsimulation fixpoint: notsim_0 = F x (Q \ F), then level-synchronous
/// steps; a pair (s, t) enters the level k+1 relation when s has a move into
/// some i that t cannot answer into a state still simulating i, which is
/// exactly IsSat(phi_si /\ !Reach_t(sim(i))).  The complement of the fixpoint
/// is the simulation preorder.  Incomplete inputs are completed on the fly
/// and the result restricted to the original states.
inline Relation oracle_sim(const Sfa& input, const ResourceLimits& lim = {}) {
    const CompletionResult comp = complete(input);
    const Sfa& m = comp.sfa;
    const Algebra& alg = *m.algebra();
    const StateId n = m.n();

    Relation notsim(n);
    for (StateId i = 0; i < n; ++i)
        for (StateId j = 0; j < n; ++j)
            if (m.is_final(i) && !m.is_final(j)) notsim.set(i, j, true);

    for (;;) {
        detail::check_deadline(lim);
        Relation next = notsim;
        bool changed = false;
        // Reach_t(sim(i)) negated, shared across all s within one level
        std::vector<std::optional<Predicate>> not_reach(std::size_t{n} * n);
        auto not_reach_of = [&](StateId t, StateId i) -> const Predicate& {
            auto& slot = not_reach[std::size_t{t} * n + i];
            if (!slot) {
                Predicate reach = alg.bottom();
                for (const Transition& u : m.out(t))
                    if (!notsim.get(i, u.target)) reach = alg.disj(reach, u.guard);
                slot = alg.neg(reach);
            }
            return *slot;
        };

        for (StateId s = 0; s < n; ++s) {
            const auto ts = m.out(s);
            for (StateId t = 0; t < n; ++t) {
                if (notsim.get(s, t)) continue;
                bool refuted = false;
                for (std::size_t k = 0; k < ts.size() && !refuted;) {
                    const StateId i = ts[k].target;
                    Predicate phi_si = ts[k].guard;
                    for (++k; k < ts.size() && ts[k].target == i; ++k)
                        phi_si = alg.disj(phi_si, ts[k].guard);
                    if (alg.is_sat(alg.conj(phi_si, not_reach_of(t, i)))) refuted = true;
                }
                if (refuted) {
                    next.set(s, t, true);
                    changed = true;
                }
            }
        }
        notsim = std::move(next);
        if (!changed) break;
    }

    Relation sim = Relation::full(n);
    for (StateId i = 0; i < n; ++i)
        for (StateId j = 0; j < n; ++j)
            if (notsim.get(i, j)) sim.set(i, j, false);
    if (!comp.was_complete) sim = sim.restricted_to_first(input.n());
    return sim;
}

// ---------------------------------------------------------------------------
// iny_sim

/// Simulation over the syntactic NFA: guards act as plain alphabet symbols
/// under canonical equality.  Counters N_a(t, i) hold how many a-successors
/// of t still simulate i; a zero means t lost its last answer.  Incomplete
/// inputs are handled by also seeding pairs whose outgoing symbol sets are
/// incompatible.
inline Relation iny_sim(const Sfa& nfa, const ResourceLimits& lim = {}) {
    const StateId n = nfa.n();
    Relation sim = Relation::full(n);
    if (n == 0) return sim;

    // symbol table over canonical guard identity
    std::unordered_map<Predicate, std::uint32_t, detail::PredHash> sym_id;
    std::vector<std::uint32_t> tsym(nfa.transition_count());
    {
        std::size_t idx = 0;
        for (const Transition& t : nfa.transitions()) {
            auto [it, fresh] = sym_id.try_emplace(t.guard, static_cast<std::uint32_t>(sym_id.size()));
            (void)fresh;
            tsym[idx++] = it->second;
        }
    }
    const std::size_t ell = sym_id.size();

    const std::size_t table_bytes = ell * n * n * sizeof(std::int32_t);
    if (ell && table_bytes > lim.max_table_bytes)
        throw ResourceError(ResourceKind::OomGuard,
                            "counter table would need " + std::to_string(table_bytes) + " bytes");

    // out-degree per (state, symbol) and symbol-presence bitsets
    std::vector<std::int32_t> outc(std::size_t{n} * ell, 0);
    const std::size_t symw = (ell + 63) / 64;
    std::vector<std::uint64_t> has(std::size_t{n} * symw, 0);
    {
        std::size_t idx = 0;
        for (const Transition& t : nfa.transitions()) {
            const std::uint32_t a = tsym[idx++];
            ++outc[std::size_t{t.source} * ell + a];
            has[std::size_t{t.source} * symw + (a >> 6)] |= std::uint64_t{1} << (a & 63);
        }
    }

    // N_a(t, i) := |post_a(t)| for every i
    std::vector<std::int32_t> cnt(ell * n * n, 0);
    for (StateId t = 0; t < n; ++t)
        for (std::size_t a = 0; a < ell; ++a) {
            const std::int32_t v = outc[std::size_t{t} * ell + a];
            if (!v) continue;
            std::int32_t* row = cnt.data() + (a * n + t) * n;
            for (StateId i = 0; i < n; ++i) row[i] = v;
        }

    // sources with an a-transition into i, grouped as CSR over (a, i)
    std::vector<std::uint32_t> group_off(ell * n + 1, 0);
    std::vector<StateId> group_src(nfa.transition_count());
    {
        std::size_t idx = 0;
        for (const Transition& t : nfa.transitions())
            ++group_off[std::size_t{tsym[idx++]} * n + t.target + 1];
        for (std::size_t k = 1; k < group_off.size(); ++k) group_off[k] += group_off[k - 1];
        std::vector<std::uint32_t> cursor(group_off.begin(), group_off.end() - 1);
        idx = 0;
        for (const Transition& t : nfa.transitions()) {
            const std::size_t g = std::size_t{tsym[idx++]} * n + t.target;
            group_src[cursor[g]++] = t.source;
        }
    }

    PairWorklist wl(n);
    for (StateId i = 0; i < n; ++i)
        for (StateId j = 0; j < n; ++j) {
            if (i == j) continue;
            if (nfa.is_final(i) && !nfa.is_final(j)) {
                wl.push(i, j);
                continue;
            }
            // q moves on a symbol r lacks
            const std::uint64_t* hi = has.data() + std::size_t{i} * symw;
            const std::uint64_t* hj = has.data() + std::size_t{j} * symw;
            for (std::size_t w = 0; w < symw; ++w)
                if (hi[w] & ~hj[w]) {
                    wl.push(i, j);
                    break;
                }
        }

    std::size_t ticks = 0;
    while (!wl.empty()) {
        if ((++ticks & 1023u) == 0) detail::check_deadline(lim);
        const auto [i, j] = wl.pop();
        assert(sim.get(i, j)); // pairs leave Sim exactly once, at their pop
        sim.set(i, j, false);
        for (std::uint32_t idx : nfa.in(j)) {
            const StateId t = nfa.transitions()[idx].source;
            const std::uint32_t a = tsym[idx];
            std::int32_t& c = cnt[(std::size_t{a} * n + t) * n + i];
            if (--c == 0) {
                for (std::uint32_t g = group_off[std::size_t{a} * n + i];
                     g < group_off[std::size_t{a} * n + i + 1]; ++g) {
                    const StateId s = group_src[g];
                    if (sim.get(s, t)) wl.push(s, t);
                }
            }
        }
    }
    return sim;
}

// ---------------------------------------------------------------------------
// global_sim

inline Relation global_sim(const Sfa& m, const ResourceLimits& lim = {}) {
    auto [gm, stats] = global_mintermise(m, lim.minterm_cap);
    (void)stats;
    detail::check_deadline(lim);
    return iny_sim(gm, lim);
}

// ---------------------------------------------------------------------------
// local_sim

/// Counters for local_sim: one integer row of length n per (state, local
/// minterm).  N(t, psi, i) counts the psi-successors of t in the locally
/// mintermised automaton that still simulate i.
class CounterTable {
public:
    CounterTable(const Sfa& ml, std::size_t max_bytes) : n_(ml.n()) {
        cell_of_.resize(ml.transition_count());
        offset_.assign(n_ + 1, 0);
        for (StateId q = 0; q < n_; ++q) {
            const auto ts = ml.out(q);
            const std::uint32_t base = static_cast<std::uint32_t>(cells_.size());
            std::uint32_t local = 0;
            for (std::size_t k = 0; k < ts.size(); ++k) {
                // out-transitions are sorted by (target, guard); find the cell
                std::uint32_t c = ~0u;
                for (std::uint32_t x = base; x < cells_.size(); ++x)
                    if (cells_[x] == ts[k].guard) {
                        c = x;
                        break;
                    }
                if (c == ~0u) {
                    cells_.push_back(ts[k].guard);
                    c = base + local++;
                }
                cell_of_[ml.out_offset(q) + k] = c;
            }
            offset_[q + 1] = static_cast<std::uint32_t>(cells_.size());
        }
        const std::size_t bytes = cells_.size() * std::size_t{n_} * sizeof(std::int32_t);
        if (!cells_.empty() && bytes > max_bytes)
            throw ResourceError(ResourceKind::OomGuard,
                                "counter table would need " + std::to_string(bytes) + " bytes");
        cnt_.assign(cells_.size() * n_, 0);
        for (std::size_t idx = 0; idx < ml.transition_count(); ++idx) {
            const std::uint32_t c = cell_of_[idx];
            std::int32_t* row = cnt_.data() + std::size_t{c} * n_;
            // every i starts at |Delta_L(t, psi)|; bump row-wise per transition
            for (StateId i = 0; i < n_; ++i) ++row[i];
        }
    }

    std::uint32_t cell_of_transition(std::size_t trans_idx) const { return cell_of_[trans_idx]; }
    const Predicate& cell_pred(std::uint32_t cell) const { return cells_[cell]; }
    std::int32_t& at(std::uint32_t cell, StateId i) { return cnt_[std::size_t{cell} * n_ + i]; }
    std::size_t cell_count() const { return cells_.size(); }

    /// Debug invariant: N(t, psi, i) == |Delta_L(t, psi) /\ Sim(i)| right now.
    bool matches_recount(const Sfa& ml, const Relation& sim) const {
        std::vector<std::int32_t> expect(cnt_.size(), 0);
        for (std::size_t idx = 0; idx < ml.transition_count(); ++idx) {
            const StateId tgt = ml.transitions()[idx].target;
            std::int32_t* row = expect.data() + std::size_t{cell_of_[idx]} * n_;
            for (StateId i = 0; i < n_; ++i)
                if (sim.get(i, tgt)) ++row[i];
        }
        return expect == cnt_;
    }

private:
    StateId n_;
    std::vector<Predicate> cells_;        // local minterms, grouped by state
    std::vector<std::uint32_t> offset_;   // per-state cell ranges
    std::vector<std::uint32_t> cell_of_;  // transition index -> cell
    std::vector<std::int32_t> cnt_;
};

struct LocalSimOptions {
    /// Recount every counter at each worklist pop and throw on mismatch.
    bool debug_check_counters = false;
};

inline Relation local_sim(const Sfa& m, const ResourceLimits& lim = {},
                          const LocalSimOptions& opt = {}) {
    detail::require_complete(m, "local_sim");
    const Algebra& alg = *m.algebra();
    const StateId n = m.n();
    Relation sim = Relation::full(n);
    if (n == 0) return sim;

    auto [ml, stats] = local_mintermise(m, lim.minterm_cap);
    (void)stats;
    CounterTable counters(ml, lim.max_table_bytes);

    PairWorklist wl(n);
    for (StateId i = 0; i < n; ++i)
        for (StateId j = 0; j < n; ++j)
            if (m.is_final(i) && !m.is_final(j)) wl.push(i, j);

    std::size_t ticks = 0;
    while (!wl.empty()) {
        if ((++ticks & 255u) == 0) detail::check_deadline(lim);
        if (opt.debug_check_counters && !counters.matches_recount(ml, sim))
            throw Error("local_sim counter invariant violated");
        const auto [i, j] = wl.pop();
        assert(sim.get(i, j)); // pairs leave Sim exactly once, at their pop
        sim.set(i, j, false);
        for (std::uint32_t idx : ml.in(j)) {
            const StateId t = ml.transitions()[idx].source;
            const std::uint32_t cell = counters.cell_of_transition(idx);
            if (--counters.at(cell, i) == 0) {
                const Predicate& psi = counters.cell_pred(cell);
                for (std::uint32_t oidx : m.in(i)) {
                    const Transition& orig = m.transitions()[oidx];
                    const StateId s = orig.source;
                    if (!sim.get(s, t) || wl.ever_enqueued(s, t)) continue;
                    if (alg.is_sat(alg.conj(psi, orig.guard))) wl.push(s, t);
                }
            }
        }
    }
    return sim;
}

// ---------------------------------------------------------------------------
// nocount_sim

/// Counter-free and minterm-free.  While some NotSim row i is non-empty, the
/// whole row is flushed out of Sim(i) at once; every predecessor t of the
/// flushed states gets one reach predicate Reach_t(Sim(i)), whose negation
/// answers the satisfiability test for all transitions entering i.
inline Relation nocount_sim(const Sfa& m, const ResourceLimits& lim = {}) {
    detail::require_complete(m, "nocount_sim");
    const Algebra& alg = *m.algebra();
    const StateId n = m.n();
    Relation sim = Relation::full(n);
    if (n == 0) return sim;

    Relation notsim(n);
    std::set<StateId> pending;
    for (StateId i = 0; i < n; ++i)
        for (StateId j = 0; j < n; ++j)
            if (m.is_final(i) && !m.is_final(j)) {
                notsim.set(i, j, true);
                pending.insert(i);
            }

    const std::uint32_t words = notsim.row_words();
    std::vector<std::uint64_t> pred_mask(std::size_t{n} * words, 0);
    for (const Transition& t : m.transitions())
        pred_mask[std::size_t{t.target} * words + (t.source >> 6)] |= std::uint64_t{1}
                                                                      << (t.source & 63);

    while (!pending.empty()) {
        detail::check_deadline(lim);
        const StateId i = *pending.begin(); // least pivot, for determinism
        pending.erase(pending.begin());

        auto ns_row = notsim.row(i);
        std::vector<std::uint64_t> removed(ns_row.begin(), ns_row.end());
        // Rm: states with a transition into the flushed row
        std::vector<std::uint64_t> rm(words, 0);
        for (StateId j = 0; j < n; ++j)
            if ((removed[j >> 6] >> (j & 63)) & 1u)
                for (std::uint32_t w = 0; w < words; ++w)
                    rm[w] |= pred_mask[std::size_t{j} * words + w];

        auto sim_row = sim.row(i);
        for (std::uint32_t w = 0; w < words; ++w) {
            assert((removed[w] & ~sim_row[w]) == 0); // NotSim stays inside Sim until flushed
            sim_row[w] &= ~removed[w];
            ns_row[w] = 0;
        }

        if (m.in(i).empty()) continue; // nothing can be re-examined against i

        for (StateId t = 0; t < n; ++t) {
            if (!((rm[t >> 6] >> (t & 63)) & 1u)) continue;
            Predicate reach = alg.bottom();
            for (const Transition& u : m.out(t))
                if (sim.get(i, u.target)) reach = alg.disj(reach, u.guard);
            const Predicate not_reach = alg.neg(reach);
            for (std::uint32_t oidx : m.in(i)) {
                const Transition& orig = m.transitions()[oidx];
                const StateId s = orig.source;
                if (!sim.get(s, t) || notsim.get(s, t)) continue;
                if (alg.is_sat(alg.conj(not_reach, orig.guard))) {
                    notsim.set(s, t, true);
                    pending.insert(s);
                }
            }
        }
    }
    return sim;
}

// ---------------------------------------------------------------------------
// bisimulation

/// Greatest bisimulation as an equivalence relation, by naive partition
/// refinement over the locally mintermised automaton.  Two states stay in one
/// block while for every block B their reach predicates into B coincide
/// (canonical forms make that a syntactic comparison).
inline Relation bisimulation(const Sfa& m) {
    detail::require_complete(m, "bisimulation");
    const StateId n = m.n();
    if (n == 0) return Relation(0);
    const Algebra& alg = *m.algebra();
    auto [ml, stats] = local_mintermise(m);
    (void)stats;

    std::vector<std::uint32_t> block(n);
    std::uint32_t blocks = 0;
    {
        std::int32_t fin = -1, non = -1;
        for (StateId q = 0; q < n; ++q) {
            std::int32_t& id = ml.is_final(q) ? fin : non;
            if (id < 0) id = static_cast<std::int32_t>(blocks++);
            block[q] = static_cast<std::uint32_t>(id);
        }
    }

    using Signature = std::vector<std::pair<std::uint32_t, Predicate>>;
    for (;;) {
        std::vector<Signature> sig(n);
        for (StateId q = 0; q < n; ++q) {
            std::map<std::uint32_t, Predicate> reach;
            for (const Transition& t : ml.out(q)) {
                auto [it, fresh] = reach.try_emplace(block[t.target], t.guard);
                if (!fresh) it->second = alg.disj(it->second, t.guard);
            }
            sig[q].assign(reach.begin(), reach.end());
        }

        std::vector<std::uint32_t> next(n);
        std::vector<StateId> leaders; // least member of each new block, in order
        for (StateId q = 0; q < n; ++q) {
            std::uint32_t id = ~0u;
            for (std::size_t k = 0; k < leaders.size(); ++k) {
                const StateId l = leaders[k];
                if (block[l] == block[q] && sig[l] == sig[q]) {
                    id = static_cast<std::uint32_t>(k);
                    break;
                }
            }
            if (id == ~0u) {
                id = static_cast<std::uint32_t>(leaders.size());
                leaders.push_back(q);
            }
            next[q] = id;
        }
        const bool stable = leaders.size() == blocks;
        blocks = static_cast<std::uint32_t>(leaders.size());
        block = std::move(next);
        if (stable) break;
    }

    Relation r(n);
    for (StateId i = 0; i < n; ++i)
        for (StateId j = 0; j < n; ++j)
            if (block[i] == block[j]) r.set(i, j, true);
    return r;
}

// ---------------------------------------------------------------------------
// agreement checking

struct AgreementReport {
    bool all_equal = true;
    bool global_skipped = false; // minterm cap prevented global_sim
    StateId states = 0;          // of the completed automaton the algorithms saw
    std::vector<std::pair<std::string, std::uint64_t>> digests;

    struct Discrepancy {
        std::string algo_a, algo_b; // first pair of algorithms that disagree
        StateId i = 0, j = 0;       // minimal differing pair, row-major
        bool in_a = false;          // whether (i, j) is in algo_a's relation
        std::optional<Word> word;   // distinguishing word, if bounded search finds one
    };
    std::optional<Discrepancy> discrepancy;
};

/// Compares already-computed relations over `m` and builds the report; the
/// first entry is the reference.  Split out of check_agreement so a broken
/// implementation can be fed in deliberately (mutation tests do).
inline AgreementReport compare_relations(
    const Sfa& m, const std::vector<std::pair<std::string, Relation>>& rels,
    std::size_t word_search_len = 5) {
    AgreementReport rep;
    rep.states = m.n();
    for (const auto& [name, rel] : rels) rep.digests.emplace_back(name, rel.digest());
    for (std::size_t k = 1; k < rels.size() && rep.all_equal; ++k) {
        const Relation& a = rels[0].second;
        const Relation& b = rels[k].second;
        if (a == b) continue;
        rep.all_equal = false;
        AgreementReport::Discrepancy d;
        d.algo_a = rels[0].first;
        d.algo_b = rels[k].first;
        for (StateId i = 0; i < a.n() && !rep.discrepancy; ++i)
            for (StateId j = 0; j < a.n(); ++j)
                if (a.get(i, j) != b.get(i, j)) {
                    d.i = i;
                    d.j = j;
                    d.in_a = a.get(i, j);
                    d.word = bounded_inclusion_counterexample(m, {i}, m, {j}, word_search_len);
                    rep.discrepancy = std::move(d);
                    break;
                }
    }
    return rep;
}

/// Runs the oracle and the three SFA algorithms on complete(m) and reports
/// whether they all agree.  global_sim is skipped (and flagged) when the
/// minterm cap trips; discrepancies are report content, not errors.
inline AgreementReport check_agreement(const Sfa& input, const ResourceLimits& lim = {}) {
    const Sfa mc = complete(input).sfa;
    std::vector<std::pair<std::string, Relation>> rels;
    rels.emplace_back("oracle", oracle_sim(mc));
    bool global_skipped = false;
    try {
        rels.emplace_back("global", global_sim(mc, lim));
    } catch (const ResourceError& e) {
        if (e.kind != ResourceKind::MintermCap) throw;
        global_skipped = true;
    }
    rels.emplace_back("local", local_sim(mc, lim));
    rels.emplace_back("nocount", nocount_sim(mc, lim));
    AgreementReport rep = compare_relations(mc, rels);
    rep.global_skipped = global_skipped;
    return rep;
}

} // namespace sfa
