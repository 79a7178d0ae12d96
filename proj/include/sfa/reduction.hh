/* reduction.hh -- language-preserving reduction: quotient by the symmetric
 * core of a (simulation) preorder, little-brother transition removal,
 * unreachable-state trimming and the iterated forward/backward loop, with
 * a bisimulation-based variant for comparison. */

#pragma once

#include <chrono>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "automaton.hh"
#include "relation.hh"
#include "simulation.hh"

namespace sfa {

namespace detail {

inline void require_preorder(const Relation& r) {
    if (auto i = r.reflexivity_violation())
        throw UsageError("relation is not a preorder: missing reflexive pair (" +
                         std::to_string(*i) + "," + std::to_string(*i) + ")");
    if (auto v = r.transitivity_violation())
        throw UsageError("relation is not a preorder: has (" + std::to_string((*v)[0]) + "," +
                         std::to_string((*v)[1]) + ") and (" + std::to_string((*v)[1]) + "," +
                         std::to_string((*v)[2]) + ") but not (" + std::to_string((*v)[0]) + "," +
                         std::to_string((*v)[2]) + ")");
}

} // namespace detail

/// Classes of the equivalence preorder /\ preorder^-1, numbered by ascending
/// least member; representative[c] is that least member.
struct QuotientPartition {
    std::vector<std::uint32_t> class_of;
    std::vector<StateId> representative;
};

inline QuotientPartition equivalence_classes(const Relation& preorder) {
    const StateId n = preorder.n();
    QuotientPartition part;
    part.class_of.assign(n, 0);
    for (StateId i = 0; i < n; ++i) {
        StateId rep = i;
        for (StateId j = 0; j < i; ++j)
            if (preorder.get(i, j) && preorder.get(j, i)) {
                rep = j;
                break;
            }
        if (rep == i) {
            part.class_of[i] = static_cast<std::uint32_t>(part.representative.size());
            part.representative.push_back(i);
        } else {
            part.class_of[i] = part.class_of[rep];
        }
    }
    return part;
}

/// Merges each equivalence class of the preorder into one state (least index
/// as representative); parallel edges fuse by guard disjunction, initial and
/// final flags lift class-wise.
inline std::pair<Sfa, QuotientPartition> quotient_with_classes(const Sfa& m,
                                                               const Relation& preorder) {
    if (preorder.n() != m.n()) throw UsageError("relation size does not match the automaton");
    detail::require_preorder(preorder);
    const QuotientPartition part = equivalence_classes(preorder);
    const auto k = static_cast<StateId>(part.representative.size());

    SfaBuilder b(m.algebra(), k);
    std::map<std::pair<StateId, StateId>, Predicate> edges;
    for (const Transition& t : m.transitions()) {
        const std::pair<StateId, StateId> key{part.class_of[t.source], part.class_of[t.target]};
        auto [it, fresh] = edges.try_emplace(key, t.guard);
        if (!fresh) it->second = m.algebra()->disj(it->second, t.guard);
    }
    for (auto& [key, guard] : edges) b.add_transition(key.first, std::move(guard), key.second);
    for (StateId q = 0; q < m.n(); ++q) {
        if (m.is_initial(q)) b.set_initial(part.class_of[q]);
        if (m.is_final(q)) b.set_final(part.class_of[q]);
    }
    return {b.build(), part};
}

inline Sfa quotient(const Sfa& m, const Relation& preorder) {
    return quotient_with_classes(m, preorder).first;
}

/// Removes states that are not forward-reachable from the initial set and
/// reindexes densely, preserving relative order.
inline Sfa trim_unreachable(const Sfa& m) {
    std::vector<char> reach(m.n(), 0);
    std::vector<StateId> todo;
    for (StateId q = 0; q < m.n(); ++q)
        if (m.is_initial(q)) {
            reach[q] = 1;
            todo.push_back(q);
        }
    while (!todo.empty()) {
        const StateId q = todo.back();
        todo.pop_back();
        for (const Transition& t : m.out(q))
            if (!reach[t.target]) {
                reach[t.target] = 1;
                todo.push_back(t.target);
            }
    }
    std::vector<StateId> remap(m.n(), 0);
    StateId k = 0;
    for (StateId q = 0; q < m.n(); ++q)
        if (reach[q]) remap[q] = k++;
    if (k == m.n()) return m;

    SfaBuilder b(m.algebra(), k);
    for (const Transition& t : m.transitions())
        if (reach[t.source] && reach[t.target])
            b.add_transition(remap[t.source], t.guard, remap[t.target]);
    for (StateId q = 0; q < m.n(); ++q) {
        if (!reach[q]) continue;
        if (m.is_initial(q)) b.set_initial(remap[q]);
        if (m.is_final(q)) b.set_final(remap[q]);
    }
    return b.build();
}

/// For every transition q -phi-> p, subtracts the guards q takes into targets
/// strictly above p (p below p' but not conversely); transitions left with an
/// unsatisfiable residual disappear, then unreachable states are trimmed.
/// Sound whenever `preorder` under-approximates the simulation preorder.
inline Sfa remove_little_brothers(const Sfa& m, const Relation& preorder) {
    if (preorder.n() != m.n()) throw UsageError("relation size does not match the automaton");
    detail::require_preorder(preorder);
    const Algebra& alg = *m.algebra();
    auto strictly_below = [&](StateId p, StateId pp) {
        return preorder.get(p, pp) && !preorder.get(pp, p);
    };

    SfaBuilder b(m.algebra(), m.n());
    for (StateId q = 0; q < m.n(); ++q) {
        const auto ts = m.out(q);
        for (const Transition& t : ts) {
            Predicate bigger = alg.bottom();
            bool any = false;
            for (const Transition& u : ts)
                if (u.target != t.target && strictly_below(t.target, u.target)) {
                    bigger = alg.disj(bigger, u.guard);
                    any = true;
                }
            if (!any) {
                b.add_transition(q, t.guard, t.target);
                continue;
            }
            const Predicate residual = alg.conj(t.guard, alg.neg(bigger));
            if (alg.is_sat(residual)) b.add_transition(q, residual, t.target);
        }
    }
    for (StateId q = 0; q < m.n(); ++q) {
        if (m.is_initial(q)) b.set_initial(q);
        if (m.is_final(q)) b.set_final(q);
    }
    return trim_unreachable(b.build());
}

// ---------------------------------------------------------------------------
// iterated reduction

enum class ReductionMethod { Simulation, Bisimulation };

inline const char* to_string(ReductionMethod m) {
    return m == ReductionMethod::Simulation ? "simulation" : "bisimulation";
}

struct ReductionIteration {
    bool forward;
    StateId states_before, states_after;
    std::size_t trans_before, trans_after;
    double ms;
};

struct ReductionReport {
    ReductionMethod method = ReductionMethod::Simulation;
    std::vector<ReductionIteration> iterations;

    /// `iter,direction,states_before,states_after,trans_before,trans_after,ms`
    void write_csv(std::ostream& os) const {
        os << "iter,direction,states_before,states_after,trans_before,trans_after,ms\n";
        for (std::size_t k = 0; k < iterations.size(); ++k) {
            const ReductionIteration& it = iterations[k];
            os << (k + 1) << ',' << (it.forward ? "forward" : "backward") << ','
               << it.states_before << ',' << it.states_after << ',' << it.trans_before << ','
               << it.trans_after << ',' << it.ms << "\n";
        }
    }
};

/// One reduction pass: relation on a completed copy (sink stripped again
/// before quotienting), quotient, and for the simulation method also
/// little-brother removal; both methods end with a trim.
inline Sfa reduce_once(const Sfa& m, ReductionMethod method, const ResourceLimits& lim = {}) {
    const CompletionResult comp = complete(m);
    Relation rel = method == ReductionMethod::Simulation ? nocount_sim(comp.sfa, lim)
                                                         : bisimulation(comp.sfa);
    if (!comp.was_complete) rel = rel.restricted_to_first(m.n());
    auto [q, part] = quotient_with_classes(m, rel);
    if (method == ReductionMethod::Bisimulation) return trim_unreachable(q);
    // the preorder lifts to classes through their representatives
    const auto k = static_cast<StateId>(part.representative.size());
    Relation lifted(k);
    for (StateId a = 0; a < k; ++a)
        for (StateId c = 0; c < k; ++c)
            if (rel.get(part.representative[a], part.representative[c])) lifted.set(a, c, true);
    return remove_little_brothers(q, lifted);
}

/// Quotient + little-brother removal, then reverse and repeat until the
/// state count stops decreasing or the iteration cap is reached; the result
/// comes back in the original orientation.
inline std::pair<Sfa, ReductionReport> reduce_iterative(const Sfa& m, ReductionMethod method,
                                                        std::size_t max_iters,
                                                        const ResourceLimits& lim = {}) {
    if (max_iters < 1) throw UsageError("reduce_iterative needs max_iters >= 1");
    ReductionReport report;
    report.method = method;
    Sfa cur = m;
    unsigned reversals = 0;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        const auto t0 = std::chrono::steady_clock::now();
        const StateId before = cur.n();
        const std::size_t tbefore = cur.transition_count();
        Sfa next = reduce_once(cur, method, lim);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        report.iterations.push_back(
            {reversals % 2 == 0, before, next.n(), tbefore, next.transition_count(), ms});
        cur = std::move(next);
        if (cur.n() >= before) break; // no progress on states
        if (iter + 1 < max_iters) {
            cur = reverse(cur);
            ++reversals;
        }
    }
    if (reversals % 2 == 1) cur = reverse(cur);
    return {std::move(cur), std::move(report)};
}

} // namespace sfa
