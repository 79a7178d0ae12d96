/* automaton.hh -- symbolic finite automata: representation, completion,
 * global/local mintermisation, reversal and bounded word checks.  Automata
 * are immutable once built; transformations return new values. */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "algebra.hh"
#include "errors.hh"

namespace sfa {

using StateId = std::uint32_t;

struct Transition {
    StateId source;
    Predicate guard;
    StateId target;

    friend bool operator==(const Transition&, const Transition&) = default;
};

class SfaBuilder;

/// M = (Q, A, Delta, I, F).  States are dense indices [0, n).  Transitions
/// are stored sorted by (source, target, guard) with per-state outgoing
/// ranges and an incoming index, so iteration order is deterministic.
class Sfa {
public:
    Sfa() = default;

    StateId n() const { return n_; }
    std::size_t transition_count() const { return trans_.size(); }
    const AlgebraRef& algebra() const { return algebra_; }
    std::span<const Transition> transitions() const { return trans_; }

    std::span<const Transition> out(StateId q) const {
        return {trans_.data() + out_begin_[q], trans_.data() + out_begin_[q + 1]};
    }
    /// Index into transitions() of q's first outgoing transition.
    std::uint32_t out_offset(StateId q) const { return out_begin_[q]; }
    /// Indices into transitions() of the transitions entering q.
    std::span<const std::uint32_t> in(StateId q) const {
        return {in_list_.data() + in_begin_[q], in_list_.data() + in_begin_[q + 1]};
    }

    bool is_initial(StateId q) const { return initial_[q]; }
    bool is_final(StateId q) const { return final_[q]; }

    std::vector<StateId> initial_states() const {
        std::vector<StateId> out;
        for (StateId q = 0; q < n_; ++q)
            if (initial_[q]) out.push_back(q);
        return out;
    }
    std::vector<StateId> final_states() const {
        std::vector<StateId> out;
        for (StateId q = 0; q < n_; ++q)
            if (final_[q]) out.push_back(q);
        return out;
    }

    std::size_t max_out_degree() const {
        std::size_t b = 0;
        for (StateId q = 0; q < n_; ++q) b = std::max(b, out(q).size());
        return b;
    }

    friend bool operator==(const Sfa& a, const Sfa& b) {
        return a.algebra_ == b.algebra_ && a.n_ == b.n_ && a.trans_ == b.trans_ &&
               a.initial_ == b.initial_ && a.final_ == b.final_;
    }

private:
    friend class SfaBuilder;

    AlgebraRef algebra_;
    StateId n_ = 0;
    std::vector<Transition> trans_;
    std::vector<std::uint32_t> out_begin_;
    std::vector<std::uint32_t> in_list_;
    std::vector<std::uint32_t> in_begin_;
    std::vector<char> initial_;
    std::vector<char> final_;
};

class SfaBuilder {
public:
    SfaBuilder(AlgebraRef algebra, StateId n)
        : algebra_(std::move(algebra)), n_(n), initial_(n, 0), final_(n, 0) {
        if (!algebra_) throw UsageError("automaton needs an algebra");
    }

    /// Guards must be satisfiable predicates of the automaton's algebra.
    SfaBuilder& add_transition(StateId src, Predicate guard, StateId tgt) {
        if (src >= n_ || tgt >= n_) throw UsageError("transition endpoint out of range");
        if (guard.algebra() != algebra_.get())
            throw UsageError("transition guard from a different algebra");
        if (!algebra_->is_sat(guard)) throw UsageError("transition guard is unsatisfiable");
        trans_.push_back({src, std::move(guard), tgt});
        return *this;
    }

    SfaBuilder& set_initial(StateId q) {
        if (q >= n_) throw UsageError("initial state out of range");
        initial_[q] = 1;
        return *this;
    }

    SfaBuilder& set_final(StateId q) {
        if (q >= n_) throw UsageError("final state out of range");
        final_[q] = 1;
        return *this;
    }

    /// Merge parallel (source, target) transitions by guard disjunction.
    /// File readers and the regex compiler use this; mintermisers must not.
    SfaBuilder& merge_parallel(bool on = true) {
        merge_parallel_ = on;
        return *this;
    }

    Sfa build() {
        if (merge_parallel_) {
            std::map<std::pair<StateId, StateId>, Predicate> merged;
            for (Transition& t : trans_) {
                auto [it, fresh] = merged.try_emplace({t.source, t.target}, t.guard);
                if (!fresh) it->second = algebra_->disj(it->second, t.guard);
            }
            trans_.clear();
            for (auto& [key, guard] : merged)
                trans_.push_back({key.first, std::move(guard), key.second});
        }
        std::sort(trans_.begin(), trans_.end(), [](const Transition& a, const Transition& b) {
            if (a.source != b.source) return a.source < b.source;
            if (a.target != b.target) return a.target < b.target;
            return Algebra::compare(a.guard, b.guard) < 0;
        });
        trans_.erase(std::unique(trans_.begin(), trans_.end()), trans_.end());

        Sfa m;
        m.algebra_ = algebra_;
        m.n_ = n_;
        m.trans_ = std::move(trans_);
        m.initial_ = std::move(initial_);
        m.final_ = std::move(final_);

        m.out_begin_.assign(n_ + 1, 0);
        for (const Transition& t : m.trans_) ++m.out_begin_[t.source + 1];
        for (StateId q = 0; q < n_; ++q) m.out_begin_[q + 1] += m.out_begin_[q];

        std::vector<std::uint32_t> by_target(m.trans_.size());
        for (std::uint32_t i = 0; i < by_target.size(); ++i) by_target[i] = i;
        std::stable_sort(by_target.begin(), by_target.end(),
                         [&m](std::uint32_t x, std::uint32_t y) {
                             return m.trans_[x].target < m.trans_[y].target;
                         });
        m.in_list_ = std::move(by_target);
        m.in_begin_.assign(n_ + 1, 0);
        for (std::uint32_t idx : m.in_list_) ++m.in_begin_[m.trans_[idx].target + 1];
        for (StateId q = 0; q < n_; ++q) m.in_begin_[q + 1] += m.in_begin_[q];
        return m;
    }

private:
    AlgebraRef algebra_;
    StateId n_;
    std::vector<Transition> trans_;
    std::vector<char> initial_;
    std::vector<char> final_;
    bool merge_parallel_ = false;
};

// ---------------------------------------------------------------------------
// completion

struct CompletionResult {
    Sfa sfa;
    bool was_complete;
    std::optional<StateId> sink;
};

/// First state with an uncovered symbol, plus one such witness symbol.
inline std::optional<std::pair<StateId, Symbol>> incompleteness_witness(const Sfa& m) {
    const Algebra& alg = *m.algebra();
    for (StateId q = 0; q < m.n(); ++q) {
        Predicate covered = alg.bottom();
        for (const Transition& t : m.out(q)) covered = alg.disj(covered, t.guard);
        const Predicate residual = alg.neg(covered);
        if (alg.is_sat(residual)) return std::make_pair(q, alg.enumerate(residual, 1)[0]);
    }
    return std::nullopt;
}

/// Adds at most one non-final sink state with a top self-loop; every state
/// with a satisfiable residual gets a residual-guarded edge to the sink.
/// Returns the input unchanged (flagged) when it is already complete.
inline CompletionResult complete(const Sfa& m) {
    const Algebra& alg = *m.algebra();
    std::vector<std::pair<StateId, Predicate>> residuals;
    for (StateId q = 0; q < m.n(); ++q) {
        Predicate covered = alg.bottom();
        for (const Transition& t : m.out(q)) covered = alg.disj(covered, t.guard);
        Predicate residual = alg.neg(covered);
        if (alg.is_sat(residual)) residuals.emplace_back(q, std::move(residual));
    }
    if (residuals.empty()) return {m, true, std::nullopt};

    const StateId sink = m.n();
    SfaBuilder b(m.algebra(), m.n() + 1);
    for (const Transition& t : m.transitions()) b.add_transition(t.source, t.guard, t.target);
    for (auto& [q, residual] : residuals) b.add_transition(q, std::move(residual), sink);
    b.add_transition(sink, alg.top(), sink);
    for (StateId q = 0; q < m.n(); ++q) {
        if (m.is_initial(q)) b.set_initial(q);
        if (m.is_final(q)) b.set_final(q);
    }
    return {b.build(), false, sink};
}

// ---------------------------------------------------------------------------
// mintermisation

struct MintermStats {
    std::size_t transitions_before = 0;
    std::size_t transitions_after = 0;
    std::size_t minterm_count = 0;              // distinct cells used on output transitions
    std::vector<std::uint32_t> per_state_minterms; // local variant only
};

namespace detail {

struct PredHash {
    std::size_t operator()(const Predicate& p) const { return Algebra::hash(p); }
};

/// Distinct guards in first-occurrence order.
inline std::vector<Predicate> distinct_guards(std::span<const Transition> ts) {
    std::vector<Predicate> out;
    std::unordered_set<Predicate, PredHash> seen;
    for (const Transition& t : ts)
        if (seen.insert(t.guard).second) out.push_back(t.guard);
    return out;
}

} // namespace detail

/// Rewrites the automaton so that all transition guards form a partition of
/// the domain; language and simulation preorder are preserved.
inline std::pair<Sfa, MintermStats> global_mintermise(const Sfa& m,
                                                      std::optional<std::size_t> cap = {}) {
    const Algebra& alg = *m.algebra();
    const std::vector<Predicate> guards = detail::distinct_guards(m.transitions());
    const std::vector<Predicate> cells = alg.minterms(guards, cap);

    SfaBuilder b(m.algebra(), m.n());
    std::vector<char> used(cells.size(), 0);
    for (const Transition& t : m.transitions())
        for (std::size_t c = 0; c < cells.size(); ++c)
            if (alg.is_sat(alg.conj(cells[c], t.guard))) {
                b.add_transition(t.source, cells[c], t.target);
                used[c] = 1;
            }
    for (StateId q = 0; q < m.n(); ++q) {
        if (m.is_initial(q)) b.set_initial(q);
        if (m.is_final(q)) b.set_final(q);
    }
    Sfa out = b.build();
    MintermStats stats;
    stats.transitions_before = m.transition_count();
    stats.transitions_after = out.transition_count();
    for (char u : used) stats.minterm_count += u;
    return {std::move(out), std::move(stats)};
}

/// Rewrites each state's outgoing guards into a partition of their union.
inline std::pair<Sfa, MintermStats> local_mintermise(const Sfa& m,
                                                     std::optional<std::size_t> cap = {}) {
    const Algebra& alg = *m.algebra();
    SfaBuilder b(m.algebra(), m.n());
    MintermStats stats;
    stats.transitions_before = m.transition_count();
    stats.per_state_minterms.assign(m.n(), 0);
    for (StateId q = 0; q < m.n(); ++q) {
        const auto ts = m.out(q);
        if (ts.empty()) continue;
        const std::vector<Predicate> guards = detail::distinct_guards(ts);
        const std::vector<Predicate> cells = alg.minterms(guards, cap);
        std::vector<char> used(cells.size(), 0);
        for (const Transition& t : ts)
            for (std::size_t c = 0; c < cells.size(); ++c)
                if (alg.is_sat(alg.conj(cells[c], t.guard))) {
                    b.add_transition(q, cells[c], t.target);
                    used[c] = 1;
                }
        for (char u : used) stats.per_state_minterms[q] += u;
        stats.minterm_count += stats.per_state_minterms[q];
    }
    for (StateId q = 0; q < m.n(); ++q) {
        if (m.is_initial(q)) b.set_initial(q);
        if (m.is_final(q)) b.set_final(q);
    }
    Sfa out = b.build();
    stats.transitions_after = out.transition_count();
    return {std::move(out), std::move(stats)};
}

// ---------------------------------------------------------------------------
// reversal and bounded word checks

inline Sfa reverse(const Sfa& m) {
    SfaBuilder b(m.algebra(), m.n());
    for (const Transition& t : m.transitions()) b.add_transition(t.target, t.guard, t.source);
    for (StateId q = 0; q < m.n(); ++q) {
        if (m.is_initial(q)) b.set_final(q);
        if (m.is_final(q)) b.set_initial(q);
    }
    return b.build();
}

using StateSet = std::set<StateId>;

namespace detail {

inline StateSet post(const Sfa& m, const StateSet& s, const Predicate& cell) {
    const Algebra& alg = *m.algebra();
    StateSet out;
    for (StateId q : s)
        for (const Transition& t : m.out(q))
            if (alg.is_sat(alg.conj(t.guard, cell))) out.insert(t.target);
    return out;
}

inline StateSet post_symbol(const Sfa& m, const StateSet& s, Symbol a) {
    const Algebra& alg = *m.algebra();
    StateSet out;
    for (StateId q : s)
        for (const Transition& t : m.out(q))
            if (alg.contains(t.guard, a)) out.insert(t.target);
    return out;
}

inline bool any_final(const Sfa& m, const StateSet& s) {
    for (StateId q : s)
        if (m.is_final(q)) return true;
    return false;
}

inline std::vector<Predicate> outgoing_guards(const Sfa& m, const StateSet& s) {
    std::vector<Predicate> out;
    std::unordered_set<Predicate, PredHash> seen;
    for (StateId q : s)
        for (const Transition& t : m.out(q))
            if (seen.insert(t.guard).second) out.push_back(t.guard);
    return out;
}

} // namespace detail

/// Nondeterministic membership via state-set stepping through the guards.
inline bool accepts(const Sfa& m, const Word& word) {
    const Algebra& alg = *m.algebra();
    for (Symbol a : word)
        if (!alg.in_domain(a))
            throw UsageError("word symbol " + std::to_string(a) + " outside the domain");
    StateSet cur;
    for (StateId q = 0; q < m.n(); ++q)
        if (m.is_initial(q)) cur.insert(q);
    for (Symbol a : word) {
        if (cur.empty()) return false;
        cur = detail::post_symbol(m, cur, a);
    }
    return detail::any_final(m, cur);
}

/// Words of length <= max_len, one representative symbol per distinct
/// successor signature of the stepped state set, so the search stays finite
/// on large domains.
inline std::set<Word> enumerate_language(const Sfa& m, std::size_t max_len = 8) {
    const Algebra& alg = *m.algebra();
    std::set<Word> out;
    StateSet init;
    for (StateId q = 0; q < m.n(); ++q)
        if (m.is_initial(q)) init.insert(q);
    if (init.empty()) return out;

    Word word;
    auto rec = [&](auto&& self, const StateSet& cur) -> void {
        if (detail::any_final(m, cur)) out.insert(word);
        if (word.size() >= max_len) return;
        const auto guards = detail::outgoing_guards(m, cur);
        if (guards.empty()) return;
        std::set<StateSet> seen;
        for (const Predicate& cell : alg.minterms(guards)) {
            StateSet nxt = detail::post(m, cur, cell);
            if (nxt.empty() || !seen.insert(nxt).second) continue;
            word.push_back(alg.enumerate(cell, 1)[0]);
            self(self, nxt);
            word.pop_back();
        }
    };
    rec(rec, init);
    return out;
}

/// Searches for a word of length <= max_len accepted by `a` from set `sa`
/// but not by `b` from `sb`.  Representatives are drawn from minterms over
/// both sides' guards, so the refutation is exact up to the length bound.
inline std::optional<Word> bounded_inclusion_counterexample(const Sfa& a, const StateSet& sa0,
                                                            const Sfa& b, const StateSet& sb0,
                                                            std::size_t max_len) {
    if (a.algebra() != b.algebra())
        throw UsageError("bounded inclusion needs both automata over one algebra");
    const Algebra& alg = *a.algebra();
    std::map<std::pair<StateSet, StateSet>, std::size_t> explored;
    Word word;

    auto rec = [&](auto&& self, const StateSet& sa, const StateSet& sb,
                   std::size_t budget) -> std::optional<Word> {
        if (detail::any_final(a, sa) && !detail::any_final(b, sb)) return word;
        if (budget == 0 || sa.empty()) return std::nullopt;
        auto [it, fresh] = explored.try_emplace({sa, sb}, budget);
        if (!fresh) {
            if (it->second >= budget) return std::nullopt;
            it->second = budget;
        }
        auto guards = detail::outgoing_guards(a, sa);
        for (const Predicate& g : detail::outgoing_guards(b, sb)) {
            if (std::find(guards.begin(), guards.end(), g) == guards.end()) guards.push_back(g);
        }
        if (guards.empty()) return std::nullopt;
        for (const Predicate& cell : alg.minterms(guards)) {
            StateSet na = detail::post(a, sa, cell);
            if (na.empty()) continue; // left side can never accept along this cell
            StateSet nb = detail::post(b, sb, cell);
            word.push_back(alg.enumerate(cell, 1)[0]);
            if (auto w = self(self, na, nb, budget - 1)) return w;
            word.pop_back();
        }
        return std::nullopt;
    };
    return rec(rec, sa0, sb0, max_len);
}

/// L_{<=k}(p) included in L_{<=k}(q), both taken as sole initial states.
inline bool bounded_state_language_included(const Sfa& m, StateId p, StateId q,
                                            std::size_t max_len) {
    return !bounded_inclusion_counterexample(m, {p}, m, {q}, max_len).has_value();
}

inline bool bounded_language_equal(const Sfa& a, const Sfa& b, std::size_t max_len) {
    StateSet ia, ib;
    for (StateId q = 0; q < a.n(); ++q)
        if (a.is_initial(q)) ia.insert(q);
    for (StateId q = 0; q < b.n(); ++q)
        if (b.is_initial(q)) ib.insert(q);
    return !bounded_inclusion_counterexample(a, ia, b, ib, max_len) &&
           !bounded_inclusion_counterexample(b, ib, a, ia, max_len);
}

} // namespace sfa
