/* algebra.hh -- effective Boolean algebras: explicit finite sets, Unicode
 * codepoint intervals and fixed-width bitvectors.  Predicates are kept in
 * canonical form per algebra (sorted maximal ranges, sorted symbol bitsets,
 * ROBDD nodes), so predicates with equal denotation compare equal and
 * syntactic equality can stand in for semantic equality. */

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bdd.hh"
#include "errors.hh"

namespace sfa {

using Symbol = std::uint64_t;
using Word = std::vector<Symbol>;

inline constexpr std::uint32_t kMaxCodepoint = 0x10FFFF;

struct CodeRange {
    std::uint32_t lo;
    std::uint32_t hi;

    friend bool operator==(const CodeRange&, const CodeRange&) = default;
};

enum class AlgebraKind { Explicit, Interval, Bitvector };

/// Counts of algebra operations issued so far; see Algebra::counters().
struct OpCounters {
    std::uint64_t conj = 0;
    std::uint64_t disj = 0;
    std::uint64_t neg = 0;
    std::uint64_t sat = 0;
    std::uint64_t minterms = 0;
};

class Algebra;
using AlgebraRef = std::shared_ptr<const Algebra>;

class Predicate {
public:
    Predicate() = default;

    const Algebra* algebra() const { return alg_; }
    bool valid() const { return alg_ != nullptr; }

    friend bool operator==(const Predicate& a, const Predicate& b) {
        return a.alg_ == b.alg_ && a.payload_ == b.payload_;
    }

private:
    friend class Algebra;

    using Ranges = std::vector<CodeRange>;
    using Bits = std::vector<std::uint64_t>;
    struct BddNode {
        std::uint32_t ref = 0;
        friend bool operator==(const BddNode&, const BddNode&) = default;
    };

    Predicate(const Algebra* alg, Ranges r) : alg_(alg), payload_(std::move(r)) {}
    Predicate(const Algebra* alg, Bits b) : alg_(alg), payload_(std::move(b)) {}
    Predicate(const Algebra* alg, BddNode n) : alg_(alg), payload_(n) {}

    const Algebra* alg_ = nullptr;
    std::variant<std::monostate, Ranges, Bits, BddNode> payload_;
};

class Algebra {
public:
    Algebra(const Algebra&) = delete;
    Algebra& operator=(const Algebra&) = delete;

    /// Finite symbol list; duplicates are dropped, order normalised.
    static AlgebraRef make_explicit(std::vector<std::uint32_t> symbols) {
        std::sort(symbols.begin(), symbols.end());
        symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
        if (symbols.empty()) throw UsageError("explicit algebra needs a non-empty domain");
        auto a = std::shared_ptr<Algebra>(new Algebra(AlgebraKind::Explicit));
        a->symbols_ = std::move(symbols);
        return a;
    }

    /// Inclusive codepoint interval [lo, hi], 0 <= lo <= hi <= 0x10FFFF.
    static AlgebraRef make_interval(std::uint32_t lo, std::uint32_t hi) {
        if (lo > hi || hi > kMaxCodepoint) throw UsageError("invalid interval domain bounds");
        auto a = std::shared_ptr<Algebra>(new Algebra(AlgebraKind::Interval));
        a->lo_ = lo;
        a->hi_ = hi;
        return a;
    }

    /// Bitvectors of the given width, 1 <= width <= 64.
    static AlgebraRef make_bitvector(unsigned width) {
        if (width < 1 || width > 64) throw UsageError("bitvector width must be in [1, 64]");
        auto a = std::shared_ptr<Algebra>(new Algebra(AlgebraKind::Bitvector));
        a->width_ = width;
        a->bdd_ = std::make_unique<BddPool>(width);
        return a;
    }

    AlgebraKind kind() const { return kind_; }
    std::uint32_t interval_lo() const { return lo_; }
    std::uint32_t interval_hi() const { return hi_; }
    unsigned width() const { return width_; }
    std::span<const std::uint32_t> explicit_symbols() const { return symbols_; }

    /// Saturates at UINT64_MAX (only the width-64 bitvector domain overflows).
    std::uint64_t domain_size() const {
        switch (kind_) {
            case AlgebraKind::Explicit: return symbols_.size();
            case AlgebraKind::Interval: return std::uint64_t{hi_} - lo_ + 1;
            case AlgebraKind::Bitvector:
                return width_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width_);
        }
        return 0;
    }

    bool in_domain(Symbol s) const {
        switch (kind_) {
            case AlgebraKind::Explicit:
                return std::binary_search(symbols_.begin(), symbols_.end(), s);
            case AlgebraKind::Interval: return s >= lo_ && s <= hi_;
            case AlgebraKind::Bitvector: return width_ >= 64 || s < (std::uint64_t{1} << width_);
        }
        return false;
    }

    // ---- predicate constructors (not counted as operations) ----

    Predicate top() const {
        switch (kind_) {
            case AlgebraKind::Explicit: {
                Predicate::Bits b(word_count(), ~std::uint64_t{0});
                mask_tail(b);
                return Predicate(this, std::move(b));
            }
            case AlgebraKind::Interval: return Predicate(this, Predicate::Ranges{{lo_, hi_}});
            case AlgebraKind::Bitvector: return Predicate(this, Predicate::BddNode{BddPool::kTrue});
        }
        throw UsageError("bad algebra");
    }

    Predicate bottom() const {
        switch (kind_) {
            case AlgebraKind::Explicit: return Predicate(this, Predicate::Bits(word_count(), 0));
            case AlgebraKind::Interval: return Predicate(this, Predicate::Ranges{});
            case AlgebraKind::Bitvector: return Predicate(this, Predicate::BddNode{BddPool::kFalse});
        }
        throw UsageError("bad algebra");
    }

    /// Interval algebra: union of ranges, clipped ranges must lie in the domain.
    Predicate make_ranges(std::vector<CodeRange> ranges) const {
        require_kind(AlgebraKind::Interval);
        for (const CodeRange& r : ranges) {
            if (r.lo > r.hi) throw UsageError("empty range");
            if (r.lo < lo_ || r.hi > hi_) throw UsageError("range outside algebra domain");
        }
        normalise_ranges(ranges);
        return Predicate(this, std::move(ranges));
    }

    /// Explicit algebra: the given subset of the domain.
    Predicate make_symbol_set(std::span<const std::uint32_t> set) const {
        require_kind(AlgebraKind::Explicit);
        Predicate::Bits b(word_count(), 0);
        for (std::uint32_t s : set) {
            const auto it = std::lower_bound(symbols_.begin(), symbols_.end(), s);
            if (it == symbols_.end() || *it != s) throw UsageError("symbol outside algebra domain");
            const std::size_t idx = static_cast<std::size_t>(it - symbols_.begin());
            b[idx >> 6] |= std::uint64_t{1} << (idx & 63);
        }
        return Predicate(this, std::move(b));
    }

    /// Bitvector algebra: the variable b_i.
    Predicate make_bit(unsigned i) const {
        require_kind(AlgebraKind::Bitvector);
        if (i >= width_) throw UsageError("bit index outside bitvector width");
        std::lock_guard lock(mu_);
        return Predicate(this, Predicate::BddNode{bdd_->var(i)});
    }

    /// Bitvector algebra: conjunction of literals; `care` selects the fixed
    /// bits, `value` their polarity.
    Predicate make_cube(std::uint64_t care, std::uint64_t value) const {
        require_kind(AlgebraKind::Bitvector);
        std::lock_guard lock(mu_);
        BddPool::Ref r = BddPool::kTrue;
        for (unsigned i = width_; i-- > 0;) {
            if (!((care >> i) & 1u)) continue;
            r = bdd_->conj(r, ((value >> i) & 1u) ? bdd_->var(i) : bdd_->nvar(i));
        }
        return Predicate(this, Predicate::BddNode{r});
    }

    /// Any algebra: the predicate denoting exactly {s}.
    Predicate singleton(Symbol s) const {
        if (!in_domain(s)) throw UsageError("symbol outside algebra domain");
        switch (kind_) {
            case AlgebraKind::Explicit: {
                const std::uint32_t v = static_cast<std::uint32_t>(s);
                return make_symbol_set(std::span<const std::uint32_t>(&v, 1));
            }
            case AlgebraKind::Interval: {
                const auto c = static_cast<std::uint32_t>(s);
                return Predicate(this, Predicate::Ranges{{c, c}});
            }
            case AlgebraKind::Bitvector:
                return make_cube(width_ >= 64 ? ~std::uint64_t{0}
                                              : (std::uint64_t{1} << width_) - 1,
                                 s);
        }
        throw UsageError("bad algebra");
    }

    // ---- predicate transformers (counted) ----

    Predicate conj(const Predicate& p, const Predicate& q) const {
        require_mine(p);
        require_mine(q);
        counters_.conj.fetch_add(1, std::memory_order_relaxed);
        switch (kind_) {
            case AlgebraKind::Explicit: {
                Predicate::Bits out = bits(p);
                const Predicate::Bits& b = bits(q);
                for (std::size_t i = 0; i < out.size(); ++i) out[i] &= b[i];
                return Predicate(this, std::move(out));
            }
            case AlgebraKind::Interval:
                return Predicate(this, intersect_ranges(ranges(p), ranges(q)));
            case AlgebraKind::Bitvector: {
                std::lock_guard lock(mu_);
                return Predicate(this, Predicate::BddNode{bdd_->conj(node(p), node(q))});
            }
        }
        throw UsageError("bad algebra");
    }

    Predicate disj(const Predicate& p, const Predicate& q) const {
        require_mine(p);
        require_mine(q);
        counters_.disj.fetch_add(1, std::memory_order_relaxed);
        switch (kind_) {
            case AlgebraKind::Explicit: {
                Predicate::Bits out = bits(p);
                const Predicate::Bits& b = bits(q);
                for (std::size_t i = 0; i < out.size(); ++i) out[i] |= b[i];
                return Predicate(this, std::move(out));
            }
            case AlgebraKind::Interval: {
                Predicate::Ranges out = ranges(p);
                const Predicate::Ranges& b = ranges(q);
                out.insert(out.end(), b.begin(), b.end());
                normalise_ranges(out);
                return Predicate(this, std::move(out));
            }
            case AlgebraKind::Bitvector: {
                std::lock_guard lock(mu_);
                return Predicate(this, Predicate::BddNode{bdd_->disj(node(p), node(q))});
            }
        }
        throw UsageError("bad algebra");
    }

    Predicate neg(const Predicate& p) const {
        require_mine(p);
        counters_.neg.fetch_add(1, std::memory_order_relaxed);
        switch (kind_) {
            case AlgebraKind::Explicit: {
                Predicate::Bits out = bits(p);
                for (auto& w : out) w = ~w;
                mask_tail(out);
                return Predicate(this, std::move(out));
            }
            case AlgebraKind::Interval: {
                Predicate::Ranges out;
                std::uint32_t next = lo_;
                bool open = true;
                for (const CodeRange& r : ranges(p)) {
                    if (r.lo > next) out.push_back({next, r.lo - 1});
                    if (r.hi >= hi_) {
                        open = false;
                        break;
                    }
                    next = r.hi + 1;
                }
                if (open) out.push_back({next, hi_});
                return Predicate(this, std::move(out));
            }
            case AlgebraKind::Bitvector: {
                std::lock_guard lock(mu_);
                return Predicate(this, Predicate::BddNode{bdd_->neg(node(p))});
            }
        }
        throw UsageError("bad algebra");
    }

    bool is_sat(const Predicate& p) const {
        require_mine(p);
        counters_.sat.fetch_add(1, std::memory_order_relaxed);
        switch (kind_) {
            case AlgebraKind::Explicit:
                for (std::uint64_t w : bits(p))
                    if (w) return true;
                return false;
            case AlgebraKind::Interval: return !ranges(p).empty();
            case AlgebraKind::Bitvector: return node(p) != BddPool::kFalse;
        }
        throw UsageError("bad algebra");
    }

    /// Membership test; a denotational query, not a counted transformer.
    bool contains(const Predicate& p, Symbol s) const {
        require_mine(p);
        if (!in_domain(s)) return false;
        switch (kind_) {
            case AlgebraKind::Explicit: {
                const auto it = std::lower_bound(symbols_.begin(), symbols_.end(),
                                                 static_cast<std::uint32_t>(s));
                const std::size_t idx = static_cast<std::size_t>(it - symbols_.begin());
                return (bits(p)[idx >> 6] >> (idx & 63)) & 1u;
            }
            case AlgebraKind::Interval: {
                const Predicate::Ranges& rs = ranges(p);
                auto it = std::upper_bound(rs.begin(), rs.end(), s,
                                           [](Symbol v, const CodeRange& r) { return v < r.lo; });
                return it != rs.begin() && s <= std::prev(it)->hi;
            }
            case AlgebraKind::Bitvector: {
                std::lock_guard lock(mu_);
                return bdd_->eval(node(p), s);
            }
        }
        throw UsageError("bad algebra");
    }

    /// Up to `limit` symbols of the denotation in ascending domain order.
    std::vector<Symbol> enumerate(const Predicate& p, std::size_t limit) const {
        require_mine(p);
        std::vector<Symbol> out;
        if (limit == 0) return out;
        switch (kind_) {
            case AlgebraKind::Explicit: {
                const Predicate::Bits& b = bits(p);
                for (std::size_t i = 0; i < symbols_.size() && out.size() < limit; ++i)
                    if ((b[i >> 6] >> (i & 63)) & 1u) out.push_back(symbols_[i]);
                return out;
            }
            case AlgebraKind::Interval:
                for (const CodeRange& r : ranges(p))
                    for (std::uint64_t c = r.lo; c <= r.hi; ++c) {
                        out.push_back(c);
                        if (out.size() >= limit) return out;
                    }
                return out;
            case AlgebraKind::Bitvector: {
                std::lock_guard lock(mu_);
                bdd_->enumerate(node(p), limit, out);
                return out;
            }
        }
        throw UsageError("bad algebra");
    }

    /// All satisfiable sign-assignments over the given predicate set, built by
    /// refining cells with phi / not-phi and pruning unsatisfiable cells, so
    /// cost tracks the output size rather than 2^|set|.  Throws a
    /// ResourceError(MintermCap) if the cell count ever exceeds `cap`.
    std::vector<Predicate> minterms(std::span<const Predicate> preds,
                                    std::optional<std::size_t> cap = {}) const {
        counters_.minterms.fetch_add(1, std::memory_order_relaxed);
        std::vector<Predicate> distinct;
        for (const Predicate& p : preds) {
            require_mine(p);
            if (std::find(distinct.begin(), distinct.end(), p) == distinct.end())
                distinct.push_back(p);
        }
        std::vector<Predicate> cells{top()};
        for (const Predicate& phi : distinct) {
            const Predicate nphi = neg(phi);
            std::vector<Predicate> next;
            next.reserve(cells.size() * 2);
            for (const Predicate& cell : cells) {
                Predicate with = conj(cell, phi);
                if (is_sat(with)) next.push_back(std::move(with));
                Predicate without = conj(cell, nphi);
                if (is_sat(without)) next.push_back(std::move(without));
            }
            cells = std::move(next);
            if (cap && cells.size() > *cap)
                throw ResourceError(ResourceKind::MintermCap,
                                    "minterm count exceeds cap of " + std::to_string(*cap));
        }
        return cells;
    }

    OpCounters counters() const {
        OpCounters c;
        c.conj = counters_.conj.load(std::memory_order_relaxed);
        c.disj = counters_.disj.load(std::memory_order_relaxed);
        c.neg = counters_.neg.load(std::memory_order_relaxed);
        c.sat = counters_.sat.load(std::memory_order_relaxed);
        c.minterms = counters_.minterms.load(std::memory_order_relaxed);
        return c;
    }

    void reset_counters() const {
        counters_.conj.store(0, std::memory_order_relaxed);
        counters_.disj.store(0, std::memory_order_relaxed);
        counters_.neg.store(0, std::memory_order_relaxed);
        counters_.sat.store(0, std::memory_order_relaxed);
        counters_.minterms.store(0, std::memory_order_relaxed);
    }

    /// Deterministic total order on canonical payloads of one algebra.
    static int compare(const Predicate& a, const Predicate& b) {
        if (a.alg_ != b.alg_) throw UsageError("comparing predicates of different algebras");
        if (a.payload_.index() != b.payload_.index())
            return a.payload_.index() < b.payload_.index() ? -1 : 1;
        if (std::holds_alternative<Predicate::Ranges>(a.payload_)) {
            const auto& x = std::get<Predicate::Ranges>(a.payload_);
            const auto& y = std::get<Predicate::Ranges>(b.payload_);
            for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
                if (x[i].lo != y[i].lo) return x[i].lo < y[i].lo ? -1 : 1;
                if (x[i].hi != y[i].hi) return x[i].hi < y[i].hi ? -1 : 1;
            }
            if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
            return 0;
        }
        if (std::holds_alternative<Predicate::Bits>(a.payload_)) {
            const auto& x = std::get<Predicate::Bits>(a.payload_);
            const auto& y = std::get<Predicate::Bits>(b.payload_);
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] != y[i]) return x[i] < y[i] ? -1 : 1;
            return 0;
        }
        if (std::holds_alternative<Predicate::BddNode>(a.payload_)) {
            const auto x = std::get<Predicate::BddNode>(a.payload_).ref;
            const auto y = std::get<Predicate::BddNode>(b.payload_).ref;
            return x == y ? 0 : (x < y ? -1 : 1);
        }
        return 0;
    }

    static std::size_t hash(const Predicate& p) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        auto mix = [&h](std::uint64_t v) {
            for (int i = 0; i < 8; ++i) {
                h ^= (v >> (i * 8)) & 0xff;
                h *= 0x100000001b3ull;
            }
        };
        if (const auto* rs = std::get_if<Predicate::Ranges>(&p.payload_)) {
            for (const CodeRange& r : *rs) mix((std::uint64_t{r.lo} << 32) | r.hi);
        } else if (const auto* bs = std::get_if<Predicate::Bits>(&p.payload_)) {
            for (std::uint64_t w : *bs) mix(w);
        } else if (const auto* n = std::get_if<Predicate::BddNode>(&p.payload_)) {
            mix(n->ref);
        }
        return static_cast<std::size_t>(h);
    }

    // internal accessors for the text layer
    std::uint32_t bdd_ref(const Predicate& p) const { return node(p); }
    Predicate from_bdd_ref(std::uint32_t ref) const {
        require_kind(AlgebraKind::Bitvector);
        return Predicate(this, Predicate::BddNode{ref});
    }
    BddPool& bdd_pool() const { return *bdd_; }
    std::mutex& bdd_mutex() const { return mu_; }
    const std::vector<CodeRange>& range_payload(const Predicate& p) const { return ranges(p); }
    const std::vector<std::uint64_t>& bits_payload(const Predicate& p) const { return bits(p); }

private:
    explicit Algebra(AlgebraKind k) : kind_(k) {}

    void require_kind(AlgebraKind k) const {
        if (kind_ != k) throw UsageError("operation not supported by this algebra kind");
    }

    void require_mine(const Predicate& p) const {
        if (p.alg_ != this)
            throw UsageError(p.alg_ ? "algebra mismatch between predicate operands"
                                    : "operation on a null predicate");
    }

    std::size_t word_count() const { return (symbols_.size() + 63) / 64; }

    void mask_tail(Predicate::Bits& b) const {
        const std::size_t rem = symbols_.size() & 63;
        if (rem && !b.empty()) b.back() &= (std::uint64_t{1} << rem) - 1;
    }

    static const Predicate::Ranges& ranges(const Predicate& p) {
        return std::get<Predicate::Ranges>(p.payload_);
    }
    static const Predicate::Bits& bits(const Predicate& p) {
        return std::get<Predicate::Bits>(p.payload_);
    }
    static std::uint32_t node(const Predicate& p) {
        return std::get<Predicate::BddNode>(p.payload_).ref;
    }

    /// Sorts, merges overlapping and adjacent ranges.  Codepoint bounds stay
    /// below 2^32 - 1, so hi + 1 cannot overflow.
    static void normalise_ranges(Predicate::Ranges& rs) {
        std::sort(rs.begin(), rs.end(),
                  [](const CodeRange& a, const CodeRange& b) { return a.lo < b.lo; });
        Predicate::Ranges out;
        for (const CodeRange& r : rs) {
            if (!out.empty() && r.lo <= out.back().hi + 1) {
                if (r.hi > out.back().hi) out.back().hi = r.hi;
            } else {
                out.push_back(r);
            }
        }
        rs = std::move(out);
    }

    static Predicate::Ranges intersect_ranges(const Predicate::Ranges& a,
                                              const Predicate::Ranges& b) {
        Predicate::Ranges out;
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            const std::uint32_t lo = std::max(a[i].lo, b[j].lo);
            const std::uint32_t hi = std::min(a[i].hi, b[j].hi);
            if (lo <= hi) out.push_back({lo, hi});
            if (a[i].hi < b[j].hi)
                ++i;
            else
                ++j;
        }
        return out;
    }

    AlgebraKind kind_;
    std::vector<std::uint32_t> symbols_; // explicit, sorted
    std::uint32_t lo_ = 0, hi_ = 0;      // interval
    unsigned width_ = 0;                 // bitvector
    std::unique_ptr<BddPool> bdd_;       // bitvector
    mutable std::mutex mu_;

    struct AtomicCounters {
        std::atomic<std::uint64_t> conj{0}, disj{0}, neg{0}, sat{0}, minterms{0};
    };
    mutable AtomicCounters counters_;
};

// Convenience operators; both operands must come from one algebra.
inline Predicate operator&(const Predicate& p, const Predicate& q) {
    return p.algebra()->conj(p, q);
}
inline Predicate operator|(const Predicate& p, const Predicate& q) {
    return p.algebra()->disj(p, q);
}
inline Predicate operator!(const Predicate& p) { return p.algebra()->neg(p); }

inline bool is_sat(const Predicate& p) { return p.algebra()->is_sat(p); }

} // namespace sfa
