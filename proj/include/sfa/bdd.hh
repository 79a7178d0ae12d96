/* bdd.hh -- reduced ordered binary decision diagrams for the bitvector
 * algebra.  Variables are the bit positions b0..b{k-1}, b0 is the least
 * significant bit and sits at the root (ascending order).  Node 0 is the
 * false terminal, node 1 the true terminal; equal denotations always share
 * one node index, so node equality is semantic equality. */

#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace sfa {

class BddPool {
public:
    using Ref = std::uint32_t;
    static constexpr Ref kFalse = 0;
    static constexpr Ref kTrue = 1;

    explicit BddPool(unsigned width) : width_(width) {
        nodes_.push_back({kLeafVar, 0, 0}); // false
        nodes_.push_back({kLeafVar, 1, 1}); // true
    }

    unsigned width() const { return width_; }
    std::size_t node_count() const { return nodes_.size(); }

    struct NodeView {
        unsigned var;
        Ref lo, hi;
    };
    NodeView node_info(Ref a) const {
        const Node n = nodes_[a];
        return {n.var, n.lo, n.hi};
    }

    Ref var(unsigned i) { return mk(i, kFalse, kTrue); }
    Ref nvar(unsigned i) { return mk(i, kTrue, kFalse); }

    Ref conj(Ref a, Ref b) {
        if (a == kFalse || b == kFalse) return kFalse;
        if (a == kTrue) return b;
        if (b == kTrue) return a;
        if (a == b) return a;
        if (a > b) std::swap(a, b);
        const std::uint64_t key = pack2(a, b);
        if (auto it = and_cache_.find(key); it != and_cache_.end()) return it->second;
        const Node na = nodes_[a];  // by value: mk() may reallocate nodes_
        const Node nb = nodes_[b];
        const unsigned v = na.var < nb.var ? na.var : nb.var;
        const Ref a0 = na.var == v ? na.lo : a;
        const Ref a1 = na.var == v ? na.hi : a;
        const Ref b0 = nb.var == v ? nb.lo : b;
        const Ref b1 = nb.var == v ? nb.hi : b;
        const Ref r = mk(v, conj(a0, b0), conj(a1, b1));
        and_cache_.emplace(key, r);
        return r;
    }

    Ref disj(Ref a, Ref b) {
        if (a == kTrue || b == kTrue) return kTrue;
        if (a == kFalse) return b;
        if (b == kFalse) return a;
        if (a == b) return a;
        if (a > b) std::swap(a, b);
        const std::uint64_t key = pack2(a, b);
        if (auto it = or_cache_.find(key); it != or_cache_.end()) return it->second;
        const Node na = nodes_[a];  // by value: mk() may reallocate nodes_
        const Node nb = nodes_[b];
        const unsigned v = na.var < nb.var ? na.var : nb.var;
        const Ref a0 = na.var == v ? na.lo : a;
        const Ref a1 = na.var == v ? na.hi : a;
        const Ref b0 = nb.var == v ? nb.lo : b;
        const Ref b1 = nb.var == v ? nb.hi : b;
        const Ref r = mk(v, disj(a0, b0), disj(a1, b1));
        or_cache_.emplace(key, r);
        return r;
    }

    Ref neg(Ref a) {
        if (a == kFalse) return kTrue;
        if (a == kTrue) return kFalse;
        if (auto it = not_cache_.find(a); it != not_cache_.end()) return it->second;
        const Node n = nodes_[a];  // by value: mk() may reallocate nodes_
        const Ref r = mk(n.var, neg(n.lo), neg(n.hi));
        not_cache_.emplace(a, r);
        return r;
    }

    bool eval(Ref a, std::uint64_t value) const {
        while (a > kTrue) {
            const Node& n = nodes_[a];
            a = ((value >> n.var) & 1u) ? n.hi : n.lo;
        }
        return a == kTrue;
    }

    /// Cofactor wrt a single variable; var need not be at the root.
    Ref restrict_var(Ref a, unsigned var, bool val) {
        restrict_memo_.clear();
        return restrict_rec(a, var, val);
    }

    /// Satisfying assignments in ascending numeric order, at most `limit`.
    /// Free bits of a cube are expanded, smallest value first.
    void enumerate(Ref a, std::size_t limit, std::vector<std::uint64_t>& out) {
        if (limit == 0 || a == kFalse) return;
        enum_rec(a, width_, 0, limit, out);
    }

private:
    static constexpr unsigned kLeafVar = 0xffffffffu;

    struct Node {
        unsigned var;
        Ref lo, hi;
    };

    static std::uint64_t pack2(std::uint64_t a, std::uint64_t b) { return (a << 32) | b; }

    Ref mk(unsigned var, Ref lo, Ref hi) {
        if (lo == hi) return lo;
        // exact 6+29+29 bit key; the pool never grows anywhere near 2^29 nodes
        const std::uint64_t key =
            (static_cast<std::uint64_t>(var) << 58) | (static_cast<std::uint64_t>(lo) << 29) | hi;
        if (auto it = unique_.find(key); it != unique_.end()) return it->second;
        const Ref r = static_cast<Ref>(nodes_.size());
        nodes_.push_back({var, lo, hi});
        unique_.emplace(key, r);
        return r;
    }

    Ref restrict_rec(Ref a, unsigned var, bool val) {
        if (a <= kTrue) return a;
        const Node n = nodes_[a];  // by value: mk() may reallocate nodes_
        if (n.var > var) return a; // var cannot occur below
        if (n.var == var) return val ? n.hi : n.lo;
        if (auto it = restrict_memo_.find(a); it != restrict_memo_.end()) return it->second;
        const Ref r = mk(n.var, restrict_rec(n.lo, var, val), restrict_rec(n.hi, var, val));
        restrict_memo_.emplace(a, r);
        return r;
    }

    // Fix bits from the most significant one down so values come out sorted.
    void enum_rec(Ref a, unsigned bits_left, std::uint64_t prefix, std::size_t limit,
                  std::vector<std::uint64_t>& out) {
        if (out.size() >= limit || a == kFalse) return;
        if (bits_left == 0) {
            out.push_back(prefix);
            return;
        }
        const unsigned bit = bits_left - 1;
        enum_rec(restrict_var(a, bit, false), bit, prefix, limit, out);
        if (out.size() >= limit) return;
        enum_rec(restrict_var(a, bit, true), bit, prefix | (std::uint64_t{1} << bit), limit, out);
    }

    unsigned width_;
    std::vector<Node> nodes_;
    std::unordered_map<std::uint64_t, Ref> unique_;
    std::unordered_map<std::uint64_t, Ref> and_cache_;
    std::unordered_map<std::uint64_t, Ref> or_cache_;
    std::unordered_map<Ref, Ref> not_cache_;
    std::unordered_map<Ref, Ref> restrict_memo_;
};

} // namespace sfa
