/* generator.hh -- seeded, bit-exact reproducible SFA generation: random
 * automata for the property harnesses and the independent-bit family whose
 * global mintermisation blows up exponentially. */

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "automaton.hh"

namespace sfa {

/// splitmix64; raw engine draws only, no library distributions, so streams
/// are identical across platforms.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform-enough draw in [0, bound); bound itself stays tiny here.
    std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }
};

namespace detail {

inline Predicate random_pool_predicate(const AlgebraRef& alg, SplitMix64& rng) {
    switch (alg->kind()) {
        case AlgebraKind::Interval: {
            const std::uint32_t lo = alg->interval_lo(), hi = alg->interval_hi();
            const std::uint64_t dom = std::uint64_t{hi} - lo + 1;
            std::vector<CodeRange> rs;
            const unsigned k = 1 + static_cast<unsigned>(rng.below(2));
            for (unsigned r = 0; r < k; ++r) {
                const std::uint32_t a = lo + static_cast<std::uint32_t>(rng.below(dom));
                const std::uint64_t span = 1 + rng.below(std::max<std::uint64_t>(1, dom / 4));
                const std::uint32_t b =
                    static_cast<std::uint32_t>(std::min<std::uint64_t>(hi, a + span - 1));
                rs.push_back({a, b});
            }
            return alg->make_ranges(rs);
        }
        case AlgebraKind::Bitvector: {
            const unsigned w = alg->width();
            const std::uint64_t mask = w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
            // random cube; empty care set degenerates to top, which is fine
            const std::uint64_t care = rng.next() & mask;
            const std::uint64_t val = rng.next() & care;
            return alg->make_cube(care, val);
        }
        case AlgebraKind::Explicit: {
            const auto syms = alg->explicit_symbols();
            std::vector<std::uint32_t> pick;
            for (std::uint32_t s : syms)
                if (rng.below(3) == 0) pick.push_back(s);
            if (pick.empty()) pick.push_back(syms[rng.below(syms.size())]);
            return alg->make_symbol_set(pick);
        }
    }
    throw UsageError("bad algebra");
}

} // namespace detail

/// Seeded random SFA: ceil(density * n) transition draws with guards from a
/// pool of pred_pool random predicates (interval unions or bit cubes), at
/// least one initial state, possibly empty final set.  Identical seeds and
/// parameters give identical automata; exact duplicate draws are deduped by
/// the builder, so the transition count may come out slightly below the
/// target.
inline Sfa random_sfa(std::uint64_t seed, StateId n, double density, const AlgebraRef& alg,
                      std::uint32_t pred_pool) {
    if (n < 1 || density <= 0 || pred_pool < 1)
        throw UsageError("random_sfa needs n >= 1, density > 0, pred_pool >= 1");
    SplitMix64 rng(seed);
    std::vector<Predicate> pool;
    pool.reserve(pred_pool);
    for (std::uint32_t k = 0; k < pred_pool; ++k)
        pool.push_back(detail::random_pool_predicate(alg, rng));

    SfaBuilder b(alg, n);
    const auto count = static_cast<std::size_t>(std::ceil(density * n));
    for (std::size_t k = 0; k < count; ++k) {
        const auto src = static_cast<StateId>(rng.below(n));
        const auto tgt = static_cast<StateId>(rng.below(n));
        b.add_transition(src, pool[rng.below(pool.size())], tgt);
    }
    bool any_initial = false;
    for (StateId q = 0; q < n; ++q)
        if (rng.below(4) == 0) {
            b.set_initial(q);
            any_initial = true;
        }
    if (!any_initial) b.set_initial(0);
    for (StateId q = 0; q < n; ++q)
        if (rng.below(3) == 0) b.set_final(q);
    return b.build();
}

/// Complete automaton whose n`bits` guards b0..b{n-1} from one state are
/// independent, so the global predicate set has exactly 2^nbits minterms
/// while the automaton itself stays tiny.  A fixed width keeps per-operation
/// predicate cost comparable across family members.
inline Sfa independent_bits_sfa(unsigned nbits, unsigned width = 16) {
    if (nbits < 1 || nbits > width) throw UsageError("need 1 <= nbits <= width");
    auto alg = Algebra::make_bitvector(width);
    const StateId q0 = 0;
    const StateId sink = nbits + 1;
    SfaBuilder b(alg, nbits + 2);
    b.set_initial(q0);
    for (unsigned i = 0; i < nbits; ++i) {
        b.add_transition(q0, alg->make_bit(i), i + 1);
        b.add_transition(i + 1, alg->top(), sink);
        if (i % 2 == 0) b.set_final(i + 1);
    }
    const std::uint64_t low = (std::uint64_t{1} << nbits) - 1;
    b.add_transition(q0, alg->make_cube(low, 0), sink); // no guard bit set
    b.add_transition(sink, alg->top(), sink);
    return b.build();
}

} // namespace sfa
