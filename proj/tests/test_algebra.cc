/* test_algebra.cc -- Boolean algebra layer: transformers, satisfiability,
 * minterm generation and the textual predicate syntax.  Expected values for
 * the arithmetic cases are recomputed here by plain per-symbol enumeration,
 * independent of the canonical payload machinery under test. */

#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "sfa/algebra.hh"
#include "sfa/pred_text.hh"

using namespace sfa;

namespace {

// membership-enumeration oracle; walks the whole (small) domain
std::set<Symbol> denot(const AlgebraRef& alg, const Predicate& p) {
    std::set<Symbol> out;
    REQUIRE(alg->domain_size() <= (1u << 16));
    if (alg->kind() == AlgebraKind::Explicit) {
        for (std::uint32_t s : alg->explicit_symbols())
            if (alg->contains(p, s)) out.insert(s);
    } else if (alg->kind() == AlgebraKind::Interval) {
        for (std::uint64_t s = alg->interval_lo(); s <= alg->interval_hi(); ++s)
            if (alg->contains(p, s)) out.insert(s);
    } else {
        for (std::uint64_t s = 0; s < alg->domain_size(); ++s)
            if (alg->contains(p, s)) out.insert(s);
    }
    return out;
}

Predicate rnd_interval_pred(const AlgebraRef& alg, std::mt19937_64& rng) {
    const std::uint32_t lo = alg->interval_lo(), hi = alg->interval_hi();
    const std::uint32_t dom = hi - lo + 1;
    std::vector<CodeRange> rs;
    const int k = 1 + static_cast<int>(rng() % 2);
    for (int i = 0; i < k; ++i) {
        std::uint32_t a = lo + static_cast<std::uint32_t>(rng() % dom);
        std::uint32_t b = a + static_cast<std::uint32_t>(rng() % (hi - a + 1));
        rs.push_back({a, b});
    }
    return alg->make_ranges(rs);
}

Predicate rnd_bv_pred(const AlgebraRef& alg, std::mt19937_64& rng) {
    const std::uint64_t all = (std::uint64_t{1} << alg->width()) - 1;
    Predicate p = alg->make_cube(rng() & all, rng() & all);
    if (rng() % 2) p = alg->disj(p, alg->make_cube(rng() & all, rng() & all));
    return p;
}

} // namespace

TEST_CASE("interval conjunction, disjunction, negation") {
    auto alg = Algebra::make_interval('a', 'z');
    const Predicate am = alg->make_ranges({{'a', 'm'}});
    const Predicate hz = alg->make_ranges({{'h', 'z'}});

    SUBCASE("and([a-m],[h-z]) denotes exactly [h-m]") {
        const Predicate r = alg->conj(am, hz);
        std::set<Symbol> expect;
        for (char c = 'a'; c <= 'z'; ++c)
            if (c >= 'a' && c <= 'm' && c >= 'h' && c <= 'z') expect.insert(c);
        CHECK(denot(alg, r) == expect);
        CHECK(r == alg->make_ranges({{'h', 'm'}}));
    }
    SUBCASE("identity and complement laws") {
        CHECK(alg->conj(am, alg->top()) == am);
        CHECK(alg->conj(am, alg->neg(am)) == alg->bottom());
        CHECK(alg->neg(alg->bottom()) == alg->top());
        CHECK(alg->neg(alg->neg(hz)) == hz);
    }
    SUBCASE("or([a-c],[d-f]) merges to [a-f]") {
        const Predicate r = alg->disj(alg->make_ranges({{'a', 'c'}}), alg->make_ranges({{'d', 'f'}}));
        std::set<Symbol> expect;
        for (char c = 'a'; c <= 'f'; ++c) expect.insert(c);
        CHECK(denot(alg, r) == expect);
        CHECK(r == alg->make_ranges({{'a', 'f'}}));
    }
    SUBCASE("satisfiability") {
        CHECK_FALSE(alg->is_sat(alg->bottom()));
        CHECK(alg->is_sat(alg->make_ranges({{'a', 'a'}})));
        CHECK_FALSE(alg->is_sat(alg->conj(am, alg->make_ranges({{'n', 'z'}}))));
    }
    SUBCASE("algebra mismatch is a usage error") {
        auto other = Algebra::make_interval('a', 'z');
        CHECK_THROWS_AS(alg->conj(am, other->top()), UsageError);
    }
}

TEST_CASE("minterm generation") {
    SUBCASE("minterms of {top} is {top}") {
        auto alg = Algebra::make_interval(0, 100);
        const std::vector<Predicate> in{alg->top()};
        const auto cells = alg->minterms(in);
        REQUIRE(cells.size() == 1);
        CHECK(cells[0] == alg->top());
    }

    SUBCASE("interval pair over [a-z], checked against subset enumeration") {
        auto alg = Algebra::make_interval('a', 'z');
        const std::vector<Predicate> in{alg->make_ranges({{'a', 'm'}}),
                                        alg->make_ranges({{'h', 'z'}})};
        // brute-force oracle: all sign assignments over the two input sets
        std::set<std::set<Symbol>> expect;
        for (unsigned mask = 0; mask < 4; ++mask) {
            std::set<Symbol> cell;
            for (char c = 'a'; c <= 'z'; ++c) {
                const bool in0 = c >= 'a' && c <= 'm';
                const bool in1 = c >= 'h' && c <= 'z';
                if (in0 == bool(mask & 1) && in1 == bool(mask & 2)) cell.insert(c);
            }
            if (!cell.empty()) expect.insert(cell);
        }
        const auto cells = alg->minterms(in);
        std::set<std::set<Symbol>> got;
        for (const Predicate& c : cells) got.insert(denot(alg, c));
        CHECK(got == expect);
        REQUIRE(cells.size() == 3);
        const std::vector<Predicate> want{alg->make_ranges({{'a', 'g'}}),
                                          alg->make_ranges({{'h', 'm'}}),
                                          alg->make_ranges({{'n', 'z'}})};
        for (const Predicate& w : want)
            CHECK(std::find(cells.begin(), cells.end(), w) != cells.end());
    }

    SUBCASE("n independent bits yield 2^n singleton minterms") {
        for (unsigned n : {3u, 6u, 10u}) {
            auto alg = Algebra::make_bitvector(n);
            std::vector<Predicate> bits;
            for (unsigned i = 0; i < n; ++i) bits.push_back(alg->make_bit(i));
            const auto cells = alg->minterms(bits);
            REQUIRE(cells.size() == (std::size_t{1} << n));
            // brute force: every vector lands in exactly one cell
            std::set<Symbol> seen;
            for (const Predicate& c : cells) {
                const auto syms = alg->enumerate(c, 2);
                REQUIRE(syms.size() == 1);
                CHECK(seen.insert(syms[0]).second);
            }
            CHECK(seen.size() == (std::size_t{1} << n));
        }
    }

    SUBCASE("cap trips a structured resource error") {
        auto alg = Algebra::make_bitvector(8);
        std::vector<Predicate> bits;
        for (unsigned i = 0; i < 8; ++i) bits.push_back(alg->make_bit(i));
        CHECK_THROWS_AS((void)alg->minterms(bits, 100), ResourceError);
        try {
            (void)alg->minterms(bits, 100);
        } catch (const ResourceError& e) {
            CHECK(e.kind == ResourceKind::MintermCap);
        }
    }
}

TEST_CASE("enumerate") {
    auto alg = Algebra::make_interval('a', 'z');
    CHECK(alg->enumerate(alg->bottom(), 5).empty());
    CHECK(alg->enumerate(alg->make_ranges({{'a', 'c'}}), 10) == std::vector<Symbol>{'a', 'b', 'c'});

    auto bv = Algebra::make_bitvector(2);
    CHECK(bv->enumerate(bv->top(), 4) == std::vector<Symbol>{0, 1, 2, 3});
    CHECK(bv->enumerate(bv->top(), 2) == std::vector<Symbol>{0, 1});
    CHECK(bv->enumerate(bv->make_bit(1), 4) == std::vector<Symbol>{2, 3});

    auto wide = Algebra::make_bitvector(64);
    CHECK(wide->enumerate(wide->top(), 3) == std::vector<Symbol>{0, 1, 2});
}

TEST_CASE("partition and refinement properties") {
    std::mt19937_64 rng(42);
    auto alg = Algebra::make_interval('a', 'z');
    for (int round = 0; round < 50; ++round) {
        std::vector<Predicate> phis;
        const int k = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < k; ++i) phis.push_back(rnd_interval_pred(alg, rng));
        const auto cells = alg->minterms(phis);

        // pairwise disjoint and jointly covering
        std::set<Symbol> uni;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            for (std::size_t j = i + 1; j < cells.size(); ++j)
                CHECK_FALSE(alg->is_sat(alg->conj(cells[i], cells[j])));
            for (Symbol s : denot(alg, cells[i])) CHECK(uni.insert(s).second);
        }
        CHECK(uni == denot(alg, alg->top()));

        // refinement: a cell intersecting phi is contained in phi
        for (const Predicate& phi : phis)
            for (const Predicate& cell : cells)
                if (alg->is_sat(alg->conj(cell, phi))) {
                    const auto dc = denot(alg, cell);
                    const auto dp = denot(alg, phi);
                    CHECK(std::includes(dp.begin(), dp.end(), dc.begin(), dc.end()));
                }

        // every input equals the union of the cells it intersects
        for (const Predicate& phi : phis) {
            Predicate covered = alg->bottom();
            for (const Predicate& cell : cells)
                if (alg->is_sat(alg->conj(cell, phi))) covered = alg->disj(covered, cell);
            CHECK(covered == phi);
        }
    }
}

TEST_CASE("boolean laws up to canonical equality") {
    std::mt19937_64 rng(7);
    auto iv = Algebra::make_interval('a', 'z');
    auto bv = Algebra::make_bitvector(6);
    std::vector<std::uint32_t> dom;
    for (char c = '0'; c <= '9'; ++c) dom.push_back(c);
    auto ex = Algebra::make_explicit(dom);

    auto rnd_ex = [&](std::mt19937_64& r) {
        std::vector<std::uint32_t> pick;
        for (std::uint32_t s : dom)
            if (r() % 3 == 0) pick.push_back(s);
        return ex->make_symbol_set(pick);
    };

    for (int round = 0; round < 60; ++round) {
        for (int kind = 0; kind < 3; ++kind) {
            AlgebraRef alg = kind == 0 ? iv : (kind == 1 ? bv : ex);
            auto rnd = [&]() {
                if (kind == 0) return rnd_interval_pred(iv, rng);
                if (kind == 1) return rnd_bv_pred(bv, rng);
                return rnd_ex(rng);
            };
            const Predicate p = rnd(), q = rnd(), r = rnd();
            CHECK(alg->conj(alg->conj(p, q), r) == alg->conj(p, alg->conj(q, r)));
            CHECK(alg->disj(alg->disj(p, q), r) == alg->disj(p, alg->disj(q, r)));
            CHECK(alg->neg(alg->conj(p, q)) == alg->disj(alg->neg(p), alg->neg(q)));
            CHECK(alg->neg(alg->disj(p, q)) == alg->conj(alg->neg(p), alg->neg(q)));
            CHECK(alg->neg(alg->neg(p)) == p);
            CHECK((alg->is_sat(p) == !alg->enumerate(p, 1).empty()));
        }
    }
}

TEST_CASE("operation counters") {
    auto alg = Algebra::make_interval(0, 255);
    alg->reset_counters();
    const Predicate p = alg->make_ranges({{0, 10}});
    (void)alg->conj(p, p);
    (void)alg->disj(p, p);
    (void)alg->neg(p);
    (void)alg->is_sat(p);
    const std::vector<Predicate> in{p};
    (void)alg->minterms(in);
    const OpCounters c = alg->counters();
    CHECK(c.conj >= 1);
    CHECK(c.disj == 1);
    CHECK(c.neg >= 1);
    CHECK(c.sat >= 1);
    CHECK(c.minterms == 1);
    alg->reset_counters();
    CHECK(alg->counters().conj == 0);
}

TEST_CASE("predicate text syntax") {
    SUBCASE("interval parse and round-trip") {
        auto alg = Algebra::make_interval(0, kMaxCodepoint);
        const Predicate p = parse_predicate(alg, "[97-122]");
        CHECK(p == alg->make_ranges({{97, 122}}));
        const Predicate u = parse_predicate(alg, "[48-57,65-90]");
        CHECK(u == alg->make_ranges({{48, 57}, {65, 90}}));
        CHECK(parse_predicate(alg, format_predicate(u)) == u);
        CHECK(format_predicate(alg->bottom()) == "[]");
        // adjacent ranges are fine and get merged canonically
        CHECK(parse_predicate(alg, "[48-57,58-60]") == alg->make_ranges({{48, 60}}));
    }
    SUBCASE("interval rejects overlap naming the offending token") {
        auto alg = Algebra::make_interval(0, kMaxCodepoint);
        CHECK_THROWS_WITH_AS((void)parse_predicate(alg, "[50-60,55-70]"),
                             doctest::Contains("'55-70'"), ParseError);
        CHECK_THROWS_AS((void)parse_predicate(alg, "[60-50]"), ParseError);
        CHECK_THROWS_AS((void)parse_predicate(alg, "[10-]"), ParseError);
        CHECK_THROWS_AS((void)parse_predicate(alg, "[10-20"), ParseError);
        CHECK_THROWS_AS((void)parse_predicate(alg, "[10-20]x"), ParseError);
    }
    SUBCASE("interval rejects ranges outside the domain") {
        auto alg = Algebra::make_interval(97, 122);
        CHECK_THROWS_AS((void)parse_predicate(alg, "[90-100]"), ParseError);
    }
    SUBCASE("explicit sets") {
        std::vector<std::uint32_t> dom;
        for (char c = 'a'; c <= 'z'; ++c) dom.push_back(c);
        dom.push_back(',');
        auto alg = Algebra::make_explicit(dom);
        const Predicate p = parse_predicate(alg, "{a,b,c}");
        std::vector<std::uint32_t> abc{'a', 'b', 'c'};
        CHECK(p == alg->make_symbol_set(abc));
        CHECK(format_predicate(p) == "{a,b,c}");
        const Predicate comma = parse_predicate(alg, "{\\,}");
        CHECK(alg->contains(comma, ','));
        CHECK(parse_predicate(alg, format_predicate(comma)) == comma);
        CHECK_THROWS_AS((void)parse_predicate(alg, "{a,,b}"), ParseError);
        CHECK_THROWS_AS((void)parse_predicate(alg, "{A}"), ParseError); // outside domain
    }
    SUBCASE("bitvector expressions") {
        auto alg = Algebra::make_bitvector(4);
        CHECK(parse_predicate(alg, "true") == alg->top());
        CHECK(parse_predicate(alg, "false") == alg->bottom());
        CHECK(parse_predicate(alg, "b0&!b1|b2") ==
              alg->disj(alg->conj(alg->make_bit(0), alg->neg(alg->make_bit(1))), alg->make_bit(2)));
        CHECK(parse_predicate(alg, "!(b0|b1)") ==
              alg->conj(alg->neg(alg->make_bit(0)), alg->neg(alg->make_bit(1))));
        CHECK_THROWS_AS((void)parse_predicate(alg, "b4"), ParseError);
        CHECK_THROWS_AS((void)parse_predicate(alg, "b0 &"), ParseError);
        CHECK_THROWS_AS((void)parse_predicate(alg, "(b0"), ParseError);
    }
    SUBCASE("bitvector format round-trips") {
        std::mt19937_64 rng(3);
        auto alg = Algebra::make_bitvector(6);
        for (int i = 0; i < 40; ++i) {
            const Predicate p = rnd_bv_pred(alg, rng);
            CHECK(parse_predicate(alg, format_predicate(p)) == p);
        }
    }
}
