/* test_regex.cc -- regex parsing and compilation, cross-checked against a
 * straightforward AST-walking backtracking matcher. */

#include <doctest.h>

#include <random>
#include <set>
#include <string>

#include "sfa/regex.hh"

using namespace sfa;

namespace {

// reference matcher: set of reachable positions per AST node
std::set<std::size_t> match_at(const RegexAst& ast, const Word& w, std::size_t pos,
                               const AlgebraRef& alg) {
    switch (ast.kind) {
        case RegexAst::Kind::Empty: return {pos};
        case RegexAst::Kind::Class:
            if (pos < w.size() && alg->contains(ast.cls, w[pos])) return {pos + 1};
            return {};
        case RegexAst::Kind::Concat: {
            std::set<std::size_t> cur{pos};
            for (const RegexAst& c : ast.children) {
                std::set<std::size_t> next;
                for (std::size_t p : cur) next.merge(match_at(c, w, p, alg));
                cur = std::move(next);
                if (cur.empty()) break;
            }
            return cur;
        }
        case RegexAst::Kind::Union: {
            std::set<std::size_t> out;
            for (const RegexAst& c : ast.children) out.merge(match_at(c, w, pos, alg));
            return out;
        }
        case RegexAst::Kind::Star:
        case RegexAst::Kind::Plus: {
            std::set<std::size_t> out;
            std::set<std::size_t> frontier{pos};
            if (ast.kind == RegexAst::Kind::Star) out.insert(pos);
            while (!frontier.empty()) {
                std::set<std::size_t> next;
                for (std::size_t p : frontier)
                    for (std::size_t q : match_at(ast.children[0], w, p, alg))
                        if (!out.count(q)) next.insert(q);
                for (std::size_t q : next) out.insert(q);
                frontier = std::move(next);
            }
            return out;
        }
        case RegexAst::Kind::Optional: {
            std::set<std::size_t> out{pos};
            out.merge(match_at(ast.children[0], w, pos, alg));
            return out;
        }
    }
    return {};
}

bool ref_match(const RegexAst& ast, const Word& w, const AlgebraRef& alg) {
    return match_at(ast, w, 0, alg).count(w.size()) > 0;
}

Word word_of(const std::string& s) {
    Word w;
    for (char c : s) w.push_back(static_cast<Symbol>(c));
    return w;
}

// random pattern over {a, b, c}; depth-bounded
std::string random_pattern(std::mt19937_64& rng, int depth) {
    switch (depth <= 0 ? rng() % 3 : rng() % 8) {
        case 0: return std::string(1, static_cast<char>('a' + rng() % 3));
        case 1: return "[a-b]";
        case 2: return "[^b]";
        case 3: return random_pattern(rng, depth - 1) + random_pattern(rng, depth - 1);
        case 4: return "(" + random_pattern(rng, depth - 1) + "|" + random_pattern(rng, depth - 1) + ")";
        case 5: return "(" + random_pattern(rng, depth - 1) + ")*";
        case 6: return "(" + random_pattern(rng, depth - 1) + ")+";
        default: return "(" + random_pattern(rng, depth - 1) + ")?";
    }
}

} // namespace

TEST_CASE("single literal compiles to the two-state automaton") {
    const Sfa m = regex_compile("a");
    CHECK(m.n() == 2);
    REQUIRE(m.transition_count() == 1);
    CHECK(m.out(0)[0].guard == m.algebra()->make_ranges({{97, 97}}));
    CHECK(accepts(m, word_of("a")));
    CHECK_FALSE(accepts(m, word_of("b")));
    CHECK_FALSE(accepts(m, word_of("")));
}

TEST_CASE("class star") {
    const Sfa m = regex_compile("[a-c]*");
    CHECK(accepts(m, word_of("")));
    CHECK(accepts(m, word_of("a")));
    CHECK(accepts(m, word_of("cab")));
    CHECK_FALSE(accepts(m, word_of("d")));
}

TEST_CASE("grouped union under plus") {
    const Sfa m = regex_compile("(ab|cd)+");
    CHECK_FALSE(accepts(m, word_of("")));
    CHECK(accepts(m, word_of("ab")));
    CHECK(accepts(m, word_of("abcd")));
    CHECK_FALSE(accepts(m, word_of("abc")));
}

TEST_CASE("dot, negated classes, escapes, optional") {
    CHECK(accepts(regex_compile("."), Word{0x10FFFF}));
    CHECK(accepts(regex_compile("[^a]"), word_of("z")));
    CHECK_FALSE(accepts(regex_compile("[^a]"), word_of("a")));
    CHECK(accepts(regex_compile("\\*(\\(x\\))?"), word_of("*(x)")));
    CHECK(accepts(regex_compile("\\*(\\(x\\))?"), word_of("*")));
    CHECK(accepts(regex_compile("a[-b]c"), word_of("a-c"))); // leading '-' literal
    CHECK(accepts(regex_compile("a[b-]c"), word_of("a-c"))); // trailing '-' literal
}

TEST_CASE("parse errors carry position and expectation") {
    CHECK_THROWS_WITH_AS((void)regex_compile("(ab"), doctest::Contains("')'"), ParseError);
    CHECK_THROWS_WITH_AS((void)regex_compile("a)b"), doctest::Contains("')'"), ParseError);
    CHECK_THROWS_WITH_AS((void)regex_compile("*a"), doctest::Contains("repeat"), ParseError);
    CHECK_THROWS_WITH_AS((void)regex_compile("[z-a]"), doctest::Contains("out of order"),
                         ParseError);
    CHECK_THROWS_AS((void)regex_compile("[]"), ParseError);
    CHECK_THROWS_AS((void)regex_compile("[abc"), ParseError);
    CHECK_THROWS_AS((void)regex_compile("a\\"), ParseError);
    try {
        (void)regex_compile("(ab");
    } catch (const ParseError& e) {
        CHECK(e.position == 3);
    }
}

TEST_CASE("compiled automata agree with the reference matcher") {
    std::mt19937_64 rng(11);
    auto alg = Algebra::make_interval(0, kMaxCodepoint);
    int checked = 0;
    for (int round = 0; round < 120; ++round) {
        const std::string pat = random_pattern(rng, 3);
        const RegexAst ast = parse_regex(pat, alg);
        const Sfa m = regex_compile(pat, alg);
        for (int word_round = 0; word_round < 30; ++word_round) {
            const std::size_t len = rng() % 9; // up to length 8
            std::string s;
            for (std::size_t k = 0; k < len; ++k)
                s.push_back(static_cast<char>('a' + rng() % 4)); // includes 'd' outside classes
            const Word w = word_of(s);
            CHECK(accepts(m, w) == ref_match(ast, w, alg));
            ++checked;
        }
    }
    CHECK(checked == 120 * 30);
}
