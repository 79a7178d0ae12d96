/* regex.hh -- a small regex-to-SFA compiler for corpus generation.
 *
 * Supported syntax: literals, '.', classes [x-y] / [^x-y] with unions,
 * grouping, '|', '*', '+', '?', and backslash escapes for metacharacters.
 * Patterns are whole-word: the automaton accepts exactly the matching words.
 * Construction is Thompson-style with epsilon edges, eliminated before the
 * SFA is built.
 */

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "reduction.hh"
#include "text.hh"

namespace sfa {

struct RegexAst {
    enum class Kind { Class, Concat, Union, Star, Plus, Optional, Empty };

    Kind kind = Kind::Empty;
    Predicate cls;                  // Kind::Class only
    std::vector<RegexAst> children; // Concat/Union: n-ary; Star/Plus/Optional: one
};

namespace detail {

class RegexParser {
public:
    RegexParser(std::string_view s, const AlgebraRef& alg) : s_(s), alg_(alg) {}

    RegexAst parse() {
        RegexAst r = parse_union();
        if (i_ != s_.size()) throw ParseError("unexpected ')'", i_);
        return r;
    }

private:
    bool eof() const { return i_ >= s_.size(); }
    char peek() const { return s_[i_]; }

    RegexAst parse_union() {
        RegexAst node;
        node.kind = RegexAst::Kind::Union;
        node.children.push_back(parse_concat());
        while (!eof() && peek() == '|') {
            ++i_;
            node.children.push_back(parse_concat());
        }
        return node.children.size() == 1 ? std::move(node.children[0]) : std::move(node);
    }

    RegexAst parse_concat() {
        RegexAst node;
        node.kind = RegexAst::Kind::Concat;
        while (!eof() && peek() != '|' && peek() != ')') node.children.push_back(parse_repeat());
        if (node.children.empty()) {
            node.kind = RegexAst::Kind::Empty;
            return node;
        }
        return node.children.size() == 1 ? std::move(node.children[0]) : std::move(node);
    }

    RegexAst parse_repeat() {
        RegexAst node = parse_atom();
        while (!eof() && (peek() == '*' || peek() == '+' || peek() == '?')) {
            RegexAst wrap;
            wrap.kind = peek() == '*'   ? RegexAst::Kind::Star
                        : peek() == '+' ? RegexAst::Kind::Plus
                                        : RegexAst::Kind::Optional;
            ++i_;
            wrap.children.push_back(std::move(node));
            node = std::move(wrap);
        }
        return node;
    }

    RegexAst parse_atom() {
        if (eof()) throw ParseError("expected an atom ('(', '[', '.', or a literal)", i_);
        const char c = peek();
        if (c == '(') {
            ++i_;
            RegexAst inner = parse_union();
            if (eof() || peek() != ')') throw ParseError("expected ')'", i_);
            ++i_;
            return inner;
        }
        if (c == '[') return parse_class();
        if (c == '.') {
            ++i_;
            return class_node(alg_->top());
        }
        if (c == '*' || c == '+' || c == '?')
            throw ParseError(std::string("nothing to repeat before '") + c + "'", i_);
        if (c == ')' || c == '|') throw ParseError("expected an atom", i_);
        return class_node(alg_->singleton(read_literal()));
    }

    RegexAst class_node(Predicate p) {
        RegexAst node;
        node.kind = RegexAst::Kind::Class;
        node.cls = std::move(p);
        return node;
    }

    std::uint32_t read_literal() {
        if (peek() == '\\') {
            ++i_;
            if (eof()) throw ParseError("dangling escape", i_);
            std::size_t i = i_;
            const std::uint32_t cp = utf8_next(s_, i);
            i_ = i;
            return cp;
        }
        std::size_t i = i_;
        const std::uint32_t cp = utf8_next(s_, i);
        i_ = i;
        return cp;
    }

    RegexAst parse_class() {
        ++i_; // '['
        bool negated = false;
        if (!eof() && peek() == '^') {
            negated = true;
            ++i_;
        }
        std::vector<CodeRange> ranges;
        bool first = true;
        for (;;) {
            if (eof()) throw ParseError("unterminated character class, expected ']'", i_);
            if (peek() == ']' && !first) {
                ++i_;
                break;
            }
            if (peek() == ']' && first) throw ParseError("empty character class", i_);
            first = false;
            const std::size_t item_pos = i_;
            std::uint32_t lo;
            if (peek() == '-') { // leading '-' is a literal
                lo = '-';
                ++i_;
            } else {
                lo = read_literal();
            }
            std::uint32_t hi = lo;
            if (!eof() && peek() == '-' && i_ + 1 < s_.size() && s_[i_ + 1] != ']') {
                ++i_;
                hi = read_literal();
                if (lo > hi) throw ParseError("class range has bounds out of order", item_pos);
            }
            if (!alg_->in_domain(lo) || !alg_->in_domain(hi))
                throw ParseError("class symbol outside the algebra domain", item_pos);
            ranges.push_back({lo, hi});
        }
        Predicate p;
        if (alg_->kind() == AlgebraKind::Interval) {
            p = alg_->make_ranges(ranges);
        } else {
            // small explicit domains also work, for tests
            p = alg_->bottom();
            for (const CodeRange& r : ranges)
                for (std::uint32_t c = r.lo; c <= r.hi; ++c)
                    if (alg_->in_domain(c)) p = alg_->disj(p, alg_->singleton(c));
        }
        if (negated) p = alg_->neg(p);
        if (!alg_->is_sat(p)) throw ParseError("character class denotes no symbol", i_);
        return class_node(std::move(p));
    }

    std::string_view s_;
    AlgebraRef alg_;
    std::size_t i_ = 0;
};

// Thompson fragments over an epsilon-NFA, then closure-based elimination.
struct EpsNfa {
    struct Edge {
        std::uint32_t src;
        std::optional<Predicate> guard; // nullopt = epsilon
        std::uint32_t tgt;
    };
    std::vector<Edge> edges;
    std::uint32_t states = 0;

    std::uint32_t fresh() { return states++; }
    void eps(std::uint32_t a, std::uint32_t b) { edges.push_back({a, std::nullopt, b}); }
    void sym(std::uint32_t a, Predicate p, std::uint32_t b) {
        edges.push_back({a, std::move(p), b});
    }
};

struct Frag {
    std::uint32_t start, accept;
};

inline Frag build_frag(EpsNfa& nfa, const RegexAst& ast) {
    switch (ast.kind) {
        case RegexAst::Kind::Empty: {
            const auto s = nfa.fresh(), a = nfa.fresh();
            nfa.eps(s, a);
            return {s, a};
        }
        case RegexAst::Kind::Class: {
            const auto s = nfa.fresh(), a = nfa.fresh();
            nfa.sym(s, ast.cls, a);
            return {s, a};
        }
        case RegexAst::Kind::Concat: {
            Frag f = build_frag(nfa, ast.children.front());
            for (std::size_t k = 1; k < ast.children.size(); ++k) {
                const Frag g = build_frag(nfa, ast.children[k]);
                nfa.eps(f.accept, g.start);
                f.accept = g.accept;
            }
            return f;
        }
        case RegexAst::Kind::Union: {
            const auto s = nfa.fresh(), a = nfa.fresh();
            for (const RegexAst& c : ast.children) {
                const Frag g = build_frag(nfa, c);
                nfa.eps(s, g.start);
                nfa.eps(g.accept, a);
            }
            return {s, a};
        }
        case RegexAst::Kind::Star: {
            const auto s = nfa.fresh(), a = nfa.fresh();
            const Frag g = build_frag(nfa, ast.children[0]);
            nfa.eps(s, g.start);
            nfa.eps(s, a);
            nfa.eps(g.accept, g.start);
            nfa.eps(g.accept, a);
            return {s, a};
        }
        case RegexAst::Kind::Plus: {
            const Frag g = build_frag(nfa, ast.children[0]);
            const auto a = nfa.fresh();
            nfa.eps(g.accept, g.start);
            nfa.eps(g.accept, a);
            return {g.start, a};
        }
        case RegexAst::Kind::Optional: {
            const auto s = nfa.fresh(), a = nfa.fresh();
            const Frag g = build_frag(nfa, ast.children[0]);
            nfa.eps(s, g.start);
            nfa.eps(s, a);
            nfa.eps(g.accept, a);
            return {s, a};
        }
    }
    throw UsageError("bad regex AST");
}

} // namespace detail

inline RegexAst parse_regex(std::string_view pattern, const AlgebraRef& alg) {
    return detail::RegexParser(pattern, alg).parse();
}

inline Sfa regex_compile(std::string_view pattern, const AlgebraRef& alg) {
    const RegexAst ast = parse_regex(pattern, alg);
    detail::EpsNfa nfa;
    const detail::Frag frag = detail::build_frag(nfa, ast);

    // epsilon closures
    std::vector<std::vector<std::uint32_t>> eps_adj(nfa.states);
    for (const auto& e : nfa.edges)
        if (!e.guard) eps_adj[e.src].push_back(e.tgt);
    std::vector<std::vector<char>> closure(nfa.states);
    for (std::uint32_t q = 0; q < nfa.states; ++q) {
        closure[q].assign(nfa.states, 0);
        std::vector<std::uint32_t> todo{q};
        closure[q][q] = 1;
        while (!todo.empty()) {
            const std::uint32_t x = todo.back();
            todo.pop_back();
            for (std::uint32_t y : eps_adj[x])
                if (!closure[q][y]) {
                    closure[q][y] = 1;
                    todo.push_back(y);
                }
        }
    }

    SfaBuilder b(alg, nfa.states);
    b.merge_parallel();
    for (std::uint32_t q = 0; q < nfa.states; ++q)
        for (const auto& e : nfa.edges)
            if (e.guard && closure[q][e.src]) b.add_transition(q, *e.guard, e.tgt);
    b.set_initial(frag.start);
    for (std::uint32_t q = 0; q < nfa.states; ++q)
        if (closure[q][frag.accept]) b.set_final(q);
    return trim_unreachable(b.build());
}

/// Compiles over a fresh full-Unicode interval algebra.
inline Sfa regex_compile(std::string_view pattern) {
    return regex_compile(pattern, Algebra::make_interval(0, kMaxCodepoint));
}

} // namespace sfa
