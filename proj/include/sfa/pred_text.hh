/* pred_text.hh -- the textual predicate syntax used in SFA files.
 *
 *   explicit   {a,b,c}          single characters, escapes \, \{ \} \\ \u{HEX}
 *   interval   [97-122]         decimal codepoint ranges, inclusive,
 *              [48-57,65-90]    comma-separated union; overlaps are rejected
 *   bitvector  b0&!b1|b2        boolean expression over b0..b{k-1} with
 *                               & | ! true false and parentheses
 */

#pragma once

#include <cctype>
#include <cstdio>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "algebra.hh"
#include "text.hh"

namespace sfa {

namespace detail {

inline Predicate parse_interval_pred(const Algebra& alg, std::string_view s) {
    std::size_t i = 0;
    if (i >= s.size() || s[i] != '[') throw ParseError("expected '[' to open an interval set", i);
    ++i;
    if (i < s.size() && s[i] == ']') {
        if (i + 1 != s.size()) throw ParseError("trailing characters after ']'", i + 1);
        return alg.bottom();
    }
    std::vector<CodeRange> seen;
    std::vector<CodeRange> out;
    for (;;) {
        const std::size_t tok_start = i;
        auto read_number = [&]() -> std::uint32_t {
            if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
                throw ParseError("expected a decimal codepoint", i);
            std::uint64_t v = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                v = v * 10 + (s[i] - '0');
                if (v > kMaxCodepoint) throw ParseError("codepoint out of range", tok_start);
                ++i;
            }
            return static_cast<std::uint32_t>(v);
        };
        const std::uint32_t lo = read_number();
        if (i >= s.size() || s[i] != '-') throw ParseError("expected '-' inside range", i);
        ++i;
        const std::uint32_t hi = read_number();
        const std::string tok(s.substr(tok_start, i - tok_start));
        if (lo > hi) throw ParseError("malformed range '" + tok + "': lower bound above upper", tok_start);
        if (lo < alg.interval_lo() || hi > alg.interval_hi())
            throw ParseError("range '" + tok + "' outside the algebra domain", tok_start);
        for (const CodeRange& r : seen)
            if (lo <= r.hi && r.lo <= hi)
                throw ParseError("range '" + tok + "' overlaps an earlier range", tok_start);
        seen.push_back({lo, hi});
        out.push_back({lo, hi});
        if (i < s.size() && s[i] == ',') {
            ++i;
            continue;
        }
        if (i < s.size() && s[i] == ']') {
            ++i;
            break;
        }
        throw ParseError("expected ',' or ']'", i);
    }
    if (i != s.size()) throw ParseError("trailing characters after ']'", i);
    return alg.make_ranges(std::move(out));
}

inline Predicate parse_explicit_pred(const Algebra& alg, std::string_view s) {
    std::size_t i = 0;
    if (i >= s.size() || s[i] != '{') throw ParseError("expected '{' to open a symbol set", i);
    ++i;
    std::vector<std::uint32_t> syms;
    if (i < s.size() && s[i] == '}') {
        ++i;
    } else {
        for (;;) {
            if (i >= s.size()) throw ParseError("unterminated symbol set", i);
            std::uint32_t cp;
            if (s[i] == '\\') {
                ++i;
                if (i >= s.size()) throw ParseError("dangling escape", i);
                if (s[i] == 'u') {
                    if (i + 1 >= s.size() || s[i + 1] != '{')
                        throw ParseError("expected '{' after \\u", i + 1);
                    i += 2;
                    std::uint64_t v = 0;
                    const std::size_t hex_start = i;
                    while (i < s.size() && std::isxdigit(static_cast<unsigned char>(s[i]))) {
                        v = v * 16 + (std::isdigit(static_cast<unsigned char>(s[i]))
                                          ? s[i] - '0'
                                          : (std::tolower(s[i]) - 'a' + 10));
                        if (v > kMaxCodepoint) throw ParseError("codepoint out of range", hex_start);
                        ++i;
                    }
                    if (i == hex_start || i >= s.size() || s[i] != '}')
                        throw ParseError("malformed \\u{...} escape", i);
                    ++i;
                    cp = static_cast<std::uint32_t>(v);
                } else {
                    cp = utf8_next(s, i);
                }
            } else if (s[i] == ',' || s[i] == '}') {
                throw ParseError("expected a symbol", i);
            } else {
                cp = utf8_next(s, i);
            }
            if (!alg.in_domain(cp))
                throw ParseError("symbol with codepoint " + std::to_string(cp) +
                                     " outside the algebra domain",
                                 i);
            syms.push_back(cp);
            if (i < s.size() && s[i] == ',') {
                ++i;
                continue;
            }
            if (i < s.size() && s[i] == '}') {
                ++i;
                break;
            }
            throw ParseError("expected ',' or '}'", i);
        }
    }
    if (i != s.size()) throw ParseError("trailing characters after '}'", i);
    return alg.make_symbol_set(syms);
}

// bitvector expressions: or := and ('|' and)*; and := un ('&' un)*;
// un := '!' un | 'true' | 'false' | bN | '(' or ')'
class BitExprParser {
public:
    BitExprParser(const Algebra& alg, std::string_view s) : alg_(alg), s_(s) {}

    Predicate parse() {
        Predicate p = parse_or();
        skip_ws();
        if (i_ != s_.size()) throw ParseError("trailing characters in expression", i_);
        return p;
    }

private:
    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    Predicate parse_or() {
        Predicate p = parse_and();
        for (;;) {
            skip_ws();
            if (i_ < s_.size() && s_[i_] == '|') {
                ++i_;
                p = alg_.disj(p, parse_and());
            } else {
                return p;
            }
        }
    }

    Predicate parse_and() {
        Predicate p = parse_unary();
        for (;;) {
            skip_ws();
            if (i_ < s_.size() && s_[i_] == '&') {
                ++i_;
                p = alg_.conj(p, parse_unary());
            } else {
                return p;
            }
        }
    }

    Predicate parse_unary() {
        skip_ws();
        if (i_ >= s_.size()) throw ParseError("expected an operand", i_);
        if (s_[i_] == '!') {
            ++i_;
            return alg_.neg(parse_unary());
        }
        if (s_[i_] == '(') {
            ++i_;
            Predicate p = parse_or();
            skip_ws();
            if (i_ >= s_.size() || s_[i_] != ')') throw ParseError("expected ')'", i_);
            ++i_;
            return p;
        }
        if (s_.substr(i_, 4) == "true") {
            i_ += 4;
            return alg_.top();
        }
        if (s_.substr(i_, 5) == "false") {
            i_ += 5;
            return alg_.bottom();
        }
        if (s_[i_] == 'b') {
            const std::size_t tok = i_;
            ++i_;
            if (i_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_])))
                throw ParseError("expected a bit index after 'b'", i_);
            unsigned v = 0;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
                v = v * 10 + static_cast<unsigned>(s_[i_] - '0');
                if (v > 64) throw ParseError("bit index out of range", tok);
                ++i_;
            }
            if (v >= alg_.width())
                throw ParseError("bit index b" + std::to_string(v) + " outside width " +
                                     std::to_string(alg_.width()),
                                 tok);
            return alg_.make_bit(v);
        }
        throw ParseError("expected 'true', 'false', 'bN', '!' or '('", i_);
    }

    const Algebra& alg_;
    std::string_view s_;
    std::size_t i_ = 0;
};

inline void append_explicit_symbol(std::string& out, std::uint32_t cp) {
    const bool plain = cp > 0x20 && cp < 0x7F && cp != ',' && cp != '{' && cp != '}' && cp != '\\';
    if (plain) {
        out.push_back(static_cast<char>(cp));
        return;
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "\\u{%X}", cp);
    out += buf;
}

} // namespace detail

inline Predicate parse_predicate(const AlgebraRef& alg, std::string_view text) {
    switch (alg->kind()) {
        case AlgebraKind::Interval: return detail::parse_interval_pred(*alg, text);
        case AlgebraKind::Explicit: return detail::parse_explicit_pred(*alg, text);
        case AlgebraKind::Bitvector: return detail::BitExprParser(*alg, text).parse();
    }
    throw UsageError("bad algebra");
}

/// Canonical text; parse_predicate(format_predicate(p)) == p.
inline std::string format_predicate(const Predicate& p) {
    const Algebra& alg = *p.algebra();
    switch (alg.kind()) {
        case AlgebraKind::Interval: {
            std::string out = "[";
            bool first = true;
            for (const CodeRange& r : alg.range_payload(p)) {
                if (!first) out.push_back(',');
                first = false;
                out += std::to_string(r.lo);
                out.push_back('-');
                out += std::to_string(r.hi);
            }
            out.push_back(']');
            return out;
        }
        case AlgebraKind::Explicit: {
            std::string out = "{";
            bool first = true;
            const auto& bits = alg.bits_payload(p);
            const auto syms = alg.explicit_symbols();
            for (std::size_t i = 0; i < syms.size(); ++i) {
                if (!((bits[i >> 6] >> (i & 63)) & 1u)) continue;
                if (!first) out.push_back(',');
                first = false;
                detail::append_explicit_symbol(out, syms[i]);
            }
            out.push_back('}');
            return out;
        }
        case AlgebraKind::Bitvector: {
            const std::uint32_t root = alg.bdd_ref(p);
            if (root == BddPool::kFalse) return "false";
            if (root == BddPool::kTrue) return "true";
            std::lock_guard lock(alg.bdd_mutex());
            BddPool& pool = alg.bdd_pool();
            std::string out;
            std::vector<std::pair<unsigned, bool>> lits;
            // one cube per BDD path to true; low branch first, so literals
            // come out in ascending variable order
            auto emit_cube = [&]() {
                if (!out.empty()) out.push_back('|');
                for (std::size_t k = 0; k < lits.size(); ++k) {
                    if (k) out.push_back('&');
                    if (!lits[k].second) out.push_back('!');
                    out += "b" + std::to_string(lits[k].first);
                }
            };
            auto rec = [&](auto&& self, std::uint32_t n) -> void {
                if (n == BddPool::kFalse) return;
                if (n == BddPool::kTrue) {
                    emit_cube();
                    return;
                }
                const auto node = pool.node_info(n);
                lits.emplace_back(node.var, false);
                self(self, node.lo);
                lits.back().second = true;
                self(self, node.hi);
                lits.pop_back();
            };
            rec(rec, root);
            return out;
        }
    }
    throw UsageError("bad algebra");
}

} // namespace sfa
