/* sfa_io.hh -- the SFA text format.
 *
 *   @sfa
 *   algebra interval 0 1114111     # or: explicit a b c / bitvector 4
 *   states 3
 *   initial 0
 *   final 2
 *   trans 0 [97-109] 1
 *
 * One directive per line, `#` starts a comment.  Readers accept directives
 * in any order and merge parallel (source, target) transitions by guard
 * disjunction; writers emit initial/final states ascending and transitions
 * in canonical (source, target, guard) order, so read-write-read is the
 * identity.
 */

#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "automaton.hh"
#include "pred_text.hh"

namespace sfa {
namespace io {

namespace detail_io {

inline std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline std::uint64_t parse_uint(const std::string& tok, std::size_t line_no, const char* what) {
    std::uint64_t v = 0;
    if (tok.empty()) throw ParseError(std::string("expected ") + what, line_no);
    for (char c : tok) {
        if (c < '0' || c > '9')
            throw ParseError(std::string("expected ") + what + ", got '" + tok + "'", line_no);
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
        if (v > 0xFFFFFFFFull) throw ParseError(std::string(what) + " out of range", line_no);
    }
    return v;
}

/// One explicit-algebra symbol token; same escapes as inside {...} sets.
inline std::uint32_t parse_symbol_token(const std::string& tok, std::size_t line_no) {
    std::size_t i = 0;
    std::uint32_t cp;
    if (tok[0] == '\\' && tok.size() > 1 && tok[1] == 'u') {
        if (tok.size() < 5 || tok[2] != '{' || tok.back() != '}')
            throw ParseError("malformed \\u{...} symbol '" + tok + "'", line_no);
        std::uint64_t v = 0;
        for (std::size_t k = 3; k + 1 < tok.size(); ++k) {
            const char c = tok[k];
            if (!std::isxdigit(static_cast<unsigned char>(c)))
                throw ParseError("malformed \\u{...} symbol '" + tok + "'", line_no);
            v = v * 16 + (std::isdigit(static_cast<unsigned char>(c))
                              ? c - '0'
                              : (std::tolower(c) - 'a' + 10));
            if (v > kMaxCodepoint) throw ParseError("symbol out of range '" + tok + "'", line_no);
        }
        return static_cast<std::uint32_t>(v);
    }
    if (tok[0] == '\\') {
        i = 1;
        cp = sfa::detail::utf8_next(tok, i);
    } else {
        cp = sfa::detail::utf8_next(tok, i);
    }
    if (i != tok.size())
        throw ParseError("symbol token '" + tok + "' is not a single character", line_no);
    return cp;
}

} // namespace detail_io

inline Sfa read_sfa(std::istream& in) {
    using detail_io::parse_uint;
    using detail_io::tokens_of;

    struct Line {
        std::size_t no;
        std::vector<std::string> toks;
    };
    std::vector<Line> lines;
    std::string raw;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        auto toks = tokens_of(raw);
        if (toks.empty()) continue;
        if (!saw_header) {
            if (toks.size() != 1 || toks[0] != "@sfa")
                throw ParseError("expected '@sfa' header", line_no);
            saw_header = true;
            continue;
        }
        lines.push_back({line_no, std::move(toks)});
    }
    if (!saw_header) throw ParseError("missing '@sfa' header", line_no);

    AlgebraRef alg;
    std::optional<std::uint32_t> states;
    for (const Line& ln : lines) {
        if (ln.toks[0] == "algebra") {
            if (alg) throw ParseError("duplicate 'algebra' directive", ln.no);
            if (ln.toks.size() < 2) throw ParseError("algebra directive needs a kind", ln.no);
            const std::string& kind = ln.toks[1];
            if (kind == "interval") {
                if (ln.toks.size() != 4)
                    throw ParseError("usage: algebra interval <lo> <hi>", ln.no);
                const auto lo = parse_uint(ln.toks[2], ln.no, "codepoint");
                const auto hi = parse_uint(ln.toks[3], ln.no, "codepoint");
                if (lo > hi || hi > kMaxCodepoint)
                    throw ParseError("invalid interval domain bounds", ln.no);
                alg = Algebra::make_interval(static_cast<std::uint32_t>(lo),
                                             static_cast<std::uint32_t>(hi));
            } else if (kind == "bitvector") {
                if (ln.toks.size() != 3) throw ParseError("usage: algebra bitvector <width>", ln.no);
                const auto w = parse_uint(ln.toks[2], ln.no, "width");
                if (w < 1 || w > 64) throw ParseError("bitvector width must be in [1, 64]", ln.no);
                alg = Algebra::make_bitvector(static_cast<unsigned>(w));
            } else if (kind == "explicit") {
                if (ln.toks.size() < 3)
                    throw ParseError("usage: algebra explicit <symbol>...", ln.no);
                std::vector<std::uint32_t> syms;
                for (std::size_t k = 2; k < ln.toks.size(); ++k)
                    syms.push_back(detail_io::parse_symbol_token(ln.toks[k], ln.no));
                alg = Algebra::make_explicit(std::move(syms));
            } else {
                throw ParseError("unknown algebra kind '" + kind + "'", ln.no);
            }
        } else if (ln.toks[0] == "states") {
            if (states) throw ParseError("duplicate 'states' directive", ln.no);
            if (ln.toks.size() != 2) throw ParseError("usage: states <count>", ln.no);
            states = static_cast<std::uint32_t>(parse_uint(ln.toks[1], ln.no, "state count"));
        }
    }
    if (!alg) throw ParseError("missing 'algebra' directive", line_no);
    if (!states) throw ParseError("missing 'states' directive", line_no);

    SfaBuilder b(alg, *states);
    b.merge_parallel();
    for (const Line& ln : lines) {
        const std::string& d = ln.toks[0];
        if (d == "algebra" || d == "states") continue;
        if (d == "initial" || d == "final") {
            if (ln.toks.size() < 2) throw ParseError("usage: " + d + " <state>...", ln.no);
            for (std::size_t k = 1; k < ln.toks.size(); ++k) {
                const auto q = parse_uint(ln.toks[k], ln.no, "state index");
                if (q >= *states)
                    throw ParseError("state index " + ln.toks[k] + " out of range", ln.no);
                if (d == "initial")
                    b.set_initial(static_cast<StateId>(q));
                else
                    b.set_final(static_cast<StateId>(q));
            }
        } else if (d == "trans") {
            if (ln.toks.size() < 4)
                throw ParseError("usage: trans <src> <guard> <tgt>", ln.no);
            const auto src = parse_uint(ln.toks[1], ln.no, "state index");
            const auto tgt = parse_uint(ln.toks.back(), ln.no, "state index");
            if (src >= *states || tgt >= *states)
                throw ParseError("transition endpoint out of range", ln.no);
            std::string guard_text = ln.toks[2];
            for (std::size_t k = 3; k + 1 < ln.toks.size(); ++k) {
                guard_text += ' ';
                guard_text += ln.toks[k];
            }
            Predicate guard;
            try {
                guard = parse_predicate(alg, guard_text);
            } catch (const ParseError& e) {
                throw ParseError(std::string("bad guard: ") + e.what(), ln.no);
            }
            if (!alg->is_sat(guard))
                throw ParseError("transition guard '" + guard_text + "' is unsatisfiable", ln.no);
            b.add_transition(static_cast<StateId>(src), std::move(guard),
                             static_cast<StateId>(tgt));
        } else {
            throw ParseError("unknown directive '" + d + "'", ln.no);
        }
    }
    return b.build();
}

inline Sfa read_sfa_text(const std::string& text) {
    std::istringstream is(text);
    return read_sfa(is);
}

inline Sfa read_sfa_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path.string() + "'");
    return read_sfa(in);
}

inline void write_sfa(std::ostream& os, const Sfa& m) {
    const Algebra& alg = *m.algebra();
    os << "@sfa\n";
    switch (alg.kind()) {
        case AlgebraKind::Interval:
            os << "algebra interval " << alg.interval_lo() << ' ' << alg.interval_hi() << "\n";
            break;
        case AlgebraKind::Bitvector:
            os << "algebra bitvector " << alg.width() << "\n";
            break;
        case AlgebraKind::Explicit: {
            os << "algebra explicit";
            for (std::uint32_t s : alg.explicit_symbols()) {
                std::string tok;
                sfa::detail::append_explicit_symbol(tok, s);
                os << ' ' << tok;
            }
            os << "\n";
            break;
        }
    }
    os << "states " << m.n() << "\n";
    for (StateId q : m.initial_states()) os << "initial " << q << "\n";
    for (StateId q : m.final_states()) os << "final " << q << "\n";
    for (const Transition& t : m.transitions())
        os << "trans " << t.source << ' ' << format_predicate(t.guard) << ' ' << t.target << "\n";
}

inline std::string to_text(const Sfa& m) {
    std::ostringstream os;
    write_sfa(os, m);
    return os.str();
}

inline void write_sfa_file(const std::filesystem::path& path, const Sfa& m) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open '" + path.string() + "' for writing");
    write_sfa(out, m);
}

} // namespace io
} // namespace sfa
