#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "automata.hpp"
#include "repr.hpp"

namespace hyperbpa {

inline std::string format_letter(const Alphabet& alphabet, const ProductLetter& l) {
    std::string out = "(";
    for (int i = 0; i < alphabet.arity; ++i) {
        if (i) out += ',';
        out += '{';
        bool first = true;
        for (std::size_t b = 0; b < alphabet.aps.size(); ++b)
            if ((l.comps[i] >> b) & 1u) {
                if (!first) out += ',';
                out += alphabet.aps[b];
                first = false;
            }
        out += '}';
    }
    out += ')';
    return out;
}

inline std::string format_word(const Alphabet& alphabet, const TupleWord& w) {
    std::string out;
    for (const ProductLetter& l : w) out += format_letter(alphabet, l);
    return out;
}

inline std::string format_trace(const std::vector<std::string>& aps, const Trace& t) {
    std::string out;
    for (ApMask m : t) {
        out += '{';
        bool first = true;
        for (std::size_t b = 0; b < aps.size(); ++b)
            if ((m >> b) & 1u) {
                if (!first) out += ',';
                out += aps[b];
                first = false;
            }
        out += '}';
    }
    return out;
}

// One trace per line in canonical order.
inline std::string format_trace_set(const TraceSet& t) {
    std::string out;
    for (const Trace& tr : t.traces) {
        out += format_trace(t.aps, tr);
        out += '\n';
    }
    return out;
}

namespace detail {

// Character scanner with line/column tracking for the text formats.
struct Scanner {
    std::string_view src;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    bool done() const { return pos >= src.size(); }
    char peek() const { return src[pos]; }

    char take() {
        char c = src[pos++];
        if (c == '\n') { ++line; col = 1; }
        else ++col;
        return c;
    }

    // Skips spaces, tabs and '#' comments; newlines only when `newlines`.
    void skip_blank(bool newlines) {
        while (!done()) {
            char c = peek();
            if (c == '#') {
                while (!done() && peek() != '\n') take();
            } else if (c == '\n' ? newlines : (std::isspace(static_cast<unsigned char>(c)) != 0)) {
                take();
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, line, col); }

    void expect(char c) {
        if (done() || peek() != c) fail(std::string("expected '") + c + "'");
        take();
    }

    std::string ident() {
        if (done() || !(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
            fail("expected a name");
        std::string out;
        while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            out += take();
        return out;
    }

    long number() {
        if (done() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a number");
        long v = 0;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (take() - '0');
            if (v > 100000000) fail("number out of range");
        }
        return v;
    }
};

inline ApMask scan_brace_group(Scanner& s, const std::vector<std::string>& aps) {
    s.skip_blank(false);
    s.expect('{');
    ApMask m = 0;
    s.skip_blank(false);
    while (!s.done() && s.peek() != '}') {
        std::string name = s.ident();
        bool found = false;
        for (std::size_t b = 0; b < aps.size(); ++b)
            if (aps[b] == name) {
                m |= ApMask{1} << b;
                found = true;
                break;
            }
        if (!found) s.fail("unknown proposition '" + name + "'");
        s.skip_blank(false);
        if (!s.done() && s.peek() == ',') {
            s.take();
            s.skip_blank(false);
        }
    }
    s.expect('}');
    return m;
}

inline ProductLetter scan_letter(Scanner& s, const Alphabet& alphabet) {
    s.expect('(');
    ProductLetter l;
    for (int i = 0; i < alphabet.arity; ++i) {
        if (i) {
            s.skip_blank(false);
            s.expect(',');
        }
        l.comps.push_back(scan_brace_group(s, alphabet.aps));
    }
    s.skip_blank(false);
    s.expect(')');
    return l;
}

}  // namespace detail

// Word text: concatenated parenthesized letters, e.g. ({a},{})({a},{a}).
inline TupleWord parse_word(const Alphabet& alphabet, std::string_view text) {
    detail::Scanner s{text};
    TupleWord w;
    s.skip_blank(true);
    while (!s.done()) {
        w.push_back(detail::scan_letter(s, alphabet));
        s.skip_blank(true);
    }
    return w;
}

// Trace-set text: one trace per line as concatenated brace groups; blank
// lines and '#' comments ignored; equal group counts required.
inline TraceSet parse_trace_set(const std::vector<std::string>& aps, std::string_view text) {
    detail::Scanner s{text};
    std::vector<Trace> traces;
    while (true) {
        s.skip_blank(true);
        if (s.done()) break;
        Trace t;
        while (!s.done() && s.peek() != '\n') {
            if (s.peek() == '#') break;
            t.push_back(detail::scan_brace_group(s, aps));
            while (!s.done() && (s.peek() == ' ' || s.peek() == '\t' || s.peek() == '\r')) s.take();
        }
        traces.push_back(std::move(t));
    }
    return TraceSet{aps, std::move(traces)};
}

// Automaton text format, line-based:
//   bpa 1
//   aps a b
//   arity 2
//   states 3
//   initial 0
//   accepting 1
//   trans 0 ({a},{a}) 2
// Missing transitions go to an implicit dead state appended on read.
inline Dfa parse_bpa(std::string_view text) {
    detail::Scanner s{text};
    s.skip_blank(true);
    if (s.ident() != "bpa") s.fail("expected 'bpa' header");
    s.skip_blank(false);
    if (s.number() != 1) s.fail("unsupported format version");

    bool have_aps = false, have_arity = false, have_states = false, have_initial = false,
         have_accepting = false;
    std::vector<std::string> aps;
    long arity = 0, states = 0, initial = 0;
    std::vector<long> accepting;
    struct TransLine {
        long src;
        ProductLetter letter;
        long dst;
        int line;
        int col;
    };
    std::vector<TransLine> trans;

    while (true) {
        s.skip_blank(true);
        if (s.done()) break;
        int at_line = s.line, at_col = s.col;
        std::string key = s.ident();
        auto once = [&](bool& flag) {
            if (flag) throw parse_error("duplicate '" + key + "' line", at_line, at_col);
            flag = true;
        };
        if (key == "aps") {
            once(have_aps);
            s.skip_blank(false);
            while (!s.done() && s.peek() != '\n' && s.peek() != '#') {
                std::string name = s.ident();
                for (const auto& seen : aps)
                    if (seen == name) s.fail("duplicate proposition '" + name + "'");
                aps.push_back(std::move(name));
                s.skip_blank(false);
            }
        } else if (key == "arity") {
            once(have_arity);
            s.skip_blank(false);
            arity = s.number();
        } else if (key == "states") {
            once(have_states);
            s.skip_blank(false);
            states = s.number();
        } else if (key == "initial") {
            once(have_initial);
            s.skip_blank(false);
            initial = s.number();
        } else if (key == "accepting") {
            once(have_accepting);
            s.skip_blank(false);
            while (!s.done() && s.peek() != '\n' && s.peek() != '#') {
                accepting.push_back(s.number());
                s.skip_blank(false);
            }
        } else if (key == "trans") {
            if (!have_aps || !have_arity)
                throw parse_error("'trans' before 'aps'/'arity'", at_line, at_col);
            Alphabet alphabet{aps, static_cast<int>(arity)};
            s.skip_blank(false);
            long src = s.number();
            s.skip_blank(false);
            ProductLetter l = detail::scan_letter(s, alphabet);
            s.skip_blank(false);
            long dst = s.number();
            trans.push_back({src, std::move(l), dst, at_line, at_col});
        } else {
            throw parse_error("unknown keyword '" + key + "'", at_line, at_col);
        }
    }

    if (!have_aps || !have_arity || !have_states || !have_initial || !have_accepting)
        throw parse_error("missing header line (aps/arity/states/initial/accepting)", s.line,
                          s.col);
    if (aps.size() > 16) throw parse_error("too many propositions (max 16)", 1, 1);
    if (arity < 1 || arity > 8) throw parse_error("arity must be between 1 and 8", 1, 1);
    if (states < 1) throw parse_error("need at least one state", 1, 1);
    double universe = 1;
    for (long i = 0; i < arity; ++i) universe *= static_cast<double>(1u << aps.size());
    if (universe > (1 << 20)) throw parse_error("alphabet universe too large", 1, 1);

    Dfa d;
    d.alphabet = Alphabet{aps, static_cast<int>(arity)};
    d.state_count = static_cast<int>(states);
    if (initial >= states) throw parse_error("initial state out of range", 1, 1);
    d.initial = static_cast<int>(initial);
    d.accepting.assign(d.state_count, 0);
    for (long q : accepting) {
        if (q >= states) throw parse_error("accepting state out of range", 1, 1);
        d.accepting[q] = 1;
    }
    const std::size_t U = d.alphabet.universe_size();
    d.next.assign(d.state_count, std::vector<int>(U, -1));
    for (const TransLine& t : trans) {
        if (t.src >= states || t.dst >= states)
            throw parse_error("transition state out of range", t.line, t.col);
        std::size_t li = d.alphabet.index_of(t.letter);
        int& slot = d.next[t.src][li];
        if (slot != -1) throw parse_error("duplicate transition", t.line, t.col);
        slot = static_cast<int>(t.dst);
    }
    return complete_dfa(d);
}

// Canonical writer: header fields in fixed order, every transition listed,
// sources ascending then letters in canonical order.
inline std::string format_bpa(const Dfa& d) {
    std::ostringstream out;
    out << "bpa 1\n";
    out << "aps";
    for (const auto& ap : d.alphabet.aps) out << ' ' << ap;
    out << '\n';
    out << "arity " << d.alphabet.arity << '\n';
    out << "states " << d.state_count << '\n';
    out << "initial " << d.initial << '\n';
    out << "accepting";
    for (int q = 0; q < d.state_count; ++q)
        if (d.accepting[q]) out << ' ' << q;
    out << '\n';
    const std::size_t U = d.alphabet.universe_size();
    for (int q = 0; q < d.state_count; ++q)
        for (std::size_t li = 0; li < U; ++li)
            out << "trans " << q << ' ' << format_letter(d.alphabet, d.alphabet.letter_at(li))
                << ' ' << d.next[q][li] << '\n';
    return out.str();
}

// GraphViz view; letters between the same state pair share one edge label.
inline std::string format_dot(const Dfa& d) {
    std::ostringstream out;
    out << "digraph bpa {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=circle];\n";
    out << "  init [shape=point];\n";
    for (int q = 0; q < d.state_count; ++q)
        if (d.accepting[q]) out << "  q" << q << " [shape=doublecircle];\n";
    out << "  init -> q" << d.initial << ";\n";
    const std::size_t U = d.alphabet.universe_size();
    for (int q = 0; q < d.state_count; ++q) {
        std::map<int, std::string> grouped;
        for (std::size_t li = 0; li < U; ++li) {
            std::string& label = grouped[d.next[q][li]];
            if (!label.empty()) label += "\\n";
            label += format_letter(d.alphabet, d.alphabet.letter_at(li));
        }
        for (const auto& [dst, label] : grouped)
            out << "  q" << q << " -> q" << dst << " [label=\"" << label << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot open '" + path + "' for writing");
    out << content;
    if (!out.flush()) throw error("failed writing '" + path + "'");
}

}  // namespace hyperbpa
