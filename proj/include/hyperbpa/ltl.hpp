#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "automata.hpp"

namespace hyperbpa {

enum class LtlOp {
    tt,
    ff,
    atom,
    neg,
    conj,
    disj,
    implies,
    iff,
    next,
    until,
    release,
    globally,
    eventually,
};

struct LtlNode;
using LtlPtr = std::shared_ptr<const LtlNode>;

// Immutable formula node. Atoms are proposition x trace-variable index; unary
// operators use `lhs` only.
struct LtlNode {
    LtlOp op;
    std::string ap;
    int var = -1;
    LtlPtr lhs;
    LtlPtr rhs;
};

inline LtlPtr make_ltl(LtlOp op, LtlPtr lhs = nullptr, LtlPtr rhs = nullptr) {
    auto n = std::make_shared<LtlNode>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

// Copy of `like` with replaced children (op, ap, var preserved).
inline LtlPtr make_ltl_with(const LtlPtr& like, LtlPtr lhs, LtlPtr rhs) {
    auto n = std::make_shared<LtlNode>();
    n->op = like->op;
    n->ap = like->ap;
    n->var = like->var;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

inline LtlPtr ltl_true() { return make_ltl(LtlOp::tt); }
inline LtlPtr ltl_false() { return make_ltl(LtlOp::ff); }

inline LtlPtr ltl_atom(std::string ap, int var) {
    auto n = std::make_shared<LtlNode>();
    n->op = LtlOp::atom;
    n->ap = std::move(ap);
    n->var = var;
    return n;
}

inline LtlPtr ltl_not(LtlPtr x) { return make_ltl(LtlOp::neg, std::move(x)); }
inline LtlPtr ltl_and(LtlPtr a, LtlPtr b) { return make_ltl(LtlOp::conj, std::move(a), std::move(b)); }
inline LtlPtr ltl_or(LtlPtr a, LtlPtr b) { return make_ltl(LtlOp::disj, std::move(a), std::move(b)); }
inline LtlPtr ltl_implies(LtlPtr a, LtlPtr b) { return make_ltl(LtlOp::implies, std::move(a), std::move(b)); }
inline LtlPtr ltl_iff(LtlPtr a, LtlPtr b) { return make_ltl(LtlOp::iff, std::move(a), std::move(b)); }
inline LtlPtr ltl_next(LtlPtr x) { return make_ltl(LtlOp::next, std::move(x)); }
inline LtlPtr ltl_until(LtlPtr a, LtlPtr b) { return make_ltl(LtlOp::until, std::move(a), std::move(b)); }
inline LtlPtr ltl_release(LtlPtr a, LtlPtr b) { return make_ltl(LtlOp::release, std::move(a), std::move(b)); }
inline LtlPtr ltl_globally(LtlPtr x) { return make_ltl(LtlOp::globally, std::move(x)); }
inline LtlPtr ltl_eventually(LtlPtr x) { return make_ltl(LtlOp::eventually, std::move(x)); }

// Structural three-way comparison; the dedup/interning order everywhere.
inline int ltl_compare(const LtlPtr& a, const LtlPtr& b) {
    if (a == b) return 0;
    if (!a || !b) return a ? 1 : -1;
    if (a->op != b->op) return a->op < b->op ? -1 : 1;
    if (a->op == LtlOp::atom) {
        if (a->ap != b->ap) return a->ap < b->ap ? -1 : 1;
        if (a->var != b->var) return a->var < b->var ? -1 : 1;
        return 0;
    }
    if (int c = ltl_compare(a->lhs, b->lhs)) return c;
    return ltl_compare(a->rhs, b->rhs);
}

inline bool ltl_equal(const LtlPtr& a, const LtlPtr& b) { return ltl_compare(a, b) == 0; }

inline std::string format_ltl(const LtlPtr& f) {
    switch (f->op) {
        case LtlOp::tt: return "true";
        case LtlOp::ff: return "false";
        case LtlOp::atom: return f->ap + "[" + std::to_string(f->var) + "]";
        case LtlOp::neg: return "!" + format_ltl(f->lhs);
        case LtlOp::conj: return "(" + format_ltl(f->lhs) + " & " + format_ltl(f->rhs) + ")";
        case LtlOp::disj: return "(" + format_ltl(f->lhs) + " | " + format_ltl(f->rhs) + ")";
        case LtlOp::implies: return "(" + format_ltl(f->lhs) + " -> " + format_ltl(f->rhs) + ")";
        case LtlOp::iff: return "(" + format_ltl(f->lhs) + " <-> " + format_ltl(f->rhs) + ")";
        case LtlOp::next: return "X " + format_ltl(f->lhs);
        case LtlOp::until: return "(" + format_ltl(f->lhs) + " U " + format_ltl(f->rhs) + ")";
        case LtlOp::release: return "(" + format_ltl(f->lhs) + " R " + format_ltl(f->rhs) + ")";
        case LtlOp::globally: return "G " + format_ltl(f->lhs);
        case LtlOp::eventually: return "F " + format_ltl(f->lhs);
    }
    return "?";
}

namespace detail {

enum class Tok {
    ident,
    kw_true,
    kw_false,
    kw_forall,
    kw_exists,
    op_not,
    op_and,
    op_or,
    op_implies,
    op_iff,
    kw_next,
    kw_until,
    kw_release,
    kw_globally,
    kw_eventually,
    lparen,
    rparen,
    lbracket,
    rbracket,
    dot,
    end,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

inline std::vector<Token> lex_formula(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string t, int l, int c) { out.push_back({k, std::move(t), l, c}); };
    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') { ++line; col = 1; ++i; continue; }
        if (std::isspace(static_cast<unsigned char>(c))) { ++col; ++i; continue; }
        if (c == '#') {  // comment to end of line
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        int tl = line, tc = col;
        auto advance = [&](std::size_t n) { i += n; col += static_cast<int>(n); };
        if (c == '(') { push(Tok::lparen, "(", tl, tc); advance(1); continue; }
        if (c == ')') { push(Tok::rparen, ")", tl, tc); advance(1); continue; }
        if (c == '[') { push(Tok::lbracket, "[", tl, tc); advance(1); continue; }
        if (c == ']') { push(Tok::rbracket, "]", tl, tc); advance(1); continue; }
        if (c == '.') { push(Tok::dot, ".", tl, tc); advance(1); continue; }
        if (c == '!') { push(Tok::op_not, "!", tl, tc); advance(1); continue; }
        if (c == '&') { push(Tok::op_and, "&", tl, tc); advance(1); continue; }
        if (c == '|') { push(Tok::op_or, "|", tl, tc); advance(1); continue; }
        if (c == '-') {
            if (i + 1 < src.size() && src[i + 1] == '>') { push(Tok::op_implies, "->", tl, tc); advance(2); continue; }
            throw parse_error("expected '->' after '-'", tl, tc);
        }
        if (c == '<') {
            if (i + 2 < src.size() && src[i + 1] == '-' && src[i + 2] == '>') {
                push(Tok::op_iff, "<->", tl, tc);
                advance(3);
                continue;
            }
            throw parse_error("expected '<->' after '<'", tl, tc);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            std::string word(src.substr(i, j - i));
            advance(j - i);
            if (word == "true") push(Tok::kw_true, word, tl, tc);
            else if (word == "false") push(Tok::kw_false, word, tl, tc);
            else if (word == "forall") push(Tok::kw_forall, word, tl, tc);
            else if (word == "exists") push(Tok::kw_exists, word, tl, tc);
            else if (word == "X") push(Tok::kw_next, word, tl, tc);
            else if (word == "U") push(Tok::kw_until, word, tl, tc);
            else if (word == "R") push(Tok::kw_release, word, tl, tc);
            else if (word == "G") push(Tok::kw_globally, word, tl, tc);
            else if (word == "F") push(Tok::kw_eventually, word, tl, tc);
            else push(Tok::ident, word, tl, tc);
            continue;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", tl, tc);
    }
    out.push_back({Tok::end, "", line, col});
    return out;
}

// Recursive-descent body parser. Variables are resolved against `vars`; when
// `allow_new_vars` is set, unseen variable names are appended in
// first-occurrence order, otherwise they are rejected.
struct LtlParser {
    const std::vector<Token>& toks;
    std::size_t pos = 0;
    std::vector<std::string>& vars;
    bool allow_new_vars;

    const Token& peek() const { return toks[pos]; }
    Token take() { return toks[pos++]; }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        std::string got = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
        throw parse_error("expected " + expected + ", found " + got, t.line, t.col);
    }

    int resolve_var(const std::string& name, const Token& at) {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == name) return static_cast<int>(i);
        if (!allow_new_vars)
            throw unbound_variable_error("unbound trace variable '" + name + "' (line " +
                                         std::to_string(at.line) + ", column " +
                                         std::to_string(at.col) + ")");
        vars.push_back(name);
        return static_cast<int>(vars.size() - 1);
    }

    LtlPtr parse_iff() {
        LtlPtr l = parse_implies();
        if (peek().kind == Tok::op_iff) {
            take();
            return ltl_iff(std::move(l), parse_iff());
        }
        return l;
    }

    LtlPtr parse_implies() {
        LtlPtr l = parse_or();
        if (peek().kind == Tok::op_implies) {
            take();
            return ltl_implies(std::move(l), parse_implies());
        }
        return l;
    }

    LtlPtr parse_or() {
        LtlPtr l = parse_and();
        while (peek().kind == Tok::op_or) {
            take();
            l = ltl_or(std::move(l), parse_and());
        }
        return l;
    }

    LtlPtr parse_and() {
        LtlPtr l = parse_binary_temporal();
        while (peek().kind == Tok::op_and) {
            take();
            l = ltl_and(std::move(l), parse_binary_temporal());
        }
        return l;
    }

    LtlPtr parse_binary_temporal() {
        LtlPtr l = parse_unary();
        if (peek().kind == Tok::kw_until) {
            take();
            return ltl_until(std::move(l), parse_binary_temporal());
        }
        if (peek().kind == Tok::kw_release) {
            take();
            return ltl_release(std::move(l), parse_binary_temporal());
        }
        return l;
    }

    LtlPtr parse_unary() {
        switch (peek().kind) {
            case Tok::op_not: take(); return ltl_not(parse_unary());
            case Tok::kw_next: take(); return ltl_next(parse_unary());
            case Tok::kw_globally: take(); return ltl_globally(parse_unary());
            case Tok::kw_eventually: take(); return ltl_eventually(parse_unary());
            default: return parse_primary();
        }
    }

    LtlPtr parse_primary() {
        switch (peek().kind) {
            case Tok::kw_true: take(); return ltl_true();
            case Tok::kw_false: take(); return ltl_false();
            case Tok::lparen: {
                take();
                LtlPtr inner = parse_iff();
                if (peek().kind != Tok::rparen) fail("')'");
                take();
                return inner;
            }
            case Tok::ident: {
                Token ap = take();
                if (peek().kind != Tok::lbracket) fail("'[' after proposition name");
                take();
                if (peek().kind != Tok::ident) fail("trace variable name");
                Token v = take();
                if (peek().kind != Tok::rbracket) fail("']'");
                take();
                return ltl_atom(ap.text, resolve_var(v.text, v));
            }
            default: fail("formula");
        }
    }
};

}  // namespace detail

struct LtlParseResult {
    LtlPtr body;
    std::vector<std::string> vars;  // trace variables, first-occurrence order
};

// Parses a quantifier-free body; trace variables get indices in
// first-occurrence order.
inline LtlParseResult parse_ltl(std::string_view text) {
    auto toks = detail::lex_formula(text);
    LtlParseResult r;
    detail::LtlParser p{toks, 0, r.vars, true};
    r.body = p.parse_iff();
    if (p.peek().kind != detail::Tok::end) p.fail("end of input");
    return r;
}

// Negation normal form: negations pushed to atoms, -> and <-> expanded,
// U/R and G/F dualized. G and F stay first-class.
inline LtlPtr to_nnf(const LtlPtr& f, bool negated = false) {
    switch (f->op) {
        case LtlOp::tt: return negated ? ltl_false() : ltl_true();
        case LtlOp::ff: return negated ? ltl_true() : ltl_false();
        case LtlOp::atom: {
            LtlPtr a = ltl_atom(f->ap, f->var);
            return negated ? ltl_not(std::move(a)) : a;
        }
        case LtlOp::neg: return to_nnf(f->lhs, !negated);
        case LtlOp::conj:
            return negated ? ltl_or(to_nnf(f->lhs, true), to_nnf(f->rhs, true))
                           : ltl_and(to_nnf(f->lhs, false), to_nnf(f->rhs, false));
        case LtlOp::disj:
            return negated ? ltl_and(to_nnf(f->lhs, true), to_nnf(f->rhs, true))
                           : ltl_or(to_nnf(f->lhs, false), to_nnf(f->rhs, false));
        case LtlOp::implies:
            return negated ? ltl_and(to_nnf(f->lhs, false), to_nnf(f->rhs, true))
                           : ltl_or(to_nnf(f->lhs, true), to_nnf(f->rhs, false));
        case LtlOp::iff:
            // (a & b) | (!a & !b); negated: (a & !b) | (!a & b)
            return negated ? ltl_or(ltl_and(to_nnf(f->lhs, false), to_nnf(f->rhs, true)),
                                    ltl_and(to_nnf(f->lhs, true), to_nnf(f->rhs, false)))
                           : ltl_or(ltl_and(to_nnf(f->lhs, false), to_nnf(f->rhs, false)),
                                    ltl_and(to_nnf(f->lhs, true), to_nnf(f->rhs, true)));
        case LtlOp::next: return ltl_next(to_nnf(f->lhs, negated));
        case LtlOp::until:
            return negated ? ltl_release(to_nnf(f->lhs, true), to_nnf(f->rhs, true))
                           : ltl_until(to_nnf(f->lhs, false), to_nnf(f->rhs, false));
        case LtlOp::release:
            return negated ? ltl_until(to_nnf(f->lhs, true), to_nnf(f->rhs, true))
                           : ltl_release(to_nnf(f->lhs, false), to_nnf(f->rhs, false));
        case LtlOp::globally:
            return negated ? ltl_eventually(to_nnf(f->lhs, true)) : ltl_globally(to_nnf(f->lhs, false));
        case LtlOp::eventually:
            return negated ? ltl_globally(to_nnf(f->lhs, true)) : ltl_eventually(to_nnf(f->lhs, false));
    }
    return nullptr;
}

// Syntactically safe = NNF whose temporal operators are only X, R, G.
inline bool is_syntactically_safe(const LtlPtr& f) {
    switch (f->op) {
        case LtlOp::tt:
        case LtlOp::ff:
        case LtlOp::atom: return true;
        case LtlOp::neg: return f->lhs->op == LtlOp::atom;
        case LtlOp::conj:
        case LtlOp::disj:
            return is_syntactically_safe(f->lhs) && is_syntactically_safe(f->rhs);
        case LtlOp::implies:
        case LtlOp::iff: return false;  // not NNF
        case LtlOp::next:
        case LtlOp::globally: return is_syntactically_safe(f->lhs);
        case LtlOp::release:
            return is_syntactically_safe(f->lhs) && is_syntactically_safe(f->rhs);
        case LtlOp::until:
        case LtlOp::eventually: return false;
    }
    return false;
}

namespace detail {

struct LtlPtrLess {
    bool operator()(const LtlPtr& a, const LtlPtr& b) const { return ltl_compare(a, b) < 0; }
};

// Interned formula arena for the tableau: stable ids per distinct subformula.
struct LtlArena {
    std::vector<LtlPtr> nodes;
    std::map<LtlPtr, int, LtlPtrLess> ids;

    int intern(const LtlPtr& f) {
        auto it = ids.find(f);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(nodes.size());
        nodes.push_back(f);
        ids.emplace(f, id);
        return id;
    }
};

}  // namespace detail

// Tableau construction of a safety NFA for a syntactically safe body over
// (2^aps)^arity. States are canonicalized obligation sets; a stuck run
// encodes violation. States admitting no infinite continuation are pruned, so
// a run exists on w exactly when some infinite extension of w satisfies f;
// every infinite run satisfies f. All states accept.
inline Nfa safety_nfa(const LtlPtr& body, const std::vector<std::string>& aps, int arity) {
    LtlPtr f = to_nnf(body);
    if (!is_syntactically_safe(f))
        throw not_safe_error("formula outside the X/R/G safety fragment: " + format_ltl(f));

    // Atom validation against the alphabet.
    {
        std::vector<LtlPtr> stack{f};
        while (!stack.empty()) {
            LtlPtr n = stack.back();
            stack.pop_back();
            if (!n) continue;
            if (n->op == LtlOp::atom) {
                bool known = false;
                for (const auto& ap : aps)
                    if (ap == n->ap) { known = true; break; }
                if (!known)
                    throw alphabet_mismatch_error("atom proposition '" + n->ap +
                                                  "' not in the alphabet");
                if (n->var < 0 || n->var >= arity)
                    throw index_range_error("atom trace index " + std::to_string(n->var) +
                                            " outside arity " + std::to_string(arity));
            }
            stack.push_back(n->lhs);
            stack.push_back(n->rhs);
        }
    }

    Alphabet alphabet{aps, arity};
    const std::size_t U = alphabet.universe_size();
    detail::LtlArena arena;
    std::map<std::string, int> ap_index;
    for (std::size_t i = 0; i < aps.size(); ++i) ap_index[aps[i]] = static_cast<int>(i);

    using Obligation = std::vector<int>;
    auto letter_has = [&](const ProductLetter& l, const LtlPtr& atom) {
        return (l.comps[atom->var] >> ap_index[atom->ap]) & 1u;
    };

    // Expands an obligation under a letter into the set of possible successor
    // obligations (DNF over the disjunctive choices in |, R).
    auto expand = [&](const Obligation& obl, const ProductLetter& l) {
        std::set<Obligation> results;
        struct Frame {
            std::vector<int> work;
            std::set<int> next;
        };
        std::vector<Frame> stack;
        {
            Frame init;
            init.work = obl;
            stack.push_back(std::move(init));
        }
        while (!stack.empty()) {
            Frame fr = std::move(stack.back());
            stack.pop_back();
            bool dead = false;
            while (!fr.work.empty() && !dead) {
                int id = fr.work.back();
                fr.work.pop_back();
                // copy: intern() below may grow the arena and move its nodes
                const LtlPtr n = arena.nodes[id];
                switch (n->op) {
                    case LtlOp::tt: break;
                    case LtlOp::ff: dead = true; break;
                    case LtlOp::atom:
                        if (!letter_has(l, n)) dead = true;
                        break;
                    case LtlOp::neg:
                        if (letter_has(l, n->lhs)) dead = true;
                        break;
                    case LtlOp::conj:
                        fr.work.push_back(arena.intern(n->lhs));
                        fr.work.push_back(arena.intern(n->rhs));
                        break;
                    case LtlOp::disj: {
                        Frame alt = fr;
                        alt.work.push_back(arena.intern(n->rhs));
                        stack.push_back(std::move(alt));
                        fr.work.push_back(arena.intern(n->lhs));
                        break;
                    }
                    case LtlOp::next:
                        fr.next.insert(arena.intern(n->lhs));
                        break;
                    case LtlOp::globally:  // G p = p & X G p
                        fr.work.push_back(arena.intern(n->lhs));
                        fr.next.insert(id);
                        break;
                    case LtlOp::release: {  // p R q = q & (p | X (p R q))
                        Frame alt = fr;
                        alt.work.push_back(arena.intern(n->rhs));
                        alt.next.insert(id);
                        stack.push_back(std::move(alt));
                        fr.work.push_back(arena.intern(n->rhs));
                        fr.work.push_back(arena.intern(n->lhs));
                        break;
                    }
                    default:
                        throw not_safe_error("unsupported operator in safety tableau");
                }
            }
            if (!dead) results.emplace(fr.next.begin(), fr.next.end());
        }
        return results;
    };

    std::map<Obligation, int> state_ids;
    std::vector<Obligation> states;
    auto intern_state = [&](Obligation o) {
        auto it = state_ids.find(o);
        if (it != state_ids.end()) return it->second;
        int id = static_cast<int>(states.size());
        state_ids.emplace(o, id);
        states.push_back(std::move(o));
        return id;
    };

    Obligation init{arena.intern(f)};
    int init_id = intern_state(std::move(init));
    std::vector<std::vector<std::vector<int>>> next;
    std::queue<int> bfs;
    bfs.push(init_id);
    next.emplace_back();
    while (!bfs.empty()) {
        int id = bfs.front();
        bfs.pop();
        next[id].assign(U, {});
        for (std::size_t li = 0; li < U; ++li) {
            ProductLetter l = alphabet.letter_at(li);
            for (const Obligation& succ : expand(states[id], l)) {
                bool fresh = state_ids.find(succ) == state_ids.end();
                int t = intern_state(succ);
                if (fresh) {
                    bfs.push(t);
                    next.emplace_back();
                }
                next[id][li].push_back(t);
            }
            std::sort(next[id][li].begin(), next[id][li].end());
        }
    }

    // Prune states with no infinite continuation; runs through them can never
    // be completed to a satisfying word.
    int n_states = static_cast<int>(states.size());
    std::vector<char> live(n_states, 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int q = 0; q < n_states; ++q) {
            if (!live[q]) continue;
            bool has = false;
            for (std::size_t li = 0; li < U && !has; ++li)
                for (int t : next[q][li])
                    if (live[t]) { has = true; break; }
            if (!has) {
                live[q] = 0;
                changed = true;
            }
        }
    }

    Nfa out;
    out.alphabet = alphabet;
    out.all_accepting = true;
    std::vector<int> renum(n_states, -1);
    for (int q = 0; q < n_states; ++q)
        if (live[q]) {
            renum[q] = out.state_count++;
        }
    out.initial = renum[init_id];  // -1 when the initial obligation is unsatisfiable
    out.accepting.assign(out.state_count, 1);
    out.next.assign(out.state_count, {});
    for (int q = 0; q < n_states; ++q) {
        if (!live[q]) continue;
        out.next[renum[q]].assign(U, {});
        for (std::size_t li = 0; li < U; ++li)
            for (int t : next[q][li])
                if (live[t]) out.next[renum[q]][li].push_back(renum[t]);
    }
    return out;
}

// Tight bad-prefix DFA of the safety language of f: accepts w iff no infinite
// extension of w satisfies f. Determinization of the safety NFA, with the
// empty-subset dead state as the only accepting state (a sink).
inline Dfa bad_prefix_dfa(const LtlPtr& f, const std::vector<std::string>& aps, int arity) {
    int dead = -1;
    Dfa d = determinize(safety_nfa(f, aps, arity), /*force_dead=*/true, &dead);
    d.accepting.assign(d.state_count, 0);
    d.accepting[dead] = 1;
    return d;
}

}  // namespace hyperbpa
