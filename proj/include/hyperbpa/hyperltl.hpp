#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "constructions.hpp"
#include "equiv.hpp"
#include "ltl.hpp"

namespace hyperbpa {

enum class Quantifier { universal, existential };

// Quantified formula: body atoms index into the prefix by position. The AP
// list is collected from the body in first-occurrence order.
struct HyperFormula {
    std::vector<std::pair<Quantifier, std::string>> prefix;
    LtlPtr body;
    std::vector<std::string> aps;

    int width() const { return static_cast<int>(prefix.size()); }
};

inline HyperFormula parse_hyper(std::string_view text) {
    auto toks = detail::lex_formula(text);
    std::size_t pos = 0;
    HyperFormula h;
    std::vector<std::string> vars;
    while (toks[pos].kind == detail::Tok::kw_forall || toks[pos].kind == detail::Tok::kw_exists) {
        Quantifier q = toks[pos].kind == detail::Tok::kw_forall ? Quantifier::universal
                                                                : Quantifier::existential;
        ++pos;
        if (toks[pos].kind != detail::Tok::ident)
            throw parse_error("expected trace variable after quantifier", toks[pos].line,
                              toks[pos].col);
        std::string name = toks[pos].text;
        for (const auto& [q0, seen] : h.prefix)
            if (seen == name)
                throw parse_error("duplicate trace variable '" + name + "'", toks[pos].line,
                                  toks[pos].col);
        ++pos;
        if (toks[pos].kind != detail::Tok::dot)
            throw parse_error("expected '.' after trace variable", toks[pos].line, toks[pos].col);
        ++pos;
        h.prefix.emplace_back(q, std::move(name));
        vars.push_back(h.prefix.back().second);
    }
    if (h.prefix.empty())
        throw parse_error("expected a quantifier prefix", toks[pos].line, toks[pos].col);
    detail::LtlParser p{toks, pos, vars, /*allow_new_vars=*/false};
    h.body = p.parse_iff();
    if (p.peek().kind != detail::Tok::end) p.fail("end of input");

    std::vector<LtlPtr> stack{h.body};
    while (!stack.empty()) {
        LtlPtr n = stack.back();
        stack.pop_back();
        if (!n) continue;
        if (n->op == LtlOp::atom) {
            bool seen = false;
            for (const auto& ap : h.aps)
                if (ap == n->ap) { seen = true; break; }
            if (!seen) h.aps.push_back(n->ap);
        }
        // rhs pushed first so lhs atoms are discovered first
        stack.push_back(n->rhs);
        stack.push_back(n->lhs);
    }
    return h;
}

// Universally safe = only universal quantifiers and a body inside the X/R/G
// safety fragment after negation normal form.
inline bool is_universally_safe(const HyperFormula& h) {
    for (const auto& [q, name] : h.prefix)
        if (q != Quantifier::universal) return false;
    return is_syntactically_safe(to_nnf(h.body));
}

inline void require_universally_safe(const HyperFormula& h) {
    for (const auto& [q, name] : h.prefix)
        if (q != Quantifier::universal)
            throw not_universally_safe_error("trace variable '" + name +
                                             "' is existentially quantified");
    if (!is_syntactically_safe(to_nnf(h.body)))
        throw not_universally_safe_error("body outside the X/R/G safety fragment: " +
                                         format_ltl(to_nnf(h.body)));
}

// Reindexes every atom's trace variable through sigma.
inline LtlPtr substitute(const LtlPtr& f, const PermutationMap& sigma) {
    switch (f->op) {
        case LtlOp::tt:
        case LtlOp::ff: return f;
        case LtlOp::atom:
            if (f->var < 0 || f->var >= static_cast<int>(sigma.size()))
                throw index_range_error("substitute: trace index " + std::to_string(f->var) +
                                        " outside the assignment");
            return ltl_atom(f->ap, sigma[f->var]);
        default: {
            LtlPtr l = f->lhs ? substitute(f->lhs, sigma) : nullptr;
            LtlPtr r = f->rhs ? substitute(f->rhs, sigma) : nullptr;
            return make_ltl_with(f, std::move(l), std::move(r));
        }
    }
}

// Body closed under every assignment of the quantified variables to n traces:
// the conjunction, deduplicated structurally, over all width^... maps of the
// prefix variables into {0..n-1}. Invariant under reindexing the n traces.
inline LtlPtr assignment_closure(const HyperFormula& h, int n) {
    if (n < 1) throw bad_arity_error("assignment closure needs at least one trace");
    std::set<LtlPtr, detail::LtlPtrLess> seen;
    LtlPtr acc;
    for (const PermutationMap& sigma : enumerate_maps(h.width(), n)) {
        LtlPtr g = substitute(h.body, sigma);
        if (!seen.insert(g).second) continue;
        acc = acc ? ltl_and(std::move(acc), std::move(g)) : std::move(g);
    }
    return acc;
}

enum class CexKind { positive, negative };

// Teacher verdict against a conjecture: a negative counterexample is a word
// at the conjecture's arity that it accepts although the unzipped trace set
// is not a bad prefix; a positive one is a bad prefix no representation of
// which is accepted.
struct Counterexample {
    CexKind kind;
    TraceSet traces;
    TupleWord word;
};

// Membership and equivalence oracle for a universally safe formula. Caches
// the per-arity closure automata; query counters cover calls made through
// the public entry points.
class HyperTeacher {
  public:
    explicit HyperTeacher(HyperFormula h, bool exact_minimize = false)
        : h_(std::move(h)), exact_minimize_(exact_minimize) {
        require_universally_safe(h_);
    }

    const HyperFormula& formula() const { return h_; }
    const std::vector<std::string>& aps() const { return h_.aps; }
    int width() const { return h_.width(); }

    // Is t a bad prefix: does every trace property extending t violate the
    // formula? Decided on the zipped canonical representation at arity |t|.
    bool member(const TraceSet& t) {
        ++membership_queries;
        return raw_member(t);
    }

    // Checks the conjecture both ways against the canonical bad-prefix
    // automaton at the prefix width: first that everything it accepts is a
    // genuine bad prefix (else the shortest offender, truncated to the
    // conjecture's arity), then that every bad prefix is eventually covered
    // by some representation (else a witness trace set, minimized).
    std::optional<Counterexample> equivalence(const Dfa& conjecture) {
        ++equivalence_queries;
        if (conjecture.alphabet.aps != h_.aps)
            throw alphabet_mismatch_error("conjecture alphabet differs from the formula's");
        const int k_c = conjecture.alphabet.arity;
        const int k_t = width();
        if (k_c > k_t)
            throw bad_arity_error("conjecture arity exceeds the quantifier prefix width");
        const ArityAutomata& aa = automata_for(k_t);

        const Dfa wide = k_c < k_t ? lift_automaton(conjecture, k_t) : conjecture;
        if (auto w = shortest_accepted(product(wide, aa.satisfiable, Combine::conjunction))) {
            Counterexample cex;
            cex.kind = CexKind::negative;
            cex.word = k_c < k_t ? truncate_word(*w, k_c) : *w;
            return cex;
        }

        CoveringVerdict v = covering_check(aa.bad, tighten(permuted_projection(conjecture, k_t)));
        if (!v.ok) {
            auto w = shortest_accepted_prefix(aa.bad, *v.witness);
            Counterexample cex;
            cex.kind = CexKind::positive;
            cex.traces = minimize_bad_prefix(unzip(aa.bad.alphabet, *w));
            return cex;
        }
        return std::nullopt;
    }

    long long membership_queries = 0;
    long long equivalence_queries = 0;

  private:
    struct ArityAutomata {
        Dfa satisfiable;  // accepts w iff some infinite extension satisfies the closure
        Dfa bad;          // its complement: the tight bad-prefix automaton
    };

    const ArityAutomata& automata_for(int n) {
        auto it = cache_.find(n);
        if (it == cache_.end()) {
            Dfa sat = determinize(safety_nfa(assignment_closure(h_, n), h_.aps, n));
            Dfa bad = complement(sat);
            it = cache_.emplace(n, ArityAutomata{std::move(sat), std::move(bad)}).first;
        }
        return it->second;
    }

    bool raw_member(const TraceSet& t) {
        if (t.aps != h_.aps)
            throw alphabet_mismatch_error("trace set alphabet differs from the formula's");
        auto hit = member_cache_.find(t.traces);
        if (hit != member_cache_.end()) return hit->second;
        const int n = static_cast<int>(t.size());
        bool r = accepts(automata_for(n).bad, canonical_representation(t, n));
        member_cache_.emplace(t.traces, r);
        return r;
    }

    // Shrinks a known bad prefix while it stays bad: greedily drops traces in
    // canonical order, or (exact) finds a smallest bad subset.
    TraceSet minimize_bad_prefix(const TraceSet& t) {
        if (exact_minimize_) {
            const int n = static_cast<int>(t.size());
            for (int size = 1; size < n; ++size) {
                std::vector<int> pick(size);
                for (int i = 0; i < size; ++i) pick[i] = i;
                while (true) {
                    std::vector<Trace> sub;
                    for (int i : pick) sub.push_back(t.traces[i]);
                    TraceSet cand{t.aps, std::move(sub)};
                    if (raw_member(cand)) return cand;
                    int i = size - 1;
                    while (i >= 0 && pick[i] == n - size + i) --i;
                    if (i < 0) break;
                    ++pick[i];
                    for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
                }
            }
            return t;
        }
        TraceSet cur = t;
        std::size_t i = 0;
        while (cur.size() > 1 && i < cur.size()) {
            std::vector<Trace> sub = cur.traces;
            sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
            TraceSet cand{cur.aps, std::move(sub)};
            if (raw_member(cand)) cur = std::move(cand);
            else ++i;
        }
        return cur;
    }

    HyperFormula h_;
    bool exact_minimize_;
    std::map<int, ArityAutomata> cache_;
    std::map<std::vector<Trace>, bool> member_cache_;
};

}  // namespace hyperbpa
