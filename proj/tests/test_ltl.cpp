#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace hyperbpa;
using fixtures::letter;

namespace {

bool negations_on_atoms_only(const LtlPtr& f) {
    if (!f) return true;
    if (f->op == LtlOp::neg && f->lhs->op != LtlOp::atom) return false;
    if (f->op == LtlOp::implies || f->op == LtlOp::iff) return false;
    return negations_on_atoms_only(f->lhs) && negations_on_atoms_only(f->rhs);
}

// Bounded cross-check of a bad-prefix automaton against the lasso-search
// oracle: a word is accepted exactly when no satisfying extension exists.
void check_against_lasso_oracle(const char* text, int arity, int max_len) {
    LtlParseResult p = parse_ltl(text);
    Alphabet alph{{"a"}, arity};
    Dfa bad = bad_prefix_dfa(p.body, {"a"}, arity);
    std::set<TupleWord> satisfiable = oracle::satisfiable_prefixes(
        p.body, alph, max_len, max_len + bad.state_count, bad.state_count);
    for (const TupleWord& w : oracle::enumerate_words(alph, max_len)) {
        INFO(text << " on " << format_word(alph, w));
        CHECK(accepts(bad, w) == (satisfiable.count(w) == 0));
    }
}

}  // namespace

TEST_CASE("operator precedence and associativity") {
    CHECK(format_ltl(parse_ltl("a[p] | b[p] & c[p]").body) == "(a[0] | (b[0] & c[0]))");
    CHECK(format_ltl(parse_ltl("! a[p] U b[p]").body) == "(!a[0] U b[0])");
    CHECK(format_ltl(parse_ltl("a[p] -> b[p] -> c[p]").body) == "(a[0] -> (b[0] -> c[0]))");
    CHECK(format_ltl(parse_ltl("a[p] U b[p] U c[p]").body) == "(a[0] U (b[0] U c[0]))");
    CHECK(format_ltl(parse_ltl("a[p] <-> b[p] -> c[p]").body) == "(a[0] <-> (b[0] -> c[0]))");
    CHECK(format_ltl(parse_ltl("X G a[p]").body) == "X G a[0]");
    CHECK(format_ltl(parse_ltl("(a[p] | b[p]) & c[p]").body) == "((a[0] | b[0]) & c[0])");
    CHECK(format_ltl(parse_ltl("true & ! false").body) == "(true & !false)");
}

TEST_CASE("trace variables are numbered by first occurrence") {
    LtlParseResult r = parse_ltl("b[q] & a[p] & a[q]");
    REQUIRE(r.vars == std::vector<std::string>{"q", "p"});
    CHECK(format_ltl(r.body) == "((b[0] & a[1]) & a[0])");
}

TEST_CASE("parse errors carry their position") {
    CHECK_THROWS_AS(parse_ltl("a["), parse_error);
    CHECK_THROWS_AS(parse_ltl("a[p"), parse_error);
    CHECK_THROWS_AS(parse_ltl("a[p] &"), parse_error);
    CHECK_THROWS_AS(parse_ltl("a b"), parse_error);
    CHECK_THROWS_AS(parse_ltl("a[p] $ b[p]"), parse_error);
    CHECK_THROWS_AS(parse_ltl("a[p] - b[p]"), parse_error);
    CHECK_THROWS_AS(parse_ltl("a[p] < b[p]"), parse_error);
    CHECK_THROWS_WITH(parse_ltl("a[p] |"), Catch::Matchers::ContainsSubstring("line 1"));
    try {
        parse_ltl("a[p] &\n& b[p]");
        FAIL("expected a parse error");
    } catch (const parse_error& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 1);
    }
}

TEST_CASE("negation normal form pushes negations to the atoms") {
    LtlPtr nnf_until = to_nnf(parse_ltl("! (a[p] U b[p])").body);
    CHECK(ltl_equal(nnf_until, to_nnf(parse_ltl("(! a[p]) R (! b[p])").body)));

    LtlPtr nnf_iff_neg = to_nnf(parse_ltl("! (a[p] <-> b[p])").body);
    CHECK(ltl_equal(nnf_iff_neg,
                    to_nnf(parse_ltl("(a[p] & ! b[p]) | (! a[p] & b[p])").body)));

    LtlPtr nnf_iff = to_nnf(parse_ltl("a[p] <-> b[p]").body);
    CHECK(ltl_equal(nnf_iff, to_nnf(parse_ltl("(a[p] & b[p]) | (! a[p] & ! b[p])").body)));

    CHECK(ltl_equal(to_nnf(parse_ltl("! G a[p]").body), to_nnf(parse_ltl("F ! a[p]").body)));
    CHECK(ltl_equal(to_nnf(parse_ltl("! X a[p]").body), to_nnf(parse_ltl("X ! a[p]").body)));
    CHECK(ltl_equal(to_nnf(parse_ltl("! ! a[p]").body), parse_ltl("a[p]").body));
    CHECK(ltl_equal(to_nnf(parse_ltl("! true").body), ltl_false()));

    for (const char* text : {"a[p] & G (a[p] <-> a[q])", "! (a[p] U (b[p] | ! c[q]))",
                             "G (a[p] -> X b[q])", "(! a[p]) R (a[p] <-> b[q])"}) {
        LtlPtr n = to_nnf(parse_ltl(text).body);
        CHECK(negations_on_atoms_only(n));
        CHECK(ltl_equal(to_nnf(n), n));
    }
}

TEST_CASE("the safety fragment is X, R, G after normal form") {
    CHECK(is_syntactically_safe(to_nnf(parse_ltl("a[p] & G (a[p] <-> a[q])").body)));
    CHECK(is_syntactically_safe(to_nnf(parse_ltl("(! a[p]) R b[q]").body)));
    CHECK(is_syntactically_safe(to_nnf(parse_ltl("X X a[p]").body)));
    CHECK(is_syntactically_safe(to_nnf(parse_ltl("! (a[p] U b[p])").body)));
    CHECK_FALSE(is_syntactically_safe(to_nnf(parse_ltl("F a[p]").body)));
    CHECK_FALSE(is_syntactically_safe(to_nnf(parse_ltl("a[p] U b[p]").body)));
    CHECK_FALSE(is_syntactically_safe(to_nnf(parse_ltl("! G a[p]").body)));
    CHECK_FALSE(is_syntactically_safe(to_nnf(parse_ltl("! (a[p] R b[p])").body)));
    // raw formulas with unexpanded connectives are not in normal form
    CHECK_FALSE(is_syntactically_safe(parse_ltl("a[p] -> b[p]").body));
}

TEST_CASE("safety_nfa validates atoms against the alphabet") {
    CHECK_THROWS_AS(safety_nfa(parse_ltl("b[p]").body, {"a"}, 1), alphabet_mismatch_error);
    CHECK_THROWS_AS(safety_nfa(parse_ltl("a[p] & a[q]").body, {"a"}, 1), index_range_error);
    CHECK_THROWS_AS(safety_nfa(parse_ltl("a[p] U a[q]").body, {"a"}, 2), not_safe_error);
    CHECK_THROWS_AS(bad_prefix_dfa(parse_ltl("F a[p]").body, {"a"}, 1), not_safe_error);
}

TEST_CASE("every safety_nfa state admits an infinite continuation") {
    for (const char* text : {"G a[p]", "X a[p]", "(X a[p]) R a[p]", "G (a[p] -> a[q])"}) {
        LtlParseResult p = parse_ltl(text);
        int arity = static_cast<int>(p.vars.size());
        Nfa n = safety_nfa(p.body, {"a"}, arity);
        CHECK(n.all_accepting);
        for (int q = 0; q < n.state_count; ++q) {
            bool moves = false;
            for (std::size_t l = 0; l < n.alphabet.universe_size(); ++l)
                if (!n.next[q][l].empty()) moves = true;
            CHECK(moves);
        }
    }
}

TEST_CASE("an unsatisfiable body makes every word a bad prefix") {
    Nfa n = safety_nfa(parse_ltl("X (a[p] & ! a[p])").body, {"a"}, 1);
    CHECK(n.initial == -1);
    CHECK(n.state_count == 0);

    Dfa bad = bad_prefix_dfa(parse_ltl("false").body, {"a"}, 1);
    for (const TupleWord& w : oracle::enumerate_words(bad.alphabet, 3)) CHECK(accepts(bad, w));
    CHECK(accepts(bad, {}));

    Dfa never = bad_prefix_dfa(parse_ltl("true").body, {"a"}, 1);
    CHECK(oracle::accepted_words(never, 3).empty());
}

TEST_CASE("bad_prefix_dfa is tight with a single absorbing accepting state") {
    for (const char* text : {"G a[p]", "X a[p]", "(! a[p]) R a[p]", "a[p] <-> a[q]"}) {
        LtlParseResult p = parse_ltl(text);
        int arity = static_cast<int>(p.vars.size());
        Dfa bad = bad_prefix_dfa(p.body, {"a"}, arity);
        CHECK(tighten(bad) == bad);
        int acc = -1, count = 0;
        for (int q = 0; q < bad.state_count; ++q)
            if (bad.accepting[q]) { acc = q; ++count; }
        REQUIRE(count == 1);
        for (std::size_t l = 0; l < bad.alphabet.universe_size(); ++l)
            CHECK(bad.next[acc][l] == acc);
    }
}

TEST_CASE("bad prefixes of G a are the words leaving a") {
    Dfa bad = bad_prefix_dfa(parse_ltl("G a[p]").body, {"a"}, 1);
    for (const TupleWord& w : oracle::enumerate_words(bad.alphabet, 4)) {
        bool leaves = false;
        for (const ProductLetter& l : w)
            if (l.comps[0] == 0) leaves = true;
        CHECK(accepts(bad, w) == leaves);
    }
}

TEST_CASE("bad-prefix automata agree with the lasso-search oracle") {
    check_against_lasso_oracle("G a[p]", 1, 4);
    check_against_lasso_oracle("X a[p]", 1, 4);
    check_against_lasso_oracle("(! a[p]) R a[p]", 1, 4);
}
