#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <vector>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace hyperbpa;
using fixtures::letter;

TEST_CASE("tighten matches the every-path-hits-acceptance oracle") {
    std::mt19937 rng(3001);
    for (int i = 0; i < 30; ++i) {
        Dfa a = fixtures::random_total_dfa(rng, 5, {"a"}, i % 2 ? 1 : 2);
        Dfa t = tighten(a);
        CHECK(t.next == a.next);
        CHECK(t.state_count == a.state_count);
        CHECK(t.initial == a.initial);
        CHECK(t.accepting == oracle::tighten_acceptance(a));
        for (int q = 0; q < a.state_count; ++q)
            if (a.accepting[q]) CHECK(t.accepting[q]);  // acceptance only grows
        CHECK(tighten(t) == t);
        CHECK(oracle::bounded_subset(a, t, 3));
    }
}

TEST_CASE("tighten promotes states whose every continuation gets accepted") {
    Dfa a;
    a.alphabet = Alphabet{{"a"}, 1};
    a.state_count = 2;
    a.initial = 0;
    a.accepting = {0, 1};
    a.next = {{1, 1}, {1, 1}};
    Dfa t = tighten(a);
    CHECK(t.accepting == std::vector<char>{1, 1});
    CHECK(accepts(t, {}));

    // Already-tight fixtures stay untouched.
    CHECK(tighten(fixtures::make_d1()) == fixtures::make_d1());
    CHECK(tighten(fixtures::make_d2()) == fixtures::make_d2());
    CHECK(tighten(fixtures::make_asym()) == fixtures::make_asym());
}

TEST_CASE("map_family_product accepts when some copy accepts the mapped word") {
    std::mt19937 rng(3002);
    for (int i = 0; i < 12; ++i) {
        Dfa a = fixtures::random_total_dfa(rng, 4, {"a"}, 2);
        std::vector<PermutationMap> maps;
        for (const PermutationMap& p : enumerate_maps(2, 2))
            if (rng() % 2 || maps.empty()) maps.push_back(p);
        Dfa prod = map_family_product(a, maps, 2);
        for (const TupleWord& w : oracle::enumerate_words(prod.alphabet, 3)) {
            bool expect = false;
            for (const PermutationMap& p : maps)
                if (accepts(a, permute_word(w, p))) { expect = true; break; }
            CHECK(accepts(prod, w) == expect);
        }
    }

    // Widening: arity-1 source read through both component choices.
    for (int i = 0; i < 8; ++i) {
        Dfa a = fixtures::random_total_dfa(rng, 4, {"a"}, 1);
        Dfa prod = map_family_product(a, enumerate_maps(1, 2), 2);
        REQUIRE(prod.alphabet.arity == 2);
        for (const TupleWord& w : oracle::enumerate_words(prod.alphabet, 3)) {
            bool expect = accepts(a, permute_word(w, {0})) || accepts(a, permute_word(w, {1}));
            CHECK(accepts(prod, w) == expect);
        }
    }
}

TEST_CASE("permutation_complete agrees with the joint-simulation closure oracle") {
    std::mt19937 rng(3003);
    std::vector<Dfa> inputs{fixtures::make_d2(), fixtures::make_asym()};
    for (int i = 0; i < 8; ++i) inputs.push_back(fixtures::random_total_dfa(rng, 4, {"a"}, 2));
    for (const Dfa& a : inputs) {
        Dfa pc = permutation_complete(a);
        REQUIRE(pc.alphabet == a.alphabet);
        for (const TupleWord& w : oracle::enumerate_words(a.alphabet, 3))
            CHECK(accepts(pc, w) == oracle::closure_acceptance_oracle(a, w));
    }
}

TEST_CASE("permutation_complete output is tight and closed") {
    std::mt19937 rng(3004);
    for (int i = 0; i < 10; ++i) {
        Dfa a = fixtures::random_total_dfa(rng, 4, {"a"}, 2);
        Dfa pc = permutation_complete(a);
        CHECK(tighten(pc) == pc);
        CHECK_FALSE(is_permutation_complete(pc));
        // contains every reordering image of the input language
        for (const PermutationMap& p : enumerate_maps(2, 2))
            for (const TupleWord& w : oracle::enumerate_words(a.alphabet, 3))
                if (accepts(a, permute_word(w, p))) CHECK(accepts(pc, w));
    }
}

TEST_CASE("permutation_complete fixes the symmetric fixture and opens the asymmetric one") {
    Dfa d2 = fixtures::make_d2();
    CHECK(language_equal(permutation_complete(d2), d2));

    Dfa pc = permutation_complete(fixtures::make_asym());
    std::set<TupleWord> expect{{letter({0, 1})}, {letter({1, 0})}};
    CHECK(oracle::accepted_words(pc, 3) == expect);
}

TEST_CASE("permuted_projection widens by choosing a source per component") {
    std::mt19937 rng(3005);
    for (int i = 0; i < 8; ++i) {
        Dfa a = fixtures::random_total_dfa(rng, 4, {"a"}, 2);
        Dfa proj = permuted_projection(a, 3);
        REQUIRE(proj.alphabet.arity == 3);
        for (const TupleWord& w : oracle::enumerate_words(proj.alphabet, 2)) {
            bool expect = false;
            for (const PermutationMap& p : enumerate_maps(2, 3))
                if (accepts(a, permute_word(w, p))) { expect = true; break; }
            CHECK(accepts(proj, w) == expect);
        }
        // at the same arity it is the closure before tightening
        CHECK(oracle::bounded_subset(permuted_projection(a, 2), permutation_complete(a), 3));
    }
    CHECK_THROWS_AS(permuted_projection(fixtures::make_d2(), 1), bad_arity_error);
}

TEST_CASE("is_permutation_complete returns the least uncovered reordering") {
    CHECK_FALSE(is_permutation_complete(fixtures::make_d2()));
    CHECK_FALSE(is_permutation_complete(fixtures::make_d1()));  // identity is the only map

    auto w = is_permutation_complete(fixtures::make_asym());
    REQUIRE(w);
    CHECK(*w == TupleWord{letter({0, 1})});

    std::mt19937 rng(3006);
    for (int i = 0; i < 15; ++i) {
        Dfa a = fixtures::random_total_dfa(rng, 4, {"a"}, 2);
        if (auto v = is_permutation_complete(a)) {
            CHECK_FALSE(accepts(a, *v));
            bool covered_elsewhere = false;
            for (const PermutationMap& p : enumerate_maps(2, 2))
                if (accepts(a, permute_word(*v, p))) covered_elsewhere = true;
            CHECK(covered_elsewhere);
        }
    }
}
