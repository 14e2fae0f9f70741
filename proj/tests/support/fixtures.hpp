#pragma once

// Hand-built automata, formula texts, and deterministic random automaton
// generation shared across the test binaries.

#include <random>
#include <string>
#include <vector>

#include <hyperbpa/hyperbpa.hpp>

namespace fixtures {

using namespace hyperbpa;

inline ProductLetter letter(std::vector<ApMask> comps) {
    ProductLetter l;
    l.comps = std::move(comps);
    return l;
}

// Arity-1 automaton over {a}: accepts every word whose first letter is {}.
inline Dfa make_d1() {
    Dfa d;
    d.alphabet = Alphabet{{"a"}, 1};
    d.state_count = 3;
    d.initial = 0;
    d.accepting = {0, 1, 0};
    d.next = {{1, 2}, {1, 1}, {2, 2}};
    return d;
}

// Arity-2 automaton over {a}: bad prefixes of "every trace starts with a and
// all traces agree on a forever". Letters indexed {},{} 0 / {},{a} 1 /
// {a},{} 2 / {a},{a} 3.
inline Dfa make_d2() {
    Dfa d;
    d.alphabet = Alphabet{{"a"}, 2};
    d.state_count = 3;
    d.initial = 0;
    d.accepting = {0, 1, 0};
    d.next = {{1, 1, 1, 2}, {1, 1, 1, 1}, {2, 1, 1, 2}};
    return d;
}

// Arity-2 automaton accepting exactly the one-letter word ({a},{}).
inline Dfa make_asym() {
    Dfa d;
    d.alphabet = Alphabet{{"a"}, 2};
    d.state_count = 3;
    d.initial = 0;
    d.accepting = {0, 1, 0};
    d.next = {{2, 2, 1, 2}, {2, 2, 2, 2}, {2, 2, 2, 2}};
    return d;
}

inline const char* phi_run() { return "forall p. forall q. a[p] & G (a[p] <-> a[q])"; }

inline const char* phi_intro() { return "forall p. forall q. G (a[p] -> a[q])"; }

inline const char* phi_ni() {
    return "forall p. forall q. (! (i[p] <-> i[q])) R (o[p] <-> o[q])";
}

// Deterministic random total automaton; plain modulo keeps the value stream
// identical across standard library implementations.
inline Dfa random_total_dfa(std::mt19937& rng, int max_states, const std::vector<std::string>& aps,
                            int arity) {
    Dfa d;
    d.alphabet = Alphabet{aps, arity};
    d.state_count = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_states));
    d.initial = 0;
    d.accepting.resize(d.state_count);
    d.next.assign(d.state_count, std::vector<int>(d.alphabet.universe_size()));
    for (int q = 0; q < d.state_count; ++q) {
        d.accepting[q] = rng() % 2 ? 1 : 0;
        for (std::size_t l = 0; l < d.alphabet.universe_size(); ++l)
            d.next[q][l] = static_cast<int>(rng() % static_cast<unsigned>(d.state_count));
    }
    return d;
}

// Make every accepting state absorbing. The result accepts all extensions of
// accepted words, which is the shape learning targets are drawn from.
inline Dfa extension_closed(Dfa d) {
    for (int q = 0; q < d.state_count; ++q)
        if (d.accepting[q])
            for (std::size_t l = 0; l < d.alphabet.universe_size(); ++l) d.next[q][l] = q;
    return d;
}

// Arity-1 automaton reading only the diagonal letters (m, m, ..., m) of d.
inline Dfa diagonal_restriction(const Dfa& d) {
    Dfa r;
    r.alphabet = Alphabet{d.alphabet.aps, 1};
    r.state_count = d.state_count;
    r.initial = d.initial;
    r.accepting = d.accepting;
    r.next.assign(r.state_count, std::vector<int>(r.alphabet.universe_size()));
    for (int q = 0; q < r.state_count; ++q)
        for (std::size_t m = 0; m < r.alphabet.universe_size(); ++m) {
            ProductLetter l;
            l.comps.assign(d.alphabet.arity, static_cast<ApMask>(m));
            r.next[q][m] = d.next[q][d.alphabet.index_of(l)];
        }
    return r;
}

}  // namespace fixtures
