#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>

#include "repr.hpp"

namespace hyperbpa {

// Size/time summary the CLI prints for a construction run.
struct ConstructionReport {
    int input_states = 0;
    int output_states = 0;
    int copies = 1;
    double wall_ms = 0.0;
};

// Swaps the accepting set for F' = Q \ live_states(a, Q \ F): the states from
// which every infinite path eventually visits F. States and transitions are
// untouched; F subseteq F', so the language only grows.
inline Dfa tighten(const Dfa& a) {
    std::vector<int> rest;
    for (int q = 0; q < a.state_count; ++q)
        if (!a.accepting[q]) rest.push_back(q);
    std::vector<int> live = live_states(a, rest);
    Dfa r = a;
    r.accepting.assign(a.state_count, 1);
    for (int q : live) r.accepting[q] = 0;
    return r;
}

// Reachable product of one permuted copy of `a` per map in `maps` (each map
// {0..k-1} -> {0..k2-1}), over the widened alphabet of arity k2. A product
// state is accepting iff some copy is accepting.
inline Dfa map_family_product(const Dfa& a, const std::vector<PermutationMap>& maps, int k2) {
    Alphabet wide{a.alphabet.aps, k2};
    const std::size_t U = wide.universe_size();
    const int n = static_cast<int>(maps.size());

    // Per map, the letter translation table into a's letter indices.
    std::vector<std::vector<std::size_t>> trans(n, std::vector<std::size_t>(U));
    for (std::size_t li = 0; li < U; ++li) {
        ProductLetter l = wide.letter_at(li);
        for (int i = 0; i < n; ++i)
            trans[i][li] = a.alphabet.index_of(project_letter(l, maps[i]));
    }

    Dfa p;
    p.alphabet = wide;
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> tuples;
    auto intern = [&](std::vector<int> tup) {
        auto it = ids.find(tup);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(tuples.size());
        ids.emplace(tup, id);
        char acc = 0;
        for (int q : tup)
            if (a.accepting[q]) { acc = 1; break; }
        tuples.push_back(std::move(tup));
        p.accepting.push_back(acc);
        p.next.emplace_back(U, -1);
        return id;
    };

    p.initial = intern(std::vector<int>(n, a.initial));
    std::queue<int> bfs;
    bfs.push(p.initial);
    while (!bfs.empty()) {
        int id = bfs.front();
        bfs.pop();
        for (std::size_t li = 0; li < U; ++li) {
            std::vector<int> t(n);
            for (int i = 0; i < n; ++i) t[i] = a.next[tuples[id][i]][trans[i][li]];
            bool fresh = ids.find(t) == ids.end();
            int tid = intern(std::move(t));
            p.next[id][li] = tid;
            if (fresh) bfs.push(tid);
        }
    }
    p.state_count = static_cast<int>(tuples.size());
    return p;
}

// Closure under all component reorderings: the reachable product of the k^k
// permuted copies (accepting iff some copy accepts), tightened afterwards.
// The result accepts w whenever from w every infinite continuation
// eventually has a prefix with some reordering accepted by `a`.
inline Dfa permutation_complete(const Dfa& a) {
    const int k = a.alphabet.arity;
    return tighten(map_family_product(a, enumerate_maps(k, k), k));
}

// Product of the k2^k copies reading a chosen component per source position:
// accepts w (arity k2) iff some map image of w is accepted by `a`.
inline Dfa permuted_projection(const Dfa& a, int k2) {
    const int k = a.alphabet.arity;
    if (k2 < k) throw bad_arity_error("permuted_projection: target arity below source arity");
    return map_family_product(a, enumerate_maps(k, k2), k2);
}

// Checks closure under all k^k maps: for each map in canonical order, tests
// L(permuted_copy(a, map)) subseteq L(a). nullopt means complete; otherwise
// the shortlex-least word of the first failing inclusion (its map image is
// accepted, the word itself is not).
inline std::optional<TupleWord> is_permutation_complete(const Dfa& a) {
    const int k = a.alphabet.arity;
    for (const PermutationMap& p : enumerate_maps(k, k)) {
        if (auto w = language_subset(permuted_copy(a, p), a)) return w;
    }
    return std::nullopt;
}

}  // namespace hyperbpa
