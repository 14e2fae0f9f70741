#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "alphabet.hpp"

namespace hyperbpa {

// Nondeterministic finite automaton over a product alphabet. Transitions may
// be partial; a stuck run is simply not a run. `initial < 0` means the
// automaton has no runs at all (arises when a safety tableau prunes its own
// initial obligation).
struct Nfa {
    Alphabet alphabet;
    int state_count = 0;
    int initial = -1;
    std::vector<char> accepting;                      // [state]
    std::vector<std::vector<std::vector<int>>> next;  // [state][letter] -> targets
    bool all_accepting = false;

    bool valid_state(int q) const { return q >= 0 && q < state_count; }
};

// Deterministic, total automaton: exactly one successor per state and letter.
struct Dfa {
    Alphabet alphabet;
    int state_count = 0;
    int initial = 0;
    std::vector<char> accepting;         // [state]
    std::vector<std::vector<int>> next;  // [state][letter] -> state

    bool operator==(const Dfa&) const = default;

    bool valid_state(int q) const { return q >= 0 && q < state_count; }
};

// Completes a possibly-partial deterministic transition table: every missing
// edge (-1) is pointed at a fresh non-accepting dead sink, appended only when
// actually needed.
inline Dfa complete_dfa(Dfa a) {
    bool needs_dead = false;
    for (const auto& row : a.next)
        for (int t : row)
            if (t < 0) { needs_dead = true; break; }
    if (!needs_dead) return a;
    int dead = a.state_count;
    a.state_count += 1;
    a.accepting.push_back(0);
    a.next.emplace_back(a.alphabet.universe_size(), dead);
    for (int q = 0; q < dead; ++q)
        for (int& t : a.next[q])
            if (t < 0) t = dead;
    return a;
}

inline int run(const Dfa& a, const TupleWord& w) {
    if (!a.alphabet.valid_word(w))
        throw alphabet_mismatch_error("run: word not over the automaton's alphabet");
    int q = a.initial;
    for (const ProductLetter& l : w) q = a.next[q][a.alphabet.index_of(l)];
    return q;
}

inline bool accepts(const Dfa& a, const TupleWord& w) {
    return a.accepting[run(a, w)] != 0;
}

// View of a DFA as an NFA with the identical language.
inline Nfa nfa_view(const Dfa& a) {
    Nfa n;
    n.alphabet = a.alphabet;
    n.state_count = a.state_count;
    n.initial = a.initial;
    n.accepting = a.accepting;
    n.next.assign(a.state_count, {});
    for (int q = 0; q < a.state_count; ++q) {
        n.next[q].assign(a.alphabet.universe_size(), {});
        for (std::size_t l = 0; l < a.alphabet.universe_size(); ++l)
            n.next[q][l] = {a.next[q][l]};
    }
    n.all_accepting =
        std::all_of(n.accepting.begin(), n.accepting.end(), [](char c) { return c != 0; });
    return n;
}

// Subset construction. Only reachable subsets are kept, discovered by BFS in
// canonical letter order so state numbering is reproducible. The empty subset
// is materialized as an explicit dead state whenever some move is empty (or
// when `force_dead` asks for it), keeping the result total.
inline Dfa determinize(const Nfa& n, bool force_dead = false, int* dead_out = nullptr) {
    const std::size_t U = n.alphabet.universe_size();
    Dfa d;
    d.alphabet = n.alphabet;
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> subsets;
    int dead = -1;

    auto intern = [&](std::vector<int> subset) {
        auto it = ids.find(subset);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(subsets.size());
        ids.emplace(subset, id);
        subsets.push_back(std::move(subset));
        d.accepting.push_back(0);
        d.next.emplace_back(U, -1);
        if (subsets.back().empty()) dead = id;
        return id;
    };

    std::vector<int> init;
    if (n.initial >= 0) init.push_back(n.initial);
    d.initial = intern(std::move(init));

    std::queue<int> bfs;
    bfs.push(d.initial);
    while (!bfs.empty()) {
        int id = bfs.front();
        bfs.pop();
        for (std::size_t l = 0; l < U; ++l) {
            std::vector<int> succ;
            for (int q : subsets[id]) {
                const auto& ts = n.next[q][l];
                succ.insert(succ.end(), ts.begin(), ts.end());
            }
            std::sort(succ.begin(), succ.end());
            succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
            bool fresh = ids.find(succ) == ids.end();
            int t = intern(std::move(succ));
            d.next[id][l] = t;
            if (fresh) bfs.push(t);
        }
    }
    if (force_dead && dead < 0) {
        dead = intern({});
        for (std::size_t l = 0; l < U; ++l) d.next[dead][l] = dead;
    }
    if (dead >= 0)
        for (std::size_t l = 0; l < U; ++l) d.next[dead][l] = dead;

    d.state_count = static_cast<int>(subsets.size());
    for (int id = 0; id < d.state_count; ++id)
        for (int q : subsets[id])
            if (n.accepting[q]) { d.accepting[id] = 1; break; }
    if (dead_out) *dead_out = dead;
    return d;
}

enum class Combine { conjunction, disjunction, difference };

inline bool combine_acc(Combine c, bool a, bool b) {
    switch (c) {
        case Combine::conjunction: return a && b;
        case Combine::disjunction: return a || b;
        case Combine::difference: return a && !b;
    }
    return false;
}

// Reachable synchronous product, BFS in canonical letter order. `labels`
// (optional) receives the originating state pair per product state, for
// witness extraction.
inline Dfa product(const Dfa& a, const Dfa& b, Combine mode,
                   std::vector<std::pair<int, int>>* labels = nullptr) {
    require_same_alphabet(a.alphabet, b.alphabet, "product");
    const std::size_t U = a.alphabet.universe_size();
    Dfa p;
    p.alphabet = a.alphabet;
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> pairs;

    auto intern = [&](std::pair<int, int> pr) {
        auto it = ids.find(pr);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(pairs.size());
        ids.emplace(pr, id);
        pairs.push_back(pr);
        p.accepting.push_back(
            combine_acc(mode, a.accepting[pr.first] != 0, b.accepting[pr.second] != 0) ? 1 : 0);
        p.next.emplace_back(U, -1);
        return id;
    };

    p.initial = intern({a.initial, b.initial});
    std::queue<int> bfs;
    bfs.push(p.initial);
    while (!bfs.empty()) {
        int id = bfs.front();
        bfs.pop();
        auto [qa, qb] = pairs[id];
        for (std::size_t l = 0; l < U; ++l) {
            std::pair<int, int> t{a.next[qa][l], b.next[qb][l]};
            bool fresh = ids.find(t) == ids.end();
            int tid = intern(t);
            p.next[id][l] = tid;
            if (fresh) bfs.push(tid);
        }
    }
    p.state_count = static_cast<int>(pairs.size());
    if (labels) *labels = std::move(pairs);
    return p;
}

inline Dfa complement(Dfa a) {
    for (char& c : a.accepting) c = c ? 0 : 1;
    return a;
}

// States of `allowed` from which some infinite path stays inside `allowed`
// forever: the greatest fixpoint of "has a successor in the set", computed by
// iteratively deleting states with none.
inline std::vector<int> live_states(const Dfa& a, std::vector<int> allowed) {
    const std::size_t U = a.alphabet.universe_size();
    std::sort(allowed.begin(), allowed.end());
    allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());
    std::vector<char> in(a.state_count, 0);
    for (int q : allowed) {
        if (!a.valid_state(q)) throw index_range_error("live_states: state out of range");
        in[q] = 1;
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int q = 0; q < a.state_count; ++q) {
            if (!in[q]) continue;
            bool has = false;
            for (std::size_t l = 0; l < U; ++l)
                if (in[a.next[q][l]]) { has = true; break; }
            if (!has) {
                in[q] = 0;
                changed = true;
            }
        }
    }
    std::vector<int> out;
    for (int q = 0; q < a.state_count; ++q)
        if (in[q]) out.push_back(q);
    return out;
}

// Renumbers states in BFS discovery order from the initial state, expanding
// letters canonically. Unreachable states are dropped. Two isomorphic
// reachable DFAs canonicalize to identical values.
inline Dfa canonicalize(const Dfa& a) {
    const std::size_t U = a.alphabet.universe_size();
    std::vector<int> order(a.state_count, -1);
    std::vector<int> bfs;
    order[a.initial] = 0;
    bfs.push_back(a.initial);
    for (std::size_t i = 0; i < bfs.size(); ++i) {
        int q = bfs[i];
        for (std::size_t l = 0; l < U; ++l) {
            int t = a.next[q][l];
            if (order[t] < 0) {
                order[t] = static_cast<int>(bfs.size());
                bfs.push_back(t);
            }
        }
    }
    Dfa c;
    c.alphabet = a.alphabet;
    c.state_count = static_cast<int>(bfs.size());
    c.initial = 0;
    c.accepting.assign(c.state_count, 0);
    c.next.assign(c.state_count, std::vector<int>(U, 0));
    for (int q : bfs) {
        c.accepting[order[q]] = a.accepting[q];
        for (std::size_t l = 0; l < U; ++l) c.next[order[q]][l] = order[a.next[q][l]];
    }
    return c;
}

inline bool isomorphic(const Dfa& a, const Dfa& b) {
    if (!(a.alphabet == b.alphabet)) return false;
    return canonicalize(a) == canonicalize(b);
}

// Minimal DFA with the same language: reachable restriction, then partition
// refinement, then canonical BFS numbering.
inline Dfa minimize(const Dfa& a0) {
    Dfa a = canonicalize(a0);  // also drops unreachable states
    const std::size_t U = a.alphabet.universe_size();
    std::vector<int> cls(a.state_count);
    for (int q = 0; q < a.state_count; ++q) cls[q] = a.accepting[q] ? 1 : 0;

    while (true) {
        std::map<std::vector<int>, int> sig_ids;
        std::vector<int> fresh(a.state_count);
        for (int q = 0; q < a.state_count; ++q) {
            std::vector<int> sig;
            sig.reserve(U + 1);
            sig.push_back(cls[q]);
            for (std::size_t l = 0; l < U; ++l) sig.push_back(cls[a.next[q][l]]);
            auto [it, ins] = sig_ids.emplace(std::move(sig), static_cast<int>(sig_ids.size()));
            fresh[q] = it->second;
            (void)ins;
        }
        if (fresh == cls) break;
        cls = std::move(fresh);
    }

    int classes = *std::max_element(cls.begin(), cls.end()) + 1;
    Dfa m;
    m.alphabet = a.alphabet;
    m.state_count = classes;
    m.initial = cls[a.initial];
    m.accepting.assign(classes, 0);
    m.next.assign(classes, std::vector<int>(U, 0));
    for (int q = 0; q < a.state_count; ++q) {
        m.accepting[cls[q]] = a.accepting[q];
        for (std::size_t l = 0; l < U; ++l) m.next[cls[q]][l] = cls[a.next[q][l]];
    }
    return canonicalize(m);
}

// Shortest accepted word; BFS in canonical letter order, so the result is the
// shortlex-least member of the language. Empty language gives nullopt.
inline std::optional<TupleWord> shortest_accepted(const Dfa& a) {
    const std::size_t U = a.alphabet.universe_size();
    std::vector<int> parent(a.state_count, -2);
    std::vector<std::size_t> via(a.state_count, 0);
    std::queue<int> bfs;
    parent[a.initial] = -1;
    bfs.push(a.initial);
    int hit = a.accepting[a.initial] ? a.initial : -1;
    while (hit < 0 && !bfs.empty()) {
        int q = bfs.front();
        bfs.pop();
        for (std::size_t l = 0; l < U && hit < 0; ++l) {
            int t = a.next[q][l];
            if (parent[t] != -2) continue;
            parent[t] = q;
            via[t] = l;
            if (a.accepting[t]) hit = t;
            bfs.push(t);
        }
    }
    if (hit < 0) return std::nullopt;
    TupleWord w;
    for (int q = hit; parent[q] != -1; q = parent[q]) w.push_back(a.alphabet.letter_at(via[q]));
    std::reverse(w.begin(), w.end());
    return w;
}

// L(a) subseteq L(b)? nullopt means yes; otherwise the shortlex-least word in
// L(a) \ L(b).
inline std::optional<TupleWord> language_subset(const Dfa& a, const Dfa& b) {
    return shortest_accepted(product(a, b, Combine::difference));
}

inline bool language_equal(const Dfa& a, const Dfa& b) {
    return !language_subset(a, b) && !language_subset(b, a);
}

}  // namespace hyperbpa
