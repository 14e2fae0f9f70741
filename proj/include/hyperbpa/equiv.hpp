#pragma once

#include <optional>

#include "constructions.hpp"

namespace hyperbpa {

// Ultimately periodic word prefix . cycle^omega.
struct LassoWitness {
    TupleWord prefix;
    TupleWord cycle;
};

struct CoveringVerdict {
    bool ok = false;
    std::optional<LassoWitness> witness;
};

// Does every infinite word with some producer-accepted prefix also have some
// coverer-accepted prefix? Decided on the synchronous product restricted to
// coverer-non-accepting states: the check fails iff a producer-accepting
// state is reachable there that still admits an infinite restricted path.
// The witness lasso runs entirely inside the restricted product and passes
// through the offending producer-accepting state; the stem may continue past
// it to reach the cycle, so callers wanting the earliest acceptance rescan
// with shortest_accepted_prefix.
inline CoveringVerdict covering_check(const Dfa& producer, const Dfa& coverer) {
    require_same_alphabet(producer.alphabet, coverer.alphabet, "covering_check");
    const std::size_t U = producer.alphabet.universe_size();

    std::vector<std::pair<int, int>> labels;
    Dfa p = product(producer, coverer, Combine::conjunction, &labels);

    std::vector<char> restricted(p.state_count, 0);
    std::vector<int> restricted_list;
    for (int q = 0; q < p.state_count; ++q)
        if (!coverer.accepting[labels[q].second]) {
            restricted[q] = 1;
            restricted_list.push_back(q);
        }
    // Covered at the empty prefix: nothing to check.
    if (!restricted[p.initial]) return {true, std::nullopt};

    std::vector<char> live(p.state_count, 0);
    for (int q : live_states(p, restricted_list)) live[q] = 1;

    // BFS through restricted states only, canonical letter order.
    std::vector<int> parent(p.state_count, -2);
    std::vector<std::size_t> via(p.state_count, 0);
    std::queue<int> bfs;
    parent[p.initial] = -1;
    bfs.push(p.initial);
    auto offending = [&](int q) { return producer.accepting[labels[q].first] && live[q]; };
    int hit = offending(p.initial) ? p.initial : -1;
    while (hit < 0 && !bfs.empty()) {
        int q = bfs.front();
        bfs.pop();
        for (std::size_t l = 0; l < U && hit < 0; ++l) {
            int t = p.next[q][l];
            if (!restricted[t] || parent[t] != -2) continue;
            parent[t] = q;
            via[t] = l;
            if (offending(t)) hit = t;
            bfs.push(t);
        }
    }
    if (hit < 0) return {true, std::nullopt};

    LassoWitness w;
    for (int q = hit; parent[q] != -1; q = parent[q])
        w.prefix.push_back(p.alphabet.letter_at(via[q]));
    std::reverse(w.prefix.begin(), w.prefix.end());

    // Infinite restricted continuation: walk inside the live set taking the
    // canonically least viable letter until a state repeats.
    std::vector<int> walk_pos(p.state_count, -1);
    std::vector<int> walk_states;
    TupleWord walk_letters;
    int cur = hit;
    while (walk_pos[cur] < 0) {
        walk_pos[cur] = static_cast<int>(walk_states.size());
        walk_states.push_back(cur);
        for (std::size_t l = 0; l < U; ++l) {
            int t = p.next[cur][l];
            if (live[t]) {
                walk_letters.push_back(p.alphabet.letter_at(l));
                cur = t;
                break;
            }
        }
    }
    int loop_at = walk_pos[cur];
    w.prefix.insert(w.prefix.end(), walk_letters.begin(), walk_letters.begin() + loop_at);
    w.cycle.assign(walk_letters.begin() + loop_at, walk_letters.end());
    return {false, std::move(w)};
}

// The shortlex-least prefix of prefix . cycle^omega that `a` accepts, if any
// appears within one full traversal of the automaton's states around the
// cycle.
inline std::optional<TupleWord> shortest_accepted_prefix(const Dfa& a, const LassoWitness& w) {
    TupleWord word;
    int q = a.initial;
    if (a.accepting[q]) return word;
    std::size_t bound = w.prefix.size() + w.cycle.size() * (a.state_count + 1);
    for (std::size_t i = 0; i < bound; ++i) {
        const ProductLetter& l = i < w.prefix.size()
                                     ? w.prefix[i]
                                     : w.cycle[(i - w.prefix.size()) % w.cycle.size()];
        q = a.next[q][a.alphabet.index_of(l)];
        word.push_back(l);
        if (a.accepting[q]) return word;
    }
    return std::nullopt;
}

// Which side of representation_equivalent failed to be covered.
enum class EquivDirection {
    first_uncovered = 1,   // `a` accepts a representation the closure of `b` never covers
    second_uncovered = 2,  // `b` accepts a representation the projections of `a` never cover
};

struct EquivViolation {
    EquivDirection direction;
    TraceSet bad_prefix;  // unzip of the uncovered producer-accepted prefix
};

// Do `a` (arity k) and `b` (arity k2 >= k) represent the same hyperproperty?
// Checked as two covering obligations at arity k2; nullopt means equivalent.
inline std::optional<EquivViolation> representation_equivalent(const Dfa& a, const Dfa& b) {
    const int k = a.alphabet.arity;
    const int k2 = b.alphabet.arity;
    if (a.alphabet.aps != b.alphabet.aps)
        throw alphabet_mismatch_error("representation_equivalent: different AP sets");
    if (k > k2)
        throw bad_arity_error("representation_equivalent: first arity must not exceed second");

    Alphabet wide{a.alphabet.aps, k2};
    Dfa a_lift = k < k2 ? lift_automaton(a, k2) : a;

    Dfa closure_b = tighten(permutation_complete(b));
    CoveringVerdict one = covering_check(a_lift, closure_b);
    if (!one.ok) {
        auto pre = shortest_accepted_prefix(a_lift, *one.witness);
        return EquivViolation{EquivDirection::first_uncovered, unzip(wide, *pre)};
    }

    Dfa b_tight = tighten(b);
    Dfa proj_a = tighten(permuted_projection(a, k2));
    CoveringVerdict two = covering_check(b_tight, proj_a);
    if (!two.ok) {
        auto pre = shortest_accepted_prefix(b_tight, *two.witness);
        return EquivViolation{EquivDirection::second_uncovered, unzip(wide, *pre)};
    }
    return std::nullopt;
}

}  // namespace hyperbpa
