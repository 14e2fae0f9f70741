#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "automata.hpp"

namespace hyperbpa {

// One trace prefix: the AP subset per position, over some alphabet's AP list.
using Trace = std::vector<ApMask>;

// A finite set of equal-length trace prefixes. Traces are kept sorted in
// canonical letter order (lexicographic over bitmask letters) and distinct.
struct TraceSet {
    std::vector<std::string> aps;
    std::vector<Trace> traces;

    TraceSet() = default;
    TraceSet(std::vector<std::string> aps_, std::vector<Trace> traces_)
        : aps(std::move(aps_)), traces(std::move(traces_)) {
        for (const Trace& t : traces)
            if (t.size() != traces.front().size())
                throw ragged_traces_error("trace set: traces have different lengths");
        std::sort(traces.begin(), traces.end());
        traces.erase(std::unique(traces.begin(), traces.end()), traces.end());
    }

    bool operator==(const TraceSet&) const = default;

    std::size_t size() const { return traces.size(); }
    std::size_t length() const { return traces.empty() ? 0 : traces.front().size(); }
};

// A map {0..k-1} -> {0..m-1} written as a vector: map[i] = source component
// read by target component i. Repetition allowed; bijections are the
// classical permutations.
using PermutationMap = std::vector<int>;

inline PermutationMap identity_map(int k) {
    PermutationMap p(k);
    for (int i = 0; i < k; ++i) p[i] = i;
    return p;
}

inline bool is_bijective(const PermutationMap& p) {
    std::vector<char> seen(p.size(), 0);
    for (int v : p) {
        if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

// compose(p, q)[i] = p[q[i]]: permuting a word by q after permuting by p
// equals permuting once by compose(p, q).
inline PermutationMap compose_maps(const PermutationMap& p, const PermutationMap& q) {
    PermutationMap r(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < 0 || q[i] >= static_cast<int>(p.size()))
            throw index_range_error("compose_maps: index out of range");
        r[i] = p[q[i]];
    }
    return r;
}

// All maps {0..k-1} -> {0..m-1} in canonical order: mixed-radix counting with
// component 0 cycling fastest.
inline std::vector<PermutationMap> enumerate_maps(int k, int m) {
    std::vector<PermutationMap> out;
    std::size_t total = 1;
    for (int i = 0; i < k; ++i) total *= static_cast<std::size_t>(m);
    out.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        PermutationMap p(k);
        std::size_t rest = idx;
        for (int i = 0; i < k; ++i) {
            p[i] = static_cast<int>(rest % m);
            rest /= m;
        }
        out.push_back(std::move(p));
    }
    return out;
}

inline ProductLetter project_letter(const ProductLetter& l, const PermutationMap& p) {
    ProductLetter r;
    r.comps.reserve(p.size());
    for (int src : p) {
        if (src < 0 || src >= static_cast<int>(l.comps.size()))
            throw arity_mismatch_error("project_letter: map index outside letter arity");
        r.comps.push_back(l.comps[src]);
    }
    return r;
}

// Letterwise component reordering (with repetition): result component i
// traces source component p[i]. For |p| = arity this is a permuted word; for
// |p| < arity it is a projection.
inline TupleWord permute_word(const TupleWord& w, const PermutationMap& p) {
    TupleWord r;
    r.reserve(w.size());
    for (const ProductLetter& l : w) r.push_back(project_letter(l, p));
    return r;
}

// The component traces of a word, collapsed to a set. unzip of the empty
// word is the singleton of the empty trace.
inline TraceSet unzip(const Alphabet& alphabet, const TupleWord& w) {
    if (!alphabet.valid_word(w))
        throw alphabet_mismatch_error("unzip: word not over the given alphabet");
    std::vector<Trace> traces;
    for (int i = 0; i < alphabet.arity; ++i) {
        Trace t;
        t.reserve(w.size());
        for (const ProductLetter& l : w) t.push_back(l.comps[i]);
        traces.push_back(std::move(t));
    }
    if (traces.empty()) traces.push_back({});
    return TraceSet(alphabet.aps, std::move(traces));
}

// The canonical k-representation: sort traces canonically, pad to k
// components by repeating the last trace, zip positionwise.
inline TupleWord canonical_representation(const TraceSet& t, int k) {
    if (t.traces.empty()) throw too_many_traces_error("canonical_representation: empty trace set");
    if (static_cast<int>(t.size()) > k)
        throw too_many_traces_error("canonical_representation: more traces than components");
    std::vector<const Trace*> comp;
    for (const Trace& tr : t.traces) comp.push_back(&tr);
    while (static_cast<int>(comp.size()) < k) comp.push_back(&t.traces.back());
    TupleWord w;
    w.reserve(t.length());
    for (std::size_t j = 0; j < t.length(); ++j) {
        ProductLetter l;
        l.comps.reserve(k);
        for (const Trace* tr : comp) l.comps.push_back((*tr)[j]);
        w.push_back(std::move(l));
    }
    return w;
}

// Every word of arity k whose component traces are exactly the traces of t:
// the images of surjective assignments of components to traces, enumerated in
// canonical map order.
inline std::vector<TupleWord> all_representations(const TraceSet& t, int k) {
    if (t.traces.empty()) throw too_many_traces_error("all_representations: empty trace set");
    if (static_cast<int>(t.size()) > k)
        throw too_many_traces_error("all_representations: more traces than components");
    const int m = static_cast<int>(t.size());
    std::vector<TupleWord> out;
    for (const PermutationMap& f : enumerate_maps(k, m)) {
        std::vector<char> used(m, 0);
        for (int v : f) used[v] = 1;
        if (std::count(used.begin(), used.end(), 1) != m) continue;
        TupleWord w;
        w.reserve(t.length());
        for (std::size_t j = 0; j < t.length(); ++j) {
            ProductLetter l;
            l.comps.reserve(k);
            for (int v : f) l.comps.push_back(t.traces[v][j]);
            w.push_back(std::move(l));
        }
        out.push_back(std::move(w));
    }
    return out;
}

// Widens a word from arity k to k2 > k by repeating the last component.
inline TupleWord extend_word(const TupleWord& w, int k, int k2) {
    if (k2 <= k) throw bad_arity_error("extend_word: target arity must exceed source arity");
    TupleWord r;
    r.reserve(w.size());
    for (const ProductLetter& l : w) {
        if (static_cast<int>(l.comps.size()) != k)
            throw arity_mismatch_error("extend_word: letter arity mismatch");
        ProductLetter e = l;
        e.comps.resize(k2, l.comps[k - 1]);
        r.push_back(std::move(e));
    }
    return r;
}

// Drops components k..arity-1 of each letter; inverse of extend_word on its
// image.
inline TupleWord truncate_word(const TupleWord& w, int k) {
    TupleWord r;
    r.reserve(w.size());
    for (const ProductLetter& l : w) {
        ProductLetter t;
        t.comps.assign(l.comps.begin(), l.comps.begin() + k);
        r.push_back(std::move(t));
    }
    return r;
}

// Lifts a k-ary automaton to arity k2 > k: it accepts exactly the
// extend_word images of accepted words. Letters whose new components do not
// all repeat component k-1 fall into a fresh dead sink.
inline Dfa lift_automaton(const Dfa& a, int k2) {
    const int k = a.alphabet.arity;
    if (k2 <= k) throw bad_arity_error("lift_automaton: target arity must exceed source arity");
    Dfa r;
    r.alphabet = Alphabet{a.alphabet.aps, k2};
    const std::size_t U = r.alphabet.universe_size();
    const int dead = a.state_count;
    r.state_count = a.state_count + 1;
    r.initial = a.initial;
    r.accepting = a.accepting;
    r.accepting.push_back(0);
    r.next.assign(r.state_count, std::vector<int>(U, dead));
    for (std::size_t li = 0; li < U; ++li) {
        ProductLetter l = r.alphabet.letter_at(li);
        bool duplicated = true;
        for (int i = k; i < k2; ++i)
            if (l.comps[i] != l.comps[k - 1]) { duplicated = false; break; }
        if (!duplicated) continue;
        ProductLetter base;
        base.comps.assign(l.comps.begin(), l.comps.begin() + k);
        std::size_t bi = a.alphabet.index_of(base);
        for (int q = 0; q < a.state_count; ++q) r.next[q][li] = a.next[q][bi];
    }
    return r;
}

// Same states, rewired: the copy reads letter l as the original reads
// permute_word(l, p). accepts(permuted_copy(a, p), w) iff
// accepts(a, permute_word(w, p)).
inline Dfa permuted_copy(const Dfa& a, const PermutationMap& p) {
    if (static_cast<int>(p.size()) != a.alphabet.arity)
        throw arity_mismatch_error("permuted_copy: map size must equal automaton arity");
    for (int v : p)
        if (v < 0 || v >= a.alphabet.arity)
            throw index_range_error("permuted_copy: map value outside arity");
    Dfa r = a;
    const std::size_t U = a.alphabet.universe_size();
    for (std::size_t li = 0; li < U; ++li) {
        std::size_t src = a.alphabet.index_of(project_letter(a.alphabet.letter_at(li), p));
        for (int q = 0; q < a.state_count; ++q) r.next[q][li] = a.next[q][src];
    }
    return r;
}

}  // namespace hyperbpa
