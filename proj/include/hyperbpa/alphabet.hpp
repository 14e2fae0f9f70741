#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace hyperbpa {

// One position of a product letter: the set of atomic propositions that hold,
// as a bitmask over the alphabet's AP list (bit i <=> aps[i] present).
using ApMask = std::uint32_t;

// A letter of the product alphabet (2^AP)^arity: one AP subset per component.
struct ProductLetter {
    std::vector<ApMask> comps;

    auto operator<=>(const ProductLetter&) const = default;
};

// A finite word over the product alphabet. All letters share one arity;
// the empty word is valid at any arity.
using TupleWord = std::vector<ProductLetter>;

// Finite product alphabet: named APs in declaration order plus an arity.
// The letter universe is enumerable in canonical order: AP subsets as
// ascending bitmasks, tuples lexicographic with component 0 most significant.
struct Alphabet {
    std::vector<std::string> aps;
    int arity = 1;

    bool operator==(const Alphabet&) const = default;

    std::size_t base() const { return std::size_t{1} << aps.size(); }

    std::size_t universe_size() const {
        std::size_t n = 1;
        for (int i = 0; i < arity; ++i) n *= base();
        return n;
    }

    bool valid_letter(const ProductLetter& l) const {
        if (static_cast<int>(l.comps.size()) != arity) return false;
        for (ApMask m : l.comps)
            if (m >= base()) return false;
        return true;
    }

    std::size_t index_of(const ProductLetter& l) const {
        if (!valid_letter(l))
            throw arity_mismatch_error("letter does not belong to this alphabet");
        std::size_t idx = 0;
        for (ApMask m : l.comps) idx = idx * base() + m;
        return idx;
    }

    ProductLetter letter_at(std::size_t idx) const {
        ProductLetter l;
        l.comps.assign(arity, 0);
        for (int i = arity - 1; i >= 0; --i) {
            l.comps[i] = static_cast<ApMask>(idx % base());
            idx /= base();
        }
        return l;
    }

    bool valid_word(const TupleWord& w) const {
        for (const ProductLetter& l : w)
            if (!valid_letter(l)) return false;
        return true;
    }
};

// Canonical word order: shorter first, then letterwise lexicographic.
// This is the order BFS over the letter universe discovers words in.
inline bool shortlex_less(const TupleWord& a, const TupleWord& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

inline void require_same_alphabet(const Alphabet& a, const Alphabet& b,
                                  const char* what) {
    if (!(a == b))
        throw alphabet_mismatch_error(std::string(what) +
                                      ": operands have different alphabets");
}

}  // namespace hyperbpa
