#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperltl.hpp"

namespace hyperbpa {

// Oracle a learning run queries. Membership asks whether a finite trace set
// is a bad prefix of the target property; equivalence compares a conjecture
// automaton against the target up to representation, favoring negative
// counterexamples.
struct Teacher {
    virtual ~Teacher() = default;
    virtual const std::vector<std::string>& aps() const = 0;
    virtual int max_arity() const = 0;
    virtual bool member(const TraceSet& t) = 0;
    virtual std::optional<Counterexample> equivalence(const Dfa& conjecture) = 0;
};

class HyperLtlTeacher final : public Teacher {
  public:
    explicit HyperLtlTeacher(HyperFormula h, bool exact_minimize = false)
        : session_(std::move(h), exact_minimize) {}

    const std::vector<std::string>& aps() const override { return session_.aps(); }
    int max_arity() const override { return session_.width(); }
    bool member(const TraceSet& t) override { return session_.member(t); }
    std::optional<Counterexample> equivalence(const Dfa& conjecture) override {
        return session_.equivalence(conjecture);
    }

    HyperTeacher& session() { return session_; }

  private:
    HyperTeacher session_;
};

// Teacher backed by a reference automaton: the target property is "no tuple
// of traces ever grows a prefix the reference accepts".
class AutomatonTeacher final : public Teacher {
  public:
    explicit AutomatonTeacher(Dfa reference, bool exact_minimize = false)
        : ref_(std::move(reference)), exact_minimize_(exact_minimize) {
        tight_ref_ = tighten(ref_);
        canonical_ = permutation_complete(ref_);
        projections_.emplace(ref_.alphabet.arity, canonical_);
    }

    const std::vector<std::string>& aps() const override { return ref_.alphabet.aps; }
    int max_arity() const override { return ref_.alphabet.arity; }

    bool member(const TraceSet& t) override { return raw_member(t); }

    std::optional<Counterexample> equivalence(const Dfa& conjecture) override {
        if (conjecture.alphabet.aps != ref_.alphabet.aps)
            throw alphabet_mismatch_error("conjecture alphabet differs from the reference's");
        const int k_c = conjecture.alphabet.arity;
        const int k_r = ref_.alphabet.arity;
        if (k_c > k_r)
            throw bad_arity_error("conjecture arity exceeds the reference arity");

        // Bad prefixes are extension-closed, so rescanning the uncovered
        // lasso gives the shortest word the conjecture accepts although its
        // trace set is not bad.
        const Dfa wide = k_c < k_r ? lift_automaton(conjecture, k_r) : conjecture;
        if (CoveringVerdict v = covering_check(wide, canonical_); !v.ok) {
            TupleWord w = *shortest_accepted_prefix(wide, *v.witness);
            Counterexample cex;
            cex.kind = CexKind::negative;
            cex.word = k_c < k_r ? truncate_word(w, k_c) : std::move(w);
            return cex;
        }

        Dfa cover = tighten(permuted_projection(conjecture, k_r));
        if (CoveringVerdict v = covering_check(tight_ref_, cover); !v.ok) {
            auto w = shortest_accepted_prefix(tight_ref_, *v.witness);
            Counterexample cex;
            cex.kind = CexKind::positive;
            cex.traces = minimize_bad_prefix(unzip(ref_.alphabet, *w));
            return cex;
        }
        return std::nullopt;
    }

  private:
    const Dfa& projection_for(int k) {
        auto it = projections_.find(k);
        if (it == projections_.end())
            it = projections_.emplace(k, tighten(permuted_projection(ref_, k))).first;
        return it->second;
    }

    // t is bad iff running its canonical representation through the tightened
    // projection at arity max(|t|, reference arity) ever visits an accepting
    // state. The scan matters: an arbitrary reference may accept a short
    // prefix yet wander off acceptance afterwards.
    bool raw_member(const TraceSet& t) {
        if (t.aps != ref_.alphabet.aps)
            throw alphabet_mismatch_error("trace set alphabet differs from the reference's");
        const int k = std::max(static_cast<int>(t.size()), ref_.alphabet.arity);
        const Dfa& a = projection_for(k);
        TupleWord w = canonical_representation(t, k);
        int q = a.initial;
        if (a.accepting[q]) return true;
        for (const ProductLetter& l : w) {
            q = a.next[q][a.alphabet.index_of(l)];
            if (a.accepting[q]) return true;
        }
        return false;
    }

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

    Dfa ref_;
    Dfa tight_ref_;
    Dfa canonical_;
    bool exact_minimize_;
    std::map<int, Dfa> projections_;
};

// Angluin-style observation table over tuple words. S stays prefix-closed
// with epsilon first, E suffix-closed with epsilon first. Membership values
// are cached by unzipped trace set, so re-deriving an entry after an arity
// extension costs no query: the extended word unzips to the same set.
class ObservationTable {
  public:
    ObservationTable(Teacher& teacher, int arity)
        : teacher_(&teacher), alphabet_{teacher.aps(), arity} {
        S_.push_back({});
        E_.push_back({});
    }

    const Alphabet& alphabet() const { return alphabet_; }
    const std::vector<TupleWord>& prefixes() const { return S_; }
    const std::vector<TupleWord>& suffixes() const { return E_; }
    long long membership_queries() const { return membership_queries_; }

    std::vector<char> row(const TupleWord& s) {
        std::vector<char> r(E_.size());
        for (std::size_t j = 0; j < E_.size(); ++j) {
            TupleWord w = s;
            w.insert(w.end(), E_[j].begin(), E_[j].end());
            r[j] = query(w);
        }
        return r;
    }

    // Widens every table word by duplicating its last component.
    void grow_arity(int k2) {
        const int k = alphabet_.arity;
        if (k2 <= k) throw bad_arity_error("table arity can only grow");
        for (TupleWord& s : S_) s = extend_word(s, k, k2);
        for (TupleWord& e : E_) e = extend_word(e, k, k2);
        alphabet_.arity = k2;
        ready_ = false;
    }

    void add_counterexample(const TupleWord& w) {
        if (!alphabet_.valid_word(w))
            throw arity_mismatch_error("counterexample word does not fit the table alphabet");
        for (std::size_t len = 0; len <= w.size(); ++len) {
            TupleWord p(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(len));
            if (std::find(S_.begin(), S_.end(), p) == S_.end()) S_.push_back(std::move(p));
        }
        ready_ = false;
    }

    // Offending extension s.a whose row matches no S row, if any.
    std::optional<TupleWord> closedness_defect() {
        std::map<std::vector<char>, int> seen;
        for (const TupleWord& s : S_) seen.emplace(row(s), 1);
        const std::size_t U = alphabet_.universe_size();
        for (const TupleWord& s : S_)
            for (std::size_t li = 0; li < U; ++li) {
                TupleWord sa = s;
                sa.push_back(alphabet_.letter_at(li));
                if (!seen.count(row(sa))) return sa;
            }
        return std::nullopt;
    }

    // New suffix a.e separating two S words with equal rows, if any.
    std::optional<TupleWord> consistency_defect() {
        std::map<std::vector<char>, std::vector<std::size_t>> classes;
        for (std::size_t i = 0; i < S_.size(); ++i) classes[row(S_[i])].push_back(i);
        const std::size_t U = alphabet_.universe_size();
        for (const auto& [r, members] : classes) {
            if (members.size() < 2) continue;
            for (std::size_t li = 0; li < U; ++li) {
                ProductLetter a = alphabet_.letter_at(li);
                for (std::size_t x = 0; x + 1 < members.size(); ++x)
                    for (std::size_t y = x + 1; y < members.size(); ++y) {
                        TupleWord sa = S_[members[x]];
                        sa.push_back(a);
                        TupleWord sb = S_[members[y]];
                        sb.push_back(a);
                        std::vector<char> ra = row(sa), rb = row(sb);
                        for (std::size_t j = 0; j < E_.size(); ++j)
                            if (ra[j] != rb[j]) {
                                TupleWord e;
                                e.push_back(a);
                                e.insert(e.end(), E_[j].begin(), E_[j].end());
                                return e;
                            }
                    }
            }
        }
        return std::nullopt;
    }

    // Restores closedness first, then consistency, until both hold.
    void repair() {
        while (true) {
            if (auto sa = closedness_defect()) {
                S_.push_back(std::move(*sa));
                continue;
            }
            if (auto e = consistency_defect()) {
                E_.push_back(std::move(*e));
                continue;
            }
            break;
        }
        ready_ = true;
    }

    // Row-quotient automaton, canonicalized. Valid only after repair().
    Dfa hypothesis() {
        if (!ready_) throw table_not_ready_error("hypothesis requested from an unrepaired table");
        std::map<std::vector<char>, int> classes;
        std::vector<std::size_t> rep;  // first S index per class
        std::vector<std::vector<char>> class_rows;
        for (std::size_t i = 0; i < S_.size(); ++i) {
            std::vector<char> r = row(S_[i]);
            if (classes.emplace(r, static_cast<int>(rep.size())).second) {
                rep.push_back(i);
                class_rows.push_back(std::move(r));
            }
        }
        Dfa h;
        h.alphabet = alphabet_;
        h.state_count = static_cast<int>(rep.size());
        h.initial = classes.at(row(S_[0]));
        h.accepting.resize(h.state_count);
        const std::size_t U = alphabet_.universe_size();
        h.next.assign(h.state_count, std::vector<int>(U, -1));
        for (int c = 0; c < h.state_count; ++c) {
            h.accepting[c] = class_rows[c][0];
            for (std::size_t li = 0; li < U; ++li) {
                TupleWord sa = S_[rep[c]];
                sa.push_back(alphabet_.letter_at(li));
                auto it = classes.find(row(sa));
                if (it == classes.end())
                    throw table_not_ready_error("table lost closedness under the hood");
                h.next[c][li] = it->second;
            }
        }
        return canonicalize(h);
    }

  private:
    char query(const TupleWord& w) {
        TraceSet t = unzip(alphabet_, w);
        auto it = member_cache_.find(t.traces);
        if (it != member_cache_.end()) return it->second;
        ++membership_queries_;
        bool r = teacher_->member(t);
        member_cache_.emplace(t.traces, static_cast<char>(r));
        return static_cast<char>(r);
    }

    Teacher* teacher_;
    Alphabet alphabet_;
    std::vector<TupleWord> S_;
    std::vector<TupleWord> E_;
    std::map<std::vector<Trace>, char> member_cache_;
    long long membership_queries_ = 0;
    bool ready_ = false;
};

struct LearnConfig {
    int max_rounds = 256;  // hypotheses before giving up
    int max_arity = 0;     // 0 = the teacher's maximum
};

struct LearnRound {
    int arity = 0;
    int states = 0;
    int rows = 0;  // |S| when the hypothesis was proposed
};

struct LearnReport {
    Dfa automaton;
    int final_arity = 0;
    int final_states = 0;
    long long membership_queries = 0;
    long long equivalence_queries = 0;
    int rounds = 0;
    std::vector<LearnRound> round_log;
    std::vector<Dfa> hypotheses;
};

struct budget_exceeded_error : error {
    LearnReport partial;
    budget_exceeded_error(const std::string& what, LearnReport r)
        : error(what), partial(std::move(r)) {}
};

// Learns a bad-prefix automaton for the teacher's property, starting at
// arity one and growing it only when a positive counterexample carries more
// traces than the current width fits.
inline LearnReport learn(Teacher& teacher, const LearnConfig& cfg = {}) {
    const int cap = cfg.max_arity > 0 ? cfg.max_arity : teacher.max_arity();
    ObservationTable table(teacher, 1);
    LearnReport rep;
    while (true) {
        table.repair();
        Dfa h = table.hypothesis();
        rep.round_log.push_back(
            {h.alphabet.arity, h.state_count, static_cast<int>(table.prefixes().size())});
        rep.hypotheses.push_back(h);
        rep.rounds = static_cast<int>(rep.hypotheses.size());
        rep.membership_queries = table.membership_queries();
        ++rep.equivalence_queries;
        std::optional<Counterexample> cex = teacher.equivalence(h);
        if (!cex) {
            rep.automaton = std::move(h);
            rep.final_arity = rep.automaton.alphabet.arity;
            rep.final_states = rep.automaton.state_count;
            return rep;
        }
        if (cex->kind == CexKind::negative) {
            table.add_counterexample(cex->word);
        } else {
            const int k2 =
                std::max(static_cast<int>(cex->traces.size()), table.alphabet().arity);
            if (k2 > cap)
                throw arity_too_large_error("counterexample needs arity " + std::to_string(k2) +
                                            " but the cap is " + std::to_string(cap));
            if (k2 > table.alphabet().arity) table.grow_arity(k2);
            table.add_counterexample(canonical_representation(cex->traces, k2));
        }
        if (rep.rounds >= cfg.max_rounds) {
            rep.automaton = std::move(h);
            rep.final_arity = rep.automaton.alphabet.arity;
            rep.final_states = rep.automaton.state_count;
            throw budget_exceeded_error(
                "no equivalent hypothesis within " + std::to_string(cfg.max_rounds) + " rounds",
                std::move(rep));
        }
    }
}

}  // namespace hyperbpa
