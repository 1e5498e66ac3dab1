#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "axver/syntax.hpp"
#include "axver/term.hpp"

namespace axver {

/// Union-find over a finite, subterm-closed set of terms, congruence closed and
/// saturated under the commutativity/idempotence axioms on present terms.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<TermId> terms);

    const std::vector<TermId>& terms() const { return terms_; }
    bool contains(TermId t) const;
    /// Representative of t's class (its smallest term).
    TermId find(TermId t) const { return terms_[root(index(t))]; }
    bool same(TermId a, TermId b) const { return root(index(a)) == root(index(b)); }
    /// Returns true when two classes were joined.
    bool unite(TermId a, TermId b);
    /// Dense class numbers 0..n-1 in increasing order of representative.
    std::size_t class_of(TermId t) const;
    std::size_t num_classes() const;

    std::size_t index(TermId t) const;
    std::size_t root(std::size_t i) const;

private:
    void number() const;
    std::vector<TermId> terms_;  // sorted
    mutable std::vector<std::uint32_t> parent_;
    mutable std::vector<std::uint32_t> dense_;  // per root index; empty when stale
    mutable std::size_t nclasses_ = 0;
};

Partition closure(const TermStore& ts, const std::vector<TermId>& terms,
                  const std::vector<std::pair<TermId, TermId>>& eqs, const AxiomSet& ax);
Partition closure(const TermStore& ts, const std::set<TermId>& terms,
                  const std::vector<std::pair<TermId, TermId>>& eqs, const AxiomSet& ax);

using ClassTuple = std::vector<std::size_t>;

struct MinimalModel {
    Partition part;
    std::map<SymId, std::map<ClassTuple, std::size_t>> fn_table;
    std::map<SymId, std::set<ClassTuple>> rel_pos;
    std::map<SymId, std::set<ClassTuple>> rel_neg;
    bool consistent = true;
    std::string conflict;  // first violated fact, empty when consistent
};

/// Builds the minimal model of κ(ρ) modulo `ax` over Terms(ρ).
MinimalModel minimal_model(TermStore& ts, const Execution& rho, std::size_t nvars, const AxiomSet& ax,
                           const Vocabulary* voc = nullptr);
/// Same, from precomputed pieces. `terms` must be sorted and subterm closed.
MinimalModel minimal_model(const TermStore& ts, const std::vector<TermId>& terms,
                           const std::vector<GroundAtom>& atoms, const AxiomSet& ax,
                           const Vocabulary* voc = nullptr);

bool is_feasible(TermStore& ts, const Execution& rho, std::size_t nvars, const AxiomSet& ax);
bool is_feasible(const Execution& rho, std::size_t nvars, const AxiomSet& ax);

bool entails_eq(TermStore& ts, const Execution& rho, std::size_t nvars, const AxiomSet& ax, TermId t1,
                TermId t2);

enum class Violation : std::uint8_t { Memoizing, EarlyAssume };
std::string to_string(Violation v);

struct CoherenceVerdict {
    bool coherent = true;
    std::size_t position = 0;  // index of the offending letter
    Violation kind = Violation::Memoizing;
    std::vector<TermId> witness;  // the offending term(s)
};

CoherenceVerdict is_coherent(TermStore& ts, const Execution& rho, std::size_t nvars, const AxiomSet& ax);
CoherenceVerdict is_coherent(const Execution& rho, std::size_t nvars, const AxiomSet& ax);

/// Letter-by-letter oracle run. Each push re-derives the verdicts of the new
/// prefix from its term-level data. Supports undo, so a search can backtrack.
class OracleRun {
public:
    OracleRun(std::size_t nvars, const AxiomSet& ax);

    struct Mark {
        std::size_t nodes, terms, atoms, length;
        std::vector<TermId> vals;
        bool feasible, coherent;
    };
    Mark mark() const;
    void undo(const Mark& m);

    /// Extends the execution; returns the coherence violation of the new letter, if any.
    std::optional<Violation> push(const Letter& a);

    bool feasible() const { return feasible_; }
    bool coherent() const { return coherent_; }
    std::size_t length() const { return length_; }
    const TermStore& store() const { return ts_; }
    const std::vector<TermId>& values() const { return vals_; }
    const std::vector<TermId>& terms() const { return terms_; }
    const std::vector<GroundAtom>& atoms() const { return atoms_; }
    const std::vector<TermId>& witness() const { return witness_; }

    /// Describes the run up to renaming of terms: the quotient of Terms by the
    /// current congruence, the variables' classes, the function table and the
    /// closed atoms over classes. Runs with equal keys have equal verdicts on
    /// every common extension.
    std::string quotient_key() const;

private:
    std::vector<std::pair<TermId, TermId>> equalities() const;

    AxiomSet ax_;
    TermStore ts_;
    std::vector<TermId> vals_;
    std::vector<TermId> terms_;  // sorted; new terms always have the largest id
    std::vector<GroundAtom> atoms_;
    std::vector<TermId> witness_;
    std::size_t length_ = 0;
    bool feasible_ = true;
    bool coherent_ = true;
};

}  // namespace axver
