#pragma once

#include <compare>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "axver/letter.hpp"
#include "axver/oracle.hpp"
#include "axver/syntax.hpp"

namespace axver {

using ClassId = std::uint8_t;
/// Argument classes; inline up to arity 3.
using ClassArgs = boost::container::small_vector<ClassId, 3>;

struct AppEntry {
    SymId sym = 0;
    ClassArgs args;
    ClassId result = 0;

    bool operator<(const AppEntry& o) const {
        return std::tie(sym, args, result) < std::tie(o.sym, o.args, o.result);
    }
    bool operator==(const AppEntry& o) const { return sym == o.sym && args == o.args && result == o.result; }
};

struct RelTuple {
    SymId sym = 0;
    ClassArgs args;

    bool operator<(const RelTuple& o) const { return std::tie(sym, args) < std::tie(o.sym, o.args); }
    bool operator==(const RelTuple& o) const { return sym == o.sym && args == o.args; }
};

/// Streaming congruence closure over the classes of the current variables.
/// Classes are numbered by their first variable, so equal states compare equal.
class SccState {
public:
    static SccState initial(std::size_t nvars);
    static SccState rejecting();

    bool reject() const { return reject_; }
    const std::vector<ClassId>& classes() const { return cls_; }
    const std::vector<std::pair<ClassId, ClassId>>& diseq() const { return d_; }
    const std::vector<AppEntry>& apps() const { return apps_; }
    const std::vector<RelTuple>& pos() const { return pos_; }
    const std::vector<RelTuple>& neg() const { return neg_; }

    std::string key() const;
    std::string to_string(const Vocabulary& voc) const;

    bool operator==(const SccState&) const = default;

private:
    friend class SccBuilder;
    friend SccState step(const SccState& q, const Letter& a, const AxiomSet& ax);
    bool reject_ = false;
    std::vector<ClassId> cls_;
    std::vector<std::pair<ClassId, ClassId>> d_;  // first < second
    std::vector<AppEntry> apps_;
    std::vector<RelTuple> pos_;
    std::vector<RelTuple> neg_;
};

/// One transition. Only the transitivity flags of `ax` are consulted; the other
/// axioms are expected to be instrumented away.
SccState step(const SccState& q, const Letter& a, const AxiomSet& ax);

inline SccState initial_state(std::size_t nvars) { return SccState::initial(nvars); }
inline bool is_feasible_state(const SccState& q) { return !q.reject(); }

struct CohEntry {
    SymId sym = 0;
    ClassArgs args;
    ClassId result = 0;
    bool dead = false;  // result is a token for a class no variable holds any more
    // Arguments and results numbered past the live classes are such tokens too.

    bool operator<(const CohEntry& o) const {
        return std::tie(sym, args, dead, result) < std::tie(o.sym, o.args, o.dead, o.result);
    }
    bool operator==(const CohEntry& o) const {
        return sym == o.sym && args == o.args && dead == o.dead && result == o.result;
    }
};

/// Equalities and application history for coherence checking. Entries whose
/// result class died keep a token naming the dead class.
class CohState {
public:
    static CohState initial(std::size_t nvars);

    const std::vector<ClassId>& classes() const { return cls_; }
    const std::vector<CohEntry>& entries() const { return entries_; }

    std::string key() const;
    std::string to_string(const Vocabulary& voc) const;

    bool operator==(const CohState&) const = default;

private:
    friend class CohBuilder;
    friend struct CohStep coh_step(const CohState& q, const Letter& a, const AxiomSet& ax);
    std::vector<ClassId> cls_;
    std::vector<CohEntry> entries_;  // sorted, one per (sym, args)
};

struct CohStep {
    CohState state;
    std::optional<Violation> violation;
};

CohStep coh_step(const CohState& q, const Letter& a, const AxiomSet& ax);

}  // namespace axver
