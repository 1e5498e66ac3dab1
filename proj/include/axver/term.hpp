#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "axver/letter.hpp"

namespace axver {

using TermId = std::uint32_t;

/// A ground term: either the initial value x^ of a variable, or f(args).
struct TermNode {
    bool init = false;
    VarId var = 0;  // init
    SymId sym = 0;  // app
    std::vector<TermId> args;
};

/// Hash-consed term DAG. Structurally equal terms get the same id.
class TermStore {
public:
    TermId init(VarId x);
    TermId app(SymId f, std::vector<TermId> args);

    const TermNode& node(TermId t) const { return nodes_[t]; }
    std::size_t size() const { return nodes_.size(); }
    /// Forgets every term with id >= n.
    void truncate(std::size_t n);
    /// Prints x^ for initial values.
    std::string to_string(TermId t, const Vocabulary& voc) const;

private:
    std::vector<TermNode> nodes_;
    std::map<VarId, TermId> inits_;
    std::map<std::pair<SymId, std::vector<TermId>>, TermId> apps_;
};

struct GroundAtom {
    enum class Kind : std::uint8_t { Eq, Neq, Rel, NegRel };
    Kind kind = Kind::Eq;
    SymId sym = 0;               // Rel / NegRel
    std::vector<TermId> terms;   // Eq / Neq: two

    auto operator<=>(const GroundAtom&) const = default;
    bool operator==(const GroundAtom&) const = default;
};

std::string to_string(const GroundAtom& a, const TermStore& ts, const Vocabulary& voc);

/// The values of all variables after every prefix, κ, and Terms(ρ), in one pass.
struct TermTrace {
    std::vector<std::vector<TermId>> values;  // values[i][x] = TEval(ρ[0..i), x); size |ρ|+1
    std::vector<GroundAtom> kappa;            // in execution order, duplicates kept
    std::set<TermId> terms;                   // Terms(ρ)
};

TermTrace trace(TermStore& ts, const Execution& rho, std::size_t nvars);

TermId teval(TermStore& ts, const Execution& rho, std::size_t nvars, VarId x);
std::set<GroundAtom> kappa(TermStore& ts, const Execution& rho, std::size_t nvars);
std::set<TermId> computed_terms(TermStore& ts, const Execution& rho, std::size_t nvars);

/// The atom an assume letter contributes, evaluated against `vals`.
GroundAtom atom_of(const Letter& a, const std::vector<TermId>& vals);

/// Interns term `t` of `from` into `to`.
TermId copy_term(const TermStore& from, TermId t, TermStore& to);

/// Applies one letter to a valuation.
void apply_letter(TermStore& ts, const Letter& a, std::vector<TermId>& vals);

}  // namespace axver
