#pragma once

#include <set>
#include <string>
#include <vector>

#include "axver/letter.hpp"
#include "axver/nfa.hpp"
#include "axver/syntax.hpp"

namespace axver {

/// Reserved variables added by functional instrumentation.
inline constexpr const char* kAuxVar = "v*";
inline constexpr const char* kSinkVar = "sink*";

enum class HomKind : std::uint8_t { Refl, Irref, Symm, Comm, Idem };

/// Letter-to-word map eliminating one axiom on one symbol. Letters outside the
/// trigger pattern map to themselves.
///
///   refl   x:=f(z)    ->  x:=f(z) . assume(R(x,x))
///   irref  x:=f(z)    ->  x:=f(z) . assume(!R(x,x))
///   symm   assume(R(x,y))   ->  assume(R(x,y)) . assume(R(y,x)), same for !R
///   comm   z:=f(x,y)  ->  z:=f(x,y) . v*:=f(y,x) . assume(z=v*) . v*:=sink*
///   idem   y:=f(x)    ->  y:=f(x) . v*:=f(y) . assume(y=v*) . v*:=sink*
///
/// When z is one of x, y the comm image computes v* first, so both
/// applications read the operands' old values.
/// refl and irref also need R on the initial values: see `prologue`.
struct Homomorphism {
    HomKind kind = HomKind::Refl;
    SymId sym = 0;
    VarId aux = 0;   // v*, functional kinds only
    VarId sink = 0;  // sink*, functional kinds only
    std::string tag; // e.g. "refl(R)"

    Execution image(const Letter& a) const;
    /// Letters spelled once before the execution, over variables 0..nvars-1.
    Execution prologue(std::size_t nvars) const;
};

struct Pipeline {
    std::set<SymId> translate_sto;
    std::vector<Homomorphism> homs;  // relational first, then functional
    AxiomSet residual;               // transitivity flags only
    bool needs_aux = false;
};

/// Adds the reserved variables when any functional homomorphism is needed.
/// `vars` is extended in place.
Pipeline build_pipeline(const AxiomSet& ax, const Signature& sig, VarTable& vars);

/// Throws UnsupportedAxiom for transitivity and total orders.
Homomorphism homomorphism_for(RelProp p, SymId r, const Signature& sig);
Homomorphism homomorphism_for(FnProp p, SymId f, const Signature& sig, VarId aux, VarId sink);

Nfa apply_homomorphism(const Nfa& n, const Homomorphism& h, std::size_t nvars);
Nfa instrument(const Nfa& n, const Pipeline& p, std::size_t nvars);

/// h(rho) for the whole sequence, prologues included.
Execution instrument(const Execution& rho, const Pipeline& p, std::size_t nvars);
Execution instrument(const Execution& rho, const Homomorphism& h, std::size_t nvars);

/// h(rho) with, per letter, the index of the letter of rho it came from
/// (-1 for prologue letters).
struct TrackedExecution {
    Execution word;
    std::vector<std::ptrdiff_t> origin;
};
TrackedExecution instrument_tracked(const Execution& rho, const Pipeline& p, std::size_t nvars);

/// Every translation of `rho` obtained by replacing each !R(x,y) on a strict
/// total order R with either R(y,x) or x=y.
std::vector<Execution> translate_sto(const Execution& rho, const AxiomSet& ax);

std::string to_string(HomKind k);

}  // namespace axver
