#include "axver/syntax.hpp"

namespace axver {

bool AxiomSet::has(SymId r, RelProp p) const {
    auto it = rel.find(r);
    return it != rel.end() && it->second.count(p);
}

bool AxiomSet::has(SymId f, FnProp p) const {
    auto it = fn.find(f);
    return it != fn.end() && it->second.count(p);
}

bool AxiomSet::transitive(SymId r) const {
    return has(r, RelProp::Transitive) || has(r, RelProp::StrictTotalOrder);
}

std::string to_string(RelProp p) {
    switch (p) {
    case RelProp::Reflexive: return "reflexive";
    case RelProp::Irreflexive: return "irreflexive";
    case RelProp::Symmetric: return "symmetric";
    case RelProp::Transitive: return "transitive";
    case RelProp::StrictTotalOrder: return "strict_total_order";
    }
    return "?";
}

std::string to_string(FnProp p) {
    return p == FnProp::Commutative ? "commutative" : "idempotent";
}

namespace {

std::string at(SourcePos p) {
    return p.line ? " (line " + std::to_string(p.line) + ")" : "";
}

}  // namespace

AxiomSet validate_axioms(const AxiomSet& a, const Signature& sig) {
    for (const auto& r : a.rejected) {
        switch (r.kind) {
        case RejectedKind::Associative:
            throw UnsupportedAxiom(
                "function '" + r.subject + "' declared associative" + at(r.pos) +
                ": verifying coherent programs modulo associativity is undecidable "
                "(the word problem for finitely presented semigroups reduces to it)");
        case RejectedKind::Epr:
            throw UnsupportedAxiom(
                "free-form axiom '" + r.subject + "'" + at(r.pos) +
                ": verifying coherent programs modulo general EPR axioms is undecidable "
                "(reachability of two-counter machines reduces to it)");
        case RejectedKind::Antisymmetric:
            throw UnsupportedAxiom(
                "relation " + r.subject + at(r.pos) +
                ": anti-symmetric (non-strict) orders are not supported; their implicit "
                "equalities break coherence. Use strict_partial_order or strict_total_order");
        }
    }
    for (const auto& [r, props] : a.rel) {
        const Symbol& s = sig.relation(r);
        if (props.empty()) continue;
        if (s.arity != 2)
            throw UnsupportedAxiom("relation '" + s.name + "' has arity " + std::to_string(s.arity) +
                                   "; axioms apply to binary relations only");
        if (props.count(RelProp::Reflexive) && props.count(RelProp::Irreflexive))
            throw ContradictoryAxioms("relation '" + s.name +
                                      "' declared both reflexive and irreflexive");
        if (props.count(RelProp::StrictTotalOrder) &&
            (props.count(RelProp::Reflexive) || props.count(RelProp::Symmetric)))
            throw ContradictoryAxioms("relation '" + s.name +
                                      "' is a strict total order and cannot be reflexive or symmetric");
    }
    for (const auto& [f, props] : a.fn) {
        const Symbol& s = sig.function(f);
        if (props.count(FnProp::Commutative) && s.arity != 2)
            throw UnsupportedAxiom("commutativity needs a binary function; '" + s.name + "' has arity " +
                                   std::to_string(s.arity));
        if (props.count(FnProp::Idempotent) && s.arity != 1)
            throw UnsupportedAxiom("idempotence needs a unary function; '" + s.name + "' has arity " +
                                   std::to_string(s.arity));
    }
    return a;
}

}  // namespace axver
