#include "axver/instrument.hpp"

#include <algorithm>

namespace axver {

std::string to_string(HomKind k) {
    switch (k) {
    case HomKind::Refl: return "refl";
    case HomKind::Irref: return "irref";
    case HomKind::Symm: return "symm";
    case HomKind::Comm: return "comm";
    case HomKind::Idem: return "idem";
    }
    return "?";
}

Execution Homomorphism::image(const Letter& a) const {
    switch (kind) {
    case HomKind::Refl:
    case HomKind::Irref:
        if (a.op != Op::AssignFn) return {a};
        return {a, kind == HomKind::Refl ? Letter::rel(sym, {a.x, a.x}) : Letter::nrel(sym, {a.x, a.x})};
    case HomKind::Symm:
        if ((a.op != Op::AssumeRel && a.op != Op::AssumeNegRel) || a.sym != sym) return {a};
        {
            Letter b = a;
            std::swap(b.args[0], b.args[1]);
            return {a, b};
        }
    case HomKind::Comm:
        if (a.op != Op::AssignFn || a.sym != sym) return {a};
        {
            Letter swapped = Letter::assign_fn(aux, sym, {a.args[1], a.args[0]});
            if (a.x == a.args[0] || a.x == a.args[1])
                return {swapped, a, Letter::eq(a.x, aux), Letter::assign(aux, sink)};
            return {a, swapped, Letter::eq(a.x, aux), Letter::assign(aux, sink)};
        }
    case HomKind::Idem:
        if (a.op != Op::AssignFn || a.sym != sym) return {a};
        return {a, Letter::assign_fn(aux, sym, {a.x}), Letter::eq(a.x, aux), Letter::assign(aux, sink)};
    }
    return {a};
}

Execution Homomorphism::prologue(std::size_t nvars) const {
    Execution out;
    if (kind != HomKind::Refl && kind != HomKind::Irref) return out;
    for (std::size_t v = 0; v < nvars; ++v) {
        auto x = static_cast<VarId>(v);
        out.push_back(kind == HomKind::Refl ? Letter::rel(sym, {x, x}) : Letter::nrel(sym, {x, x}));
    }
    return out;
}

Homomorphism homomorphism_for(RelProp p, SymId r, const Signature& sig) {
    Homomorphism h;
    h.sym = r;
    switch (p) {
    case RelProp::Reflexive: h.kind = HomKind::Refl; break;
    case RelProp::Irreflexive: h.kind = HomKind::Irref; break;
    case RelProp::Symmetric: h.kind = HomKind::Symm; break;
    default: throw UnsupportedAxiom(to_string(p) + " has no instrumentation; it is kept for the automaton");
    }
    h.tag = to_string(h.kind) + "(" + sig.relation(r).name + ")";
    return h;
}

Homomorphism homomorphism_for(FnProp p, SymId f, const Signature& sig, VarId aux, VarId sink) {
    Homomorphism h;
    h.sym = f;
    h.aux = aux;
    h.sink = sink;
    h.kind = p == FnProp::Commutative ? HomKind::Comm : HomKind::Idem;
    h.tag = to_string(h.kind) + "(" + sig.function(f).name + ")";
    return h;
}

Pipeline build_pipeline(const AxiomSet& ax, const Signature& sig, VarTable& vars) {
    Pipeline p;
    std::vector<SymId> rels, fns;
    for (const auto& [r, props] : ax.rel) rels.push_back(r);
    for (const auto& [f, props] : ax.fn) fns.push_back(f);
    std::sort(rels.begin(), rels.end(),
              [&](SymId a, SymId b) { return sig.relation(a).name < sig.relation(b).name; });
    std::sort(fns.begin(), fns.end(),
              [&](SymId a, SymId b) { return sig.function(a).name < sig.function(b).name; });

    for (auto r : rels) {
        const auto& props = ax.rel.at(r);
        std::set<RelProp> eff = props;
        if (props.count(RelProp::StrictTotalOrder)) {
            p.translate_sto.insert(r);
            eff.erase(RelProp::StrictTotalOrder);
            eff.insert(RelProp::Irreflexive);
            eff.insert(RelProp::Transitive);
        }
        for (auto prop : {RelProp::Reflexive, RelProp::Irreflexive, RelProp::Symmetric})
            if (eff.count(prop)) p.homs.push_back(homomorphism_for(prop, r, sig));
        if (eff.count(RelProp::Transitive)) p.residual.rel[r] = {RelProp::Transitive};
    }
    if (!fns.empty()) {
        p.needs_aux = true;
        auto aux = vars.find(kAuxVar);
        auto sink = vars.find(kSinkVar);
        VarId a = aux ? *aux : vars.add(kAuxVar);
        VarId s = sink ? *sink : vars.add(kSinkVar, true);
        for (auto f : fns)
            for (auto prop : {FnProp::Commutative, FnProp::Idempotent})
                if (ax.fn.at(f).count(prop)) p.homs.push_back(homomorphism_for(prop, f, sig, a, s));
    }
    return p;
}

Nfa apply_homomorphism(const Nfa& n, const Homomorphism& h, std::size_t nvars) {
    return apply_homomorphism(n, [&](const Letter& a) { return h.image(a); }, h.prologue(nvars));
}

Nfa instrument(const Nfa& n, const Pipeline& p, std::size_t nvars) {
    Nfa out = n;
    for (const auto& h : p.homs) out = apply_homomorphism(out, h, nvars);
    return out;
}

Execution instrument(const Execution& rho, const Homomorphism& h, std::size_t nvars) {
    Execution out = h.prologue(nvars);
    for (const auto& a : rho)
        for (auto& b : h.image(a)) out.push_back(std::move(b));
    return out;
}

Execution instrument(const Execution& rho, const Pipeline& p, std::size_t nvars) {
    Execution out = rho;
    for (const auto& h : p.homs) out = instrument(out, h, nvars);
    return out;
}

TrackedExecution instrument_tracked(const Execution& rho, const Pipeline& p, std::size_t nvars) {
    TrackedExecution t{rho, {}};
    for (std::size_t i = 0; i < rho.size(); ++i) t.origin.push_back(static_cast<std::ptrdiff_t>(i));
    for (const auto& h : p.homs) {
        TrackedExecution next{h.prologue(nvars), {}};
        next.origin.assign(next.word.size(), -1);
        for (std::size_t i = 0; i < t.word.size(); ++i)
            for (auto& b : h.image(t.word[i])) {
                next.word.push_back(std::move(b));
                next.origin.push_back(t.origin[i]);
            }
        t = std::move(next);
    }
    return t;
}

std::vector<Execution> translate_sto(const Execution& rho, const AxiomSet& ax) {
    std::vector<Execution> out{{}};
    for (const auto& a : rho) {
        if (a.op == Op::AssumeNegRel && ax.sto(a.sym)) {
            std::vector<Execution> next;
            for (const auto& w : out) {
                next.push_back(w);
                next.back().push_back(Letter::rel(a.sym, {a.args[1], a.args[0]}));
                next.push_back(w);
                next.back().push_back(Letter::eq(a.args[0], a.args[1]));
            }
            out = std::move(next);
        } else {
            for (auto& w : out) w.push_back(a);
        }
    }
    return out;
}

}  // namespace axver
