#include "axver/term.hpp"

namespace axver {

TermId TermStore::init(VarId x) {
    auto [it, fresh] = inits_.try_emplace(x, static_cast<TermId>(nodes_.size()));
    if (fresh) nodes_.push_back({true, x, 0, {}});
    return it->second;
}

TermId TermStore::app(SymId f, std::vector<TermId> args) {
    auto key = std::make_pair(f, args);
    auto [it, fresh] = apps_.try_emplace(std::move(key), static_cast<TermId>(nodes_.size()));
    if (fresh) nodes_.push_back({false, 0, f, std::move(args)});
    return it->second;
}

void TermStore::truncate(std::size_t n) {
    while (nodes_.size() > n) {
        TermNode& b = nodes_.back();
        if (b.init)
            inits_.erase(b.var);
        else
            apps_.erase({b.sym, b.args});
        nodes_.pop_back();
    }
}

std::string TermStore::to_string(TermId t, const Vocabulary& voc) const {
    const TermNode& n = nodes_[t];
    if (n.init) return voc.vars.name(n.var) + "^";
    std::string out = voc.sig.function(n.sym).name + "(";
    for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ",";
        out += to_string(n.args[i], voc);
    }
    return out + ")";
}

std::string to_string(const GroundAtom& a, const TermStore& ts, const Vocabulary& voc) {
    using K = GroundAtom::Kind;
    if (a.kind == K::Eq || a.kind == K::Neq)
        return ts.to_string(a.terms[0], voc) + (a.kind == K::Eq ? " = " : " != ") +
               ts.to_string(a.terms[1], voc);
    std::string out = a.kind == K::NegRel ? "!" : "";
    out += voc.sig.relation(a.sym).name + "(";
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (i) out += ",";
        out += ts.to_string(a.terms[i], voc);
    }
    return out + ")";
}

GroundAtom atom_of(const Letter& a, const std::vector<TermId>& vals) {
    using K = GroundAtom::Kind;
    GroundAtom g;
    switch (a.op) {
    case Op::AssumeEq:
    case Op::AssumeNeq:
        g.kind = a.op == Op::AssumeEq ? K::Eq : K::Neq;
        g.terms = {vals[a.x], vals[a.y]};
        break;
    case Op::AssumeRel:
    case Op::AssumeNegRel:
        g.kind = a.op == Op::AssumeRel ? K::Rel : K::NegRel;
        g.sym = a.sym;
        for (auto v : a.args) g.terms.push_back(vals[v]);
        break;
    default:
        throw std::logic_error("atom_of on an assignment");
    }
    return g;
}

void apply_letter(TermStore& ts, const Letter& a, std::vector<TermId>& vals) {
    if (a.op == Op::Assign) {
        vals[a.x] = vals[a.y];
    } else if (a.op == Op::AssignFn) {
        std::vector<TermId> args;
        args.reserve(a.args.size());
        for (auto v : a.args) args.push_back(vals[v]);
        vals[a.x] = ts.app(a.sym, std::move(args));
    }
}

TermId copy_term(const TermStore& from, TermId t, TermStore& to) {
    const TermNode& n = from.node(t);
    if (n.init) return to.init(n.var);
    std::vector<TermId> args;
    for (auto a : n.args) args.push_back(copy_term(from, a, to));
    return to.app(n.sym, std::move(args));
}

TermTrace trace(TermStore& ts, const Execution& rho, std::size_t nvars) {
    TermTrace out;
    std::vector<TermId> vals(nvars);
    for (std::size_t x = 0; x < nvars; ++x) vals[x] = ts.init(static_cast<VarId>(x));
    out.values.push_back(vals);
    out.terms.insert(vals.begin(), vals.end());
    for (const auto& a : rho) {
        if (a.is_assume())
            out.kappa.push_back(atom_of(a, vals));
        else
            apply_letter(ts, a, vals);
        out.values.push_back(vals);
        out.terms.insert(vals.begin(), vals.end());
    }
    return out;
}

TermId teval(TermStore& ts, const Execution& rho, std::size_t nvars, VarId x) {
    return trace(ts, rho, nvars).values.back().at(x);
}

std::set<GroundAtom> kappa(TermStore& ts, const Execution& rho, std::size_t nvars) {
    auto k = trace(ts, rho, nvars).kappa;
    return {k.begin(), k.end()};
}

std::set<TermId> computed_terms(TermStore& ts, const Execution& rho, std::size_t nvars) {
    return trace(ts, rho, nvars).terms;
}

}  // namespace axver
