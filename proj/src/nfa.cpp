#include "axver/nfa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace axver {

Nfa::Nfa() { add_state(); }

StateId Nfa::add_state(bool accepting) {
    out_.emplace_back();
    accepting_.push_back(accepting);
    return static_cast<StateId>(out_.size() - 1);
}

void Nfa::add_edge(StateId s, StateId d, Letter a, std::optional<Letter> source) {
    out_[s].push_back({d, std::move(a), std::move(source)});
}

void Nfa::add_epsilon(StateId s, StateId d) { out_[s].push_back({d, std::nullopt, std::nullopt}); }

std::size_t Nfa::num_edges() const {
    std::size_t n = 0;
    for (const auto& o : out_) n += o.size();
    return n;
}

bool Nfa::has_epsilons() const {
    for (const auto& o : out_)
        for (const auto& e : o)
            if (!e.letter) return true;
    return false;
}

namespace {

VarId var_of(const Expr& e, const VarTable& vars) {
    if (!e.is_var()) throw ParseError("expected a variable, found " + to_string(e), e.pos);
    auto v = vars.find(e.name);
    if (!v) throw ParseError("unknown variable '" + e.name + "'", e.pos);
    return *v;
}

class Builder {
public:
    Builder(const Program& p, const Signature& sig, const AxiomSet& ax, Nfa& n)
        : p_(p), sig_(sig), ax_(ax), n_(n) {}

    StateId build(const Stmt& s, StateId from) {
        using K = Stmt::Kind;
        switch (s.kind) {
        case K::Skip: return from;
        case K::Assign: {
            VarId x = *p_.vars.find(s.lhs);
            Letter a;
            if (s.rhs.is_var() && !sig_.find_function(s.rhs.name)) {
                a = Letter::assign(x, var_of(s.rhs, p_.vars));
            } else {
                auto f = sig_.find_function(s.rhs.name);
                if (!f) throw ParseError("unknown function '" + s.rhs.name + "'", s.rhs.pos);
                std::vector<VarId> args;
                for (const auto& e : s.rhs.args) args.push_back(var_of(e, p_.vars));
                a = Letter::assign_fn(x, *f, std::move(args));
            }
            StateId to = n_.add_state();
            n_.add_edge(from, to, a, a);
            return to;
        }
        case K::Assume: return assume(s.cond, from);
        case K::Seq:
            for (const auto& b : s.body) from = build(b, from);
            return from;
        case K::If: {
            StateId join = n_.add_state();
            StateId t = build(s.body[0], assume(s.cond, from));
            n_.add_epsilon(t, join);
            const Stmt* els = s.body.size() > 1 ? &s.body[1] : nullptr;
            StateId e = assume(negate(s.cond), from);
            if (els) e = build(*els, e);
            n_.add_epsilon(e, join);
            return join;
        }
        case K::While: {
            StateId head = n_.add_state();
            n_.add_epsilon(from, head);
            StateId end = build(s.body[0], assume(s.cond, head));
            n_.add_epsilon(end, head);
            return assume(negate(s.cond), head);
        }
        case K::Choice: {
            StateId join = n_.add_state();
            for (const auto& b : s.body) n_.add_epsilon(build(b, from), join);
            return join;
        }
        case K::Loop: {
            StateId head = n_.add_state();
            n_.add_epsilon(from, head);
            n_.add_epsilon(build(s.body[0], head), head);
            return head;
        }
        }
        return from;
    }

    StateId assume(const Cond& c, StateId from) {
        StateId to = n_.add_state();
        for (auto& a : assume_alternatives(c, p_.vars, sig_, ax_)) n_.add_edge(from, to, a, a);
        return to;
    }

private:
    const Program& p_;
    const Signature& sig_;
    const AxiomSet& ax_;
    Nfa& n_;
};

std::set<StateId> eps_closure(const Nfa& n, StateId s) {
    std::set<StateId> seen{s};
    std::vector<StateId> work{s};
    while (!work.empty()) {
        StateId u = work.back();
        work.pop_back();
        for (const auto& e : n.out(u))
            if (!e.letter && seen.insert(e.dst).second) work.push_back(e.dst);
    }
    return seen;
}

}  // namespace

std::vector<Letter> assume_alternatives(const Cond& atom, const VarTable& vars, const Signature& sig,
                                        const AxiomSet& ax) {
    using K = Cond::Kind;
    std::vector<VarId> args;
    for (const auto& t : atom.terms) args.push_back(var_of(t, vars));
    switch (atom.kind) {
    case K::Eq: return {Letter::eq(args[0], args[1])};
    case K::Neq: return {Letter::neq(args[0], args[1])};
    case K::Rel:
    case K::NegRel: {
        auto r = sig.find_relation(atom.rel);
        if (!r) throw ParseError("unknown relation '" + atom.rel + "'", atom.pos);
        if (atom.kind == K::Rel) return {Letter::rel(*r, args)};
        if (ax.sto(*r)) return {Letter::rel(*r, {args[1], args[0]}), Letter::eq(args[0], args[1])};
        return {Letter::nrel(*r, args)};
    }
    default: throw ParseError("expected an atomic condition, found " + to_string(atom), atom.pos);
    }
}

Nfa build_exec_nfa(const Program& core, const Signature& sig, const AxiomSet& ax) {
    Nfa n;
    Builder b(core, sig, ax, n);
    StateId end = b.build(core.body, n.initial());
    n.set_accepting(end);
    return remove_epsilons(n);
}

Nfa append_post_violation(const Nfa& in, const Cond& post, const Program& core, const Signature& sig,
                          const AxiomSet& ax) {
    Nfa n = in;
    StateId hub = n.add_state();
    StateId fin = n.add_state();
    for (StateId s = 0; s < n.size(); ++s)
        if (n.accepting(s)) {
            n.set_accepting(s, false);
            n.add_epsilon(s, hub);
        }
    n.set_accepting(fin);
    for (const auto& conj : dnf(negate(post))) {
        StateId at = hub;
        for (const auto& atom : conj) {
            StateId to = n.add_state();
            for (auto& a : assume_alternatives(atom, core.vars, sig, ax)) n.add_edge(at, to, a, a);
            at = to;
        }
        n.add_epsilon(at, fin);
    }
    return remove_epsilons(n);
}

Program with_post_violation(const Program& surface, const Cond& post) {
    Program p = surface;
    Stmt check;
    check.kind = Stmt::Kind::Assume;
    check.cond = negate(post);
    check.pos = post.pos;
    Stmt seq;
    seq.kind = Stmt::Kind::Seq;
    seq.body = {surface.body, check};
    p.body = std::move(seq);
    return p;
}

Nfa apply_homomorphism(const Nfa& n, const LetterMap& h, const Execution& prologue) {
    Nfa out;
    for (StateId s = 1; s < n.size(); ++s) out.add_state();
    for (StateId s = 0; s < n.size(); ++s) out.set_accepting(s, n.accepting(s));
    for (StateId s = 0; s < n.size(); ++s)
        for (const auto& e : n.out(s)) {
            if (!e.letter) {
                out.add_epsilon(s, e.dst);
                continue;
            }
            Execution w = h(*e.letter);
            StateId at = s;
            for (std::size_t i = 0; i < w.size(); ++i) {
                StateId to = i + 1 == w.size() ? e.dst : out.add_state();
                out.add_edge(at, to, w[i], i == 0 ? e.source : std::nullopt);
                at = to;
            }
            if (w.empty()) out.add_epsilon(s, e.dst);
        }
    out.set_initial(n.initial());
    if (!prologue.empty()) {
        StateId at = out.add_state();
        StateId start = at;
        for (std::size_t i = 0; i < prologue.size(); ++i) {
            StateId to = i + 1 == prologue.size() ? n.initial() : out.add_state();
            out.add_edge(at, to, prologue[i]);
            at = to;
        }
        out.set_initial(start);
    }
    return out;
}

Nfa trim(const Nfa& n) {
    std::vector<char> fwd(n.size(), 0), bwd(n.size(), 0);
    std::vector<std::vector<StateId>> rev(n.size());
    for (StateId s = 0; s < n.size(); ++s)
        for (const auto& e : n.out(s)) rev[e.dst].push_back(s);
    std::vector<StateId> work{n.initial()};
    fwd[n.initial()] = 1;
    while (!work.empty()) {
        StateId u = work.back();
        work.pop_back();
        for (const auto& e : n.out(u))
            if (!fwd[e.dst]) {
                fwd[e.dst] = 1;
                work.push_back(e.dst);
            }
    }
    for (StateId s = 0; s < n.size(); ++s)
        if (n.accepting(s)) {
            bwd[s] = 1;
            work.push_back(s);
        }
    while (!work.empty()) {
        StateId u = work.back();
        work.pop_back();
        for (auto p : rev[u])
            if (!bwd[p]) {
                bwd[p] = 1;
                work.push_back(p);
            }
    }
    // The initial state always survives, so the empty language stays representable.
    std::vector<StateId> ren(n.size(), UINT32_MAX);
    Nfa out;
    ren[n.initial()] = out.initial();
    out.set_accepting(out.initial(), n.accepting(n.initial()));
    for (StateId s = 0; s < n.size(); ++s)
        if (s != n.initial() && fwd[s] && bwd[s]) ren[s] = out.add_state(n.accepting(s));
    for (StateId s = 0; s < n.size(); ++s) {
        if (ren[s] == UINT32_MAX || !bwd[s]) continue;
        for (const auto& e : n.out(s))
            if (ren[e.dst] != UINT32_MAX && bwd[e.dst]) {
                if (e.letter)
                    out.add_edge(ren[s], ren[e.dst], *e.letter, e.source);
                else
                    out.add_epsilon(ren[s], ren[e.dst]);
            }
    }
    return out;
}

Nfa remove_epsilons(const Nfa& n) {
    Nfa out;
    for (StateId s = 1; s < n.size(); ++s) out.add_state();
    out.set_initial(n.initial());
    for (StateId s = 0; s < n.size(); ++s) {
        std::set<std::tuple<StateId, Letter, std::optional<Letter>>> seen;
        for (auto u : eps_closure(n, s)) {
            if (n.accepting(u)) out.set_accepting(s);
            for (const auto& e : n.out(u))
                if (e.letter && seen.emplace(e.dst, *e.letter, e.source).second)
                    out.add_edge(s, e.dst, *e.letter, e.source);
        }
    }
    return trim(out);
}

Nfa prefix_closed(const Nfa& n) {
    Nfa out = trim(n);
    for (StateId s = 0; s < out.size(); ++s) out.set_accepting(s);
    return out;
}

bool accepts(const Nfa& n, const Execution& w) {
    std::set<StateId> cur = eps_closure(n, n.initial());
    for (const auto& a : w) {
        std::set<StateId> next;
        for (auto s : cur)
            for (const auto& e : n.out(s))
                if (e.letter && *e.letter == a) next.merge(eps_closure(n, e.dst));
        cur = std::move(next);
        if (cur.empty()) return false;
    }
    return std::any_of(cur.begin(), cur.end(), [&](StateId s) { return n.accepting(s); });
}

std::vector<Execution> enumerate(const Nfa& in, std::size_t max_len) {
    Nfa n = in.has_epsilons() ? remove_epsilons(in) : in;
    std::set<Execution> out;
    // Words with their reachable state sets, grown one letter at a time.
    std::map<Execution, std::set<StateId>> layer{{{}, {n.initial()}}};
    for (std::size_t len = 0;; ++len) {
        for (const auto& [w, states] : layer)
            if (std::any_of(states.begin(), states.end(), [&](StateId s) { return n.accepting(s); }))
                out.insert(w);
        if (len == max_len) break;
        std::map<Execution, std::set<StateId>> next;
        for (const auto& [w, states] : layer)
            for (auto s : states)
                for (const auto& e : n.out(s)) {
                    auto w2 = w;
                    w2.push_back(*e.letter);
                    next[w2].insert(e.dst);
                }
        layer = std::move(next);
    }
    return {out.begin(), out.end()};
}

std::string dump(const Nfa& n, const Vocabulary& voc) {
    std::string out = "initial " + std::to_string(n.initial()) + "\naccepting";
    for (StateId s = 0; s < n.size(); ++s)
        if (n.accepting(s)) out += " " + std::to_string(s);
    out += "\n";
    for (StateId s = 0; s < n.size(); ++s)
        for (const auto& e : n.out(s))
            out += std::to_string(s) + " -- " + (e.letter ? to_string(*e.letter, voc) : std::string("eps")) +
                   " --> " + std::to_string(e.dst) + "\n";
    return out;
}

}  // namespace axver
