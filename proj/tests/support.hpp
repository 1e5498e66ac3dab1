// Small helpers shared by the test binaries.
#pragma once

#include <random>
#include <unordered_map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "axver/scc.hpp"
#include "axver/term.hpp"
#include "axver/verifier.hpp"

namespace axtest {

using namespace axver;

/// Parses a " . "-separated word, declaring variables and symbols on first use.
inline Execution word(Vocabulary& voc, const std::string& text) {
    Execution out;
    std::size_t at = 0;
    while (at < text.size()) {
        std::size_t dot = text.find(" . ", at);
        std::string piece = text.substr(at, dot == std::string::npos ? std::string::npos : dot - at);
        out.push_back(parse_letter(piece, voc, true));
        if (dot == std::string::npos) break;
        at = dot + 3;
    }
    return out;
}

inline Vocabulary vars(std::initializer_list<const char*> names) {
    Vocabulary voc;
    for (auto n : names) voc.vars.add(n);
    return voc;
}

inline Problem problem(const std::string& text) { return make_problem(parse_program(text)); }

/// Every letter over n variables, the given unary/binary functions and binary relations.
inline std::vector<Letter> alphabet(std::size_t n, const std::vector<std::pair<SymId, int>>& fns,
                                    const std::vector<SymId>& rels) {
    std::vector<Letter> out;
    for (VarId i = 0; i < n; ++i)
        for (VarId j = 0; j < n; ++j) {
            out.push_back(Letter::assign(i, j));
            out.push_back(Letter::eq(i, j));
            out.push_back(Letter::neq(i, j));
            for (auto r : rels) {
                out.push_back(Letter::rel(r, {i, j}));
                out.push_back(Letter::nrel(r, {i, j}));
            }
            for (auto [f, arity] : fns) {
                if (arity == 1 && j == 0)
                    for (VarId k = 0; k < n; ++k) out.push_back(Letter::assign_fn(i, f, {k}));
                if (arity == 2)
                    for (VarId k = 0; k < n; ++k) out.push_back(Letter::assign_fn(i, f, {j, k}));
            }
        }
    return out;
}

inline Execution random_word(std::mt19937& rng, const std::vector<Letter>& alpha, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, alpha.size() - 1);
    Execution w;
    for (std::size_t n = len(rng); n > 0; --n) w.push_back(alpha[pick(rng)]);
    return w;
}

/// Runs the feasibility and coherence automata side by side.
struct AutomatonRun {
    bool feasible = true;
    bool coherent = true;
    std::size_t position = 0;
    std::optional<Violation> violation;
};

inline AutomatonRun run_automata(const Execution& rho, std::size_t nvars, const AxiomSet& ax) {
    AutomatonRun r;
    SccState q = SccState::initial(nvars);
    CohState c = CohState::initial(nvars);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (r.coherent) {
            CohStep s = coh_step(c, rho[i], ax);
            if (s.violation) {
                r.coherent = false;
                r.position = i;
                r.violation = s.violation;
            }
            c = std::move(s.state);
        }
        q = step(q, rho[i], ax);
    }
    r.feasible = !q.reject();
    return r;
}

/// Depth-bounded enumeration of every execution over `alpha`, comparing the
/// oracle with both automata letter by letter. Subtrees are shared between
/// prefixes whose oracle runs and automaton states have equal keys.
struct Exhaustive {
    std::vector<Letter> alpha;
    AxiomSet ax;
    Vocabulary voc;
    std::unordered_map<std::string, int> memo;
    Execution prefix;
    std::size_t visited = 0, mismatches = 0, compared_feasibility = 0;
    std::string first;

    void fail(const char* what) {
        if (mismatches++ == 0) first = std::string(what) + " on " + to_string(prefix, voc);
    }

    void run(std::size_t nvars, int depth) {
        OracleRun o(nvars, ax);
        dfs(o, SccState::initial(nvars), CohState::initial(nvars), depth);
    }

    void dfs(OracleRun& o, const SccState& s, const CohState& h, int remaining) {
        for (const auto& a : alpha) {
            ++visited;
            auto mk = o.mark();
            auto v = o.push(a);
            CohStep hs = coh_step(h, a, ax);
            prefix.push_back(a);
            if (v != hs.violation) fail("coherence");
            if (!v) {
                SccState s2 = step(s, a, ax);
                ++compared_feasibility;
                if (o.feasible() == s2.reject()) fail("feasibility");
                if (remaining > 1) {
                    std::string key = o.quotient_key() + "#" + s2.key() + "#" + hs.state.key();
                    auto [it, fresh] = memo.try_emplace(std::move(key), remaining - 1);
                    if (fresh || it->second < remaining - 1) {
                        it->second = remaining - 1;
                        dfs(o, s2, hs.state, remaining - 1);
                    }
                }
            }
            prefix.pop_back();
            o.undo(mk);
        }
    }
};

struct Preservation {
    std::size_t feasibility_mismatches = 0;
    std::size_t coherence_mismatches = 0;
    std::size_t feasible = 0, infeasible = 0, incoherent = 0;
    std::string first_failure;
};

/// Compares verdicts on random executions modulo one axiom against verdicts
/// on their images modulo nothing. Three variables, one binary relation R and
/// one function f (binary for comm, unary otherwise) plus a unary g.
inline Preservation check_preservation(HomKind k, std::size_t samples, unsigned seed) {
    Vocabulary voc = vars({"x", "y", "z"});
    bool binary = k == HomKind::Comm;
    SymId f = voc.sig.add_function("f", binary ? 2 : 1);
    SymId g = voc.sig.add_function("g", 1);
    SymId r = voc.sig.add_relation("R", 2);
    AxiomSet ax;
    switch (k) {
    case HomKind::Refl: ax.rel[r] = {RelProp::Reflexive}; break;
    case HomKind::Irref: ax.rel[r] = {RelProp::Irreflexive}; break;
    case HomKind::Symm: ax.rel[r] = {RelProp::Symmetric}; break;
    case HomKind::Comm: ax.fn[f] = {FnProp::Commutative}; break;
    case HomKind::Idem: ax.fn[f] = {FnProp::Idempotent}; break;
    }
    VarTable vt = voc.vars;
    Pipeline p = build_pipeline(ax, voc.sig, vt);
    auto alpha = alphabet(3, {{f, binary ? 2 : 1}, {g, 1}}, {r});
    // Bias towards the triggering letters so the interesting cases come up.
    for (const auto& a : std::vector<Letter>(alpha))
        if ((a.op == Op::AssignFn && a.sym == f) || a.op == Op::AssumeRel || a.op == Op::AssumeNegRel)
            alpha.push_back(a);
    std::mt19937 rng(seed);
    Preservation out;
    Vocabulary print{voc.sig, vt};
    for (std::size_t i = 0; i < samples; ++i) {
        Execution rho = random_word(rng, alpha, 12);
        Execution img = instrument(rho, p, vt.size());
        bool f1 = is_feasible(rho, 3, ax), f2 = is_feasible(img, vt.size(), p.residual);
        bool c1 = is_coherent(rho, 3, ax).coherent, c2 = is_coherent(img, vt.size(), p.residual).coherent;
        (f1 ? out.feasible : out.infeasible)++;
        out.incoherent += !c1;
        if (f1 != f2) ++out.feasibility_mismatches;
        if (c1 != c2) ++out.coherence_mismatches;
        if ((f1 != f2 || c1 != c2) && out.first_failure.empty()) out.first_failure = to_string(rho, print);
    }
    return out;
}

}  // namespace axtest

#ifdef DOCTEST_LIBRARY_INCLUDED
namespace doctest {
template <>
struct StringMaker<std::set<std::string>> {
    static String convert(const std::set<std::string>& s) {
        std::string out = "{";
        for (const auto& x : s) out += "\n  " + x;
        return (out + "\n}").c_str();
    }
};
}  // namespace doctest
#endif
