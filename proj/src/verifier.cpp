#include "axver/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <thread>
#include <unordered_set>

#include "axver/scc.hpp"

namespace axver {

std::string to_string(Outcome o) {
    switch (o) {
    case Outcome::Verified: return "verified";
    case Outcome::Refuted: return "refuted";
    case Outcome::Coherent: return "coherent";
    case Outcome::Incoherent: return "incoherent";
    case Outcome::Unsupported: return "unsupported";
    }
    return "?";
}

Problem make_problem(const ParsedFile& f) {
    return {f.program, f.sig, validate_axioms(f.axioms, f.sig), f.post};
}

Instrumented instrumented_nfa(const Problem& p, bool with_post) {
    Program prog = with_post && p.post ? with_post_violation(p.program, *p.post) : p.program;
    Program core = is_core(prog) ? prog : desugar(prog);
    Instrumented out;
    out.voc.sig = p.sig;
    out.voc.vars = core.vars;
    out.pipeline = build_pipeline(p.ax, p.sig, out.voc.vars);
    out.nfa = instrument(build_exec_nfa(core, p.sig, p.ax), out.pipeline, out.voc.vars.size());
    return out;
}

namespace {

template <class S>
struct Move {
    S state;
    bool prune = false;  // dead end: no goal is reachable from here
    std::optional<Violation> hit;
};

struct Path {
    std::vector<const Edge*> edges;
    std::optional<Violation> hit;
};

// Breadth-first search of the product of `n` with a deterministic automaton.
// Successors of one level are computed in parallel and merged in frontier
// order, so the result does not depend on the thread count.
template <class S, class StepF, class KeyF, class GoalF>
std::optional<Path> explore(const Nfa& n, S init, StepF step, KeyF key, GoalF goal, const Options& opt,
                            SearchStats& st) {
    struct Node {
        StateId q;
        std::uint32_t parent;
        const Edge* via;
    };
    std::vector<Node> nodes;
    std::unordered_set<std::string> seen;
    auto full_key = [&](StateId q, const S& s) {
        std::string k(sizeof q, '\0');
        std::memcpy(k.data(), &q, sizeof q);
        return k + key(s);
    };
    auto path_to = [&](std::uint32_t i, const Edge* last, std::optional<Violation> hit) {
        Path p{{}, hit};
        if (last) p.edges.push_back(last);
        for (; nodes[i].via; i = nodes[i].parent) p.edges.push_back(nodes[i].via);
        std::reverse(p.edges.begin(), p.edges.end());
        return p;
    };

    nodes.push_back({n.initial(), 0, nullptr});
    seen.insert(full_key(n.initial(), init));
    st.states += 1;
    if (goal(n.initial(), init)) return path_to(0, nullptr, std::nullopt);

    struct Cand {
        std::uint32_t parent;
        const Edge* via;
        Move<S> move;
        std::string key;
    };
    std::vector<std::pair<std::uint32_t, S>> frontier{{0, std::move(init)}};
    unsigned threads = std::max(1u, opt.threads);
    while (!frontier.empty()) {
        st.frontier_peak = std::max(st.frontier_peak, frontier.size());
        std::vector<std::vector<Cand>> out(frontier.size());
        auto work = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const auto& [id, s] = frontier[i];
                for (const auto& e : n.out(nodes[id].q)) {
                    Cand c{id, &e, step(s, *e.letter), {}};
                    if (!c.move.prune && !c.move.hit) c.key = full_key(e.dst, c.move.state);
                    out[i].push_back(std::move(c));
                }
            }
        };
        if (threads == 1 || frontier.size() < 2 * threads) {
            work(0, frontier.size());
        } else {
            std::vector<std::thread> pool;
            std::size_t chunk = (frontier.size() + threads - 1) / threads;
            for (std::size_t lo = 0; lo < frontier.size(); lo += chunk)
                pool.emplace_back(work, lo, std::min(frontier.size(), lo + chunk));
            for (auto& t : pool) t.join();
        }
        std::vector<std::pair<std::uint32_t, S>> next;
        for (auto& cands : out)
            for (auto& c : cands) {
                if (c.move.hit) return path_to(c.parent, c.via, c.move.hit);
                if (c.move.prune || !seen.insert(std::move(c.key)).second) continue;
                auto id = static_cast<std::uint32_t>(nodes.size());
                nodes.push_back({c.via->dst, c.parent, c.via});
                st.states += 1;
                if (opt.max_states && st.states > opt.max_states)
                    throw StateLimitExceeded("state limit of " + std::to_string(opt.max_states) + " exceeded");
                if (goal(c.via->dst, c.move.state)) return path_to(id, nullptr, std::nullopt);
                next.emplace_back(id, std::move(c.move.state));
            }
        frontier = std::move(next);
    }
    return std::nullopt;
}

std::optional<Path> coherence_search(const Instrumented& in, const Options& opt, SearchStats& st) {
    const AxiomSet& ax = in.pipeline.residual;
    auto step = [&](const CohState& s, const Letter& a) {
        auto r = coh_step(s, a, ax);
        return Move<CohState>{std::move(r.state), false, r.violation};
    };
    auto key = [](const CohState& s) { return s.key(); };
    auto goal = [](StateId, const CohState&) { return false; };
    return explore(in.nfa, CohState::initial(in.voc.vars.size()), step, key, goal, opt, st);
}

void fill_witness(Verdict& v, const Path& p) {
    Execution pre;
    for (const auto* e : p.edges) {
        v.instrumented.push_back(*e->letter);
        if (e->source) pre.push_back(*e->source);
    }
    v.position = pre.empty() ? 0 : pre.size() - 1;
    v.counterexample = std::move(pre);
}

std::size_t core_vars(const Instrumented& in) {
    return in.pipeline.needs_aux ? in.voc.vars.size() - 2 : in.voc.vars.size();
}

Verdict incoherent(const Instrumented& in, const Path& p, const Problem& prob, const std::string& what) {
    Verdict v;
    v.outcome = Outcome::Incoherent;
    v.voc = in.voc;
    v.violation = p.hit;
    fill_witness(v, p);
    if (is_coherent(v.instrumented, in.voc.vars.size(), in.pipeline.residual).coherent)
        throw std::logic_error("internal error: coherence witness not confirmed by the oracle");
    if (is_coherent(*v.counterexample, core_vars(in), prob.ax).coherent)
        throw std::logic_error("internal error: coherence witness pre-image not confirmed by the oracle");
    v.message = what + ": " + to_string(*p.hit) + " violation at letter " + std::to_string(v.position + 1);
    return v;
}

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Verdict check_coherence(const Problem& p, const Options& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Instrumented in = instrumented_nfa(p, false);
    SearchStats st;
    auto hit = coherence_search(in, opt, st);
    Verdict v;
    if (hit) {
        v = incoherent(in, *hit, p, "program is not coherent");
    } else {
        v.outcome = Outcome::Coherent;
        v.voc = in.voc;
        v.message = "program is coherent";
    }
    v.stats = st;
    v.stats.millis = since(t0);
    return v;
}

Verdict verify(const Problem& p, const Options& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v = check_coherence(p, opt);
    SearchStats st = v.stats;
    if (v.outcome == Outcome::Incoherent) return v;
    if (!p.post) {
        v.outcome = Outcome::Verified;
        v.message = "coherent; no postcondition to check";
        return v;
    }
    // The automaton is exact only on coherent executions, and the appended
    // assumes of the negated postcondition can break coherence on their own.
    Instrumented in = instrumented_nfa(p, true);
    if (auto hit = coherence_search(in, opt, st)) {
        v = incoherent(in, *hit, p, "program with negated postcondition is not coherent");
        v.stats = st;
        v.stats.millis = since(t0);
        return v;
    }
    const AxiomSet& ax = in.pipeline.residual;
    auto step = [&](const SccState& s, const Letter& a) {
        SccState q = axver::step(s, a, ax);
        bool dead = q.reject();
        return Move<SccState>{std::move(q), dead, std::nullopt};
    };
    auto key = [](const SccState& s) { return s.key(); };
    auto goal = [&](StateId q, const SccState& s) { return in.nfa.accepting(q) && !s.reject(); };
    auto found = explore(in.nfa, SccState::initial(in.voc.vars.size()), step, key, goal, opt, st);
    v = Verdict{};
    v.voc = in.voc;
    if (found) {
        v.outcome = Outcome::Refuted;
        fill_witness(v, *found);
        if (!is_feasible(v.instrumented, in.voc.vars.size(), ax))
            throw std::logic_error("internal error: counterexample not feasible per the oracle");
        if (!is_feasible(*v.counterexample, core_vars(in), p.ax))
            throw std::logic_error("internal error: counterexample pre-image not feasible per the oracle");
        v.message = "postcondition fails on a feasible execution";
    } else {
        v.outcome = Outcome::Verified;
        v.message = "every execution violating the postcondition is infeasible";
    }
    v.stats = st;
    v.stats.millis = since(t0);
    return v;
}

TraceFile parse_trace(std::string_view text) {
    TraceFile t;
    std::size_t at = parse_header(text, t.voc.sig, t.ax, t.voc.vars);
    bool declared = t.voc.vars.size() > 0;
    int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(at), '\n'));
    std::string_view rest = text.substr(at);
    bool in_comment = false;
    for (std::size_t i = 0; i < rest.size(); ++line) {
        std::size_t e = rest.find('\n', i);
        if (e == std::string_view::npos) e = rest.size();
        std::string raw(rest.substr(i, e - i));
        i = e + 1;
        // Strip comments, which may span lines.
        std::string clean;
        for (std::size_t k = 0; k < raw.size(); ++k) {
            if (!in_comment && raw.compare(k, 2, "(*") == 0) {
                in_comment = true;
                ++k;
            } else if (in_comment && raw.compare(k, 2, "*)") == 0) {
                in_comment = false;
                ++k;
            } else if (!in_comment) {
                clean += raw[k];
            }
        }
        if (clean.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::size_t before = t.voc.vars.size();
        try {
            t.rho.push_back(parse_letter(clean, t.voc, true));
            check_letter(t.rho.back(), t.voc);
        } catch (const std::runtime_error& err) {
            throw ParseError(err.what(), {line, 1});
        }
        if (declared && t.voc.vars.size() != before)
            throw ParseError("undeclared variable in '" + clean + "'", {line, 1});
    }
    return t;
}

TraceReport check_trace(const Execution& rho, const Vocabulary& voc, const AxiomSet& ax) {
    TraceReport r;
    auto branches = translate_sto(rho, ax);
    r.translations = branches.size();
    Vocabulary ivoc = voc;
    Pipeline pipe = build_pipeline(ax, voc.sig, ivoc.vars);
    std::size_t nv = voc.vars.size(), inv = ivoc.vars.size();

    r.oracle_feasible = r.automaton_feasible = false;
    for (const auto& b : branches) {
        TermStore ts;
        auto m = minimal_model(ts, b, nv, ax, &voc);
        if (m.consistent)
            r.oracle_feasible = true;
        else if (r.conflict.empty())
            r.conflict = m.conflict;
        auto c = is_coherent(ts, b, nv, ax);
        if (!c.coherent && r.oracle_coherent) {
            r.oracle_coherent = false;
            r.oracle_position = c.position;
            r.oracle_violation = c.kind;
        }

        auto t = instrument_tracked(b, pipe, inv);
        SccState q = SccState::initial(inv);
        CohState h = CohState::initial(inv);
        bool coherent = true;
        for (std::size_t i = 0; i < t.word.size(); ++i) {
            q = step(q, t.word[i], pipe.residual);
            if (!coherent) continue;
            auto s = coh_step(h, t.word[i], pipe.residual);
            h = std::move(s.state);
            if (s.violation) {
                coherent = false;
                if (r.automaton_coherent) {
                    r.automaton_coherent = false;
                    r.automaton_position = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, t.origin[i]));
                    r.automaton_violation = s.violation;
                }
            }
        }
        if (!q.reject()) r.automaton_feasible = true;
    }
    if (r.oracle_feasible) r.conflict.clear();
    // Feasibility verdicts of the automaton are only meaningful on coherent traces.
    r.agree = r.oracle_coherent == r.automaton_coherent && r.oracle_violation == r.automaton_violation &&
              (!r.oracle_coherent || r.oracle_feasible == r.automaton_feasible);
    return r;
}

}  // namespace axver
