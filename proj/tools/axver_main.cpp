// axver command line: verify, check-coherence, check-trace, instrument, stats.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "axver/verifier.hpp"
#include "json.hpp"

using namespace axver;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kRefuted = 1, kIncoherent = 2, kUnsupported = 3, kParse = 4, kLimit = 5, kInternal = 6 };

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json axioms_json(const AxiomSet& ax, const Signature& sig) {
    json rels = json::object(), fns = json::object();
    for (const auto& [r, props] : ax.rel) {
        json a = json::array();
        for (auto p : props) a.push_back(to_string(p));
        rels[sig.relation(r).name] = a;
    }
    for (const auto& [f, props] : ax.fn) {
        json a = json::array();
        for (auto p : props) a.push_back(to_string(p));
        fns[sig.function(f).name] = a;
    }
    return {{"relations", rels}, {"functions", fns}};
}

json letters(const Execution& rho, const Vocabulary& voc) {
    json a = json::array();
    for (const auto& l : rho) a.push_back(to_string(l, voc));
    return a;
}

struct Common {
    std::string file;
    bool json_out = false;
    bool dump_nfa = false;
    std::size_t max_states = 0;
    unsigned threads = 1;
};

void emit(const json& j, const Common& c, const std::string& human) {
    if (c.json_out)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << human;
}

int error_exit(const Common& c, const std::string& outcome, const std::string& msg, int code) {
    json j{{"outcome", outcome}, {"message", msg}, {"counterexample", nullptr}};
    if (c.json_out)
        std::cout << j.dump(2) << "\n";
    std::cerr << "axver: " << msg << "\n";
    return code;
}

int report(const Verdict& v, const Problem& p, const Common& c) {
    json j{{"outcome", to_string(v.outcome)},
           {"message", v.message},
           {"counterexample", v.counterexample ? letters(*v.counterexample, v.voc) : json(nullptr)},
           {"stats", {{"states", v.stats.states}, {"frontier_peak", v.stats.frontier_peak},
                      {"millis", v.stats.millis}}},
           {"axioms_echo", axioms_json(p.ax, p.sig)}};
    if (v.counterexample) {
        j["instrumented"] = letters(v.instrumented, v.voc);
        j["length"] = v.counterexample->size();
    }
    if (v.violation) {
        j["violation"] = to_string(*v.violation);
        j["position"] = v.position;
    }
    std::ostringstream h;
    h << to_string(v.outcome) << ": " << v.message << "\n";
    if (v.counterexample) {
        h << "witness:\n";
        for (std::size_t i = 0; i < v.counterexample->size(); ++i)
            h << "  " << (i + 1) << ". " << to_string((*v.counterexample)[i], v.voc)
              << (v.violation && i == v.position ? "    <- " + to_string(*v.violation) : "") << "\n";
    }
    h << "states " << v.stats.states << ", frontier peak " << v.stats.frontier_peak << ", "
      << static_cast<long>(v.stats.millis) << " ms\n";
    emit(j, c, h.str());
    switch (v.outcome) {
    case Outcome::Verified:
    case Outcome::Coherent: return kOk;
    case Outcome::Refuted: return kRefuted;
    case Outcome::Incoherent: return kIncoherent;
    case Outcome::Unsupported: return kUnsupported;
    }
    return kInternal;
}

Problem load(const Common& c) { return make_problem(parse_program(read_file(c.file))); }

int run_program_cmd(const std::string& cmd, const Common& c) {
    Problem p = load(c);
    Options opt{c.max_states, c.threads};
    if (cmd == "instrument" || c.dump_nfa) {
        Instrumented in = instrumented_nfa(p, cmd != "instrument");
        if (cmd == "instrument") {
            std::cout << "# pipeline:";
            for (const auto& h : in.pipeline.homs) std::cout << " " << h.tag;
            std::cout << "\n" << dump(in.nfa, in.voc);
            return kOk;
        }
        std::cerr << dump(in.nfa, in.voc);
    }
    if (cmd == "stats") {
        Instrumented plain = instrumented_nfa(p, false);
        Instrumented post = instrumented_nfa(p, true);
        Verdict v = verify(p, opt);
        json pipe = json::array();
        for (const auto& h : plain.pipeline.homs) pipe.push_back(h.tag);
        json j{{"outcome", to_string(v.outcome)},
               {"variables", plain.voc.vars.size()},
               {"nfa", {{"states", plain.nfa.size()}, {"edges", plain.nfa.num_edges()}}},
               {"nfa_with_post", {{"states", post.nfa.size()}, {"edges", post.nfa.num_edges()}}},
               {"pipeline", pipe},
               {"stats", {{"states", v.stats.states}, {"frontier_peak", v.stats.frontier_peak},
                          {"millis", v.stats.millis}}},
               {"axioms_echo", axioms_json(p.ax, p.sig)}};
        std::cout << j.dump(2) << "\n";
        return kOk;
    }
    Verdict v = cmd == "verify" ? verify(p, opt) : check_coherence(p, opt);
    return report(v, p, c);
}

int run_trace_cmd(const Common& c) {
    TraceFile t = parse_trace(read_file(c.file));
    AxiomSet ax = validate_axioms(t.ax, t.voc.sig);
    TraceReport r = check_trace(t.rho, t.voc, ax);
    std::string outcome = !r.oracle_coherent ? "incoherent" : r.oracle_feasible ? "feasible" : "infeasible";
    auto pos = [](const std::optional<std::size_t>& p) { return p ? json(*p) : json(nullptr); };
    auto viol = [](const std::optional<Violation>& v) { return v ? json(to_string(*v)) : json(nullptr); };
    json j{{"outcome", outcome},
           {"agree", r.agree},
           {"oracle", {{"feasible", r.oracle_feasible}, {"coherent", r.oracle_coherent},
                       {"position", pos(r.oracle_position)}, {"violation", viol(r.oracle_violation)}}},
           {"automaton", {{"feasible", r.automaton_feasible}, {"coherent", r.automaton_coherent},
                          {"position", pos(r.automaton_position)}, {"violation", viol(r.automaton_violation)}}},
           {"translations", r.translations},
           {"counterexample", nullptr},
           {"axioms_echo", axioms_json(ax, t.voc.sig)}};
    if (!r.conflict.empty()) j["violated"] = r.conflict;
    std::ostringstream h;
    h << outcome;
    if (!r.oracle_coherent)
        h << ": " << to_string(*r.oracle_violation) << " violation at letter " << (*r.oracle_position + 1) << " ("
          << to_string(t.rho[*r.oracle_position], t.voc) << ")";
    else if (!r.oracle_feasible)
        h << ": " << r.conflict;
    h << "\noracle and automata " << (r.agree ? "agree" : "DISAGREE") << "\n";
    emit(j, c, h.str());
    if (!r.agree) return kInternal;
    if (!r.oracle_coherent) return kIncoherent;
    return r.oracle_feasible ? kOk : kRefuted;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"axver: verifier for uninterpreted coherent programs modulo axioms"};
    app.require_subcommand(1);
    Common c;
    auto add = [&](const std::string& name, const std::string& desc) {
        auto* s = app.add_subcommand(name, desc);
        s->add_option("file", c.file, "input file")->required();
        s->add_flag("--json", c.json_out, "print a JSON report");
        s->add_flag("--dump-nfa", c.dump_nfa, "print the instrumented execution automaton to stderr");
        s->add_option("--max-states", c.max_states, "give up after this many product states (0: no limit)");
        s->add_option("--threads", c.threads, "worker threads for exploration")->check(CLI::Range(1u, 256u));
        return s;
    };
    add("verify", "check coherence, then the postcondition");
    add("check-coherence", "check that every execution is coherent");
    add("check-trace", "feasibility and coherence of one execution, by oracle and automaton");
    add("instrument", "print the instrumented execution automaton");
    add("stats", "automaton sizes and exploration statistics");
    CLI11_PARSE(app, argc, argv);
    std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "check-trace") return run_trace_cmd(c);
        return run_program_cmd(cmd, c);
    } catch (const UnsupportedAxiom& e) {
        return error_exit(c, "unsupported", e.what(), kUnsupported);
    } catch (const ContradictoryAxioms& e) {
        return error_exit(c, "unsupported", e.what(), kUnsupported);
    } catch (const ParseError& e) {
        return error_exit(c, "parse_error", c.file + ":" + e.what(), kParse);
    } catch (const ArityError& e) {
        return error_exit(c, "parse_error", c.file + ": " + e.what(), kParse);
    } catch (const LetterSyntaxError& e) {
        return error_exit(c, "parse_error", c.file + ": " + e.what(), kParse);
    } catch (const StateLimitExceeded& e) {
        return error_exit(c, "state_limit", e.what(), kLimit);
    } catch (const std::exception& e) {
        return error_exit(c, "error", e.what(), kInternal);
    }
}
