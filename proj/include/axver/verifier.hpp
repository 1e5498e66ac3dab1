#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "axver/instrument.hpp"
#include "axver/nfa.hpp"
#include "axver/oracle.hpp"
#include "axver/syntax.hpp"

namespace axver {

enum class Outcome { Verified, Refuted, Coherent, Incoherent, Unsupported };
std::string to_string(Outcome o);

struct Options {
    std::size_t max_states = 0;  // 0: no limit
    unsigned threads = 1;
};

struct SearchStats {
    std::size_t states = 0;
    std::size_t frontier_peak = 0;
    double millis = 0;
};

struct Verdict {
    Outcome outcome = Outcome::Verified;
    /// Pre-image of the witness: letters of the (translated) program.
    std::optional<Execution> counterexample;
    /// The witness as run by the automaton, after instrumentation.
    Execution instrumented;
    /// Incoherent only: index into `counterexample` of the offending letter.
    std::size_t position = 0;
    std::optional<Violation> violation;
    /// Printing context for the letters above.
    Vocabulary voc;
    std::string message;
    SearchStats stats;
};

class StateLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A program with its signature and validated axioms. The program may be in
/// surface form; it is desugared as needed.
struct Problem {
    Program program;
    Signature sig;
    AxiomSet ax;
    std::optional<Cond> post;
};

/// Validates the axioms (throws UnsupportedAxiom / ContradictoryAxioms).
Problem make_problem(const ParsedFile& f);

/// Exec(p) after the total-order translation and instrumentation, with the
/// vocabulary it is spelled in.
struct Instrumented {
    Nfa nfa;
    Vocabulary voc;
    Pipeline pipeline;
};
Instrumented instrumented_nfa(const Problem& p, bool with_post);

Verdict check_coherence(const Problem& p, const Options& opt = {});
/// Coherence gates verification. Without a postcondition the program is
/// verified against `true`.
Verdict verify(const Problem& p, const Options& opt = {});

struct TraceReport {
    bool oracle_feasible = true;
    bool oracle_coherent = true;
    std::optional<std::size_t> oracle_position;
    std::optional<Violation> oracle_violation;
    std::string conflict;  // violated atom when infeasible
    bool automaton_feasible = true;
    bool automaton_coherent = true;
    std::optional<std::size_t> automaton_position;
    std::optional<Violation> automaton_violation;
    bool agree = true;
    std::size_t translations = 1;
};

struct TraceFile {
    Vocabulary voc;
    AxiomSet ax;  // not yet validated
    Execution rho;
};

/// Optional header (axioms block, vars line), then one letter per line.
/// Blank lines and (* comments *) are skipped. Without a vars line, variables
/// are declared by use. Throws ParseError.
TraceFile parse_trace(std::string_view text);

/// Runs both the oracle and the automata on one execution over `voc`.
/// Negated atoms on strict total orders are expanded: the trace is feasible
/// when some translation is, and coherent when every translation is.
TraceReport check_trace(const Execution& rho, const Vocabulary& voc, const AxiomSet& ax);

}  // namespace axver
