#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "axver/letter.hpp"
#include "axver/syntax.hpp"

namespace axver {

using StateId = std::uint32_t;

struct Edge {
    StateId dst = 0;
    std::optional<Letter> letter;  // empty for an epsilon edge
    // Set on the first edge of each image word: the letter of the program
    // execution it came from. Used to map witnesses back.
    std::optional<Letter> source;
};

/// Nondeterministic automaton over executions. Exec(skip) is the single state
/// that is both initial and accepting.
class Nfa {
public:
    Nfa();

    StateId add_state(bool accepting = false);
    void add_edge(StateId s, StateId d, Letter a, std::optional<Letter> source = std::nullopt);
    void add_epsilon(StateId s, StateId d);

    StateId initial() const { return initial_; }
    void set_initial(StateId s) { initial_ = s; }
    bool accepting(StateId s) const { return accepting_[s]; }
    void set_accepting(StateId s, bool v = true) { accepting_[s] = v; }

    std::size_t size() const { return out_.size(); }
    std::size_t num_edges() const;
    const std::vector<Edge>& out(StateId s) const { return out_[s]; }
    bool has_epsilons() const;

private:
    StateId initial_ = 0;
    std::vector<bool> accepting_;
    std::vector<std::vector<Edge>> out_;
};

/// Exec(p) for a core program. Negated atoms over strict total orders become
/// the branch R(y,x) | x=y, so no edge carries !R for such R.
Nfa build_exec_nfa(const Program& core, const Signature& sig, const AxiomSet& ax);

/// Exec(s; assume(!post)). The post may only mention variables and constants
/// of the (desugared) program; see `with_post_violation` for compound terms.
Nfa append_post_violation(const Nfa& n, const Cond& post, const Program& core, const Signature& sig,
                          const AxiomSet& ax);

/// Surface-level s; assume(!post), for posts with function applications.
Program with_post_violation(const Program& surface, const Cond& post);

/// Letter words for one atomic assume, after the total-order translation.
std::vector<Letter> assume_alternatives(const Cond& atom, const VarTable& vars, const Signature& sig,
                                        const AxiomSet& ax);

using LetterMap = std::function<Execution(const Letter&)>;

/// Replaces each edge by a fresh path spelling h(letter). A nonempty prologue
/// is spelled before the old initial state.
Nfa apply_homomorphism(const Nfa& n, const LetterMap& h, const Execution& prologue = {});

/// Epsilon-free, trimmed copy.
Nfa remove_epsilons(const Nfa& n);
/// Keeps states reachable from the initial state and co-reachable to an accepting one.
Nfa trim(const Nfa& n);
/// All states accepting: the language of prefixes.
Nfa prefix_closed(const Nfa& n);

bool accepts(const Nfa& n, const Execution& w);
/// Accepted words of length at most `max_len`, sorted, without duplicates.
std::vector<Execution> enumerate(const Nfa& n, std::size_t max_len);

/// One edge per line: "src -- letter --> dst". Accepting states and the
/// initial state are listed in header lines.
std::string dump(const Nfa& n, const Vocabulary& voc);

}  // namespace axver
