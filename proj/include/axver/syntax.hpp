#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "axver/vocab.hpp"

namespace axver {

struct SourcePos {
    int line = 0;
    int col = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, SourcePos pos)
        : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + msg),
          pos_(pos) {}
    SourcePos pos() const { return pos_; }

private:
    SourcePos pos_;
};

/// Name of the relation behind the infix `<` (and `<=`) sugar.
inline constexpr const char* kLessThan = "lt";
/// Prefix of temporaries introduced by desugaring.
inline constexpr const char* kTempPrefix = "__t";

struct Expr {
    std::string name;        // variable, constant, or function symbol
    std::vector<Expr> args;  // empty for variables and constants
    SourcePos pos;

    bool is_var() const { return args.empty(); }
    bool operator==(const Expr& o) const { return name == o.name && args == o.args; }
};

struct Cond {
    enum class Kind { Eq, Neq, Rel, NegRel, Not, Or, And };
    Kind kind = Kind::Eq;
    std::string rel;          // Rel / NegRel
    std::vector<Expr> terms;  // Eq / Neq: two terms; Rel: the arguments
    std::vector<Cond> sub;    // Not: one; Or / And: two or more
    SourcePos pos;

    bool is_atomic() const { return kind == Kind::Eq || kind == Kind::Neq || kind == Kind::Rel ||
                                    kind == Kind::NegRel; }
    bool operator==(const Cond& o) const {
        return kind == o.kind && rel == o.rel && terms == o.terms && sub == o.sub;
    }
};

/// Statements. Choice and Loop have no surface syntax; desugaring produces
/// them for non-atomic conditions (nondeterministic branch / Kleene star).
struct Stmt {
    enum class Kind { Skip, Assign, Assume, Seq, If, While, Choice, Loop };
    Kind kind = Kind::Skip;
    std::string lhs;          // Assign
    Expr rhs;                 // Assign
    Cond cond;                // Assume / If / While
    std::vector<Stmt> body;   // Seq, Choice: items; If: then, else; While, Loop: body
    SourcePos pos;

    bool operator==(const Stmt& o) const {
        return kind == o.kind && lhs == o.lhs && rhs == o.rhs && cond == o.cond && body == o.body;
    }
};

struct Program {
    VarTable vars;
    std::vector<std::string> consts;  // compiled into read-only variables by desugar
    Stmt body;

    bool operator==(const Program& o) const {
        return vars == o.vars && consts == o.consts && body == o.body;
    }
};

enum class RelProp : std::uint8_t { Reflexive, Irreflexive, Symmetric, Transitive, StrictTotalOrder };
enum class FnProp : std::uint8_t { Commutative, Idempotent };

enum class RejectedKind { Associative, Epr, Antisymmetric };

struct RejectedDecl {
    RejectedKind kind;
    std::string subject;  // symbol name, or the sentence text for EPR
    SourcePos pos;
};

struct AxiomSet {
    std::map<SymId, std::set<RelProp>> rel;
    std::map<SymId, std::set<FnProp>> fn;
    std::vector<RejectedDecl> rejected;

    bool has(SymId r, RelProp p) const;
    bool has(SymId f, FnProp p) const;
    /// Transitive either directly or as a strict total order.
    bool transitive(SymId r) const;
    bool sto(SymId r) const { return has(r, RelProp::StrictTotalOrder); }
    bool empty() const { return rel.empty() && fn.empty() && rejected.empty(); }

    bool operator==(const AxiomSet& o) const { return rel == o.rel && fn == o.fn; }
};

class AxiomError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class UnsupportedAxiom : public AxiomError {
public:
    using AxiomError::AxiomError;
};
class ContradictoryAxioms : public AxiomError {
public:
    using AxiomError::AxiomError;
};

std::string to_string(RelProp p);
std::string to_string(FnProp p);

struct ParsedFile {
    Program program;
    Signature sig;
    AxiomSet axioms;
    std::optional<Cond> post;
};

/// Parses the whole input file. Throws ParseError or ArityError.
ParsedFile parse_program(std::string_view source);

/// Parses just an `axioms { ... }` block body plus optional `vars` line; used by
/// trace files. Returns the byte offset where the remaining text starts.
std::size_t parse_header(std::string_view source, Signature& sig, AxiomSet& ax, VarTable& vars);

/// Core form: atomic conditions, variable-only function arguments, no constants.
Program desugar(const Program& p);

/// True when `p` is already in core form.
bool is_core(const Program& p);

/// Throws UnsupportedAxiom / ContradictoryAxioms; returns `a` otherwise.
AxiomSet validate_axioms(const AxiomSet& a, const Signature& sig);

/// Negation normal form helpers shared with the NFA builder.
Cond negate(const Cond& c);
/// Disjunctive normal form over atoms. Each inner vector is a conjunction.
std::vector<std::vector<Cond>> dnf(const Cond& c);

std::string to_string(const Expr& e);
std::string to_string(const Cond& c);
/// Pretty-printer for programs (core or surface).
std::string to_string(const Stmt& s, int indent = 0);

}  // namespace axver
