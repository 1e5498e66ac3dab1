#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "axver/vocab.hpp"

namespace axver {

enum class Op : std::uint8_t { Assign, AssignFn, AssumeEq, AssumeNeq, AssumeRel, AssumeNegRel };

/// One symbol of the execution alphabet.
///   Assign        x := y
///   AssignFn      x := f(args)
///   AssumeEq/Neq  assume(x = y) / assume(x != y)
///   AssumeRel     assume(R(args)), AssumeNegRel its negation
struct Letter {
    Op op = Op::Assign;
    VarId x = 0;
    VarId y = 0;
    SymId sym = 0;
    std::vector<VarId> args;

    static Letter assign(VarId x, VarId y) { return {Op::Assign, x, y, 0, {}}; }
    static Letter assign_fn(VarId x, SymId f, std::vector<VarId> a) {
        return {Op::AssignFn, x, 0, f, std::move(a)};
    }
    static Letter eq(VarId x, VarId y) { return {Op::AssumeEq, x, y, 0, {}}; }
    static Letter neq(VarId x, VarId y) { return {Op::AssumeNeq, x, y, 0, {}}; }
    static Letter rel(SymId r, std::vector<VarId> a) { return {Op::AssumeRel, 0, 0, r, std::move(a)}; }
    static Letter nrel(SymId r, std::vector<VarId> a) {
        return {Op::AssumeNegRel, 0, 0, r, std::move(a)};
    }

    bool is_assign() const { return op == Op::Assign || op == Op::AssignFn; }
    bool is_assume() const { return !is_assign(); }

    auto operator<=>(const Letter&) const = default;
    bool operator==(const Letter&) const = default;
};

using Execution = std::vector<Letter>;

std::string to_string(const Letter& a, const Vocabulary& voc);
std::string to_string(const Execution& rho, const Vocabulary& voc, std::string_view sep = " . ");

class LetterSyntaxError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses one letter in the printed syntax. Unknown variables and symbols are
/// added to `voc` when `extend` is set, otherwise they are an error.
Letter parse_letter(std::string_view text, Vocabulary& voc, bool extend);

/// Checks arities and variable ranges.
void check_letter(const Letter& a, const Vocabulary& voc);

}  // namespace axver
