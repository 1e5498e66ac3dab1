#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace axver {

using VarId = std::uint16_t;
using SymId = std::uint16_t;

struct Symbol {
    std::string name;
    int arity = 0;
};

/// Function and relation symbols. Names are unique across both kinds.
class Signature {
public:
    SymId add_function(const std::string& name, int arity);
    SymId add_relation(const std::string& name, int arity);

    std::optional<SymId> find_function(std::string_view name) const;
    std::optional<SymId> find_relation(std::string_view name) const;

    const Symbol& function(SymId f) const { return functions_.at(f); }
    const Symbol& relation(SymId r) const { return relations_.at(r); }
    std::size_t num_functions() const { return functions_.size(); }
    std::size_t num_relations() const { return relations_.size(); }

    bool operator==(const Signature&) const = default;

private:
    std::vector<Symbol> functions_;
    std::vector<Symbol> relations_;
    std::map<std::string, SymId, std::less<>> fn_index_;
    std::map<std::string, SymId, std::less<>> rel_index_;
};

struct VarInfo {
    std::string name;
    bool readonly = false;  // constants and the reserved sink
};

/// Ordered variable set V. Ids are positions.
class VarTable {
public:
    VarId add(const std::string& name, bool readonly = false);
    std::optional<VarId> find(std::string_view name) const;
    VarId get_or_add(const std::string& name);

    const std::string& name(VarId v) const { return vars_.at(v).name; }
    bool readonly(VarId v) const { return vars_.at(v).readonly; }
    std::size_t size() const { return vars_.size(); }
    const std::vector<VarInfo>& all() const { return vars_; }

    bool operator==(const VarTable& o) const { return vars_.size() == o.vars_.size() && names_equal(o); }

private:
    bool names_equal(const VarTable& o) const;
    std::vector<VarInfo> vars_;
    std::map<std::string, VarId, std::less<>> index_;
};

/// Everything needed to print or parse letters.
struct Vocabulary {
    Signature sig;
    VarTable vars;
};

class ArityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace axver
