#include "axver/vocab.hpp"

namespace axver {

namespace {

SymId add_symbol(std::vector<Symbol>& table, std::map<std::string, SymId, std::less<>>& index,
                 const std::map<std::string, SymId, std::less<>>& other, const std::string& name,
                 int arity, const char* kind) {
    if (other.count(name))
        throw ArityError("symbol '" + name + "' used both as function and relation");
    if (auto it = index.find(name); it != index.end()) {
        if (table[it->second].arity != arity)
            throw ArityError(std::string(kind) + " '" + name + "' used with arity " +
                             std::to_string(arity) + " and " +
                             std::to_string(table[it->second].arity));
        return it->second;
    }
    if (arity < 1)
        throw ArityError(std::string(kind) + " '" + name + "' must have arity >= 1");
    auto id = static_cast<SymId>(table.size());
    table.push_back({name, arity});
    index.emplace(name, id);
    return id;
}

}  // namespace

SymId Signature::add_function(const std::string& name, int arity) {
    return add_symbol(functions_, fn_index_, rel_index_, name, arity, "function");
}

SymId Signature::add_relation(const std::string& name, int arity) {
    return add_symbol(relations_, rel_index_, fn_index_, name, arity, "relation");
}

std::optional<SymId> Signature::find_function(std::string_view name) const {
    auto it = fn_index_.find(name);
    if (it == fn_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<SymId> Signature::find_relation(std::string_view name) const {
    auto it = rel_index_.find(name);
    if (it == rel_index_.end()) return std::nullopt;
    return it->second;
}

VarId VarTable::add(const std::string& name, bool readonly) {
    if (index_.count(name)) throw std::invalid_argument("duplicate variable '" + name + "'");
    auto id = static_cast<VarId>(vars_.size());
    vars_.push_back({name, readonly});
    index_.emplace(name, id);
    return id;
}

std::optional<VarId> VarTable::find(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

VarId VarTable::get_or_add(const std::string& name) {
    if (auto v = find(name)) return *v;
    return add(name);
}

bool VarTable::names_equal(const VarTable& o) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name != o.vars_[i].name || vars_[i].readonly != o.vars_[i].readonly)
            return false;
    return true;
}

}  // namespace axver
