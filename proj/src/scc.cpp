#include "axver/scc.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace axver {

namespace {

template <class T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

void put_tuple(std::string& k, const ClassArgs& args) {
    for (auto c : args) k.push_back(static_cast<char>(c));
}

void put_sym(std::string& k, SymId s) {
    k.push_back(static_cast<char>(s & 0xff));
    k.push_back(static_cast<char>(s >> 8));
}

std::string class_list(const ClassArgs& args) {
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? "," : "") + std::string("c") + std::to_string(args[i]);
    return out + ")";
}

// Variables of each class, for printing.
std::string partition_text(const std::vector<ClassId>& cls, const Vocabulary& voc) {
    std::map<ClassId, std::vector<std::string>> members;
    for (std::size_t x = 0; x < cls.size(); ++x) members[cls[x]].push_back(voc.vars.name(static_cast<VarId>(x)));
    std::string out;
    for (const auto& [c, vs] : members) {
        out += "c" + std::to_string(c) + "={";
        for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? "," : "") + vs[i];
        out += "} ";
    }
    return out;
}


// An application with a dropped argument matters only while another
// application of the same symbol has the same dropped arguments in the same
// positions: a merge of the remaining arguments then equates their results.
// Drops the other ones, and groups that repeat an earlier group up to the
// names of their tokens.
template <class E, class Live>
void prune_dead_args(std::vector<E>& es, Live live) {
    std::erase_if(es, [&](const E& e) { return !e.args.empty() && std::none_of(e.args.begin(), e.args.end(), live); });
    using Group = std::pair<SymId, std::vector<int>>;
    std::map<Group, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < es.size(); ++i) {
        if (std::all_of(es[i].args.begin(), es[i].args.end(), live)) continue;
        Group g{es[i].sym, {}};
        for (auto c : es[i].args) g.second.push_back(live(c) ? -1 : c);
        groups[g].push_back(i);
    }
    std::vector<bool> drop(es.size(), false);
    std::set<std::string> seen;
    for (const auto& [g, members] : groups) {
        bool lone = members.size() < 2;
        std::string prof;
        if (!lone) {
            put_sym(prof, g.first);
            for (int c : g.second) prof.push_back(static_cast<char>(c < 0 ? 0 : 1));
            std::map<ClassId, int> local;
            for (auto i : members) {
                for (auto c : es[i].args)
                    if (live(c)) prof.push_back(static_cast<char>(c));
                if (live(es[i].result)) {
                    prof += 'L';
                    prof.push_back(static_cast<char>(es[i].result));
                } else {
                    prof += 'D';
                    prof.push_back(static_cast<char>(local.try_emplace(es[i].result, local.size()).first->second));
                }
            }
        }
        if (lone || !seen.insert(prof).second)
            for (auto i : members) drop[i] = true;
    }
    std::vector<E> kept;
    for (std::size_t i = 0; i < es.size(); ++i)
        if (!drop[i]) kept.push_back(std::move(es[i]));
    es = std::move(kept);
}

// Numbers the tokens after the live classes: by their occurrences with every
// token blanked, old number as tie break. `ren` holds the live classes.
template <class E, class Live>
void number_tokens(const std::vector<E>& es, Live live, std::map<ClassId, ClassId>& ren) {
    auto shape = [&](ClassId c) { return live(c) ? std::string(1, static_cast<char>(ren.at(c))) : std::string("?"); };
    std::map<ClassId, std::vector<std::string>> occ;
    for (const auto& e : es) {
        std::string base;
        put_sym(base, e.sym);
        for (auto c : e.args) base += shape(c) + ",";
        base += "=" + shape(e.result);
        for (std::size_t k = 0; k < e.args.size(); ++k)
            if (!live(e.args[k])) occ[e.args[k]].push_back("a" + std::to_string(k) + base);
        if (!live(e.result)) occ[e.result].push_back("r" + base);
    }
    std::vector<std::pair<std::vector<std::string>, ClassId>> order;
    for (auto& [t, v] : occ) {
        std::sort(v.begin(), v.end());
        order.push_back({v, t});
    }
    std::sort(order.begin(), order.end());
    if (ren.size() + order.size() > 256) throw std::length_error("automaton state has more than 256 classes");
    for (const auto& [v, t] : order) ren.emplace(t, static_cast<ClassId>(ren.size()));
}

}  // namespace

// Mutable working copy with unconstrained class numbers; normalize() restores
// the canonical form and drops classes no variable holds.
class SccBuilder {
public:
    SccBuilder(const SccState& q, const AxiomSet& ax) : q_(q), ax_(ax) {
        for (auto c : q_.cls_) next_ = std::max<int>(next_, c + 1);
        for (const auto& e : q_.apps_)
            for (auto c : e.args) next_ = std::max<int>(next_, c + 1);
    }

    ClassId fresh() {
        if (next_ > 255) throw std::length_error("automaton state has more than 256 classes");
        return static_cast<ClassId>(next_++);
    }

    void replace(ClassId from, ClassId to) {
        auto sub = [&](ClassId& c) {
            if (c == from) c = to;
        };
        for (auto& c : q_.cls_) sub(c);
        for (auto& [a, b] : q_.d_) {
            sub(a);
            sub(b);
            if (a > b) std::swap(a, b);
        }
        for (auto& e : q_.apps_) {
            for (auto& c : e.args) sub(c);
            sub(e.result);
        }
        for (auto* v : {&q_.pos_, &q_.neg_})
            for (auto& t : *v)
                for (auto& c : t.args) sub(c);
    }

    // Congruence, transitive closure and the disequalities they entail.
    void saturate() {
        for (bool changed = true; changed && !q_.reject_;) {
            changed = false;
            sort_unique(q_.apps_);
            for (std::size_t i = 0; i + 1 < q_.apps_.size(); ++i) {
                const auto& a = q_.apps_[i];
                const auto& b = q_.apps_[i + 1];
                if (a.sym == b.sym && a.args == b.args && a.result != b.result) {
                    ClassId keep = std::min(a.result, b.result), drop = std::max(a.result, b.result);
                    replace(drop, keep);
                    changed = true;
                    break;
                }
            }
            if (changed) continue;
            sort_unique(q_.pos_);
            sort_unique(q_.neg_);
            changed = close_transitive();
            if (changed) continue;
            derive_diseq();
            sort_unique(q_.d_);
            for (const auto& [a, b] : q_.d_)
                if (a == b) q_.reject_ = true;
            for (const auto& t : q_.pos_)
                if (std::binary_search(q_.neg_.begin(), q_.neg_.end(), t)) q_.reject_ = true;
        }
    }

    SccState finish() {
        if (q_.reject_) return SccState::rejecting();
        normalize();
        return std::move(q_);
    }

    SccState q_;

private:
    bool close_transitive() {
        bool changed = false;
        std::size_t n = static_cast<std::size_t>(next_);
        std::vector<SymId> rels;
        for (const auto* v : {&q_.pos_, &q_.neg_})
            for (const auto& t : *v)
                if (t.args.size() == 2 && ax_.transitive(t.sym)) rels.push_back(t.sym);
        sort_unique(rels);
        for (auto r : rels) {
            std::vector<char> P(n * n, 0), N(n * n, 0);
            for (const auto& t : q_.pos_)
                if (t.sym == r) P[t.args[0] * n + t.args[1]] = 1;
            for (const auto& t : q_.neg_)
                if (t.sym == r) N[t.args[0] * n + t.args[1]] = 1;
            bool grew = false;
            for (bool again = true; again;) {
                again = false;
                auto set = [&](char& c) {
                    if (!c) c = 1, again = grew = true;
                };
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t i = 0; i < n; ++i)
                        if (P[i * n + k])
                            for (std::size_t j = 0; j < n; ++j)
                                if (P[k * n + j]) set(P[i * n + j]);
                // R(x,y) & !R(x,z) => !R(y,z);  R(y,z) & !R(x,z) => !R(x,y)
                for (std::size_t x = 0; x < n; ++x)
                    for (std::size_t y = 0; y < n; ++y) {
                        if (!P[x * n + y]) continue;
                        for (std::size_t z = 0; z < n; ++z) {
                            if (N[x * n + z]) set(N[y * n + z]);
                            if (N[z * n + y]) set(N[z * n + x]);
                        }
                    }
            }
            if (!grew) continue;
            changed = true;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    auto a = static_cast<ClassId>(i), b = static_cast<ClassId>(j);
                    if (P[i * n + j]) q_.pos_.push_back({r, {a, b}});
                    if (N[i * n + j]) q_.neg_.push_back({r, {a, b}});
                }
            sort_unique(q_.pos_);
            sort_unique(q_.neg_);
        }
        return changed;
    }

    // R(t) and !R(s) differing in exactly one position force those classes apart.
    void derive_diseq() {
        for (const auto& p : q_.pos_)
            for (const auto& n : q_.neg_) {
                if (p.sym != n.sym) continue;
                int diff = -1, count = 0;
                for (std::size_t i = 0; i < p.args.size(); ++i)
                    if (p.args[i] != n.args[i]) {
                        diff = static_cast<int>(i);
                        ++count;
                    }
                if (count == 1) {
                    auto a = p.args[diff], b = n.args[diff];
                    q_.d_.push_back({std::min(a, b), std::max(a, b)});
                }
            }
    }

    // Live classes become 0..L-1 in order of first holder; applications keep
    // shared dropped arguments as tokens numbered from L.
    void normalize() {
        std::map<ClassId, ClassId> ren;
        for (auto c : q_.cls_) ren.try_emplace(c, static_cast<ClassId>(ren.size()));
        std::set<ClassId> held(q_.cls_.begin(), q_.cls_.end());
        auto live = [&](ClassId c) { return held.count(c) > 0; };
        auto rn = [&](ClassId& c) { c = ren.at(c); };
        std::erase_if(q_.d_, [&](const auto& p) { return !live(p.first) || !live(p.second); });
        for (auto& [a, b] : q_.d_) {
            rn(a);
            rn(b);
            if (a > b) std::swap(a, b);
        }
        sort_unique(q_.d_);
        std::erase_if(q_.apps_, [&](const AppEntry& e) { return !live(e.result); });
        prune_dead_args(q_.apps_, live);
        number_tokens(q_.apps_, live, ren);
        for (auto& e : q_.apps_) {
            for (auto& c : e.args) rn(c);
            rn(e.result);
        }
        sort_unique(q_.apps_);
        for (auto* v : {&q_.pos_, &q_.neg_}) {
            std::erase_if(*v, [&](const RelTuple& t) { return !std::all_of(t.args.begin(), t.args.end(), live); });
            for (auto& t : *v)
                for (auto& c : t.args) rn(c);
            sort_unique(*v);
        }
        for (auto& c : q_.cls_) rn(c);
    }

    const AxiomSet& ax_;
    int next_ = 0;
};

SccState SccState::initial(std::size_t nvars) {
    if (nvars > 255) throw std::length_error("at most 255 variables are supported");
    SccState q;
    for (std::size_t x = 0; x < nvars; ++x) q.cls_.push_back(static_cast<ClassId>(x));
    return q;
}

SccState SccState::rejecting() {
    SccState q;
    q.reject_ = true;
    return q;
}

std::string SccState::key() const {
    if (reject_) return "R";
    std::string k = "S";
    k.append(cls_.begin(), cls_.end());
    k.push_back('|');
    for (auto [a, b] : d_) {
        k.push_back(static_cast<char>(a));
        k.push_back(static_cast<char>(b));
    }
    k.push_back('|');
    for (const auto& e : apps_) {
        put_sym(k, e.sym);
        put_tuple(k, e.args);
        k.push_back(static_cast<char>(e.result));
    }
    for (const auto* v : {&pos_, &neg_}) {
        k.push_back('|');
        for (const auto& t : *v) {
            put_sym(k, t.sym);
            put_tuple(k, t.args);
        }
    }
    return k;
}

std::string SccState::to_string(const Vocabulary& voc) const {
    if (reject_) return "reject";
    std::string out = partition_text(cls_, voc);
    for (auto [a, b] : d_) out += "c" + std::to_string(a) + "!=c" + std::to_string(b) + " ";
    for (const auto& e : apps_)
        out += voc.sig.function(e.sym).name + class_list(e.args) + "=c" + std::to_string(e.result) + " ";
    for (const auto& t : pos_) out += voc.sig.relation(t.sym).name + class_list(t.args) + " ";
    for (const auto& t : neg_) out += "!" + voc.sig.relation(t.sym).name + class_list(t.args) + " ";
    if (!out.empty()) out.pop_back();
    return out;
}

SccState step(const SccState& q, const Letter& a, const AxiomSet& ax) {
    if (q.reject()) return q;
    SccBuilder b(q, ax);
    auto& s = b.q_;
    auto classes_of = [&](const std::vector<VarId>& vs) {
        ClassArgs out;
        for (auto v : vs) out.push_back(s.cls_[v]);
        return out;
    };
    switch (a.op) {
    case Op::Assign:
        s.cls_[a.x] = s.cls_[a.y];
        break;
    case Op::AssignFn: {
        auto args = classes_of(a.args);
        auto it = std::find_if(s.apps_.begin(), s.apps_.end(),
                               [&](const AppEntry& e) { return e.sym == a.sym && e.args == args; });
        if (it != s.apps_.end()) {
            s.cls_[a.x] = it->result;
        } else {
            ClassId c = b.fresh();
            s.apps_.push_back({a.sym, std::move(args), c});
            s.cls_[a.x] = c;
        }
        break;
    }
    case Op::AssumeEq: {
        ClassId cx = s.cls_[a.x], cy = s.cls_[a.y];
        if (cx != cy) b.replace(std::max(cx, cy), std::min(cx, cy));
        b.saturate();
        break;
    }
    case Op::AssumeNeq: {
        ClassId cx = s.cls_[a.x], cy = s.cls_[a.y];
        s.d_.push_back({std::min(cx, cy), std::max(cx, cy)});
        b.saturate();
        break;
    }
    case Op::AssumeRel:
        s.pos_.push_back({a.sym, classes_of(a.args)});
        b.saturate();
        break;
    case Op::AssumeNegRel:
        s.neg_.push_back({a.sym, classes_of(a.args)});
        b.saturate();
        break;
    }
    return b.finish();
}

// ---- coherence

class CohBuilder {
public:
    // Live classes are 0..L-1 and dead tokens L.. in a finished state.
    explicit CohBuilder(const CohState& q) : q_(q) {
        int live = 0;
        for (auto c : q_.cls_) live = std::max<int>(live, c + 1);
        next_ = live;
        for (const auto& e : q_.entries_) {
            for (auto c : e.args) next_ = std::max<int>(next_, c + 1);
            next_ = std::max<int>(next_, e.result + 1);
        }
        for (int t = live; t < next_; ++t) dead_.insert(static_cast<ClassId>(t));
    }

    ClassId fresh() {
        if (next_ > 255) throw std::length_error("coherence state has more than 256 classes");
        return static_cast<ClassId>(next_++);
    }
    bool dead(ClassId c) const { return dead_.count(c) > 0; }

    void replace(ClassId from, ClassId to) {
        for (auto& c : q_.cls_)
            if (c == from) c = to;
        for (auto& e : q_.entries_) {
            for (auto& c : e.args)
                if (c == from) c = to;
            if (e.result == from) e.result = to;
        }
    }

    // Local congruence closure; a collision touching a dead result is a
    // dropped term becoming equal to something new.
    bool close() {
        for (bool changed = true; changed;) {
            changed = false;
            std::sort(q_.entries_.begin(), q_.entries_.end());
            q_.entries_.erase(std::unique(q_.entries_.begin(), q_.entries_.end()), q_.entries_.end());
            for (std::size_t i = 0; i + 1 < q_.entries_.size(); ++i) {
                const auto& a = q_.entries_[i];
                const auto& b = q_.entries_[i + 1];
                if (a.sym != b.sym || a.args != b.args) continue;
                if (dead(a.result) || dead(b.result)) return false;
                replace(std::max(a.result, b.result), std::min(a.result, b.result));
                changed = true;
                break;
            }
        }
        return true;
    }

    CohState finish() {
        std::set<ClassId> held(q_.cls_.begin(), q_.cls_.end());
        auto live = [&](ClassId c) { return held.count(c) > 0; };
        prune_dead_args(q_.entries_, live);
        std::map<ClassId, ClassId> ren;
        for (auto c : q_.cls_) ren.try_emplace(c, static_cast<ClassId>(ren.size()));
        number_tokens(q_.entries_, live, ren);
        std::size_t nlive = held.size();
        for (auto& e : q_.entries_) {
            for (auto& c : e.args) c = ren.at(c);
            e.result = ren.at(e.result);
            e.dead = e.result >= nlive;
        }
        for (auto& c : q_.cls_) c = ren.at(c);
        std::sort(q_.entries_.begin(), q_.entries_.end());
        return std::move(q_);
    }

    CohState q_;

private:
    int next_ = 0;
    std::set<ClassId> dead_;
};

CohState CohState::initial(std::size_t nvars) {
    if (nvars > 255) throw std::length_error("at most 255 variables are supported");
    CohState q;
    for (std::size_t x = 0; x < nvars; ++x) q.cls_.push_back(static_cast<ClassId>(x));
    return q;
}

std::string CohState::key() const {
    std::string k(cls_.begin(), cls_.end());
    k.push_back('|');
    for (const auto& e : entries_) {
        put_sym(k, e.sym);
        put_tuple(k, e.args);
        k.push_back(static_cast<char>(e.dead));
        k.push_back(static_cast<char>(e.result));
    }
    return k;
}

std::string CohState::to_string(const Vocabulary& voc) const {
    std::string out = partition_text(cls_, voc);
    for (const auto& e : entries_)
        out += voc.sig.function(e.sym).name + class_list(e.args) + "=" + (e.dead ? "dead" : "c") +
               std::to_string(e.result) + " ";  // classes past the live ones are dropped
    if (!out.empty()) out.pop_back();
    return out;
}

CohStep coh_step(const CohState& q, const Letter& a, const AxiomSet&) {
    CohBuilder b(q);
    auto& s = b.q_;
    switch (a.op) {
    case Op::Assign:
        s.cls_[a.x] = s.cls_[a.y];
        break;
    case Op::AssignFn: {
        ClassArgs args;
        for (auto v : a.args) args.push_back(s.cls_[v]);
        auto it = std::find_if(s.entries_.begin(), s.entries_.end(),
                               [&](const CohEntry& e) { return e.sym == a.sym && e.args == args; });
        if (it != s.entries_.end() && b.dead(it->result)) return {q, Violation::Memoizing};
        if (it != s.entries_.end()) {
            s.cls_[a.x] = it->result;
        } else {
            ClassId c = b.fresh();
            s.entries_.push_back({a.sym, std::move(args), c, false});
            s.cls_[a.x] = c;
        }
        break;
    }
    case Op::AssumeEq: {
        ClassId cx = s.cls_[a.x], cy = s.cls_[a.y];
        if (cx != cy) b.replace(std::max(cx, cy), std::min(cx, cy));
        if (!b.close()) return {q, Violation::EarlyAssume};
        break;
    }
    default:
        return {q, std::nullopt};
    }
    return {b.finish(), std::nullopt};
}

}  // namespace axver
