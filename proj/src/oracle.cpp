#include "axver/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace axver {

// ---- Partition

Partition::Partition(std::vector<TermId> terms) : terms_(std::move(terms)) {
    std::sort(terms_.begin(), terms_.end());
    terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
    parent_.resize(terms_.size());
    std::iota(parent_.begin(), parent_.end(), 0);
}

std::size_t Partition::index(TermId t) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), t);
    if (it == terms_.end() || *it != t) throw std::out_of_range("term not in partition");
    return static_cast<std::size_t>(it - terms_.begin());
}

std::size_t Partition::root(std::size_t i) const {
    while (parent_[i] != i) {
        parent_[i] = parent_[parent_[i]];
        i = parent_[i];
    }
    return i;
}

bool Partition::contains(TermId t) const { return std::binary_search(terms_.begin(), terms_.end(), t); }

bool Partition::unite(TermId a, TermId b) {
    std::size_t ra = root(index(a)), rb = root(index(b));
    if (ra == rb) return false;
    if (ra > rb) std::swap(ra, rb);
    parent_[rb] = static_cast<std::uint32_t>(ra);  // the smallest term represents its class
    dense_.clear();
    return true;
}

void Partition::number() const {
    dense_.assign(terms_.size(), 0);
    nclasses_ = 0;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (root(i) == i) dense_[i] = static_cast<std::uint32_t>(nclasses_++);
}

std::size_t Partition::class_of(TermId t) const {
    if (dense_.size() != terms_.size()) number();
    return dense_[root(index(t))];
}

std::size_t Partition::num_classes() const {
    if (dense_.size() != terms_.size()) number();
    return nclasses_;
}

Partition closure(const TermStore& ts, const std::vector<TermId>& terms,
                  const std::vector<std::pair<TermId, TermId>>& eqs, const AxiomSet& ax) {
    Partition p(terms);
    for (const auto& [a, b] : eqs) p.unite(a, b);
    std::vector<TermId> apps;
    for (auto t : p.terms())
        if (!ts.node(t).init) apps.push_back(t);
    auto congruent = [&](const TermNode& a, const TermNode& b) {
        if (a.sym != b.sym || a.args.size() != b.args.size()) return false;
        bool direct = true;
        for (std::size_t k = 0; k < a.args.size() && direct; ++k) direct = p.same(a.args[k], b.args[k]);
        if (direct) return true;
        return a.args.size() == 2 && ax.has(a.sym, FnProp::Commutative) && p.same(a.args[0], b.args[1]) &&
               p.same(a.args[1], b.args[0]);
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < apps.size(); ++i)
            for (std::size_t j = i + 1; j < apps.size(); ++j)
                if (!p.same(apps[i], apps[j]) && congruent(ts.node(apps[i]), ts.node(apps[j])))
                    changed |= p.unite(apps[i], apps[j]);
        // Idempotence: f(u) = u whenever u's class holds some f-application.
        for (auto t : apps) {
            const TermNode& n = ts.node(t);
            if (n.args.size() != 1 || !ax.has(n.sym, FnProp::Idempotent) || p.same(t, n.args[0])) continue;
            for (auto s : apps)
                if (ts.node(s).sym == n.sym && p.same(s, n.args[0])) {
                    changed |= p.unite(t, n.args[0]);
                    break;
                }
        }
    }
    return p;
}

Partition closure(const TermStore& ts, const std::set<TermId>& terms,
                  const std::vector<std::pair<TermId, TermId>>& eqs, const AxiomSet& ax) {
    return closure(ts, std::vector<TermId>(terms.begin(), terms.end()), eqs, ax);
}

// ---- minimal model

namespace {

std::string tuple_text(const ClassTuple& t) {
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + std::string("c") + std::to_string(t[i]);
    return out + ")";
}

// Positive and negative facts of the minimal model, closed under the axioms.
// Binary relations use adjacency matrices; other arities carry no axioms.
struct Relations {
    struct Binary {
        std::vector<char> pos, neg;
    };
    std::size_t n = 0;
    std::map<SymId, Binary> bin;
    std::map<SymId, std::pair<std::set<ClassTuple>, std::set<ClassTuple>>> other;
    bool consistent = true;
    std::string conflict;

    void fail(std::string why) {
        if (consistent) conflict = std::move(why);
        consistent = false;
    }
};

void close_binary(Relations::Binary& b, std::size_t n, bool refl, bool symm, bool trans) {
    auto P = [&](std::size_t i, std::size_t j) -> char& { return b.pos[i * n + j]; };
    auto N = [&](std::size_t i, std::size_t j) -> char& { return b.neg[i * n + j]; };
    if (refl)
        for (std::size_t c = 0; c < n; ++c) P(c, c) = 1;
    for (bool changed = true; changed;) {
        changed = false;
        auto set = [&](char& c) {
            if (!c) c = 1, changed = true;
        };
        if (symm)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (P(i, j)) set(P(j, i));
                    if (N(i, j)) set(N(j, i));
                }
        if (trans) {
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i)
                    if (P(i, k))
                        for (std::size_t j = 0; j < n; ++j)
                            if (P(k, j)) set(P(i, j));
            // R(x,y) & !R(x,z) => !R(y,z);  R(y,z) & !R(x,z) => !R(x,y)
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y) {
                    if (!P(x, y)) continue;
                    for (std::size_t z = 0; z < n; ++z) {
                        if (N(x, z)) set(N(y, z));
                        if (N(z, y)) set(N(z, x));
                    }
                }
        }
    }
}

Relations relations(const Partition& p, const std::vector<GroundAtom>& atoms, const AxiomSet& ax,
                    const TermStore& ts, const Vocabulary* voc) {
    using K = GroundAtom::Kind;
    Relations out;
    out.n = p.num_classes();
    std::size_t n = out.n;
    auto rel_name = [&](SymId r) { return voc ? voc->sig.relation(r).name : "R" + std::to_string(r); };
    // Classes are shown by their smallest term when names are available.
    auto tuple_text = [&](const ClassTuple& t) {
        if (!voc) return axver::tuple_text(t);
        std::string out = "(";
        for (std::size_t i = 0; i < t.size(); ++i) {
            auto it = std::find_if(p.terms().begin(), p.terms().end(),
                                   [&](TermId u) { return p.class_of(u) == t[i]; });
            out += (i ? "," : "") + ts.to_string(*it, *voc);
        }
        return out + ")";
    };
    for (const auto& a : atoms) {
        if (a.kind == K::Eq) continue;
        if (a.kind == K::Neq) {
            if (p.same(a.terms[0], a.terms[1]))
                out.fail("disequality between equal terms" + (voc ? ": " + to_string(a, ts, *voc) : std::string()));
            continue;
        }
        bool positive = a.kind == K::Rel;
        if (a.terms.size() == 2) {
            auto& b = out.bin[a.sym];
            if (b.pos.empty()) b.pos.assign(n * n, 0), b.neg.assign(n * n, 0);
            (positive ? b.pos : b.neg)[p.class_of(a.terms[0]) * n + p.class_of(a.terms[1])] = 1;
        } else {
            ClassTuple t;
            for (auto x : a.terms) t.push_back(p.class_of(x));
            auto& o = out.other[a.sym];
            (positive ? o.first : o.second).insert(std::move(t));
        }
    }
    for (const auto& [r, props] : ax.rel) {
        if (props.empty()) continue;
        auto& b = out.bin[r];
        if (b.pos.empty()) b.pos.assign(n * n, 0), b.neg.assign(n * n, 0);
    }
    for (auto& [r, b] : out.bin) {
        // Strict total orders are closed as strict partial orders.
        close_binary(b, n, ax.has(r, RelProp::Reflexive), ax.has(r, RelProp::Symmetric), ax.transitive(r));
        bool irref = ax.has(r, RelProp::Irreflexive) || ax.sto(r);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (b.pos[i * n + j] && b.neg[i * n + j])
                    out.fail(rel_name(r) + tuple_text({i, j}) + " both holds and fails");
                if (irref && i == j && b.pos[i * n + j])
                    out.fail(rel_name(r) + tuple_text({i, j}) + " violates irreflexivity");
            }
    }
    for (const auto& [r, o] : out.other)
        for (const auto& t : o.first)
            if (o.second.count(t)) out.fail(rel_name(r) + tuple_text(t) + " both holds and fails");
    return out;
}

std::vector<std::pair<TermId, TermId>> equalities_of(const std::vector<GroundAtom>& atoms) {
    std::vector<std::pair<TermId, TermId>> eqs;
    for (const auto& a : atoms)
        if (a.kind == GroundAtom::Kind::Eq) eqs.push_back({a.terms[0], a.terms[1]});
    return eqs;
}

}  // namespace

MinimalModel minimal_model(const TermStore& ts, const std::vector<TermId>& terms,
                           const std::vector<GroundAtom>& atoms, const AxiomSet& ax, const Vocabulary* voc) {
    MinimalModel m;
    m.part = closure(ts, terms, equalities_of(atoms), ax);
    const Partition& p = m.part;
    for (auto t : p.terms()) {
        const TermNode& n = ts.node(t);
        if (n.init) continue;
        ClassTuple args;
        for (auto a : n.args) args.push_back(p.class_of(a));
        m.fn_table[n.sym][args] = p.class_of(t);
    }
    Relations rel = relations(p, atoms, ax, ts, voc);
    m.consistent = rel.consistent;
    m.conflict = rel.conflict;
    std::size_t n = rel.n;
    for (const auto& [r, b] : rel.bin)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (b.pos[i * n + j]) m.rel_pos[r].insert({i, j});
                if (b.neg[i * n + j]) m.rel_neg[r].insert({i, j});
            }
    for (const auto& [r, o] : rel.other) {
        if (!o.first.empty()) m.rel_pos[r].insert(o.first.begin(), o.first.end());
        if (!o.second.empty()) m.rel_neg[r].insert(o.second.begin(), o.second.end());
    }
    return m;
}

MinimalModel minimal_model(TermStore& ts, const Execution& rho, std::size_t nvars, const AxiomSet& ax,
                           const Vocabulary* voc) {
    auto tr = trace(ts, rho, nvars);
    return minimal_model(ts, std::vector<TermId>(tr.terms.begin(), tr.terms.end()), tr.kappa, ax, voc);
}

bool is_feasible(TermStore& ts, const Execution& rho, std::size_t nvars, const AxiomSet& ax) {
    return minimal_model(ts, rho, nvars, ax).consistent;
}

bool is_feasible(const Execution& rho, std::size_t nvars, const AxiomSet& ax) {
    TermStore ts;
    return is_feasible(ts, rho, nvars, ax);
}

bool entails_eq(TermStore& ts, const Execution& rho, std::size_t nvars, const AxiomSet& ax, TermId t1,
                TermId t2) {
    auto tr = trace(ts, rho, nvars);
    return closure(ts, tr.terms, equalities_of(tr.kappa), ax).same(t1, t2);
}

// ---- coherence

std::string to_string(Violation v) { return v == Violation::Memoizing ? "memoizing" : "early-assume"; }

OracleRun::OracleRun(std::size_t nvars, const AxiomSet& ax) : ax_(ax), vals_(nvars) {
    for (std::size_t x = 0; x < nvars; ++x) vals_[x] = ts_.init(static_cast<VarId>(x));
    terms_ = vals_;
}

OracleRun::Mark OracleRun::mark() const {
    return {ts_.size(), terms_.size(), atoms_.size(), length_, vals_, feasible_, coherent_};
}

void OracleRun::undo(const Mark& m) {
    ts_.truncate(m.nodes);
    terms_.resize(m.terms);
    atoms_.resize(m.atoms);
    length_ = m.length;
    vals_ = m.vals;
    feasible_ = m.feasible;
    coherent_ = m.coherent;
}

std::vector<std::pair<TermId, TermId>> OracleRun::equalities() const { return equalities_of(atoms_); }

std::optional<Violation> OracleRun::push(const Letter& a) {
    ++length_;
    std::optional<Violation> v;
    if (a.op == Op::AssignFn) {
        std::vector<TermId> args;
        for (auto z : a.args) args.push_back(vals_[z]);
        TermId t = ts_.app(a.sym, std::move(args));
        bool is_new = !std::binary_search(terms_.begin(), terms_.end(), t);
        if (coherent_) {
            // Memoizing: a term computed before and equal to t must still be held.
            auto with = terms_;
            if (is_new) with.push_back(t);
            auto p = closure(ts_, with, equalities(), ax_);
            bool seen = !is_new;
            for (auto s : terms_) seen = seen || p.same(s, t);
            if (seen) {
                bool held = false;
                for (auto y : vals_) held = held || p.same(y, t);
                if (!held) {
                    v = Violation::Memoizing;
                    witness_ = {t};
                }
            }
        }
        vals_[a.x] = t;
        if (is_new) terms_.push_back(t);
    } else if (a.op == Op::Assign) {
        vals_[a.x] = vals_[a.y];
    } else {
        GroundAtom g = atom_of(a, vals_);
        std::optional<Partition> after;
        if (coherent_ && g.kind == GroundAtom::Kind::Eq) {
            // Early assumes: a dropped class may not become equal to anything new.
            auto eqs = equalities();
            auto p0 = closure(ts_, terms_, eqs, ax_);
            eqs.push_back({g.terms[0], g.terms[1]});
            const Partition& p1 = after.emplace(closure(ts_, terms_, eqs, ax_));
            for (auto s : terms_) {
                if (v) break;
                bool dropped = true;
                for (auto y : vals_) dropped = dropped && !p0.same(s, y);
                if (!dropped) continue;
                for (auto u : terms_)
                    if (p1.same(s, u) && !p0.same(s, u)) {
                        v = Violation::EarlyAssume;
                        witness_ = {s, u};
                        break;
                    }
            }
        }
        atoms_.push_back(std::move(g));
        // Assignments add only fresh terms and so never affect feasibility.
        if (feasible_) {
            if (!after) after.emplace(closure(ts_, terms_, equalities(), ax_));
            feasible_ = relations(*after, atoms_, ax_, ts_, nullptr).consistent;
        }
    }
    if (v) coherent_ = false;
    return v;
}

std::string OracleRun::quotient_key() const {
    auto p = closure(ts_, terms_, equalities(), ax_);
    // Classes held by variables are numbered by first holder, the rest by
    // smallest member.
    std::vector<int> num(p.num_classes(), -1);
    int next = 0;
    auto name = [&](TermId t) {
        int& n = num[p.class_of(t)];
        if (n < 0) n = next++;
        return static_cast<char>(n);
    };
    std::string key;
    for (auto y : vals_) key.push_back(name(y));
    for (auto t : terms_) name(t);
    key.push_back(static_cast<char>(feasible_));
    key.push_back(static_cast<char>(coherent_));
    // Equalities live in the partition. Once infeasible, the other atoms
    // cannot change any verdict (coherence only looks at equalities).
    std::vector<std::string> facts;
    for (auto t : terms_) {
        const TermNode& n = ts_.node(t);
        if (n.init) continue;
        std::string f{'F', static_cast<char>(n.sym)};
        for (auto a : n.args) f.push_back(name(a));
        f.push_back(name(t));
        facts.push_back(std::move(f));
    }
    if (feasible_) {
        for (const auto& a : atoms_)
            if (a.kind == GroundAtom::Kind::Neq) {
                char u = name(a.terms[0]), w = name(a.terms[1]);
                facts.push_back({'D', std::min(u, w), std::max(u, w)});
            }
        Relations rel = relations(p, atoms_, ax_, ts_, nullptr);
        std::size_t n = rel.n;
        std::vector<char> cname(n);
        for (auto t : terms_) cname[p.class_of(t)] = name(t);
        for (const auto& [r, b] : rel.bin)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (b.pos[i * n + j]) facts.push_back({'P', static_cast<char>(r), cname[i], cname[j]});
                    if (b.neg[i * n + j]) facts.push_back({'N', static_cast<char>(r), cname[i], cname[j]});
                }
        for (const auto& [r, o] : rel.other)
            for (const auto* s : {&o.first, &o.second})
                for (const auto& tup : *s) {
                    std::string f{s == &o.first ? 'P' : 'N', static_cast<char>(r)};
                    for (auto c : tup) f.push_back(cname[c]);
                    facts.push_back(std::move(f));
                }
    }
    std::sort(facts.begin(), facts.end());
    facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
    for (const auto& f : facts) {
        key.push_back(static_cast<char>(f.size()));
        key += f;
    }
    return key;
}

CoherenceVerdict is_coherent(TermStore& ts, const Execution& rho, std::size_t nvars, const AxiomSet& ax) {
    OracleRun run(nvars, ax);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (auto v = run.push(rho[i])) {
            CoherenceVerdict out{false, i, *v, {}};
            for (auto t : run.witness()) out.witness.push_back(copy_term(run.store(), t, ts));
            return out;
        }
    }
    return {};
}

CoherenceVerdict is_coherent(const Execution& rho, std::size_t nvars, const AxiomSet& ax) {
    TermStore ts;
    return is_coherent(ts, rho, nvars, ax);
}

}  // namespace axver
