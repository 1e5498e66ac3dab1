#include <functional>
#include <map>

#include "axver/syntax.hpp"

namespace axver {

Cond negate(const Cond& c) {
    using K = Cond::Kind;
    Cond out = c;
    switch (c.kind) {
    case K::Eq: out.kind = K::Neq; break;
    case K::Neq: out.kind = K::Eq; break;
    case K::Rel: out.kind = K::NegRel; break;
    case K::NegRel: out.kind = K::Rel; break;
    case K::Not: return c.sub[0];
    case K::Or:
    case K::And:
        out.kind = c.kind == K::Or ? K::And : K::Or;
        for (auto& s : out.sub) s = negate(s);
        break;
    }
    return out;
}

namespace {

Cond nnf(const Cond& c) {
    using K = Cond::Kind;
    if (c.is_atomic()) return c;
    if (c.kind == K::Not) {
        const Cond& in = c.sub[0];
        if (in.kind == K::Not) return nnf(in.sub[0]);
        return nnf(negate(in));
    }
    Cond out = c;
    for (auto& s : out.sub) s = nnf(s);
    return out;
}

std::vector<std::vector<Cond>> dnf_nnf(const Cond& c) {
    using K = Cond::Kind;
    if (c.is_atomic()) return {{c}};
    std::vector<std::vector<Cond>> acc;
    if (c.kind == K::Or) {
        for (const auto& s : c.sub)
            for (auto& conj : dnf_nnf(s)) acc.push_back(std::move(conj));
        return acc;
    }
    acc.push_back({});
    for (const auto& s : c.sub) {
        auto part = dnf_nnf(s);
        std::vector<std::vector<Cond>> next;
        for (const auto& a : acc)
            for (const auto& b : part) {
                auto m = a;
                m.insert(m.end(), b.begin(), b.end());
                next.push_back(std::move(m));
            }
        acc = std::move(next);
    }
    return acc;
}

Stmt make(Stmt::Kind k, std::vector<Stmt> body = {}) {
    Stmt s;
    s.kind = k;
    s.body = std::move(body);
    return s;
}

// Flattens nested sequences; a one-element sequence is its element.
Stmt seq(std::vector<Stmt> items) {
    std::vector<Stmt> flat;
    for (auto& it : items) {
        if (it.kind == Stmt::Kind::Seq)
            for (auto& s : it.body) flat.push_back(std::move(s));
        else
            flat.push_back(std::move(it));
    }
    if (flat.empty()) return make(Stmt::Kind::Skip);
    if (flat.size() == 1) return std::move(flat[0]);
    return make(Stmt::Kind::Seq, std::move(flat));
}

Stmt assume_atom(Cond c) {
    Stmt s = make(Stmt::Kind::Assume);
    s.pos = c.pos;
    s.cond = std::move(c);
    return s;
}

// assume(c) for a non-atomic c: one branch per DNF conjunct.
Stmt assume_branches(const Cond& c) {
    auto d = dnf(c);
    std::vector<Stmt> branches;
    for (auto& conj : d) {
        std::vector<Stmt> items;
        for (auto& a : conj) items.push_back(assume_atom(a));
        branches.push_back(seq(std::move(items)));
    }
    if (branches.size() == 1) return std::move(branches[0]);
    return make(Stmt::Kind::Choice, std::move(branches));
}

class Desugarer {
public:
    explicit Desugarer(const Program& p) : out_{p.vars, {}, {}} {
        for (const auto& c : p.consts) out_.vars.add(c, true);
        for (const auto& v : out_.vars.all()) {
            const std::string& n = v.name;
            if (n.rfind(kTempPrefix, 0) == 0) {
                try {
                    next_temp_ = std::max(next_temp_, std::stoi(n.substr(3)) + 1);
                } catch (...) {
                }
            }
        }
    }

    Program run(const Stmt& body) {
        out_.body = stmt(body);
        return std::move(out_);
    }

private:
    std::string fresh() {
        std::string n = kTempPrefix + std::to_string(next_temp_++);
        out_.vars.add(n);
        return n;
    }

    Stmt assign(const std::string& lhs, Expr rhs, SourcePos pos) {
        Stmt s = make(Stmt::Kind::Assign);
        s.lhs = lhs;
        s.rhs = std::move(rhs);
        s.pos = pos;
        return s;
    }

    // Reduces e to a variable, emitting temporaries for compound subterms.
    Expr flatten(const Expr& e, std::vector<Stmt>& pre, std::map<std::string, std::string>* memo) {
        if (e.is_var()) return e;
        Expr app = shallow(e, pre, memo);
        std::string key = to_string(app);
        if (memo) {
            if (auto it = memo->find(key); it != memo->end()) return Expr{it->second, {}, e.pos};
        }
        std::string t = fresh();
        pre.push_back(assign(t, app, e.pos));
        if (memo) memo->emplace(key, t);
        return Expr{t, {}, e.pos};
    }

    // Same head, every argument reduced to a variable.
    Expr shallow(const Expr& e, std::vector<Stmt>& pre, std::map<std::string, std::string>* memo) {
        Expr app{e.name, {}, e.pos};
        for (const auto& a : e.args) app.args.push_back(flatten(a, pre, memo));
        return app;
    }

    Cond flatten_cond(const Cond& c, std::vector<Stmt>& pre, std::map<std::string, std::string>& memo) {
        Cond out = c;
        for (auto& t : out.terms) t = flatten(t, pre, &memo);
        for (auto& s : out.sub) s = flatten_cond(s, pre, memo);
        return out;
    }

    Stmt stmt(const Stmt& s) {
        using K = Stmt::Kind;
        switch (s.kind) {
        case K::Skip:
            return s;
        case K::Assign: {
            std::vector<Stmt> pre;
            Expr rhs = s.rhs.is_var() ? s.rhs : shallow(s.rhs, pre, nullptr);
            pre.push_back(assign(s.lhs, std::move(rhs), s.pos));
            return seq(std::move(pre));
        }
        case K::Seq: {
            std::vector<Stmt> items;
            for (const auto& b : s.body) items.push_back(stmt(b));
            return seq(std::move(items));
        }
        case K::Choice: {
            Stmt out = make(K::Choice);
            for (const auto& b : s.body) out.body.push_back(stmt(b));
            return out;
        }
        case K::Loop:
            return make(K::Loop, {stmt(s.body[0])});
        case K::Assume: {
            std::vector<Stmt> pre;
            std::map<std::string, std::string> memo;
            Cond c = nnf(flatten_cond(s.cond, pre, memo));
            pre.push_back(c.is_atomic() ? assume_atom(std::move(c)) : assume_branches(c));
            return seq(std::move(pre));
        }
        case K::If: {
            std::vector<Stmt> pre;
            std::map<std::string, std::string> memo;
            Cond c = nnf(flatten_cond(s.cond, pre, memo));
            Stmt then_s = stmt(s.body[0]);
            Stmt else_s = s.body.size() > 1 ? stmt(s.body[1]) : make(K::Skip);
            if (c.is_atomic()) {
                Stmt out = make(K::If, {std::move(then_s), std::move(else_s)});
                out.cond = std::move(c);
                out.pos = s.pos;
                pre.push_back(std::move(out));
            } else {
                Stmt ch = make(K::Choice);
                ch.body.push_back(seq({assume_branches(c), std::move(then_s)}));
                ch.body.push_back(seq({assume_branches(negate(c)), std::move(else_s)}));
                pre.push_back(std::move(ch));
            }
            return seq(std::move(pre));
        }
        case K::While: {
            std::vector<Stmt> pre;
            std::map<std::string, std::string> memo;
            Cond c = nnf(flatten_cond(s.cond, pre, memo));
            Stmt body = stmt(s.body[0]);
            // The guard's temporaries are recomputed at the end of every iteration.
            std::vector<Stmt> items{std::move(body)};
            for (const auto& p : pre) items.push_back(p);
            Stmt loop_body = seq(std::move(items));
            if (c.is_atomic()) {
                Stmt w = make(K::While, {std::move(loop_body)});
                w.cond = std::move(c);
                w.pos = s.pos;
                pre.push_back(std::move(w));
            } else {
                pre.push_back(make(K::Loop, {seq({assume_branches(c), std::move(loop_body)})}));
                pre.push_back(assume_branches(negate(c)));
            }
            return seq(std::move(pre));
        }
        }
        return s;
    }

    Program out_;
    int next_temp_ = 0;
};

}  // namespace

std::vector<std::vector<Cond>> dnf(const Cond& c) { return dnf_nnf(nnf(c)); }

Program desugar(const Program& p) { return Desugarer(p).run(p.body); }

bool is_core(const Program& p) {
    if (!p.consts.empty()) return false;
    std::function<bool(const Stmt&)> ok = [&](const Stmt& s) {
        using K = Stmt::Kind;
        if (s.kind == K::Assign)
            for (const auto& a : s.rhs.args)
                if (!a.is_var()) return false;
        if (s.kind == K::Assume || s.kind == K::If || s.kind == K::While) {
            if (!s.cond.is_atomic()) return false;
            for (const auto& t : s.cond.terms)
                if (!t.is_var()) return false;
        }
        for (const auto& b : s.body)
            if (!ok(b)) return false;
        return true;
    };
    return ok(p.body);
}

// ---- printing

std::string to_string(const Expr& e) {
    if (e.is_var()) return e.name;
    std::string out = e.name + "(";
    for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += to_string(e.args[i]);
    }
    return out + ")";
}

std::string to_string(const Cond& c) {
    using K = Cond::Kind;
    auto args = [&] {
        std::string out = c.rel + "(";
        for (std::size_t i = 0; i < c.terms.size(); ++i) {
            if (i) out += ", ";
            out += to_string(c.terms[i]);
        }
        return out + ")";
    };
    auto join = [&](const char* op) {
        std::string out = "(";
        for (std::size_t i = 0; i < c.sub.size(); ++i) {
            if (i) out += op;
            out += to_string(c.sub[i]);
        }
        return out + ")";
    };
    switch (c.kind) {
    case K::Eq: return to_string(c.terms[0]) + " == " + to_string(c.terms[1]);
    case K::Neq: return to_string(c.terms[0]) + " != " + to_string(c.terms[1]);
    case K::Rel: return args();
    case K::NegRel: return "!" + args();
    case K::Not: return "!(" + to_string(c.sub[0]) + ")";
    case K::Or: return join(" || ");
    case K::And: return join(" && ");
    }
    return {};
}

std::string to_string(const Stmt& s, int indent) {
    using K = Stmt::Kind;
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    switch (s.kind) {
    case K::Skip: return pad + "skip;\n";
    case K::Assign: return pad + s.lhs + " := " + to_string(s.rhs) + ";\n";
    case K::Assume: return pad + "assume (" + to_string(s.cond) + ");\n";
    case K::Seq: {
        std::string out;
        for (const auto& b : s.body) out += to_string(b, indent);
        return out;
    }
    case K::If:
        return pad + "if (" + to_string(s.cond) + ") then {\n" + to_string(s.body[0], indent + 1) +
               pad + "} else {\n" + to_string(s.body[1], indent + 1) + pad + "}\n";
    case K::While:
        return pad + "while (" + to_string(s.cond) + ") {\n" + to_string(s.body[0], indent + 1) + pad + "}\n";
    case K::Choice: {
        std::string out = pad + "choose {\n";
        for (std::size_t i = 0; i < s.body.size(); ++i) {
            if (i) out += pad + "} or {\n";
            out += to_string(s.body[i], indent + 1);
        }
        return out + pad + "}\n";
    }
    case K::Loop: return pad + "loop {\n" + to_string(s.body[0], indent + 1) + pad + "}\n";
    }
    return {};
}

}  // namespace axver
