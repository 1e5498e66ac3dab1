#include "axver/letter.hpp"

#include <cctype>

namespace axver {

namespace {

void append_args(std::string& out, const std::vector<VarId>& args, const Vocabulary& voc) {
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ',';
        out += voc.vars.name(args[i]);
    }
    out += ')';
}

// Minimal cursor over one line of letter syntax.
struct Cursor {
    std::string_view s;
    std::size_t i = 0;

    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(std::string_view tok) {
        ws();
        if (s.substr(i, tok.size()) == tok) {
            i += tok.size();
            return true;
        }
        return false;
    }
    void expect(std::string_view tok) {
        if (!eat(tok))
            throw LetterSyntaxError("expected '" + std::string(tok) + "' at column " +
                                    std::to_string(i + 1) + " in '" + std::string(s) + "'");
    }
    std::string ident() {
        ws();
        std::size_t b = i;
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' ||
                                s[i] == '\'' || s[i] == '*'))
            ++i;
        if (b == i)
            throw LetterSyntaxError("expected identifier at column " + std::to_string(b + 1) +
                                    " in '" + std::string(s) + "'");
        return std::string(s.substr(b, i - b));
    }
    bool at_end() {
        ws();
        return i == s.size();
    }
};

VarId var_ref(const std::string& name, Vocabulary& voc, bool extend) {
    if (auto v = voc.vars.find(name)) return *v;
    if (!extend) throw LetterSyntaxError("unknown variable '" + name + "'");
    return voc.vars.add(name);
}

std::vector<VarId> arg_list(Cursor& c, Vocabulary& voc, bool extend) {
    std::vector<VarId> args;
    c.expect("(");
    do {
        args.push_back(var_ref(c.ident(), voc, extend));
    } while (c.eat(","));
    c.expect(")");
    return args;
}

SymId fn_ref(const std::string& name, int arity, Vocabulary& voc, bool extend) {
    if (auto f = voc.sig.find_function(name)) {
        if (voc.sig.function(*f).arity != arity)
            throw ArityError("function '" + name + "' applied to " + std::to_string(arity) +
                             " arguments");
        return *f;
    }
    if (!extend) throw LetterSyntaxError("unknown function '" + name + "'");
    return voc.sig.add_function(name, arity);
}

SymId rel_ref(const std::string& name, int arity, Vocabulary& voc, bool extend) {
    if (auto r = voc.sig.find_relation(name)) {
        if (voc.sig.relation(*r).arity != arity)
            throw ArityError("relation '" + name + "' applied to " + std::to_string(arity) +
                             " arguments");
        return *r;
    }
    if (!extend) throw LetterSyntaxError("unknown relation '" + name + "'");
    return voc.sig.add_relation(name, arity);
}

}  // namespace

std::string to_string(const Letter& a, const Vocabulary& voc) {
    std::string out;
    switch (a.op) {
    case Op::Assign:
        out = voc.vars.name(a.x) + ":=" + voc.vars.name(a.y);
        break;
    case Op::AssignFn:
        out = voc.vars.name(a.x) + ":=" + voc.sig.function(a.sym).name;
        append_args(out, a.args, voc);
        break;
    case Op::AssumeEq:
        out = "assume(" + voc.vars.name(a.x) + "=" + voc.vars.name(a.y) + ")";
        break;
    case Op::AssumeNeq:
        out = "assume(" + voc.vars.name(a.x) + "!=" + voc.vars.name(a.y) + ")";
        break;
    case Op::AssumeRel:
    case Op::AssumeNegRel:
        out = a.op == Op::AssumeRel ? "assume(" : "assume(!";
        out += voc.sig.relation(a.sym).name;
        append_args(out, a.args, voc);
        out += ')';
        break;
    }
    return out;
}

std::string to_string(const Execution& rho, const Vocabulary& voc, std::string_view sep) {
    if (rho.empty()) return "eps";
    std::string out;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (i) out += sep;
        out += to_string(rho[i], voc);
    }
    return out;
}

Letter parse_letter(std::string_view text, Vocabulary& voc, bool extend) {
    Cursor c{text};
    Letter a;
    if (c.eat("assume")) {
        c.expect("(");
        bool neg = c.eat("!") || c.eat("\xC2\xAC");  // also accept the negation sign
        std::string head = c.ident();
        c.ws();
        if (c.i < c.s.size() && c.s[c.i] == '(') {
            auto args = arg_list(c, voc, extend);
            SymId r = rel_ref(head, static_cast<int>(args.size()), voc, extend);
            a = neg ? Letter::nrel(r, std::move(args)) : Letter::rel(r, std::move(args));
        } else {
            if (neg) throw LetterSyntaxError("negation applies to relations only: '" +
                                             std::string(text) + "'");
            VarId x = var_ref(head, voc, extend);
            bool is_neq = false;
            if (c.eat("!=") || c.eat("\xE2\x89\xA0"))
                is_neq = true;
            else if (!c.eat("=="))
                c.expect("=");
            VarId y = var_ref(c.ident(), voc, extend);
            a = is_neq ? Letter::neq(x, y) : Letter::eq(x, y);
        }
        c.expect(")");
    } else {
        VarId x = var_ref(c.ident(), voc, extend);
        c.expect(":=");
        std::string rhs = c.ident();
        c.ws();
        if (c.i < c.s.size() && c.s[c.i] == '(') {
            auto args = arg_list(c, voc, extend);
            SymId f = fn_ref(rhs, static_cast<int>(args.size()), voc, extend);
            a = Letter::assign_fn(x, f, std::move(args));
        } else {
            a = Letter::assign(x, var_ref(rhs, voc, extend));
        }
    }
    c.eat(";");
    if (!c.at_end())
        throw LetterSyntaxError("trailing input after letter: '" + std::string(text) + "'");
    return a;
}

void check_letter(const Letter& a, const Vocabulary& voc) {
    auto nv = voc.vars.size();
    auto ok = [&](VarId v) {
        if (v >= nv) throw std::out_of_range("letter mentions variable id " + std::to_string(v));
    };
    switch (a.op) {
    case Op::Assign:
    case Op::AssumeEq:
    case Op::AssumeNeq:
        ok(a.x);
        ok(a.y);
        break;
    case Op::AssignFn:
        ok(a.x);
        for (auto v : a.args) ok(v);
        if (static_cast<int>(a.args.size()) != voc.sig.function(a.sym).arity)
            throw ArityError("arity mismatch for " + voc.sig.function(a.sym).name);
        break;
    case Op::AssumeRel:
    case Op::AssumeNegRel:
        for (auto v : a.args) ok(v);
        if (static_cast<int>(a.args.size()) != voc.sig.relation(a.sym).arity)
            throw ArityError("arity mismatch for " + voc.sig.relation(a.sym).name);
        break;
    }
}

}  // namespace axver
