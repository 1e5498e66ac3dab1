#include <cctype>
#include <functional>
#include <set>

#include "axver/syntax.hpp"

namespace axver {

namespace {

struct Token {
    enum class Kind { Ident, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    SourcePos pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : s_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            SourcePos p{line_, col_};
            if (i_ >= s_.size()) {
                out.push_back({Token::Kind::End, "", p});
                return out;
            }
            char c = s_[i_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t b = i_;
                while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) ||
                                          s_[i_] == '_' || s_[i_] == '\''))
                    advance();
                out.push_back({Token::Kind::Ident, std::string(s_.substr(b, i_ - b)), p});
                continue;
            }
            static const char* multi[] = {"==>", ":=", "==", "!=", "<=", ">=", "||", "&&", "->"};
            bool matched = false;
            for (const char* m : multi) {
                std::string_view mv(m);
                if (s_.substr(i_, mv.size()) == mv) {
                    for (std::size_t k = 0; k < mv.size(); ++k) advance();
                    out.push_back({Token::Kind::Punct, std::string(mv), p});
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            if (std::string_view("{}(),;:=<>!.").find(c) != std::string_view::npos) {
                advance();
                out.push_back({Token::Kind::Punct, std::string(1, c), p});
                continue;
            }
            throw ParseError(std::string("unexpected character '") + c + "'", p);
        }
    }

private:
    void advance() {
        if (s_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }
    void skip_space() {
        for (;;) {
            while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) advance();
            if (s_.substr(i_, 2) == "(*") {
                SourcePos p{line_, col_};
                advance();
                advance();
                while (i_ < s_.size() && s_.substr(i_, 2) != "*)") advance();
                if (i_ >= s_.size()) throw ParseError("unterminated comment", p);
                advance();
                advance();
                continue;
            }
            if (s_.substr(i_, 2) == "//") {
                while (i_ < s_.size() && s_[i_] != '\n') advance();
                continue;
            }
            return;
        }
    }

    std::string_view s_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

const std::set<std::string, std::less<>> kKeywords = {
    "axioms", "relation", "function", "axiom", "vars", "consts", "const", "program", "post",
    "skip", "assume", "if", "then", "else", "while"};

struct RawDecl {
    bool relation;
    std::string name;
    std::vector<std::string> props;
    SourcePos pos;
};

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

    ParsedFile file() {
        ParsedFile out;
        bool seen_program = false;
        while (!at_end()) {
            const Token& t = peek();
            if (is("axioms")) {
                axioms_block();
            } else if (is("vars")) {
                next();
                for (auto& n : ident_list()) declare_var(out.program.vars, n, false);
            } else if (is("consts") || is("const")) {
                next();
                for (auto& n : ident_list()) {
                    check_fresh_name(out.program.vars, n);
                    out.program.consts.push_back(n.text);
                    const_names_.insert(n.text);
                }
            } else if (is("program")) {
                if (seen_program) throw ParseError("duplicate program section", t.pos);
                seen_program = true;
                next();
                out.program.body = block();
                eat(";");
            } else if (is("post")) {
                next();
                expect(":");
                out.post = cond();
                expect(";");
            } else {
                throw ParseError("expected a section (axioms, vars, consts, program, post), got '" +
                                     t.text + "'",
                                 t.pos);
            }
        }
        if (!seen_program) throw ParseError("missing program section", peek().pos);
        out.sig = std::move(sig_);
        resolve_axioms(out.sig, out.axioms);
        check_names(out);
        return out;
    }

    // Header of trace files: optional axioms block and vars line.
    std::size_t header(Signature& sig, AxiomSet& ax, VarTable& vars) {
        while (!at_end() && (is("axioms") || is("vars"))) {
            if (is("axioms")) {
                axioms_block();
            } else {
                next();
                for (auto& n : ident_list()) declare_var(vars, n, false);
            }
        }
        sig = std::move(sig_);
        resolve_axioms(sig, ax);
        return 0;
    }

    SourcePos pos() const { return peek().pos; }

private:
    // ---- token helpers
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    bool is(std::string_view s, std::size_t k = 0) const { return peek(k).text == s && peek(k).kind != Token::Kind::End; }
    const Token& next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }
    bool eat(std::string_view s) {
        if (is(s)) {
            next();
            return true;
        }
        return false;
    }
    void expect(std::string_view s) {
        if (!eat(s))
            throw ParseError("expected '" + std::string(s) + "', got '" +
                                 (at_end() ? std::string("end of input") : peek().text) + "'",
                             peek().pos);
    }
    Token ident() {
        const Token& t = peek();
        if (t.kind != Token::Kind::Ident || kKeywords.count(t.text))
            throw ParseError("expected identifier, got '" + (at_end() ? std::string("end of input") : t.text) + "'", t.pos);
        return next();
    }
    std::vector<Token> ident_list() {
        std::vector<Token> out{ident()};
        while (eat(",")) out.push_back(ident());
        expect(";");
        return out;
    }

    void check_fresh_name(const VarTable& vars, const Token& n) {
        if (vars.find(n.text) || const_names_.count(n.text))
            throw ParseError("duplicate declaration of '" + n.text + "'", n.pos);
        if (n.text.rfind(kTempPrefix, 0) == 0)
            throw ParseError("names starting with '" + std::string(kTempPrefix) + "' are reserved", n.pos);
    }
    void declare_var(VarTable& vars, const Token& n, bool ro) {
        check_fresh_name(vars, n);
        vars.add(n.text, ro);
    }

    // ---- axioms
    void axioms_block() {
        expect("axioms");
        expect("{");
        while (!eat("}")) {
            SourcePos p = peek().pos;
            if (eat("relation")) {
                decls_.push_back(decl(true, p));
            } else if (eat("function")) {
                decls_.push_back(decl(false, p));
            } else if (eat("axiom")) {
                // Free-form sentence; kept verbatim for the diagnostic.
                std::string text;
                while (!at_end() && !is(";")) {
                    if (!text.empty()) text += ' ';
                    text += next().text;
                }
                expect(";");
                epr_.push_back({RejectedKind::Epr, text, p});
            } else {
                throw ParseError("expected 'relation', 'function' or 'axiom' in axioms block", p);
            }
        }
        eat(";");
    }
    RawDecl decl(bool relation, SourcePos p) {
        RawDecl d{relation, ident().text, {}, p};
        expect(":");
        d.props.push_back(ident().text);
        while (eat(",")) d.props.push_back(ident().text);
        expect(";");
        return d;
    }

    void resolve_axioms(Signature& sig, AxiomSet& ax) {
        for (const auto& d : decls_) {
            if (d.relation) {
                std::set<RelProp> props;
                for (const auto& p : d.props) {
                    if (p == "reflexive") props.insert(RelProp::Reflexive);
                    else if (p == "irreflexive") props.insert(RelProp::Irreflexive);
                    else if (p == "symmetric") props.insert(RelProp::Symmetric);
                    else if (p == "transitive") props.insert(RelProp::Transitive);
                    else if (p == "strict_total_order") props.insert(RelProp::StrictTotalOrder);
                    else if (p == "strict_partial_order") {
                        props.insert(RelProp::Irreflexive);
                        props.insert(RelProp::Transitive);
                    } else if (p == "equivalence") {
                        props.insert(RelProp::Reflexive);
                        props.insert(RelProp::Symmetric);
                        props.insert(RelProp::Transitive);
                    } else if (p == "antisymmetric" || p == "partial_order" || p == "total_order")
                        ax.rejected.push_back({RejectedKind::Antisymmetric, d.name + ": " + p, d.pos});
                    else
                        throw ParseError("unknown relation property '" + p + "'", d.pos);
                }
                SymId r;
                if (auto f = sig.find_function(d.name))
                    throw ParseError("'" + d.name + "' is a function, declared as relation", d.pos);
                if (auto e = sig.find_relation(d.name)) r = *e;
                else r = sig.add_relation(d.name, 2);
                if (!props.empty()) ax.rel[r].insert(props.begin(), props.end());
            } else {
                std::set<FnProp> props;
                int arity = 0;
                for (const auto& p : d.props) {
                    if (p == "commutative") {
                        props.insert(FnProp::Commutative);
                        arity = arity ? arity : 2;
                    } else if (p == "idempotent") {
                        props.insert(FnProp::Idempotent);
                        arity = arity ? arity : 1;
                    } else if (p == "associative") {
                        ax.rejected.push_back({RejectedKind::Associative, d.name, d.pos});
                        arity = arity ? arity : 2;
                    } else {
                        throw ParseError("unknown function property '" + p + "'", d.pos);
                    }
                }
                if (sig.find_relation(d.name))
                    throw ParseError("'" + d.name + "' is a relation, declared as function", d.pos);
                SymId f;
                if (auto e = sig.find_function(d.name)) f = *e;
                else f = sig.add_function(d.name, arity);
                if (!props.empty()) ax.fn[f].insert(props.begin(), props.end());
            }
        }
        for (auto& r : epr_) ax.rejected.push_back(r);
        decls_.clear();
        epr_.clear();
    }

    // ---- statements
    Stmt block() {
        SourcePos p = peek().pos;
        expect("{");
        Stmt s;
        s.kind = Stmt::Kind::Seq;
        s.pos = p;
        while (!eat("}")) {
            if (at_end()) throw ParseError("unterminated block", p);
            s.body.push_back(stmt());
        }
        if (s.body.empty()) {
            s.kind = Stmt::Kind::Skip;
        } else if (s.body.size() == 1) {
            Stmt only = std::move(s.body[0]);
            return only;
        }
        return s;
    }

    Stmt body_stmt() { return is("{") ? block() : stmt(); }

    Stmt stmt() {
        Stmt s;
        s.pos = peek().pos;
        if (is("{")) return block();
        if (eat("skip")) {
            expect(";");
            return s;
        }
        if (eat("assume")) {
            s.kind = Stmt::Kind::Assume;
            s.cond = cond();
            expect(";");
            return s;
        }
        if (eat("if")) {
            s.kind = Stmt::Kind::If;
            s.cond = cond();
            expect("then");
            s.body.push_back(body_stmt());
            Stmt els;
            els.pos = peek().pos;
            if (eat("else")) els = body_stmt();
            s.body.push_back(std::move(els));
            return s;
        }
        if (eat("while")) {
            s.kind = Stmt::Kind::While;
            s.cond = cond();
            eat("do");
            s.body.push_back(body_stmt());
            return s;
        }
        Token lhs = ident();
        s.kind = Stmt::Kind::Assign;
        s.lhs = lhs.text;
        expect(":=");
        s.rhs = expr();
        expect(";");
        return s;
    }

    Expr expr() {
        Token id = ident();
        Expr e{id.text, {}, id.pos};
        if (eat("(")) {
            e.args.push_back(expr());
            while (eat(",")) e.args.push_back(expr());
            expect(")");
            if (sig_.find_relation(e.name))
                throw ParseError("'" + e.name + "' is a relation, used as a function", id.pos);
            try {
                sig_.add_function(e.name, static_cast<int>(e.args.size()));
            } catch (const ArityError& err) {
                throw ArityError(std::to_string(id.pos.line) + ":" + std::to_string(id.pos.col) +
                                 ": " + err.what());
            }
        }
        return e;
    }

    // ---- conditions
    Cond cond() {
        Cond lhs = disj();
        if (is("==>")) {
            SourcePos p = next().pos;
            Cond rhs = cond();
            Cond out{Cond::Kind::Or, "", {}, {negate(lhs), std::move(rhs)}, p};
            return out;
        }
        return lhs;
    }
    Cond disj() {
        Cond c = conj();
        if (!is("||")) return c;
        Cond out{Cond::Kind::Or, "", {}, {std::move(c)}, c.pos};
        while (eat("||")) out.sub.push_back(conj());
        return out;
    }
    Cond conj() {
        Cond c = unary();
        if (!is("&&")) return c;
        Cond out{Cond::Kind::And, "", {}, {std::move(c)}, c.pos};
        while (eat("&&")) out.sub.push_back(unary());
        return out;
    }
    Cond unary() {
        SourcePos p = peek().pos;
        if (eat("!")) {
            Cond out{Cond::Kind::Not, "", {}, {unary()}, p};
            return out;
        }
        if (eat("(")) {
            Cond c = cond();
            expect(")");
            return c;
        }
        return atom();
    }
    Cond atom() {
        SourcePos p = peek().pos;
        // A relation atom looks like a function application not followed by a comparison.
        std::size_t save = i_;
        Token id = ident();
        if (is("(")) {
            std::size_t depth = 0, k = 0;
            do {
                if (is("(", k)) ++depth;
                else if (is(")", k)) --depth;
                else if (peek(k).kind == Token::Kind::End) break;
                ++k;
            } while (depth > 0);
            static const std::set<std::string, std::less<>> cmp = {"==", "=", "!=", "<", "<=", ">", ">="};
            if (!cmp.count(peek(k).text)) {
                Cond c{Cond::Kind::Rel, id.text, {}, {}, p};
                next();
                c.terms.push_back(expr());
                while (eat(",")) c.terms.push_back(expr());
                expect(")");
                register_relation(c.rel, static_cast<int>(c.terms.size()), p);
                return c;
            }
        }
        i_ = save;
        Expr a = expr();
        const Token& op = peek();
        if (op.kind != Token::Kind::Punct)
            throw ParseError("expected comparison after '" + to_string(a) + "'", op.pos);
        std::string o = op.text;
        next();
        Expr b = expr();
        auto lt = [&](Expr l, Expr r) {
            register_relation(kLessThan, 2, p);
            return Cond{Cond::Kind::Rel, kLessThan, {std::move(l), std::move(r)}, {}, p};
        };
        auto eqc = [&](Expr l, Expr r) { return Cond{Cond::Kind::Eq, "", {std::move(l), std::move(r)}, {}, p}; };
        if (o == "==" || o == "=") return eqc(a, b);
        if (o == "!=") return Cond{Cond::Kind::Neq, "", {a, b}, {}, p};
        if (o == "<") return lt(a, b);
        if (o == ">") return lt(b, a);
        if (o == "<=") return Cond{Cond::Kind::Or, "", {}, {lt(a, b), eqc(a, b)}, p};
        if (o == ">=") return Cond{Cond::Kind::Or, "", {}, {lt(b, a), eqc(a, b)}, p};
        throw ParseError("expected comparison operator, got '" + o + "'", op.pos);
    }
    void register_relation(const std::string& name, int arity, SourcePos p) {
        if (sig_.find_function(name))
            throw ParseError("'" + name + "' is a function, used as a relation", p);
        try {
            sig_.add_relation(name, arity);
        } catch (const ArityError& err) {
            throw ArityError(std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + err.what());
        }
    }

    // ---- name resolution after the whole file is read
    void check_names(const ParsedFile& f) {
        const auto& vars = f.program.vars;
        auto known = [&](const std::string& n) { return vars.find(n) || const_names_.count(n); };
        std::function<void(const Expr&)> chk_expr = [&](const Expr& e) {
            if (e.is_var()) {
                if (!known(e.name)) throw ParseError("undeclared variable '" + e.name + "'", e.pos);
                return;
            }
            if (known(e.name)) throw ParseError("'" + e.name + "' is a variable, used as a function", e.pos);
            for (const auto& a : e.args) chk_expr(a);
        };
        std::function<void(const Cond&)> chk_cond = [&](const Cond& c) {
            for (const auto& t : c.terms) chk_expr(t);
            for (const auto& s : c.sub) chk_cond(s);
        };
        std::function<void(const Stmt&)> chk = [&](const Stmt& s) {
            if (s.kind == Stmt::Kind::Assign) {
                if (const_names_.count(s.lhs))
                    throw ParseError("assignment to constant '" + s.lhs + "'", s.pos);
                if (!vars.find(s.lhs)) throw ParseError("undeclared variable '" + s.lhs + "'", s.pos);
                chk_expr(s.rhs);
            }
            if (s.kind == Stmt::Kind::Assume || s.kind == Stmt::Kind::If || s.kind == Stmt::Kind::While)
                chk_cond(s.cond);
            for (const auto& b : s.body) chk(b);
        };
        chk(f.program.body);
        if (f.post) {
            chk_cond(*f.post);
            std::function<void(const Cond&)> flat = [&](const Cond& c) {
                for (const auto& t : c.terms)
                    if (!t.is_var())
                        throw ParseError("postcondition terms must be variables or constants", t.pos);
                for (const auto& s : c.sub) flat(s);
            };
            flat(*f.post);
        }
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
    Signature sig_;
    std::vector<RawDecl> decls_;
    std::vector<RejectedDecl> epr_;
    std::set<std::string, std::less<>> const_names_;
};

}  // namespace

ParsedFile parse_program(std::string_view source) {
    Parser p(source);
    return p.file();
}

std::size_t parse_header(std::string_view source, Signature& sig, AxiomSet& ax, VarTable& vars) {
    // The header ends at the first line that is neither blank, a comment, nor
    // part of an axioms block / vars line; everything after is letters.
    std::size_t cut = 0, i = 0;
    int depth = 0;
    bool in_header_stmt = false;
    while (i < source.size()) {
        std::size_t e = source.find('\n', i);
        if (e == std::string_view::npos) e = source.size();
        std::string_view line = source.substr(i, e - i);
        std::size_t b = line.find_first_not_of(" \t\r");
        std::string_view t = b == std::string_view::npos ? std::string_view{} : line.substr(b);
        bool header_line = depth > 0 || in_header_stmt || t.empty() || t.rfind("(*", 0) == 0 ||
                           t.rfind("axioms", 0) == 0 || t.rfind("vars", 0) == 0;
        if (!header_line) break;
        if (t.rfind("vars", 0) == 0 || in_header_stmt) in_header_stmt = t.find(';') == std::string_view::npos;
        for (char c : t) {
            if (c == '{') ++depth;
            if (c == '}') --depth;
        }
        i = e + 1;
        cut = std::min(i, source.size());
    }
    Parser p(source.substr(0, cut));
    p.header(sig, ax, vars);
    return cut;
}

}  // namespace axver
