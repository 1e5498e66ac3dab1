#include <set>

#include "doctest.h"
#include "support.hpp"

using namespace axtest;

namespace {

using Lang = std::set<std::string>;

Lang language(const Nfa& n, const Vocabulary& voc, std::size_t max_len) {
    Lang out;
    for (const auto& w : enumerate(n, max_len)) out.insert(to_string(w, voc));
    return out;
}

// Reference semantics of core programs, computed directly on word sets.
struct Reference {
    const Vocabulary& voc;
    std::size_t bound;

    using Words = std::set<Execution, bool (*)(const Execution&, const Execution&)>;
    static bool less(const Execution& a, const Execution& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const Letter& x, const Letter& y) {
            return std::tie(x.op, x.x, x.y, x.sym, x.args) < std::tie(y.op, y.x, y.y, y.sym, y.args);
        });
    }
    Words empty() const { return Words(&less); }
    Words unit() const {
        Words w = empty();
        w.insert(Execution{});
        return w;
    }

    Words cat(const Words& a, const Words& b) const {
        Words out = empty();
        for (const auto& u : a)
            for (const auto& v : b)
                if (u.size() + v.size() <= bound) {
                    Execution w = u;
                    w.insert(w.end(), v.begin(), v.end());
                    out.insert(std::move(w));
                }
        return out;
    }
    Words star(const Words& a) const {
        Words acc = unit();
        for (;;) {
            Words next = acc;
            for (auto& w : cat(acc, a)) next.insert(w);
            if (next.size() == acc.size()) return acc;
            acc = std::move(next);
        }
    }
    VarId var(const std::string& n) const { return *voc.vars.find(n); }
    Letter atom(const Cond& c) const {
        switch (c.kind) {
        case Cond::Kind::Eq: return Letter::eq(var(c.terms[0].name), var(c.terms[1].name));
        case Cond::Kind::Neq: return Letter::neq(var(c.terms[0].name), var(c.terms[1].name));
        default: {
            std::vector<VarId> args;
            for (const auto& t : c.terms) args.push_back(var(t.name));
            SymId r = *voc.sig.find_relation(c.rel);
            return c.kind == Cond::Kind::Rel ? Letter::rel(r, args) : Letter::nrel(r, args);
        }
        }
    }
    Words single(const Letter& a) const {
        Words w = empty();
        w.insert({a});
        return w;
    }
    Words run(const Stmt& s) const {
        using K = Stmt::Kind;
        switch (s.kind) {
        case K::Skip: return unit();
        case K::Assign: {
            if (s.rhs.is_var()) return single(Letter::assign(var(s.lhs), var(s.rhs.name)));
            std::vector<VarId> args;
            for (const auto& a : s.rhs.args) args.push_back(var(a.name));
            return single(Letter::assign_fn(var(s.lhs), *voc.sig.find_function(s.rhs.name), args));
        }
        case K::Assume: return single(atom(s.cond));
        case K::Seq: {
            Words w = unit();
            for (const auto& b : s.body) w = cat(w, run(b));
            return w;
        }
        case K::If: {
            Words w = cat(single(atom(s.cond)), run(s.body[0]));
            for (auto& x : cat(single(atom(negate(s.cond))), run(s.body[1]))) w.insert(x);
            return w;
        }
        case K::While:
            return cat(star(cat(single(atom(s.cond)), run(s.body[0]))), single(atom(negate(s.cond))));
        case K::Choice: {
            Words w = empty();
            for (const auto& b : s.body)
                for (auto& x : run(b)) w.insert(x);
            return w;
        }
        case K::Loop: return star(run(s.body[0]));
        }
        return empty();
    }
};

struct Built {
    Problem p;
    Program core;
    Vocabulary voc;
    Nfa nfa;
};

Built build(const std::string& text) {
    Built b{problem(text), {}, {}, {}};
    b.core = desugar(b.p.program);
    b.voc = Vocabulary{b.p.sig, b.core.vars};
    b.nfa = build_exec_nfa(b.core, b.p.sig, b.p.ax);
    return b;
}

}  // namespace

TEST_SUITE("executions") {

TEST_CASE("while loop language") {
    Built b = build("vars x, y; program { while (x != y) { skip; } }");
    CHECK(language(b.nfa, b.voc, 3) ==
          Lang{"assume(x=y)", "assume(x!=y) . assume(x=y)", "assume(x!=y) . assume(x!=y) . assume(x=y)"});
    CHECK_FALSE(b.nfa.has_epsilons());
}

TEST_CASE("negated strict total order atom has two branches") {
    Built b = build("axioms { relation lt: strict_total_order; } vars x, y; program { assume (!lt(x, y)); }");
    CHECK(language(b.nfa, b.voc, 4) == Lang{"assume(lt(y,x))", "assume(x=y)"});
    for (StateId s = 0; s < b.nfa.size(); ++s)
        for (const auto& e : b.nfa.out(s)) CHECK(e.letter->op != Op::AssumeNegRel);
}

TEST_CASE("if without a total order keeps the negated atom") {
    Built b = build("vars x, y; program { if (R(x, y)) then x := y; }");
    CHECK(language(b.nfa, b.voc, 4) == Lang{"assume(R(x,y)) . x:=y", "assume(!R(x,y))"});
}

TEST_CASE("postcondition violation suffix") {
    SUBCASE("skip with x == y") {
        Built b = build("vars x, y; program { skip; } post: x == y;");
        Nfa n = append_post_violation(b.nfa, *b.p.post, b.core, b.p.sig, b.p.ax);
        CHECK(language(n, b.voc, 4) == Lang{"assume(x!=y)"});
    }
    SUBCASE("relational post on a total order") {
        Built b = build("axioms { relation R: strict_total_order; } vars x, y; program { skip; } post: R(x, y);");
        Nfa n = append_post_violation(b.nfa, *b.p.post, b.core, b.p.sig, b.p.ax);
        CHECK(language(n, b.voc, 4) == Lang{"assume(R(y,x))", "assume(x=y)"});
    }
    SUBCASE("implication post ends with both assumes") {
        Built b = build("vars s, f, e; consts T; program { if (f == e) then s := T; } post: s == T ==> f == e;");
        Nfa n = append_post_violation(b.nfa, *b.p.post, b.core, b.p.sig, b.p.ax);
        Lang l = language(n, b.voc, 6);
        CHECK(l == Lang{"assume(f=e) . s:=T . assume(s=T) . assume(f!=e)",
                        "assume(f!=e) . assume(s=T) . assume(f!=e)"});
    }
}

TEST_CASE("NFA membership matches the reference semantics") {
    const char* programs[] = {
        "vars x, y; program { while (x != y) { x := f(x); } }",
        "vars x, y, z; program { if (x == y) then { z := f(x, y); } else { assume (R(y, z)); } x := z; }",
        "vars x, y; program { if (x == y) then { x := y; } else { if (R(x, y)) then y := x; } while (R(x, y)) { x := f(y); } }",
        "vars x, y; program { while (x != y) { while (R(x, y)) { y := f(y); } x := f(x); } }",
        "vars x, y; program { while (x != y) { x := f(x); } while (y != x) { y := f(y); } }",
    };
    for (const char* text : programs) {
        std::string shown = text;
        CAPTURE(shown);
        Built b = build(text);
        Reference ref{b.voc, 6};
        Lang expected;
        for (const auto& w : ref.run(b.core.body)) expected.insert(to_string(w, b.voc));
        CHECK(language(b.nfa, b.voc, 6) == expected);
        for (const auto& w : enumerate(b.nfa, 6)) CHECK(accepts(b.nfa, w));
    }
}

TEST_CASE("edges carry their source letter") {
    Built b = build("vars x, y; program { x := f(y); }");
    std::size_t tagged = 0;
    for (StateId s = 0; s < b.nfa.size(); ++s)
        for (const auto& e : b.nfa.out(s))
            if (e.source) ++tagged;
    CHECK(tagged == 1);
}

TEST_CASE("homomorphic image of a single edge") {
    Vocabulary voc = vars({"x", "y"});
    Execution w = word(voc, "x:=f(y)");
    SymId r = voc.sig.add_relation("R", 2);
    Nfa n;
    StateId t = n.add_state();
    n.add_edge(n.initial(), t, w[0], w[0]);
    n.set_accepting(t);
    Nfa img = apply_homomorphism(n, [&](const Letter& a) {
        return a.op == Op::AssignFn ? Execution{a, Letter::rel(r, {a.x, a.x})} : Execution{a};
    });
    CHECK(language(img, voc, 4) == Lang{"x:=f(y) . assume(R(x,x))"});
}

TEST_CASE("empty language stays empty") {
    Vocabulary voc = vars({"x"});
    Nfa n;  // no accepting state
    n.add_edge(n.initial(), n.add_state(), Letter::assign(0, 0));
    Nfa img = apply_homomorphism(n, [](const Letter& a) { return Execution{a, a}; });
    CHECK(enumerate(img, 6).empty());
    CHECK(enumerate(trim(img), 6).empty());
}

TEST_CASE("bounded word counts under a letter-doubling map") {
    // Three states with a cycle; doubling every letter maps words of length k to 2k.
    Vocabulary voc = vars({"x", "y"});
    Nfa n;
    StateId a = n.add_state(), b = n.add_state();
    n.add_edge(n.initial(), a, Letter::assign(0, 1));
    n.add_edge(a, b, Letter::eq(0, 1));
    n.add_edge(b, a, Letter::neq(0, 1));
    n.add_edge(a, n.initial(), Letter::assign(1, 0));
    n.set_accepting(b);
    Nfa img = apply_homomorphism(n, [](const Letter& l) { return Execution{l, l}; });
    for (std::size_t k = 0; k <= 7; ++k) {
        std::size_t small = 0, big = 0;
        for (const auto& w : enumerate(n, k)) small += w.size() <= k;
        for (const auto& w : enumerate(img, 2 * k)) big += w.size() <= 2 * k;
        CHECK(small == big);
    }
}

TEST_CASE("teval, kappa, computed terms") {
    Vocabulary voc = vars({"x", "y", "z1", "z2", "z3"});
    TermStore ts;
    CHECK(ts.to_string(teval(ts, {}, voc.vars.size(), 0), voc) == "x^");

    Execution rho3 = word(voc, "z1:=f(x,y) . z2:=f(y,x) . z3:=g(z1)");
    CHECK(ts.to_string(teval(ts, rho3, voc.vars.size(), 4), voc) == "g(f(x^,y^))");

    Execution moved = rho3;
    moved.push_back(parse_letter("x:=z3", voc, false));
    CHECK(teval(ts, moved, voc.vars.size(), 0) == teval(ts, rho3, voc.vars.size(), 4));

    CHECK(kappa(ts, {}, voc.vars.size()).empty());
    auto k1 = kappa(ts, word(voc, "assume(x=y)"), voc.vars.size());
    REQUIRE(k1.size() == 1);
    CHECK(to_string(*k1.begin(), ts, voc) == "x^ = y^");
    auto k2 = kappa(ts, word(voc, "z1:=f(x,y) . assume(R(z1,x))"), voc.vars.size());
    REQUIRE(k2.size() == 1);
    CHECK(to_string(*k2.begin(), ts, voc) == "R(f(x^,y^),x^)");

    Vocabulary two = vars({"x", "y"});
    CHECK(computed_terms(ts, {}, two.vars.size()).size() == 2);

    std::set<std::string> names;
    for (auto t : computed_terms(ts, rho3, voc.vars.size())) names.insert(ts.to_string(t, voc));
    CHECK(names == std::set<std::string>{"x^", "y^", "z1^", "z2^", "z3^", "f(x^,y^)", "f(y^,x^)", "g(f(x^,y^))"});
}

TEST_CASE("computed terms are exactly the prefix values") {
    Vocabulary voc = vars({"x", "y", "z"});
    SymId f = voc.sig.add_function("f", 1);
    SymId g = voc.sig.add_function("g", 2);
    auto alpha = alphabet(3, {{f, 1}, {g, 2}}, {});
    std::mt19937 rng(7);
    for (int i = 0; i < 300; ++i) {
        Execution rho = random_word(rng, alpha, 10);
        TermStore ts;
        std::set<TermId> replay;
        for (std::size_t n = 0; n <= rho.size(); ++n)
            for (VarId v = 0; v < 3; ++v)
                replay.insert(teval(ts, Execution(rho.begin(), rho.begin() + static_cast<long>(n)), 3, v));
        CHECK(computed_terms(ts, rho, 3) == replay);
    }
}

TEST_CASE("dump format") {
    Built b = build("vars x, y; program { x := y; }");
    std::string d = dump(b.nfa, b.voc);
    CHECK(d.rfind("initial 0\n", 0) == 0);
    CHECK(d.find("accepting") != std::string::npos);
    CHECK(d.find("-- x:=y -->") != std::string::npos);
}

}
