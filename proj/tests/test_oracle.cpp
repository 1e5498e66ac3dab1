#include "doctest.h"
#include "support.hpp"

using namespace axtest;

namespace {

AxiomSet axioms(const std::string& header, Vocabulary& voc) {
    std::string text = header.find("program") == std::string::npos ? header + " program { skip; }" : header;
    ParsedFile f = parse_program(text);
    voc.sig = f.sig;
    return validate_axioms(f.axioms, f.sig);
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("closure") {
    Vocabulary voc = vars({"x", "y", "z1", "z2", "z3", "z4"});
    TermStore ts;
    TermId x = ts.init(0), y = ts.init(1);

    SUBCASE("one equation, one class") {
        Partition p = closure(ts, std::vector<TermId>{x, y}, {{x, y}}, AxiomSet{});
        CHECK(p.num_classes() == 1);
    }
    SUBCASE("commutativity merges swapped applications and their images") {
        AxiomSet ax = axioms("axioms { function f: commutative; } vars z; program { z := f(z, z); z := g(z); }", voc);
        SymId f = *voc.sig.find_function("f"), g = *voc.sig.find_function("g");
        TermId fxy = ts.app(f, {x, y}), fyx = ts.app(f, {y, x});
        TermId gl = ts.app(g, {fxy}), gr = ts.app(g, {fyx});
        Partition p = closure(ts, std::vector<TermId>{x, y, fxy, fyx, gl, gr}, {}, ax);
        CHECK(p.same(gl, gr));
        CHECK_FALSE(p.same(x, y));
        Partition free = closure(ts, std::vector<TermId>{x, y, fxy, fyx, gl, gr}, {}, AxiomSet{});
        CHECK_FALSE(free.same(gl, gr));
    }
    SUBCASE("idempotence collapses f(f(x))") {
        AxiomSet ax = axioms("axioms { function f: idempotent; } vars x; program { x := f(x); }", voc);
        SymId f = *voc.sig.find_function("f");
        TermId fx = ts.app(f, {x}), ffx = ts.app(f, {fx});
        Partition p = closure(ts, std::vector<TermId>{x, fx, ffx}, {}, ax);
        CHECK(p.same(fx, ffx));
        CHECK_FALSE(p.same(x, fx));
    }
}

TEST_CASE("minimal model") {
    Vocabulary voc = vars({"x", "y", "z"});
    TermStore ts;
    SUBCASE("equality merges the universe") {
        Execution rho = word(voc, "assume(x=y)");
        MinimalModel m = minimal_model(ts, rho, 3, {});
        CHECK(m.consistent);
        CHECK(m.part.num_classes() == 2);
    }
    SUBCASE("a 2-cycle of a strict partial order") {
        AxiomSet ax = axioms("axioms { relation R: irreflexive, transitive; } vars x;", voc);
        Execution rho = word(voc, "assume(R(x,y)) . assume(R(y,x))");
        MinimalModel m = minimal_model(ts, rho, 3, ax, &voc);
        CHECK_FALSE(m.consistent);
        SymId r = *voc.sig.find_relation("R");
        std::size_t cx = m.part.class_of(ts.init(0));
        CHECK(m.rel_pos[r].count(ClassTuple{cx, cx}) == 1);
        CHECK(m.conflict.find("irreflexivity") != std::string::npos);
    }
    SUBCASE("derived negative fact") {
        AxiomSet ax = axioms("axioms { relation R: transitive; } vars x;", voc);
        SymId r = *voc.sig.find_relation("R");
        Execution two = word(voc, "assume(R(x,y)) . assume(!R(x,z))");
        MinimalModel m = minimal_model(ts, two, 3, ax);
        CHECK(m.consistent);
        std::size_t cy = m.part.class_of(ts.init(1)), cz = m.part.class_of(ts.init(2));
        CHECK(m.rel_neg[r].count(ClassTuple{cy, cz}) == 1);
        Execution three = two;
        three.push_back(parse_letter("assume(R(y,z))", voc, false));
        CHECK_FALSE(minimal_model(ts, three, 3, ax).consistent);
    }
    SUBCASE("function table follows the classes") {
        Execution rho = word(voc, "x:=f(y) . z:=f(x) . assume(y=x)");
        MinimalModel m = minimal_model(ts, rho, 3, {});
        SymId f = *voc.sig.find_function("f");
        CHECK(m.consistent);
        // f(y^) = x^-class and f(f(y^)) collapse into one class.
        CHECK(m.fn_table[f].size() == 1);
    }
}

TEST_CASE("feasibility") {
    Vocabulary voc = vars({"x", "y"});
    CHECK_FALSE(is_feasible(word(voc, "assume(x=y) . assume(x!=y)"), 2, {}));
    CHECK(is_feasible(word(voc, "assume(x=y) . x:=f(x) . assume(x!=y)"), 2, {}));
    CHECK_FALSE(is_feasible(word(voc, "assume(x=y) . x:=f(x) . y:=f(y) . assume(x!=y)"), 2, {}));
    CHECK(is_feasible({}, 2, {}));
}

TEST_CASE("entailed equalities") {
    Vocabulary voc = vars({"x", "y", "x1", "y1"});
    TermStore ts;
    SymId f = voc.sig.add_function("f", 1);
    Execution rho = word(voc, "assume(x=y) . x1:=f(x) . y1:=f(y)");
    CHECK(entails_eq(ts, rho, 4, {}, ts.app(f, {ts.init(0)}), ts.app(f, {ts.init(1)})));
    CHECK_FALSE(entails_eq(ts, {}, 4, {}, ts.init(0), ts.init(1)));

    Vocabulary v2 = vars({"x", "y", "z1", "z2"});
    AxiomSet ax = axioms("axioms { function f: commutative; } vars x; program { x := f(x, x); }", v2);
    SymId g = *v2.sig.find_function("f");
    TermStore t2;
    Execution swap = word(v2, "z1:=f(x,y) . z2:=f(y,x)");
    TermId a = t2.app(g, {t2.init(0), t2.init(1)}), b = t2.app(g, {t2.init(1), t2.init(0)});
    CHECK(entails_eq(t2, swap, 4, ax, a, b));
    CHECK_FALSE(entails_eq(t2, swap, 4, {}, a, b));
}

TEST_CASE("coherence of the worked examples") {
    SUBCASE("early assume") {
        Vocabulary voc = vars({"x", "y", "x1", "y1"});
        Execution rho = word(voc, "assume(x=y) . x1:=f(x) . y1:=f(y) . x1:=f(x1) . y1:=f(y1) . assume(x=y)");
        CHECK(is_coherent(rho, 4, {}).coherent);
    }
    SUBCASE("memoizing") {
        Vocabulary voc = vars({"x", "y", "z1", "z2", "z3", "z4", "z5", "z6"});
        Execution rho = word(voc, "z1:=f(x,y) . z2:=f(y,x) . z3:=g(z1) . z4:=g(z2) . z3:=z5 . z6:=g(z1)");
        CoherenceVerdict v = is_coherent(rho, 8, {});
        CHECK_FALSE(v.coherent);
        CHECK(v.position == 5);
        CHECK(v.kind == Violation::Memoizing);
        AxiomSet ax = axioms("axioms { function f: commutative; }", voc);
        CHECK(is_coherent(rho, 8, ax).coherent);
    }
    SUBCASE("x := f(x) alone") {
        Vocabulary voc = vars({"x"});
        CHECK(is_coherent(word(voc, "x:=f(x)"), 1, {}).coherent);
    }
    SUBCASE("an early-assume violation") {
        Vocabulary voc = vars({"x", "y", "a", "b"});
        // f(x^) and f(y^) are both dropped before x = y makes them equal.
        Execution rho = word(voc, "a:=f(x) . b:=f(y) . a:=x . b:=x . assume(x=y)");
        CoherenceVerdict v = is_coherent(rho, 4, {});
        CHECK_FALSE(v.coherent);
        CHECK(v.kind == Violation::EarlyAssume);
        CHECK(v.position == 4);
    }
}

TEST_CASE("coherence is prefix closed and incremental runs agree") {
    Vocabulary voc = vars({"x", "y", "z"});
    SymId f = voc.sig.add_function("f", 1);
    SymId r = voc.sig.add_relation("R", 2);
    AxiomSet ax;
    ax.rel[r] = {RelProp::Transitive};
    auto alpha = alphabet(3, {{f, 1}}, {r});
    std::mt19937 rng(11);
    for (int i = 0; i < 400; ++i) {
        Execution rho = random_word(rng, alpha, 10);
        CoherenceVerdict whole = is_coherent(rho, 3, ax);
        OracleRun run(3, ax);
        std::optional<std::size_t> first;
        for (std::size_t k = 0; k < rho.size(); ++k)
            if (run.push(rho[k]) && !first) first = k;
        CHECK(whole.coherent == !first.has_value());
        if (first) {
            CHECK(whole.position == *first);
            Execution prefix(rho.begin(), rho.begin() + static_cast<long>(*first));
            CHECK(is_coherent(prefix, 3, ax).coherent);
        }
        CHECK(run.feasible() == is_feasible(rho, 3, ax));
    }
}

TEST_CASE("undo restores the run") {
    Vocabulary voc = vars({"x", "y"});
    Execution a = word(voc, "x:=f(y) . assume(x=y)");
    Execution b = word(voc, "assume(x!=y)");
    OracleRun run(2, {});
    run.push(a[0]);
    std::string before = run.quotient_key();
    auto m = run.mark();
    run.push(a[1]);
    run.push(b[0]);
    CHECK_FALSE(run.feasible());
    run.undo(m);
    CHECK(run.feasible());
    CHECK(run.quotient_key() == before);
}

TEST_CASE("relational facts do not change entailed equalities") {
    Vocabulary voc = vars({"x", "y", "z"});
    SymId f = voc.sig.add_function("f", 1);
    SymId r = voc.sig.add_relation("R", 2);
    AxiomSet ax;
    ax.rel[r] = {RelProp::Transitive};
    auto alpha = alphabet(3, {{f, 1}}, {r});
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        Execution rho = random_word(rng, alpha, 8);
        Execution eqs_only;
        for (const auto& l : rho)
            if (l.op != Op::AssumeRel && l.op != Op::AssumeNegRel) eqs_only.push_back(l);
        TermStore ts;
        auto terms = computed_terms(ts, rho, 3);
        MinimalModel m1 = minimal_model(ts, rho, 3, ax);
        MinimalModel m2 = minimal_model(ts, eqs_only, 3, ax);
        for (auto t : terms)
            for (auto u : terms) CHECK(m1.part.same(t, u) == m2.part.same(t, u));
    }
}

}
