#include "doctest.h"
#include "support.hpp"

using namespace axtest;

namespace {

const char* kCheckSorted = R"(
axioms { relation lt: strict_total_order; }
vars x, k, found, stop;
consts T, F, NIL;
program {
  found := F;
  stop := F;
  while (x != NIL) {
    if (stop == F) then {
      if (k == key(x)) then found := T;
      if (k <= key(x)) then stop := T;
    }
    x := next(x);
  }
}
)";

bool contains_kind(const Stmt& s, Stmt::Kind k) {
    if (s.kind == k) return true;
    for (const auto& b : s.body)
        if (contains_kind(b, k)) return true;
    return false;
}

const Stmt* find_if_with(const Stmt& s, Cond::Kind k) {
    if (s.kind == Stmt::Kind::If && s.cond.kind == k) return &s;
    for (const auto& b : s.body)
        if (auto* r = find_if_with(b, k)) return r;
    return nullptr;
}

}  // namespace

TEST_SUITE("syntax") {

TEST_CASE("smallest program") {
    ParsedFile f = parse_program("program { skip; }");
    CHECK(f.program.body.kind == Stmt::Kind::Skip);
    CHECK(f.axioms.empty());
    CHECK_FALSE(f.post.has_value());
}

TEST_CASE("malformed assignment is a parse error") {
    CHECK_THROWS_AS(parse_program("program { x := ; }"), ParseError);
    CHECK_THROWS_AS(parse_program("program { x := f(y; }"), ParseError);
    CHECK_THROWS_AS(parse_program("program { skip;"), ParseError);
}

TEST_CASE("parse errors carry a position") {
    try {
        parse_program("vars x;\nprogram {\n  x := ;\n}");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("3:") != std::string::npos);
    }
}

TEST_CASE("check-sorted program: while, nested if, <= as a disjunction") {
    ParsedFile f = parse_program(kCheckSorted);
    CHECK(contains_kind(f.program.body, Stmt::Kind::While));
    const Stmt* le = find_if_with(f.program.body, Cond::Kind::Or);
    REQUIRE(le != nullptr);
    REQUIRE(le->cond.sub.size() == 2);
    CHECK(le->cond.sub[0].kind == Cond::Kind::Rel);
    CHECK(le->cond.sub[0].rel == "lt");
    CHECK(le->cond.sub[1].kind == Cond::Kind::Eq);

    Program core = desugar(f.program);
    CHECK(is_core(core));
    // key(x) is flattened into a temporary before each use.
    std::string text = to_string(core.body);
    CHECK(text.find("__t0 := key(x);") != std::string::npos);
    CHECK(text.find("lt(k, __t") != std::string::npos);
}

TEST_CASE("desugar: one-armed if gains else skip") {
    ParsedFile f = parse_program("vars x, y; program { if (x == y) then x := y; }");
    Program core = desugar(f.program);
    REQUIRE(core.body.kind == Stmt::Kind::If);
    REQUIRE(core.body.body.size() == 2);
    CHECK(core.body.body[1].kind == Stmt::Kind::Skip);
}

TEST_CASE("desugar: compound term in an assume gets a temporary") {
    ParsedFile f = parse_program("vars k, x; program { assume (k == key(x)); }");
    Program core = desugar(f.program);
    CHECK(to_string(core.body) == "__t0 := key(x);\nassume (k == __t0);\n");
    CHECK(core.vars.find("__t0").has_value());
}

TEST_CASE("desugar: skip is a fixed point, and desugar is idempotent") {
    ParsedFile s = parse_program("program { skip; }");
    CHECK(desugar(s.program).body.kind == Stmt::Kind::Skip);

    Program once = desugar(parse_program(kCheckSorted).program);
    Program twice = desugar(once);
    CHECK(to_string(once.body) == to_string(twice.body));
    CHECK(once.vars.size() == twice.vars.size());
}

TEST_CASE("desugar is deterministic") {
    ParsedFile f = parse_program(kCheckSorted);
    CHECK(to_string(desugar(f.program).body) == to_string(desugar(f.program).body));
}

TEST_CASE("nested applications are flattened innermost first") {
    ParsedFile f = parse_program("vars x, y; program { x := f(g(y), g(y)); }");
    Program core = desugar(f.program);
    CHECK(to_string(core.body) == "__t0 := g(y);\n__t1 := g(y);\nx := f(__t0, __t1);\n");
}

TEST_CASE("negate and dnf") {
    ParsedFile f = parse_program("vars a, b, c; program { skip; } post: a == b ==> b != c;");
    REQUIRE(f.post);
    Cond n = negate(*f.post);
    auto d = dnf(n);
    REQUIRE(d.size() == 1);
    REQUIRE(d[0].size() == 2);
    CHECK(to_string(d[0][0]) == "a == b");
    CHECK(to_string(d[0][1]) == "b == c");
}

TEST_CASE("arity mismatch") {
    CHECK_THROWS_AS(parse_program("vars x, y; program { x := f(x); y := f(x, y); }"), ArityError);
}

TEST_CASE("axiom validation") {
    SUBCASE("associativity is rejected") {
        ParsedFile f = parse_program("axioms { function f: associative; } vars x; program { skip; }");
        try {
            validate_axioms(f.axioms, f.sig);
            FAIL("expected UnsupportedAxiom");
        } catch (const UnsupportedAxiom& e) {
            CHECK(std::string(e.what()).find("undecidable") != std::string::npos);
        }
    }
    SUBCASE("preorder is accepted") {
        ParsedFile f = parse_program("axioms { relation R: reflexive, transitive; } vars x; program { skip; }");
        AxiomSet ax = validate_axioms(f.axioms, f.sig);
        SymId r = *f.sig.find_relation("R");
        CHECK(ax.has(r, RelProp::Reflexive));
        CHECK(ax.has(r, RelProp::Transitive));
        CHECK(ax.transitive(r));
    }
    SUBCASE("reflexive and irreflexive contradict") {
        ParsedFile f = parse_program("axioms { relation R: reflexive, irreflexive; } vars x; program { skip; }");
        CHECK_THROWS_AS(validate_axioms(f.axioms, f.sig), ContradictoryAxioms);
    }
    SUBCASE("EPR sentences are rejected") {
        CHECK_THROWS_AS(problem("axioms { relation R: transitive; axiom forall a b. R(a, b) -> R(b, a); } vars x; program { skip; }"),
                        UnsupportedAxiom);
    }
}

TEST_CASE("letters print and parse back") {
    Vocabulary voc = vars({"x", "y", "z"});
    Execution w = word(voc, "x:=y . x:=f(y,z) . assume(x=y) . assume(x!=z) . assume(R(x,y)) . assume(!R(y,x))");
    REQUIRE(w.size() == 6);
    CHECK(to_string(w, voc) ==
          "x:=y . x:=f(y,z) . assume(x=y) . assume(x!=z) . assume(R(x,y)) . assume(!R(y,x))");
    Vocabulary fixed = voc;
    CHECK_THROWS_AS(parse_letter("w:=x", fixed, false), LetterSyntaxError);
}

}
