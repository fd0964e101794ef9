#include <doctest.h>

#include "gdiagram/formula.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace gdiag;

namespace {

const Signature& johnny() {
  static const Signature sig = corpus::theory("johnny.thy").sig;
  return sig;
}

FormulaPtr at(const char* pred, const char* c) {
  return fml::atom(Atom{johnny().predicate_id(pred), {johnny().make(c)}});
}

}  // namespace

TEST_SUITE("formula") {
  TEST_CASE("existential and universal parse to quantifier ASTs") {
    auto e = parse_formula("exists u:entity . (man(u) & walk(u))", johnny());
    REQUIRE(e->kind == Formula::Kind::Exists);
    CHECK(e->var == "u");
    CHECK(e->var_sort == johnny().sort_id("entity"));
    CHECK(e->left->kind == Formula::Kind::And);
    auto a = parse_formula("forall u:entity . (man(u) -> walk(u))", johnny());
    REQUIRE(a->kind == Formula::Kind::Forall);
    CHECK(a->left->kind == Formula::Kind::Implies);
  }

  TEST_CASE("precedence golden") {
    auto f = parse_formula("~man(J) & walk(J) -> talk(J) | man(B)", johnny());
    auto golden = fml::implies(fml::conj(fml::negate(at("man", "J")), at("walk", "J")),
                               fml::disj(at("talk", "J"), at("man", "B")));
    CHECK(equal_formulas(f, golden));
  }

  TEST_CASE("implication is right associative, & and | left associative") {
    auto f = parse_formula("man(J) -> man(M) -> man(B)", johnny());
    CHECK(equal_formulas(f, fml::implies(at("man", "J"), fml::implies(at("man", "M"), at("man", "B")))));
    auto g = parse_formula("man(J) | man(M) | man(B)", johnny());
    CHECK(equal_formulas(g, fml::disj(fml::disj(at("man", "J"), at("man", "M")), at("man", "B"))));
  }

  TEST_CASE("quantifiers and modal operators scope to the right") {
    auto f = parse_formula("nec man(J) & walk(J)", johnny());
    CHECK(equal_formulas(f, fml::nec(fml::conj(at("man", "J"), at("walk", "J")))));
    auto g = parse_formula("exists u:entity . man(u) | walk(u)", johnny());
    REQUIRE(g->kind == Formula::Kind::Exists);
    CHECK(g->left->kind == Formula::Kind::Or);
  }

  TEST_CASE("equations between terms") {
    auto f = parse_formula("j = J", johnny());
    REQUIRE(f->kind == Formula::Kind::Equal);
    CHECK(johnny().render(f->lhs) == "j");
  }

  TEST_CASE("errors") {
    try {
      parse_formula("walk(j", johnny());
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
      CHECK(e.column() == 7);
    }
    CHECK_THROWS_AS(parse_formula("fly(j)", johnny()), UnknownSymbolError);
    CHECK_THROWS_AS(parse_formula("walk(u)", johnny()), UnboundVariableError);
    CHECK_THROWS_AS(parse_formula("exists u:block . walk(u)", johnny()), UnknownSymbolError);
    CHECK_THROWS_AS(parse_formula("walk(j, m)", johnny()), SortError);
    CHECK_THROWS_AS(parse_formula("man(J) &", johnny()), ParseError);
    CHECK_THROWS_AS(parse_formula("man(J) man(M)", johnny()), ParseError);
    try {
      parse_formula("man(J) &\n  # ", johnny());
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }

  TEST_CASE("sort mismatch between quantified variable and predicate") {
    Signature sig = corpus::theory("blocks.thy").sig;
    CHECK_THROWS_AS(parse_formula("exists x:table . top(x, x, x)", sig), SortError);
    CHECK_NOTHROW(parse_formula("exists x:block . exists z:table . top(x, x, z)", sig));
  }

  TEST_CASE("round trip on hand-written formulas") {
    for (const char* text :
         {"walk(j)", "exists u:entity . (man(u) & walk(u))", "forall u:entity . (man(u) -> walk(u))",
          "~(man(J) | walk(J))", "~~man(J)", "(man(J) -> walk(J)) -> talk(J)", "nec (man(J) -> past walk(J))",
          "fut ~talk(B) & man(B)", "exists u:entity . exists v:entity . ~(u = v)", "man(J) & (walk(J) | talk(J))"}) {
      CAPTURE(text);
      auto f = parse_formula(text, johnny());
      auto g = parse_formula(render(f, johnny()), johnny());
      CHECK(equal_formulas(f, g));
      CHECK(render(g, johnny()) == render(f, johnny()));
    }
  }

  TEST_CASE("round trip on random formulas over every corpus model") {
    for (const char* file : {"johnny.thy", "talkers.thy", "seasons.thy", "pricerise.thy", "blocks.thy"}) {
      Model m = corpus::model(file, 1);
      oracle::FormulaGen gen(m, 7);
      for (int i = 0; i < 100; ++i) {
        auto f = gen.make(4);
        std::string text = render(f, m.signature());
        CAPTURE(text);
        CHECK(equal_formulas(parse_formula(text, m.signature()), f));
      }
    }
  }

  TEST_CASE("substitution and free variables") {
    auto f = parse_formula("exists u:entity . man(u)", johnny());
    CHECK(free_variables(f->left) == std::vector<std::string>{"u"});
    CHECK(free_variables(f).empty());
    auto g = substitute(f->left, "u", johnny().make("B"));
    CHECK(equal_formulas(g, at("man", "B")));
    // bound occurrences are untouched
    CHECK(equal_formulas(substitute(f, "u", johnny().make("B")), f));
  }

  TEST_CASE("indexed family P applies member predicates") {
    Theory t = corpus::theory("johnny.thy");
    const auto* fam = t.find_family("P");
    REQUIRE(fam);
    Atom pm = apply_family(t.sig, *fam, "m", t.sig.make("J"));
    CHECK(pm.pred == t.sig.predicate_id("man"));
    CHECK_THROWS_AS(apply_family(t.sig, *fam, "q", t.sig.make("J")), UnknownSymbolError);
    Signature blocks = corpus::theory("blocks.thy").sig;
    CHECK_THROWS_AS(apply_family(t.sig, *fam, "m", Term::app(0, 5)), SortError);
  }

  TEST_CASE("family members must share a sort profile") {
    Signature sig = corpus::theory("blocks.thy").sig;
    SortId block = sig.sort_id("block");
    PredId p = sig.add_predicate("free", {block}, Truth3::False);
    IndexedFunctionFamily fam{"F", {{"a", p}, {"b", sig.predicate_id("top")}}};
    CHECK_THROWS_AS(validate_family(sig, fam), SortError);
  }
}
