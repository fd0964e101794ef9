#include <doctest.h>

#include "gdiagram/evaluate.hpp"
#include "gdiagram/theory_file.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "support/trace_check.hpp"

using namespace gdiag;

namespace {

Truth3 eval(const Model& m, const std::string& text, EvalMode mode = EvalMode::Paper, PointOfReference at = {}) {
  return eval_formula(m, parse_formula(text, m.signature()), at, mode).value;
}

std::vector<std::string> worlds(const Model& m, const std::string& text, EvalMode mode, std::size_t time = 0) {
  std::vector<std::string> out;
  for (std::size_t w : truth_set(m, parse_formula(text, m.signature()), time, mode)) out.push_back(m.index().worlds[w]);
  return out;
}

}  // namespace

TEST_SUITE("evaluate") {
  TEST_CASE("Kleene connectives match the literal tables") {
    for (Truth3 a : {oracle::F, oracle::U, oracle::T}) {
      CHECK(kleene_not(a) == oracle::kNot[oracle::ix(a)]);
      for (Truth3 b : {oracle::F, oracle::U, oracle::T}) {
        CHECK(kleene_and(a, b) == oracle::kAnd[oracle::ix(a)][oracle::ix(b)]);
        CHECK(kleene_or(a, b) == oracle::kOr[oracle::ix(a)][oracle::ix(b)]);
        CHECK(kleene_implies(a, b) == oracle::kImplies[oracle::ix(a)][oracle::ix(b)]);
      }
    }
  }

  TEST_CASE("Johnny: walk(j), the existential and the universal") {
    Model m = corpus::model("johnny.thy");
    CHECK(eval(m, "walk(j)") == Truth3::True);
    auto r = eval_formula(m, parse_formula("exists u:entity . (man(u) & walk(u))", m.signature()), {}, EvalMode::Paper);
    CHECK(r.value == Truth3::True);
    CHECK(r.trace.witness == "J");
    CHECK(eval(m, "forall u:entity . (man(u) -> walk(u))") == Truth3::Unknown);
    CHECK(eval(m, "forall u:entity . (man(u) -> walk(u))", EvalMode::Exhaustive) == Truth3::Unknown);
    CHECK(eval(m, "man(J) & walk(B)") == Truth3::Unknown);
    CHECK(eval(m, "man(M) & walk(B)") == Truth3::False);
    CHECK(eval(m, "~walk(B)") == Truth3::Unknown);
  }

  TEST_CASE("universal trace shows every instance") {
    Model m = corpus::model("johnny.thy");
    auto r = eval_formula(m, parse_formula("forall u:entity . (man(u) -> walk(u))", m.signature()), {}, EvalMode::Paper);
    REQUIRE(r.trace.children.size() == 3);
    CHECK(r.trace.children[1].value == Truth3::True);  // u = M: false antecedent
    CHECK(r.trace.children[2].value == Truth3::Unknown);
    const EvalTrace* blocking = first_unknown_atom(r.trace);
    REQUIRE(blocking);
    CHECK(m.signature().render(*blocking->atom) == "walk(B)");
    std::string text = render_trace(r.trace, m.index());
    CHECK(text.rfind("unknown forall u:entity . (man(u) -> walk(u)) @(w0,0)\n", 0) == 0);
    CHECK(text.find("\n    unknown walk(B) @(w0,0)\n") != std::string::npos);
  }

  TEST_CASE("paper-mode witnesses are not reused within one evaluation") {
    Model m = corpus::model("johnny.thy");
    auto r = eval_formula(m, parse_formula("exists u:entity . exists v:entity . ~(u = v)", m.signature()), {},
                          EvalMode::Paper);
    CHECK(r.value == Truth3::True);
    CHECK(r.trace.witness == "J");
    CHECK(r.trace.children[0].witness == "M");
  }

  TEST_CASE("skolemize picks the first element") {
    Model m = corpus::model("johnny.thy");
    auto s = skolemize_existential(parse_formula("exists u:entity . (man(u) & walk(u))", m.signature()), m);
    CHECK(m.signature().render(s.witness) == "J");
    CHECK(render(s.instance, m.signature()) == "man(J) & walk(J)");
    Model p = corpus::model("pricerise.thy");
    auto t = skolemize_existential(parse_formula("exists x:concept . (price(x) & rise(x))", p.signature()), p);
    CHECK(p.signature().render(t.witness) == "NINIIC");
    auto lt = parse_theory("sort e\nconst only : e constructor\npred p : e\n");
    Model one = build_canonical_model(lt.theory, 0);
    CHECK(one.signature().render(skolemize_existential(parse_formula("exists x:e . p(x)", one.signature()), one).witness) ==
          "only");
    CHECK_THROWS(skolemize_existential(parse_formula("p(only)", one.signature()), one));
  }

  TEST_CASE("quantifying over an empty sort is an error") {
    Theory t;
    SortId s = t.sig.add_sort("e");
    SortId k = t.sig.add_sort("k");
    t.sig.add_constant("c", k, true);
    t.sig.add_predicate("q", {k}, Truth3::False);
    t.sig.add_function("f", {s}, k, false);
    Model m = build_canonical_model(t, 1);
    CHECK_THROWS_WITH_AS(eval_formula(m, fml::exists("x", s, fml::atom(Atom{0, {t.sig.make("c")}})), {}, EvalMode::Paper),
                         doctest::Contains("uninhabited sort"), Error);
  }

  TEST_CASE("modal operators over the time column") {
    Model m = corpus::model("seasons.thy", 0);
    // warm(A) at w1: t0 true, t1 true, t2 false
    CHECK(eval(m, "past warm(A)", EvalMode::Paper, {0, 0}) == Truth3::False);
    CHECK(eval(m, "past warm(A)", EvalMode::Paper, {0, 2}) == Truth3::True);
    CHECK(eval(m, "fut warm(A)", EvalMode::Paper, {0, 0}) == Truth3::True);
    CHECK(eval(m, "fut warm(A)", EvalMode::Paper, {0, 1}) == Truth3::False);
    CHECK(eval(m, "fut warm(A)", EvalMode::Paper, {0, 2}) == Truth3::False);
    CHECK(eval(m, "nec warm(A)", EvalMode::Paper, {0, 0}) == Truth3::False);
    CHECK(eval(m, "nec (warm(A) | ~warm(A))", EvalMode::Paper, {1, 1}) == Truth3::True);
    // Nec stays inside the world: warm(B) holds only at w2 t2.
    CHECK(eval(m, "fut warm(B)", EvalMode::Paper, {0, 0}) == Truth3::False);
    CHECK(eval(m, "fut warm(B)", EvalMode::Paper, {1, 0}) == Truth3::True);
  }

  TEST_CASE("nec with one unknown time is unknown") {
    auto lt = parse_theory(
        "sort e\nconst A : e constructor\npred p : e\ntimes 0 1 2\n"
        "fact p(A) = true at w0 0\nfact p(A) = unknown at w0 1\nfact p(A) = true at w0 2\n");
    Model m = build_canonical_model(lt.theory, 0);
    CHECK(eval(m, "nec p(A)") == Truth3::Unknown);
    CHECK(eval(m, "fut p(A)") == Truth3::True);
    CHECK(eval(m, "past p(A)", EvalMode::Paper, {0, 1}) == Truth3::True);
  }

  TEST_CASE("truth sets") {
    Model m = corpus::model("seasons.thy", 0);
    CHECK(worlds(m, "warm(A)", EvalMode::Paper, 0) == std::vector<std::string>{"w1"});
    CHECK(worlds(m, "wet(B)", EvalMode::Paper, 1) == std::vector<std::string>{"w1", "w2"});
    CHECK(worlds(m, "warm(A) | ~warm(A)", EvalMode::Paper, 2) == std::vector<std::string>{"w1", "w2"});
  }

  TEST_CASE("price/rise per world") {
    Model m = corpus::model("pricerise.thy");
    const std::string f = "exists x:concept . (price(x) & rise(x))";
    CHECK(eval(m, f, EvalMode::Paper, {0, 0}) == Truth3::False);  // witness NINIIC
    CHECK(eval(m, f, EvalMode::Exhaustive, {0, 0}) == Truth3::True);  // NIHUIC
    CHECK(eval(m, "price(NIHUIC)", EvalMode::Paper, {1, 0}) == Truth3::False);
    CHECK(eval(m, "price(NINIIC)", EvalMode::Paper, {1, 0}) == Truth3::Unknown);
    CHECK(eval(m, "price(n)", EvalMode::Paper, {0, 0}) == Truth3::True);
  }

  TEST_CASE("properties over random formulas") {
    for (const char* file : {"johnny.thy", "talkers.thy", "seasons.thy", "pricerise.thy", "blocks.thy"}) {
      Model m = corpus::model(file, 1);
      oracle::FormulaGen gen(m, 42);
      for (int i = 0; i < 100; ++i) {
        FormulaPtr f = gen.make(4);
        CAPTURE(render(f, m.signature()));
        for (std::size_t k = 0; k < m.index().size(); ++k) {
          PointOfReference at = m.index().point(k);
          auto paper = eval_formula(m, f, at, EvalMode::Paper);
          auto full = eval_formula(m, f, at, EvalMode::Exhaustive);
          CHECK(oracle::trace_sound(paper.trace, EvalMode::Paper));
          CHECK(oracle::trace_sound(full.trace, EvalMode::Exhaustive));
          CHECK(eval_value(m, f, at, EvalMode::Paper) == paper.value);
          CHECK(eval_value(m, f, at, EvalMode::Exhaustive) == full.value);
          // Exhaustive dominates paper mode for positive existentials only;
          // check it where no existential sits under a negation.
          std::string text = render(f, m.signature());
          bool negation_free = text.find('~') == std::string::npos && text.find("->") == std::string::npos;
          if (negation_free && paper.value == Truth3::True) CHECK(full.value == Truth3::True);
        }
      }
    }
  }
}
