#include <doctest.h>

#include "gdiagram/errors.hpp"
#include "gdiagram/signature.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace gdiag;

namespace {

Signature blocks_sig() {
  Signature sig;
  SortId block = sig.add_sort("block");
  SortId table = sig.add_sort("table");
  for (const char* b : {"A", "B", "C"}) sig.add_constant(b, block, true);
  sig.add_constant("Tab0", table, true);
  sig.add_function("put", {block, block, table}, table, true);
  sig.add_predicate("top", {block, block, table}, Truth3::False);
  return sig;
}

bool mentions(const std::vector<Diagnostic>& ds, const std::string& text) {
  for (const auto& d : ds)
    if (d.message.find(text) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_SUITE("signature") {
  TEST_CASE("blocks signature validates") { CHECK(validate_signature(blocks_sig()).empty()); }

  TEST_CASE("duplicate constant is diagnosed") {
    Signature sig = blocks_sig();
    sig.add_constant("A", sig.sort_id("block"), true);
    CHECK(mentions(validate_signature(sig), "duplicate symbol"));
  }

  TEST_CASE("predicate over a sort without constructors is diagnosed") {
    Signature sig;
    SortId s = sig.add_sort("ghost");
    sig.add_constant("g", s, false);
    sig.add_predicate("p", {s}, Truth3::False);
    CHECK(mentions(validate_signature(sig), "uninhabited sort"));
  }

  TEST_CASE("sort reachable only through a composite constructor is inhabited") {
    Signature sig;
    SortId a = sig.add_sort("a");
    SortId b = sig.add_sort("b");
    sig.add_constant("k", a, true);
    sig.add_function("wrap", {a}, b, true);
    sig.add_predicate("p", {b}, Truth3::False);
    CHECK(validate_signature(sig).empty());
  }

  TEST_CASE("unresolved sort reference is diagnosed") {
    Signature sig;
    sig.add_sort("a");
    sig.add_function("f", {7}, 0, true);
    CHECK(mentions(validate_signature(sig), "unresolved sort"));
  }

  TEST_CASE("table terms at depth 0 and 1") {
    Signature sig = blocks_sig();
    SortId table = sig.sort_id("table");
    auto d0 = generate_terms(sig, table, 0);
    REQUIRE(d0.size() == 1);
    CHECK(sig.render(d0[0]) == "Tab0");
    auto d1 = generate_terms(sig, table, 1);
    CHECK(d1.size() == 10);
    CHECK(std::set<Term>(d1.begin(), d1.end()) == oracle::all_terms(sig, table, 1));
    CHECK(sig.render(d1[1]) == "put(A,A,Tab0)");
    CHECK(sig.render(d1[9]) == "put(C,C,Tab0)");
  }

  TEST_CASE("constants-only sort is depth independent") {
    Signature sig = blocks_sig();
    for (int d = 0; d <= 3; ++d) CHECK(generate_terms(sig, sig.sort_id("block"), d).size() == 3);
  }

  TEST_CASE("depth bound is enforced") {
    Signature sig = blocks_sig();
    CHECK_THROWS_AS(generate_terms(sig, sig.sort_id("table"), 7), ResourceLimitError);
    TermLimits small{6, 50};
    CHECK_THROWS_AS(generate_terms(sig, sig.sort_id("table"), 2, small), ResourceLimitError);
  }

  TEST_CASE("corpus: prefix monotonicity, sort soundness and counts against brute force") {
    for (const char* file : {"johnny.thy", "blocks.thy", "strings.thy", "talkers.thy", "seasons.thy", "pricerise.thy"}) {
      CAPTURE(file);
      Signature sig = corpus::theory(file).sig;
      for (SortId s = 0; s < sig.sorts().size(); ++s) {
        std::vector<Term> prev;
        int max_depth = sig.sort(s).name == "str" ? 2 : 3;  // strings grow as n^(2^d)
        for (int d = 0; d <= max_depth; ++d) {
          auto cur = generate_terms(sig, s, d);
          REQUIRE(cur.size() >= prev.size());
          CHECK(std::equal(prev.begin(), prev.end(), cur.begin()));
          for (const auto& t : cur) CHECK(t.sort == s);
          auto brute = oracle::all_terms(sig, s, d);
          CHECK(cur.size() == brute.size());
          CHECK(std::set<Term>(cur.begin(), cur.end()) == brute);
          prev = std::move(cur);
        }
      }
    }
  }

  TEST_CASE("check_sorts rejects ill-sorted terms") {
    Signature sig = blocks_sig();
    Term bad = Term::app(sig.function_id("put"), sig.sort_id("table"),
                         {sig.make("A"), sig.make("Tab0"), sig.make("Tab0")});
    CHECK_THROWS_AS(check_sorts(sig, bad), SortError);
    CHECK_THROWS_AS(sig.make("put", {sig.make("A")}), SortError);
    CHECK_THROWS_AS(sig.make("nope"), UnknownSymbolError);
  }

  TEST_CASE("term depth and rendering") {
    Signature sig = blocks_sig();
    Term t = sig.make("put", {sig.make("A"), sig.make("B"), sig.make("put", {sig.make("B"), sig.make("C"), sig.make("Tab0")})});
    CHECK(t.depth() == 2);
    CHECK(t.is_ground());
    CHECK(sig.render(t) == "put(A,B,put(B,C,Tab0))");
  }
}
