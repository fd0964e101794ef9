#pragma once

#include <random>
#include <vector>

#include "gdiagram/congruence.hpp"

namespace oracle {

using namespace gdiag;

/// One sort with constants a..d, unary f and binary g.
inline Signature congruence_sig() {
  Signature sig;
  SortId s = sig.add_sort("s");
  for (const char* c : {"a", "b", "c", "d"}) sig.add_constant(c, s, true);
  sig.add_function("f", {s}, s, true);
  sig.add_function("g", {s, s}, s, true);
  return sig;
}

struct CongruenceInstance {
  std::vector<Term> terms;
  std::vector<Equation> equations;
};

inline Term random_term(const Signature& sig, std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> kind(0, depth == 0 ? 0 : 2);
  switch (kind(rng)) {
    case 1: return sig.make("f", {random_term(sig, rng, depth - 1)});
    case 2: return sig.make("g", {random_term(sig, rng, depth - 1), random_term(sig, rng, depth - 1)});
    default: {
      static const char* names[] = {"a", "b", "c", "d"};
      return sig.make(names[std::uniform_int_distribution<int>(0, 3)(rng)]);
    }
  }
}

/// Up to 20 distinct terms of depth <= 3 and up to 6 equations between them.
inline CongruenceInstance random_instance(const Signature& sig, std::uint32_t seed) {
  std::mt19937 rng(seed);
  CongruenceInstance inst;
  std::size_t nterms = std::uniform_int_distribution<std::size_t>(2, 20)(rng);
  for (int guard = 0; inst.terms.size() < nterms && guard < 500; ++guard) {
    Term t = random_term(sig, rng, 3);
    if (std::find(inst.terms.begin(), inst.terms.end(), t) == inst.terms.end()) inst.terms.push_back(t);
  }
  std::size_t neq = std::uniform_int_distribution<std::size_t>(0, 6)(rng);
  std::uniform_int_distribution<std::size_t> pick(0, inst.terms.size() - 1);
  for (std::size_t i = 0; i < neq; ++i) inst.equations.emplace_back(inst.terms[pick(rng)], inst.terms[pick(rng)]);
  return inst;
}

inline std::set<std::set<Term>> as_sets(const std::vector<std::vector<Term>>& partition) {
  std::set<std::set<Term>> out;
  for (const auto& c : partition) out.insert(std::set<Term>(c.begin(), c.end()));
  return out;
}

}  // namespace oracle
