#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "gdiagram/signature.hpp"

namespace gdiag {

using ClassId = std::size_t;
using Equation = std::pair<Term, Term>;

/// Union-find over term indices with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0);

  std::size_t find(std::size_t x);
  std::size_t find(std::size_t x) const;
  /// Returns true when two distinct sets were merged.
  bool unite(std::size_t a, std::size_t b);
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
};

/// The smallest congruence containing a set of ground equations, over a
/// subterm-closed table of ground terms. Class ids are dense and numbered in
/// the order the classes first appear in the term table, so the caller's
/// term order fixes representative choice.
class Congruence {
 public:
  Congruence() = default;
  Congruence(const std::vector<Term>& terms, const std::vector<Equation>& equations);

  /// Class of a ground term. Terms outside the table still resolve when
  /// their head applied to the classes of their arguments is in the table.
  std::optional<ClassId> find(const Term& t) const;
  bool congruent(const Term& a, const Term& b) const;

  std::size_t class_count() const { return members_.size(); }
  std::size_t term_count() const { return terms_.size(); }
  const Term& term(std::size_t idx) const { return terms_[idx]; }
  /// Term indices of a class, in table order.
  const std::vector<std::size_t>& members(ClassId c) const { return members_.at(c); }
  ClassId class_of_index(std::size_t idx) const { return class_of_[idx]; }
  /// Classes of the arguments of table term `idx`.
  const std::vector<ClassId>& arg_classes(std::size_t idx) const { return arg_classes_[idx]; }

 private:
  std::size_t intern(const Term& t);

  std::vector<Term> terms_;
  std::map<Term, std::size_t> index_;
  std::vector<ClassId> class_of_;
  std::vector<std::vector<ClassId>> arg_classes_;
  std::vector<std::vector<std::size_t>> members_;
  std::map<std::pair<FuncId, std::vector<ClassId>>, ClassId> signature_table_;
};

/// Partition of `terms` induced by the congruence closure of `equations`
/// (computed over `terms`, the equation sides, and all their subterms).
/// Classes appear in order of their first member in `terms`.
std::vector<std::vector<Term>> congruence_close(const std::vector<Equation>& equations,
                                                const std::vector<Term>& terms);

}  // namespace gdiag
