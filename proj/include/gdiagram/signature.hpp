#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gdiagram/truth.hpp"

namespace gdiag {

using SortId = std::size_t;
using FuncId = std::size_t;
using PredId = std::size_t;

struct Sort {
  std::string name;
};

/// A function symbol. Constants have no argument sorts. Constructors are the
/// minimal family that generates the universe; the others only receive
/// denotations through declared equations.
struct FuncSymbol {
  std::string name;
  std::vector<SortId> arg_sorts;
  SortId result_sort = 0;
  bool is_constructor = false;

  std::size_t arity() const { return arg_sorts.size(); }
};

/// `default_truth` is what an atom gets when no fact or rule decides it:
/// False for closed predicates, Unknown for open ones.
struct PredSymbol {
  std::string name;
  std::vector<SortId> arg_sorts;
  Truth3 default_truth = Truth3::False;

  std::size_t arity() const { return arg_sorts.size(); }
};

/// A first-order term. Application nodes reference a function symbol by id;
/// variable nodes carry a name and a sort.
struct Term {
  enum class Kind : unsigned char { App, Var };

  Kind kind = Kind::App;
  FuncId func = 0;
  std::string var;
  SortId sort = 0;
  std::vector<Term> args;

  static Term app(FuncId f, SortId result, std::vector<Term> args = {}) {
    Term t;
    t.kind = Kind::App;
    t.func = f;
    t.sort = result;
    t.args = std::move(args);
    return t;
  }

  static Term variable(std::string name, SortId sort) {
    Term t;
    t.kind = Kind::Var;
    t.var = std::move(name);
    t.sort = sort;
    return t;
  }

  bool is_var() const { return kind == Kind::Var; }
  bool is_ground() const;
  /// Nesting depth; constants and variables have depth 0.
  int depth() const;

  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
  friend bool operator==(const Term& a, const Term& b);
};

/// A predicate applied to terms. Ground atoms are what diagrams assign.
struct Atom {
  PredId pred = 0;
  std::vector<Term> args;

  friend auto operator<=>(const Atom&, const Atom&) = default;
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Diagnostic {
  std::string message;
};

/// Sorts, function symbols and predicates of a theory. Symbol ids are stable:
/// symbols are only ever appended.
class Signature {
 public:
  SortId add_sort(const std::string& name);
  FuncId add_function(const std::string& name, std::vector<SortId> arg_sorts, SortId result,
                      bool is_constructor);
  FuncId add_constant(const std::string& name, SortId sort, bool is_constructor) {
    return add_function(name, {}, sort, is_constructor);
  }
  PredId add_predicate(const std::string& name, std::vector<SortId> arg_sorts, Truth3 default_truth);

  const std::vector<Sort>& sorts() const { return sorts_; }
  const std::vector<FuncSymbol>& functions() const { return funcs_; }
  const std::vector<PredSymbol>& predicates() const { return preds_; }

  const Sort& sort(SortId id) const { return sorts_.at(id); }
  const FuncSymbol& function(FuncId id) const { return funcs_.at(id); }
  const PredSymbol& predicate(PredId id) const { return preds_.at(id); }

  // Name lookups return the first declaration with that name.
  std::optional<SortId> find_sort(const std::string& name) const;
  std::optional<FuncId> find_function(const std::string& name) const;
  std::optional<PredId> find_predicate(const std::string& name) const;

  SortId sort_id(const std::string& name) const;
  FuncId function_id(const std::string& name) const;
  PredId predicate_id(const std::string& name) const;

  bool has_symbol(const std::string& name) const;

  /// Builds f(args), checking arity and argument sorts.
  Term make(const std::string& fname, std::vector<Term> args = {}) const;

  std::string render(const Term& t) const;
  std::string render(const Atom& a) const;

  friend bool operator==(const Signature&, const Signature&);

 private:
  std::vector<Sort> sorts_;
  std::vector<FuncSymbol> funcs_;
  std::vector<PredSymbol> preds_;
};

bool operator==(const Sort&, const Sort&);
bool operator==(const FuncSymbol&, const FuncSymbol&);
bool operator==(const PredSymbol&, const PredSymbol&);

/// Empty iff every sort reference resolves, names are unique and every sort
/// used by a predicate is inhabited by constructor terms.
std::vector<Diagnostic> validate_signature(const Signature& sig);

/// Limits on universe generation.
struct TermLimits {
  int max_depth = 6;
  std::size_t max_terms = 200000;
};

/// All ground constructor terms of `sort` with depth <= `depth`. Layer by
/// layer: constants in declaration order, then for each depth k the terms of
/// depth exactly k, by constructor declaration order and lexicographically by
/// the positions of their arguments. Hence the result at depth d is a prefix
/// of the result at depth d + 1.
std::vector<Term> generate_terms(const Signature& sig, SortId sort, int depth,
                                 const TermLimits& limits = {});

/// Same enumeration for every sort at once, indexed by SortId.
std::vector<std::vector<Term>> generate_universe(const Signature& sig, int depth,
                                                 const TermLimits& limits = {});

/// Checks that `t` is well sorted against `sig`; throws SortError otherwise.
void check_sorts(const Signature& sig, const Term& t);
void check_sorts(const Signature& sig, const Atom& a);

}  // namespace gdiag
