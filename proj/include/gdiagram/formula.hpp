#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gdiagram/errors.hpp"
#include "gdiagram/signature.hpp"

namespace gdiag {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Formula AST node. Children are shared and immutable.
struct Formula {
  enum class Kind : unsigned char { Atom, Equal, Not, And, Or, Implies, Exists, Forall, Nec, Past, Fut };

  Kind kind = Kind::Atom;
  gdiag::Atom atom;      // Atom
  Term lhs, rhs;         // Equal
  FormulaPtr left;       // unary operand, or left operand
  FormulaPtr right;      // binary right operand
  std::string var;       // quantifiers
  SortId var_sort = 0;   // quantifiers

  bool is_quantifier() const { return kind == Kind::Exists || kind == Kind::Forall; }
  bool is_modal() const { return kind == Kind::Nec || kind == Kind::Past || kind == Kind::Fut; }
  bool is_binary() const { return kind == Kind::And || kind == Kind::Or || kind == Kind::Implies; }
};

bool operator==(const Formula& a, const Formula& b);

namespace fml {

FormulaPtr atom(gdiag::Atom a);
FormulaPtr equal(Term lhs, Term rhs);
FormulaPtr negate(FormulaPtr f);
FormulaPtr conj(FormulaPtr f, FormulaPtr g);
FormulaPtr disj(FormulaPtr f, FormulaPtr g);
FormulaPtr implies(FormulaPtr f, FormulaPtr g);
FormulaPtr exists(std::string var, SortId sort, FormulaPtr body);
FormulaPtr forall(std::string var, SortId sort, FormulaPtr body);
FormulaPtr nec(FormulaPtr f);
FormulaPtr past(FormulaPtr f);
FormulaPtr fut(FormulaPtr f);

}  // namespace fml

bool equal_formulas(const FormulaPtr& a, const FormulaPtr& b);

/// Parses the textual formula language against `sig`.
///
///   formula := quant | impl
///   quant   := ("exists"|"forall") IDENT ":" IDENT "." formula
///            | ("nec"|"past"|"fut") formula
///   impl    := disj ("->" impl)?
///   disj    := conj ("|" conj)*
///   conj    := neg ("&" neg)*
///   neg     := "~" neg | "(" formula ")" | atom
///   atom    := IDENT "(" term ("," term)* ")" | term "=" term
///   term    := IDENT ("(" term ("," term)* ")")?
///
/// Throws ParseError (with line/column), UnknownSymbolError,
/// UnboundVariableError or SortError.
FormulaPtr parse_formula(std::string_view text, const Signature& sig);

/// Parses a single term; free identifiers resolve against `vars` first.
Term parse_term(std::string_view text, const Signature& sig,
                const std::map<std::string, SortId>& vars = {});

/// Renders a formula so that parse_formula gives back the same AST.
std::string render(const FormulaPtr& f, const Signature& sig);

/// Replaces free occurrences of `var` with `value`.
FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const Term& value);

/// Free variables, in order of first occurrence.
std::vector<std::string> free_variables(const FormulaPtr& f);

/// Formula nesting depth (atoms have depth 0).
int formula_depth(const FormulaPtr& f);

class UnboundVariableError : public UnknownSymbolError {
 public:
  using UnknownSymbolError::UnknownSymbolError;
};

/// A family of unary predicates indexed by name, standing in for lambda
/// abstraction over predicates: applying the family at an index to an
/// element is membership of the element in that predicate's denotation.
struct IndexedFunctionFamily {
  std::string name;
  std::map<std::string, PredId> members;
};

/// Checks that all members share one argument sort profile.
void validate_family(const Signature& sig, const IndexedFunctionFamily& family);

/// family[index](element) as an atom. Throws UnknownSymbolError for an
/// unknown index and SortError when the element does not fit.
Atom apply_family(const Signature& sig, const IndexedFunctionFamily& family, const std::string& index,
                  const Term& element);

}  // namespace gdiag
