#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "gdiagram/congruence.hpp"
#include "gdiagram/diagram.hpp"
#include "gdiagram/formula.hpp"
#include "gdiagram/signature.hpp"

namespace gdiag {

struct Axiom {
  std::string text;
  FormulaPtr formula;
};

/// Everything a canonical model is built from.
struct Theory {
  std::string name;
  Signature sig;
  GDiagram diagram;
  std::vector<Axiom> axioms;
  IndexSet index;
  std::vector<IndexedFunctionFamily> families;

  const IndexedFunctionFamily* find_family(const std::string& family_name) const;
};

/// Changes an expansion step makes to a theory's diagram and signature.
struct DiagramDelta {
  std::vector<Fact> facts;
  std::vector<FuncSymbol> constants;
  std::vector<std::pair<PredId, PredId>> links;
};

struct ExpansionStep {
  enum class Kind { Force, AddElement, ExtendSet, MergePredicates };

  Kind kind = Kind::Force;
  /// The step as a session command, e.g. "force walk(B) true".
  std::string command;
  DiagramDelta delta;
};

std::string_view to_string(ExpansionStep::Kind k);

void apply_delta(Theory& theory, const DiagramDelta& delta);

/// A predicate denotation split into definite members, definite
/// non-members, and unknowns. The three sets are disjoint.
class PartialSet {
 public:
  void insert(const Tuple& t, Truth3 v);
  /// Unknown for tuples in none of the sets.
  Truth3 value(const Tuple& t) const;
  bool contains(const Tuple& t) const;

  const std::set<Tuple>& members() const { return members_; }
  const std::set<Tuple>& non_members() const { return non_members_; }
  const std::set<Tuple>& unknowns() const { return unknowns_; }
  std::size_t size() const { return members_.size() + non_members_.size() + unknowns_.size(); }

  friend bool operator==(const PartialSet&, const PartialSet&) = default;

 private:
  std::set<Tuple> members_;
  std::set<Tuple> non_members_;
  std::set<Tuple> unknowns_;
};

struct BuildOptions {
  TermLimits limits;
};

/// Canonical model of a theory at a depth bound: congruence classes of the
/// generated constructor terms, with one PartialSet per predicate and point
/// of reference. Immutable once built.
class Model {
 public:
  const Theory& theory() const { return theory_; }
  const Signature& signature() const { return theory_.sig; }
  const IndexSet& index() const { return theory_.index; }
  const std::shared_ptr<const Theory>& base() const { return base_; }
  const std::vector<ExpansionStep>& history() const { return history_; }
  int depth() const { return depth_; }
  const BuildOptions& options() const { return options_; }

  const Congruence& congruence() const { return cc_; }
  /// Universe classes of a sort, ordered by their earliest generated term.
  const std::vector<ClassId>& universe(SortId sort) const { return universe_.at(sort); }
  const Term& representative(ClassId c) const { return representative_.at(c); }
  bool in_universe(ClassId c) const { return representative_.count(c) > 0; }
  std::optional<ClassId> resolve(const Term& t) const;
  /// Resolves every argument; throws when a term has no denotation.
  Tuple resolve_tuple(const std::vector<Term>& args) const;

  const PartialSet& denotation(PredId pred, PointOfReference at = {}) const;
  Truth3 value(PredId pred, const Tuple& tuple, PointOfReference at = {}) const;
  Truth3 value(const Atom& atom, PointOfReference at = {}) const;

  /// All tuples of a predicate's sort profile, in lexicographic class order.
  std::vector<Tuple> tuples(PredId pred) const;

  std::string render(ClassId c) const;
  std::string render(const Tuple& t) const;
  std::string render(PredId pred, const Tuple& t) const;
  /// Paper-style "{J, M, B?}": members and unknowns in tuple order.
  std::string render(const PartialSet& s) const;

  /// Line-oriented `KEY: value` report of the whole model.
  std::string report() const;

  friend Model build_model(std::shared_ptr<const Theory> base, Theory effective,
                           std::vector<ExpansionStep> history, int depth, const BuildOptions& options);

 private:
  Model() = default;

  std::shared_ptr<const Theory> base_;
  Theory theory_;
  std::vector<ExpansionStep> history_;
  int depth_ = 0;
  BuildOptions options_;
  Congruence cc_;
  std::vector<std::vector<ClassId>> universe_;
  std::map<ClassId, Term> representative_;
  std::vector<std::vector<PartialSet>> denotation_;  // [flat point][pred]
};

/// Builds the model of `effective` (the base theory with `history` already
/// applied). Throws InconsistencyError when facts conflict, linked
/// predicates disagree, or a ground axiom instance evaluates to False.
Model build_model(std::shared_ptr<const Theory> base, Theory effective, std::vector<ExpansionStep> history,
                  int depth, const BuildOptions& options = {});

/// Builds the canonical model of a theory at the given depth bound.
Model build_canonical_model(const Theory& theory, int depth = 2, const BuildOptions& options = {});

/// Rebuilds a model's base theory with a prefix of its history replayed.
Model replay(const Model& model, std::size_t steps);

}  // namespace gdiag
