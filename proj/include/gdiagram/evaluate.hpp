#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gdiagram/formula.hpp"
#include "gdiagram/model.hpp"

namespace gdiag {

/// How existentials pick instances. Universals always check every element.
///  - Paper: a single Skolem witness, the first universe element of the sort
///    (in generation order) not yet used as a witness in this evaluation.
///  - Exhaustive: Kleene disjunction over every element.
enum class EvalMode { Paper, Exhaustive };

std::string_view to_string(EvalMode m);
std::optional<EvalMode> parse_mode(std::string_view s);

/// One node per subformula instance, mirroring the evaluation.
struct EvalTrace {
  Formula::Kind kind = Formula::Kind::Atom;
  std::string formula;
  Truth3 value = Truth3::Unknown;
  PointOfReference at;
  /// Witness of an existential, or counterexample of a universal.
  std::optional<std::string> witness;
  /// Set on atom nodes: the atom over class representatives.
  std::optional<Atom> atom;
  std::vector<EvalTrace> children;
};

struct EvalResult {
  Truth3 value = Truth3::Unknown;
  EvalTrace trace;
};

/// Hypothetical atom values layered over a model, keyed by (predicate,
/// tuple, flat point index).
using Overlay = std::map<std::tuple<PredId, Tuple, std::size_t>, Truth3>;

/// Strong Kleene evaluation of a closed formula at a point of reference.
/// Throws UnboundVariableError for open formulas and Error("uninhabited
/// sort ...") when a quantified sort has no elements.
EvalResult eval_formula(const Model& model, const FormulaPtr& f, PointOfReference at, EvalMode mode,
                        const Overlay* overlay = nullptr);

/// Value only; skips building the trace.
Truth3 eval_value(const Model& model, const FormulaPtr& f, PointOfReference at, EvalMode mode,
                  const Overlay* overlay = nullptr);

struct SkolemInstance {
  FormulaPtr instance;
  Term witness;
};

/// Replaces the existential's bound variable by the paper-mode witness: the
/// first element of the sort in generation order.
SkolemInstance skolemize_existential(const FormulaPtr& f, const Model& model);

/// Nec: conjunction over every time of the current world. Past / Fut:
/// disjunction over the strictly earlier / later times (False when empty).
Truth3 eval_modal(const Model& model, Formula::Kind op, const FormulaPtr& body, PointOfReference at,
                  EvalMode mode);

/// Worlds where the formula evaluates to True at the given time.
std::vector<std::size_t> truth_set(const Model& model, const FormulaPtr& f, std::size_t time, EvalMode mode);

/// Indented text, one node per line: `<value> <formula> @(i,j) [witness=t]`.
std::string render_trace(const EvalTrace& trace, const IndexSet& index);

/// First atom node valued Unknown, in pre-order.
const EvalTrace* first_unknown_atom(const EvalTrace& trace);

}  // namespace gdiag
