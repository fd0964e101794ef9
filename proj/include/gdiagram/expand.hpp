#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gdiagram/model.hpp"

namespace gdiag {

struct ConsistencyVerdict {
  bool consistent = true;
  std::string reason;

  explicit operator bool() const { return consistent; }
};

/// A value the caller still has to confirm after predicates were merged.
struct Obligation {
  Atom atom;
  Truth3 required = Truth3::True;
  PointOfReference at;
  ExpansionStep provenance;
};

struct ConsistencyOptions {
  /// Search nodes before giving up with ResourceLimitError.
  std::size_t max_nodes = 200000;
};

/// Would atom := value (at one point, or at every point when `at` is empty)
/// keep the model consistent? Inconsistent when the assignment, propagated
/// through congruence and predicate links, meets an opposite definite value,
/// or when no completion of the remaining unknown atoms satisfies every
/// ground axiom instance.
ConsistencyVerdict check_consistency(const Model& model, const Atom& atom, Truth3 value,
                                     std::optional<PointOfReference> at = std::nullopt,
                                     const ConsistencyOptions& options = {});

/// New snapshot with the atom fixed to a definite value. Forcing an atom to
/// the value it already has returns the model unchanged. Throws
/// InconsistencyError when check_consistency rejects the assignment.
Model force(const Model& model, const Atom& atom, Truth3 value, std::optional<PointOfReference> at = std::nullopt);

/// Puts a tuple into a predicate's members (a force to True recorded as a
/// set extension).
Model extend_set(const Model& model, PredId pred, const std::vector<Term>& tuple,
                 std::optional<PointOfReference> at = std::nullopt);

/// Adds a fresh constructor constant of `sort` and regenerates the universe
/// at the same depth. New tuples take the predicates' defaults.
Model add_element(const Model& model, SortId sort, const std::string& name);

/// True when p and q agree everywhere with nothing unknown, False when some
/// tuple is a definite member of one and a definite non-member of the other,
/// Unknown otherwise. Checked across every point of reference.
Truth3 test_function_equality(const Model& model, PredId p, PredId q);

struct MergeResult {
  Model model;
  std::vector<Obligation> obligations;
};

/// Links p and q so they share the join of their denotations. Every tuple
/// that is unknown on one side and definite on the other yields an
/// obligation for the unknown side.
MergeResult force_predicates_equal(const Model& model, PredId p, PredId q);

}  // namespace gdiag
