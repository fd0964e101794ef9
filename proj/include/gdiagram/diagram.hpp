#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gdiagram/congruence.hpp"
#include "gdiagram/signature.hpp"
#include "gdiagram/truth.hpp"

namespace gdiag {

/// A (world, time) pair indexing denotations.
struct PointOfReference {
  std::size_t world = 0;
  std::size_t time = 0;

  friend auto operator<=>(const PointOfReference&, const PointOfReference&) = default;
  friend bool operator==(const PointOfReference&, const PointOfReference&) = default;
};

/// Possible worlds I and moments J (in temporal order).
struct IndexSet {
  std::vector<std::string> worlds{"w0"};
  std::vector<std::string> times{"0"};

  std::size_t size() const { return worlds.size() * times.size(); }
  std::size_t flat(PointOfReference p) const { return p.world * times.size() + p.time; }
  PointOfReference point(std::size_t flat_index) const {
    return {flat_index / times.size(), flat_index % times.size()};
  }
  bool contains(PointOfReference p) const { return p.world < worlds.size() && p.time < times.size(); }
  std::optional<std::size_t> find_world(const std::string& name) const;
  std::optional<std::size_t> find_time(const std::string& name) const;
  std::string render(PointOfReference p) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
};

/// An explicit assignment. Facts without a point hold at every point.
struct Fact {
  Atom atom;
  Truth3 value = Truth3::Unknown;
  std::optional<PointOfReference> at;

  friend bool operator==(const Fact&, const Fact&) = default;
};

struct Guard {
  Term lhs;
  Term rhs;

  friend bool operator==(const Guard&, const Guard&) = default;
};

/// pred(head...) = value when <alternative 1> or <alternative 2> ...
/// Each alternative is a conjunction of guard equations. A rule with no
/// alternatives applies unconditionally once the head matches.
struct DiagramRule {
  PredId pred = 0;
  std::vector<Term> head;
  std::vector<std::vector<Guard>> alternatives;
  Truth3 value = Truth3::True;

  friend bool operator==(const DiagramRule&, const DiagramRule&) = default;
};

/// Truth assignment over generated atoms plus ground term equations.
/// `links` records predicates forced to share one denotation.
struct GDiagram {
  std::vector<Fact> facts;
  std::vector<DiagramRule> rules;
  std::vector<Equation> equations;
  std::vector<std::pair<PredId, PredId>> links;

  friend bool operator==(const GDiagram&, const GDiagram&) = default;
};

using Tuple = std::vector<ClassId>;

/// Answers lookup_atom queries for one diagram over one congruence. Facts
/// are resolved to class tuples up front; rules are matched against the
/// congruence classes, so congruent arguments always get the same answer.
class DiagramIndex {
 public:
  DiagramIndex(const Signature& sig, const GDiagram& diagram, const Congruence& cc);

  /// Value of pred(tuple) at `at`: explicit facts, then the first matching
  /// rule, then the predicate default. Throws InconsistencyError when facts
  /// assign both True and False.
  Truth3 lookup(PredId pred, const Tuple& tuple, PointOfReference at) const;
  Truth3 lookup_atom(const Atom& atom, PointOfReference at) const;

  /// Index of the first rule deciding pred(tuple), if any.
  std::optional<std::size_t> matching_rule(PredId pred, const Tuple& tuple) const;

 private:
  struct Scoped {
    std::optional<PointOfReference> at;
    Truth3 value;
  };

  bool rule_matches(const DiagramRule& rule, const Tuple& tuple) const;

  const Signature& sig_;
  const GDiagram& diagram_;
  const Congruence& cc_;
  std::map<std::pair<PredId, Tuple>, std::vector<Scoped>> facts_;
  std::vector<std::vector<ClassId>> classes_by_sort_;
};

/// Convenience wrapper: builds the congruence of the diagram's equations over
/// the atom's terms and looks the atom up at the first point.
Truth3 lookup_atom(const Signature& sig, const GDiagram& diagram, const Atom& atom,
                   PointOfReference at = {});

}  // namespace gdiag
