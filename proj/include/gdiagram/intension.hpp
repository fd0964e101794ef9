#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gdiagram/diagram.hpp"
#include "gdiagram/model.hpp"

namespace gdiag {

/// A total map from points of reference to entity names.
struct IndividualConcept {
  std::string name;
  std::map<PointOfReference, std::string> graph;

  friend bool operator==(const IndividualConcept&, const IndividualConcept&) = default;
};

/// A world-independent set of individual concepts; `unknown` holds the
/// "?"-marked members.
struct ConceptSet {
  std::string name;
  std::vector<std::string> members;
  std::vector<std::string> unknown;
};

/// A world-indexed family of concept sets, named by the predicate it
/// interprets.
struct ConceptProperty {
  std::string name;
  std::map<std::string, std::string> set_by_world;
};

struct Denotation {
  enum class Kind { Entity, Concept, ConceptSet };
  Kind kind = Kind::Concept;
  std::string target;
};

/// (symbol, world) -> denotation.
class MeaningFunction {
 public:
  void assign(const std::string& symbol, const std::string& world, Denotation d);
  const Denotation& at(const std::string& symbol, const std::string& world) const;
  bool defined(const std::string& symbol, const std::string& world) const;
  const std::map<std::pair<std::string, std::string>, Denotation>& entries() const { return entries_; }

 private:
  std::map<std::pair<std::string, std::string>, Denotation> entries_;
};

/// Declarations of an intensional model, as written in a theory file.
struct IntensionalDecls {
  IndexSet refs;
  std::vector<std::string> entities;
  std::vector<IndividualConcept> concepts;
  std::vector<ConceptSet> sets;
  std::vector<ConceptProperty> properties;
  /// Rigid constant meanings, e.g. n -> NINIIC.
  std::vector<std::pair<std::string, std::string>> constants;

  bool empty() const {
    return entities.empty() && concepts.empty() && sets.empty() && properties.empty() && constants.empty();
  }
};

/// Sort names used for compiled intensional declarations.
inline constexpr const char* kEntitySort = "entity";
inline constexpr const char* kConceptSort = "concept";
/// Built-in predicate ext(c, e): concept c picks out entity e at the point.
inline constexpr const char* kExtensionPred = "ext";

/// Adds the declarations to a theory: entity and concept constants, one
/// closed predicate per property with point-scoped facts ("?" members become
/// Unknown facts), ext/2 facts for every concept graph, and equations for
/// constant meanings. Returns the meaning function.
MeaningFunction compile_intension(const IntensionalDecls& decls, Theory& theory);

struct IntensionalModel {
  IntensionalDecls decls;
  MeaningFunction meaning;
  Model model;
};

/// Every total map from `refs` to `entities`, named by concatenating the
/// entity names point by point plus "IC" (so NI, HU over I1, I2 gives
/// NINIIC, NIHUIC, HUNIIC, HUHUIC). The first point varies slowest.
std::vector<IndividualConcept> list_individual_concepts(const std::vector<std::string>& entities,
                                                        const IndexSet& refs, std::size_t max_concepts = 10000);

IntensionalModel build_intensional_model(const IntensionalDecls& decls);

/// One diagram per point of reference, flat-indexed like IndexSet::flat.
struct IndexedDiagram {
  IndexSet refs;
  Signature sig;
  std::vector<GDiagram> diagrams;

  const GDiagram& at(PointOfReference p) const { return diagrams.at(refs.flat(p)); }
};

/// Explicit per-point diagrams: every tuple of every predicate as a fact,
/// plus the model's equations.
IndexedDiagram as_indexed_diagrams(const Model& model);

/// Single-point theory whose canonical model reproduces the diagram at `p`.
Theory theory_at(const IndexedDiagram& d, PointOfReference p, const Theory& original);

}  // namespace gdiag
