#include "gdiagram/intension.hpp"

#include <algorithm>
#include <set>

#include "gdiagram/errors.hpp"

namespace gdiag {

void MeaningFunction::assign(const std::string& symbol, const std::string& world, Denotation d) {
  entries_[{symbol, world}] = std::move(d);
}

const Denotation& MeaningFunction::at(const std::string& symbol, const std::string& world) const {
  auto it = entries_.find({symbol, world});
  if (it == entries_.end()) throw UnknownSymbolError("no meaning for '" + symbol + "' at world " + world);
  return it->second;
}

bool MeaningFunction::defined(const std::string& symbol, const std::string& world) const {
  return entries_.count({symbol, world}) > 0;
}

namespace {

SortId ensure_sort(Signature& sig, const char* name) {
  if (auto s = sig.find_sort(name)) return *s;
  return sig.add_sort(name);
}

}  // namespace

MeaningFunction compile_intension(const IntensionalDecls& decls, Theory& theory) {
  Signature& sig = theory.sig;
  const IndexSet& refs = decls.refs;
  if (refs.worlds.empty() || refs.times.empty()) throw Error("index set must have at least one world and time");
  theory.index = refs;
  MeaningFunction meaning;

  SortId entity = ensure_sort(sig, kEntitySort);
  SortId concept_sort = ensure_sort(sig, kConceptSort);
  for (const auto& e : decls.entities) sig.add_constant(e, entity, true);

  std::set<std::string> concept_names;
  for (const auto& c : decls.concepts) {
    for (std::size_t k = 0; k < refs.size(); ++k)
      if (!c.graph.count(refs.point(k)))
        throw Error("concept '" + c.name + "' is undefined at " + refs.render(refs.point(k)));
    for (const auto& [p, e] : c.graph)
      if (std::find(decls.entities.begin(), decls.entities.end(), e) == decls.entities.end())
        throw UnknownSymbolError("concept '" + c.name + "' maps to undeclared entity '" + e + "'");
    sig.add_constant(c.name, concept_sort, true);
    concept_names.insert(c.name);
  }

  if (!decls.concepts.empty()) {
    PredId ext = sig.add_predicate(kExtensionPred, {concept_sort, entity}, Truth3::False);
    for (const auto& c : decls.concepts)
      for (const auto& [p, e] : c.graph)
        theory.diagram.facts.push_back({Atom{ext, {sig.make(c.name), sig.make(e)}}, Truth3::True, p});
  }

  std::map<std::string, const ConceptSet*> sets;
  for (const auto& s : decls.sets) {
    for (const auto* group : {&s.members, &s.unknown})
      for (const auto& c : *group)
        if (!concept_names.count(c))
          throw UnknownSymbolError("concept '" + c + "' referenced by set '" + s.name + "' is not declared");
    sets[s.name] = &s;
  }

  for (const auto& prop : decls.properties) {
    PredId pred = sig.add_predicate(prop.name, {concept_sort}, Truth3::False);
    for (const auto& w : refs.worlds) {
      auto it = prop.set_by_world.find(w);
      if (it == prop.set_by_world.end()) throw Error("property '" + prop.name + "' is missing world " + w);
      auto set = sets.find(it->second);
      if (set == sets.end())
        throw UnknownSymbolError("property '" + prop.name + "' refers to undeclared set '" + it->second + "'");
      meaning.assign(prop.name, w, {Denotation::Kind::ConceptSet, it->second});
      std::size_t wi = *refs.find_world(w);
      for (std::size_t t = 0; t < refs.times.size(); ++t) {
        for (const auto& c : set->second->members)
          theory.diagram.facts.push_back({Atom{pred, {sig.make(c)}}, Truth3::True, PointOfReference{wi, t}});
        for (const auto& c : set->second->unknown)
          theory.diagram.facts.push_back({Atom{pred, {sig.make(c)}}, Truth3::Unknown, PointOfReference{wi, t}});
      }
    }
    for (const auto& [w, s] : prop.set_by_world)
      if (!refs.find_world(w)) throw UnknownSymbolError("property '" + prop.name + "' names unknown world " + w);
  }

  for (const auto& [symbol, target] : decls.constants) {
    bool is_concept = concept_names.count(target) > 0;
    bool is_entity = std::find(decls.entities.begin(), decls.entities.end(), target) != decls.entities.end();
    if (!is_concept && !is_entity) throw UnknownSymbolError("meaning of '" + symbol + "' is undeclared: " + target);
    SortId s = is_concept ? concept_sort : entity;
    if (!sig.find_function(symbol)) sig.add_constant(symbol, s, false);
    theory.diagram.equations.emplace_back(sig.make(symbol), sig.make(target));
    for (const auto& w : refs.worlds)
      meaning.assign(symbol, w, {is_concept ? Denotation::Kind::Concept : Denotation::Kind::Entity, target});
  }
  return meaning;
}

std::vector<IndividualConcept> list_individual_concepts(const std::vector<std::string>& entities,
                                                        const IndexSet& refs, std::size_t max_concepts) {
  if (entities.empty()) throw Error("no entities");
  const std::size_t npoints = refs.size();
  std::size_t count = 1;
  for (std::size_t i = 0; i < npoints; ++i) {
    if (count > max_concepts / entities.size())
      throw ResourceLimitError("more than " + std::to_string(max_concepts) + " individual concepts");
    count *= entities.size();
  }
  std::vector<IndividualConcept> out;
  out.reserve(count);
  std::vector<std::size_t> idx(npoints, 0);
  for (std::size_t n = 0; n < count; ++n) {
    IndividualConcept c;
    for (std::size_t k = 0; k < npoints; ++k) {
      c.graph[refs.point(k)] = entities[idx[k]];
      c.name += entities[idx[k]];
    }
    c.name += "IC";
    out.push_back(std::move(c));
    for (std::size_t pos = npoints; pos-- > 0;) {
      if (++idx[pos] < entities.size()) break;
      idx[pos] = 0;
    }
  }
  return out;
}

IntensionalModel build_intensional_model(const IntensionalDecls& decls) {
  Theory t;
  t.name = "intensional";
  MeaningFunction meaning = compile_intension(decls, t);
  // Only constants live in these sorts, so depth 0 is the whole universe.
  return {decls, std::move(meaning), build_canonical_model(t, 0)};
}

IndexedDiagram as_indexed_diagrams(const Model& model) {
  IndexedDiagram out{model.index(), model.signature(), {}};
  for (std::size_t k = 0; k < model.index().size(); ++k) {
    PointOfReference p = model.index().point(k);
    GDiagram d;
    d.equations = model.theory().diagram.equations;
    for (PredId pr = 0; pr < model.signature().predicates().size(); ++pr) {
      for (const auto& t : model.tuples(pr)) {
        Atom a{pr, {}};
        for (ClassId c : t) a.args.push_back(model.representative(c));
        d.facts.push_back({std::move(a), model.value(pr, t, p), std::nullopt});
      }
    }
    out.diagrams.push_back(std::move(d));
  }
  return out;
}

Theory theory_at(const IndexedDiagram& d, PointOfReference p, const Theory& original) {
  Theory t;
  t.name = original.name + "@" + d.refs.render(p);
  t.sig = d.sig;
  t.diagram = d.at(p);
  t.families = original.families;
  return t;
}

}  // namespace gdiag
