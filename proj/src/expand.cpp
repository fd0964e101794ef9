#include "gdiagram/expand.hpp"

#include "gdiagram/errors.hpp"
#include "gdiagram/evaluate.hpp"

namespace gdiag {

namespace {

std::string scope_suffix(const Model& model, const std::optional<PointOfReference>& at) {
  if (!at) return "";
  return " at " + model.index().worlds.at(at->world) + " " + model.index().times.at(at->time);
}

std::vector<PointOfReference> points_of(const Model& model, const std::optional<PointOfReference>& at) {
  if (at) {
    if (!model.index().contains(*at)) throw Error("point of reference out of range");
    return {*at};
  }
  std::vector<PointOfReference> out;
  for (std::size_t k = 0; k < model.index().size(); ++k) out.push_back(model.index().point(k));
  return out;
}

Model extend_model(const Model& model, ExpansionStep step) {
  Theory t = model.theory();
  apply_delta(t, step.delta);
  auto hist = model.history();
  hist.push_back(std::move(step));
  return build_model(model.base(), std::move(t), std::move(hist), model.depth(), model.options());
}

/// Satisfiability of the ground axiom instances over the model's unknown
/// atoms. Branches on the first unknown atom of the first undecided axiom
/// instance; strong Kleene evaluation prunes partial assignments that
/// already falsify an instance.
class CompletionSearch {
 public:
  CompletionSearch(const Model& model, const ConsistencyOptions& options) : model_(model), options_(options) {
    const auto npreds = model.signature().predicates().size();
    UnionFind groups(npreds);
    for (auto [p, q] : model.theory().diagram.links) groups.unite(p, q);
    linked_.resize(npreds);
    for (PredId p = 0; p < npreds; ++p)
      for (PredId q = 0; q < npreds; ++q)
        if (groups.find(p) == groups.find(q)) linked_[p].push_back(q);
  }

  bool satisfiable() {
    Overlay overlay;
    return search(overlay);
  }

 private:
  bool search(Overlay& overlay) {
    if (++nodes_ > options_.max_nodes) throw ResourceLimitError("consistency search exceeded its node budget");
    const FormulaPtr* open = nullptr;
    PointOfReference open_at;
    for (const auto& ax : model_.theory().axioms) {
      for (std::size_t k = 0; k < model_.index().size(); ++k) {
        PointOfReference p = model_.index().point(k);
        Truth3 v = eval_value(model_, ax.formula, p, EvalMode::Exhaustive, &overlay);
        if (v == Truth3::False) return false;
        if (v == Truth3::Unknown && !open) {
          open = &ax.formula;
          open_at = p;
        }
      }
    }
    if (!open) return true;

    EvalResult r = eval_formula(model_, *open, open_at, EvalMode::Exhaustive, &overlay);
    const EvalTrace* node = first_unknown_atom(r.trace);
    if (!node) return false;  // cannot happen: an unknown instance has an unknown atom
    Tuple tuple = model_.resolve_tuple(node->atom->args);
    std::size_t flat = model_.index().flat(node->at);
    for (Truth3 v : {Truth3::True, Truth3::False}) {
      Overlay next = overlay;
      for (PredId q : linked_[node->atom->pred]) next[{q, tuple, flat}] = v;
      if (search(next)) return true;
    }
    return false;
  }

  const Model& model_;
  ConsistencyOptions options_;
  std::vector<std::vector<PredId>> linked_;
  std::size_t nodes_ = 0;
};

}  // namespace

ConsistencyVerdict check_consistency(const Model& model, const Atom& atom, Truth3 value,
                                     std::optional<PointOfReference> at, const ConsistencyOptions& options) {
  if (!is_definite(value)) throw Error("consistency is checked for definite values only");
  check_sorts(model.signature(), atom);
  Tuple tuple = model.resolve_tuple(atom.args);
  // Definite values, whether from facts, rules or a closed default, are final.
  for (auto p : points_of(model, at)) {
    Truth3 cur = model.value(atom.pred, tuple, p);
    if (is_definite(cur) && cur != value)
      return {false, model.signature().render(atom) + " is already " + std::string(to_string(cur)) + " at " +
                         model.index().render(p)};
  }

  Theory t = model.theory();
  t.diagram.facts.push_back({atom, value, at});
  std::optional<Model> next;
  try {
    next.emplace(build_model(model.base(), std::move(t), model.history(), model.depth(), model.options()));
  } catch (const InconsistencyError& e) {
    return {false, e.what()};
  }
  if (next->theory().axioms.empty()) return {true, ""};
  CompletionSearch search(*next, options);
  if (!search.satisfiable())
    return {false, "no completion of the unknown atoms satisfies the axioms with " +
                       model.signature().render(atom) + " = " + std::string(to_string(value))};
  return {true, ""};
}

Model force(const Model& model, const Atom& atom, Truth3 value, std::optional<PointOfReference> at) {
  if (!is_definite(value)) throw Error("atoms can only be forced to true or false");
  check_sorts(model.signature(), atom);
  Tuple tuple = model.resolve_tuple(atom.args);
  bool already = true;
  for (auto p : points_of(model, at))
    if (model.value(atom.pred, tuple, p) != value) already = false;
  if (already) return model;

  if (auto verdict = check_consistency(model, atom, value, at); !verdict) throw InconsistencyError(verdict.reason);
  ExpansionStep step;
  step.kind = ExpansionStep::Kind::Force;
  step.command = "force " + model.signature().render(atom) + " " + std::string(to_string(value)) + scope_suffix(model, at);
  step.delta.facts.push_back({atom, value, at});
  return extend_model(model, std::move(step));
}

Model extend_set(const Model& model, PredId pred, const std::vector<Term>& tuple, std::optional<PointOfReference> at) {
  Atom atom{pred, tuple};
  Model forced = force(model, atom, Truth3::True, at);
  if (forced.history().size() == model.history().size()) return forced;
  // Same delta, recorded as a set extension.
  std::vector<ExpansionStep> hist = forced.history();
  ExpansionStep& step = hist.back();
  step.kind = ExpansionStep::Kind::ExtendSet;
  std::string cmd = "extend " + model.signature().predicate(pred).name;
  for (const auto& t : tuple) cmd += " " + model.signature().render(t);
  step.command = cmd + scope_suffix(model, at);
  return build_model(forced.base(), forced.theory(), std::move(hist), forced.depth(), forced.options());
}

Model add_element(const Model& model, SortId sort, const std::string& name) {
  const Signature& sig = model.signature();
  if (sort >= sig.sorts().size()) throw SortError("unknown sort");
  if (sig.has_symbol(name) || sig.find_sort(name)) throw Error("duplicate name '" + name + "'");
  ExpansionStep step;
  step.kind = ExpansionStep::Kind::AddElement;
  step.command = "add " + sig.sort(sort).name + " " + name;
  step.delta.constants.push_back({name, {}, sort, true});
  return extend_model(model, std::move(step));
}

Truth3 test_function_equality(const Model& model, PredId p, PredId q) {
  const Signature& sig = model.signature();
  if (sig.predicate(p).arg_sorts != sig.predicate(q).arg_sorts)
    throw SortError("'" + sig.predicate(p).name + "' and '" + sig.predicate(q).name + "' have different sort profiles");
  bool all_definite_equal = true;
  for (std::size_t k = 0; k < model.index().size(); ++k) {
    PointOfReference at = model.index().point(k);
    const PartialSet& a = model.denotation(p, at);
    const PartialSet& b = model.denotation(q, at);
    for (const auto& t : model.tuples(p)) {
      Truth3 x = a.value(t), y = b.value(t);
      if (is_definite(x) && is_definite(y) && x != y) return Truth3::False;
      if (!is_definite(x) || !is_definite(y)) all_definite_equal = false;
    }
  }
  return all_definite_equal ? Truth3::True : Truth3::Unknown;
}

MergeResult force_predicates_equal(const Model& model, PredId p, PredId q) {
  const Signature& sig = model.signature();
  if (test_function_equality(model, p, q) == Truth3::False)
    throw InconsistencyError("'" + sig.predicate(p).name + "' and '" + sig.predicate(q).name +
                             "' disagree on a definite tuple");
  ExpansionStep step;
  step.kind = ExpansionStep::Kind::MergePredicates;
  step.command = "eqforce " + sig.predicate(p).name + " " + sig.predicate(q).name;
  step.delta.links.emplace_back(p, q);

  std::vector<Obligation> obligations;
  for (std::size_t k = 0; k < model.index().size(); ++k) {
    PointOfReference at = model.index().point(k);
    const PartialSet& a = model.denotation(p, at);
    const PartialSet& b = model.denotation(q, at);
    for (const auto& t : model.tuples(p)) {
      Truth3 x = a.value(t), y = b.value(t);
      if (is_definite(x) == is_definite(y)) continue;
      PredId open = is_definite(x) ? q : p;
      Atom atom{open, {}};
      for (ClassId c : t) atom.args.push_back(model.representative(c));
      obligations.push_back({std::move(atom), is_definite(x) ? x : y, at, step});
    }
  }
  return {extend_model(model, std::move(step)), std::move(obligations)};
}

}  // namespace gdiag
