#include "gdiagram/model.hpp"

#include <sstream>

#include "gdiagram/errors.hpp"
#include "gdiagram/evaluate.hpp"

namespace gdiag {

const IndexedFunctionFamily* Theory::find_family(const std::string& family_name) const {
  for (const auto& f : families)
    if (f.name == family_name) return &f;
  return nullptr;
}

std::string_view to_string(ExpansionStep::Kind k) {
  switch (k) {
    case ExpansionStep::Kind::Force: return "force";
    case ExpansionStep::Kind::AddElement: return "addElement";
    case ExpansionStep::Kind::ExtendSet: return "extendSet";
    case ExpansionStep::Kind::MergePredicates: return "mergePredicates";
  }
  return "?";
}

void apply_delta(Theory& theory, const DiagramDelta& delta) {
  for (const auto& c : delta.constants)
    theory.sig.add_function(c.name, c.arg_sorts, c.result_sort, c.is_constructor);
  for (const auto& f : delta.facts) theory.diagram.facts.push_back(f);
  for (const auto& l : delta.links) theory.diagram.links.push_back(l);
}

void PartialSet::insert(const Tuple& t, Truth3 v) {
  members_.erase(t);
  non_members_.erase(t);
  unknowns_.erase(t);
  switch (v) {
    case Truth3::True: members_.insert(t); break;
    case Truth3::False: non_members_.insert(t); break;
    default: unknowns_.insert(t); break;
  }
}

Truth3 PartialSet::value(const Tuple& t) const {
  if (members_.count(t)) return Truth3::True;
  if (non_members_.count(t)) return Truth3::False;
  return Truth3::Unknown;
}

bool PartialSet::contains(const Tuple& t) const {
  return members_.count(t) || non_members_.count(t) || unknowns_.count(t);
}

std::optional<ClassId> Model::resolve(const Term& t) const { return cc_.find(t); }

Tuple Model::resolve_tuple(const std::vector<Term>& args) const {
  Tuple out;
  for (const auto& a : args) {
    auto c = resolve(a);
    if (!c || !in_universe(*c))
      throw Error("term '" + signature().render(a) + "' has no denotation at depth " + std::to_string(depth_));
    out.push_back(*c);
  }
  return out;
}

const PartialSet& Model::denotation(PredId pred, PointOfReference at) const {
  if (!index().contains(at)) throw Error("point of reference out of range");
  return denotation_.at(index().flat(at)).at(pred);
}

Truth3 Model::value(PredId pred, const Tuple& tuple, PointOfReference at) const {
  const PartialSet& s = denotation(pred, at);
  if (!s.contains(tuple)) throw Error("tuple outside the universe of '" + signature().predicate(pred).name + "'");
  return s.value(tuple);
}

Truth3 Model::value(const Atom& atom, PointOfReference at) const {
  check_sorts(signature(), atom);
  return value(atom.pred, resolve_tuple(atom.args), at);
}

std::vector<Tuple> Model::tuples(PredId pred) const {
  const auto& sorts = signature().predicate(pred).arg_sorts;
  std::vector<Tuple> out;
  Tuple cur;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == sorts.size()) {
      out.push_back(cur);
      return;
    }
    for (ClassId c : universe_[sorts[i]]) {
      cur.push_back(c);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

std::string Model::render(ClassId c) const { return signature().render(representative(c)); }

std::string Model::render(const Tuple& t) const {
  if (t.size() == 1) return render(t[0]);
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += render(t[i]);
  }
  return out + ")";
}

std::string Model::render(PredId pred, const Tuple& t) const {
  std::string out = signature().predicate(pred).name + "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += render(t[i]);
  }
  return out + ")";
}

std::string Model::render(const PartialSet& s) const {
  // Tuples are class ids in lexicographic order, which is generation order.
  std::set<Tuple> shown(s.members().begin(), s.members().end());
  shown.insert(s.unknowns().begin(), s.unknowns().end());
  std::string out = "{";
  bool first = true;
  for (const auto& t : shown) {
    if (!first) out += ", ";
    first = false;
    out += render(t);
    if (s.unknowns().count(t)) out += '?';
  }
  return out + "}";
}

std::string Model::report() const {
  const Signature& sig = signature();
  std::ostringstream os;
  os << "THEORY: " << theory_.name << "\n";
  os << "DEPTH: " << depth_ << "\n";
  os << "WORLDS:";
  for (const auto& w : index().worlds) os << ' ' << w;
  os << "\nTIMES:";
  for (const auto& t : index().times) os << ' ' << t;
  os << "\n";
  for (SortId s = 0; s < sig.sorts().size(); ++s) {
    os << "UNIVERSE " << sig.sort(s).name << ":";
    const auto& u = universe_[s];
    for (std::size_t i = 0; i < u.size(); ++i) os << (i ? ", " : " ") << render(u[i]);
    os << "\n";
  }
  for (std::size_t k = 0; k < index().size(); ++k) {
    PointOfReference p = index().point(k);
    for (PredId pr = 0; pr < sig.predicates().size(); ++pr)
      os << "DENOTATION " << sig.predicate(pr).name << " @" << index().render(p) << ": "
         << render(denotation_[k][pr]) << "\n";
  }
  os << "HISTORY: " << history_.size() << "\n";
  for (std::size_t i = 0; i < history_.size(); ++i) os << "STEP " << i + 1 << ": " << history_[i].command << "\n";
  return os.str();
}

Model build_model(std::shared_ptr<const Theory> base, Theory effective, std::vector<ExpansionStep> history,
                  int depth, const BuildOptions& options) {
  if (auto diags = validate_signature(effective.sig); !diags.empty())
    throw Error("invalid signature: " + diags.front().message);

  Model m;
  m.base_ = std::move(base);
  m.theory_ = std::move(effective);
  m.history_ = std::move(history);
  m.depth_ = depth;
  m.options_ = options;
  const Signature& sig = m.theory_.sig;
  const IndexSet& index = m.theory_.index;
  if (index.worlds.empty() || index.times.empty()) throw Error("index set must have at least one world and time");

  auto generated = generate_universe(sig, depth, options.limits);
  std::vector<Term> table;
  for (const auto& per_sort : generated) table.insert(table.end(), per_sort.begin(), per_sort.end());
  for (const auto& f : m.theory_.diagram.facts) table.insert(table.end(), f.atom.args.begin(), f.atom.args.end());
  m.cc_ = Congruence(table, m.theory_.diagram.equations);

  m.universe_.assign(sig.sorts().size(), {});
  for (const auto& per_sort : generated) {
    for (const auto& t : per_sort) {
      ClassId c = *m.cc_.find(t);
      if (m.representative_.emplace(c, t).second) m.universe_[t.sort].push_back(c);
    }
  }

  DiagramIndex lookup(sig, m.theory_.diagram, m.cc_);
  const auto npreds = sig.predicates().size();
  m.denotation_.assign(index.size(), std::vector<PartialSet>(npreds));
  std::vector<std::vector<Tuple>> tuples(npreds);
  for (PredId p = 0; p < npreds; ++p) tuples[p] = m.tuples(p);
  for (std::size_t k = 0; k < index.size(); ++k)
    for (PredId p = 0; p < npreds; ++p)
      for (const auto& t : tuples[p]) m.denotation_[k][p].insert(t, lookup.lookup(p, t, index.point(k)));

  // Linked predicates share the join of their denotations.
  if (!m.theory_.diagram.links.empty()) {
    UnionFind groups(npreds);
    for (auto [p, q] : m.theory_.diagram.links) {
      if (sig.predicate(p).arg_sorts != sig.predicate(q).arg_sorts)
        throw SortError("linked predicates '" + sig.predicate(p).name + "' and '" + sig.predicate(q).name +
                        "' have different sort profiles");
      groups.unite(p, q);
    }
    for (std::size_t k = 0; k < index.size(); ++k) {
      std::map<std::size_t, std::vector<PredId>> by_root;
      for (PredId p = 0; p < npreds; ++p) by_root[groups.find(p)].push_back(p);
      for (const auto& [root, preds] : by_root) {
        if (preds.size() < 2) continue;
        PartialSet merged;
        for (const auto& t : tuples[preds.front()]) {
          Truth3 v = Truth3::Unknown;
          for (PredId p : preds) {
            Truth3 w = m.denotation_[k][p].value(t);
            if (w == Truth3::Unknown) continue;
            if (v != Truth3::Unknown && v != w)
              throw InconsistencyError("linked predicates disagree on " + m.render(preds.front(), t) + " at " +
                                       index.render(index.point(k)));
            v = w;
          }
          merged.insert(t, v);
        }
        for (PredId p : preds) m.denotation_[k][p] = merged;
      }
    }
  }

  for (const auto& ax : m.theory_.axioms) {
    for (std::size_t k = 0; k < index.size(); ++k) {
      PointOfReference p = index.point(k);
      if (eval_value(m, ax.formula, p, EvalMode::Exhaustive) != Truth3::False) continue;
      EvalResult r = eval_formula(m, ax.formula, p, EvalMode::Exhaustive);
      std::string where = r.trace.witness ? " [counterexample=" + *r.trace.witness + "]" : "";
      throw InconsistencyError("axiom instance is false at " + index.render(p) + ": " + ax.text + where);
    }
  }
  return m;
}

Model build_canonical_model(const Theory& theory, int depth, const BuildOptions& options) {
  auto base = std::make_shared<const Theory>(theory);
  return build_model(base, theory, {}, depth, options);
}

Model replay(const Model& model, std::size_t steps) {
  if (steps > model.history().size()) throw Error("history has only " + std::to_string(model.history().size()) + " steps");
  Theory t = *model.base();
  std::vector<ExpansionStep> hist(model.history().begin(), model.history().begin() + static_cast<long>(steps));
  for (const auto& s : hist) apply_delta(t, s.delta);
  return build_model(model.base(), std::move(t), std::move(hist), model.depth(), model.options());
}

}  // namespace gdiag
