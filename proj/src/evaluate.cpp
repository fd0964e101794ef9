#include "gdiagram/evaluate.hpp"

#include <set>

#include "gdiagram/errors.hpp"

namespace gdiag {

std::string_view to_string(EvalMode m) { return m == EvalMode::Paper ? "paper" : "exhaustive"; }

std::optional<EvalMode> parse_mode(std::string_view s) {
  if (s == "paper") return EvalMode::Paper;
  if (s == "exhaustive") return EvalMode::Exhaustive;
  return std::nullopt;
}

namespace {

class Evaluator {
 public:
  Evaluator(const Model& model, EvalMode mode, const Overlay* overlay, bool tracing)
      : model_(model), sig_(model.signature()), mode_(mode), overlay_(overlay), tracing_(tracing) {}

  EvalTrace eval(const FormulaPtr& f, PointOfReference at) {
    using K = Formula::Kind;
    EvalTrace node;
    node.kind = f->kind;
    node.at = at;
    if (tracing_) node.formula = render(f, sig_);
    switch (f->kind) {
      case K::Atom: {
        Tuple tuple = resolve_all(f->atom.args);
        node.value = atom_value(f->atom.pred, tuple, at);
        if (tracing_) {
          Atom a{f->atom.pred, {}};
          for (ClassId c : tuple) a.args.push_back(model_.representative(c));
          node.atom = std::move(a);
        }
        break;
      }
      case K::Equal:
        node.value = from_bool(resolve(f->lhs) == resolve(f->rhs));
        break;
      case K::Not:
        node.children.push_back(eval(f->left, at));
        node.value = kleene_not(node.children[0].value);
        break;
      case K::And:
      case K::Or:
      case K::Implies: {
        node.children.push_back(eval(f->left, at));
        node.children.push_back(eval(f->right, at));
        Truth3 a = node.children[0].value, b = node.children[1].value;
        node.value = f->kind == K::And ? kleene_and(a, b) : f->kind == K::Or ? kleene_or(a, b) : kleene_implies(a, b);
        break;
      }
      case K::Exists:
      case K::Forall:
        quantifier(f, at, node);
        break;
      case K::Nec:
      case K::Past:
      case K::Fut:
        modal(f->kind, f->left, at, node);
        break;
    }
    if (!tracing_) node.children.clear();
    return node;
  }

  void modal(Formula::Kind op, const FormulaPtr& body, PointOfReference at, EvalTrace& node) {
    const std::size_t ntimes = model_.index().times.size();
    std::size_t lo = 0, hi = ntimes;
    if (op == Formula::Kind::Past) hi = at.time;
    if (op == Formula::Kind::Fut) lo = at.time + 1;
    bool conj = op == Formula::Kind::Nec;
    Truth3 acc = conj ? Truth3::True : Truth3::False;
    for (std::size_t t = lo; t < hi; ++t) {
      EvalTrace child = eval(body, {at.world, t});
      acc = conj ? kleene_and(acc, child.value) : kleene_or(acc, child.value);
      node.children.push_back(std::move(child));
    }
    node.value = acc;
  }

 private:
  void quantifier(const FormulaPtr& f, PointOfReference at, EvalTrace& node) {
    const auto& elems = model_.universe(f->var_sort);
    if (elems.empty()) throw Error("uninhabited sort '" + sig_.sort(f->var_sort).name + "'");
    const bool exists = f->kind == Formula::Kind::Exists;

    if (exists && mode_ == EvalMode::Paper) {
      ClassId pick = elems.front();
      for (ClassId c : elems) {
        if (!used_witnesses_.count(c)) {
          pick = c;
          break;
        }
      }
      used_witnesses_.insert(pick);
      const Term& w = model_.representative(pick);
      node.children.push_back(eval(substitute(f->left, f->var, w), at));
      node.value = node.children.back().value;
      node.witness = model_.render(pick);
      return;
    }

    Truth3 acc = exists ? Truth3::False : Truth3::True;
    const Truth3 decisive = exists ? Truth3::True : Truth3::False;
    for (ClassId c : elems) {
      EvalTrace child = eval(substitute(f->left, f->var, model_.representative(c)), at);
      acc = exists ? kleene_or(acc, child.value) : kleene_and(acc, child.value);
      if (!node.witness && child.value == decisive) node.witness = model_.render(c);
      node.children.push_back(std::move(child));
    }
    node.value = acc;
  }

  ClassId resolve(const Term& t) const {
    if (t.is_var()) throw UnboundVariableError("unbound variable '" + t.var + "'");
    if (!t.is_ground()) {
      for (const auto& a : t.args) resolve(a);
    }
    auto c = model_.resolve(t);
    if (!c)
      throw Error("term '" + sig_.render(t) + "' has no denotation at depth " + std::to_string(model_.depth()));
    return *c;
  }

  Tuple resolve_all(const std::vector<Term>& args) const {
    Tuple out;
    out.reserve(args.size());
    for (const auto& a : args) {
      ClassId c = resolve(a);
      if (!model_.in_universe(c))
        throw Error("term '" + sig_.render(a) + "' has no denotation at depth " + std::to_string(model_.depth()));
      out.push_back(c);
    }
    return out;
  }

  Truth3 atom_value(PredId pred, const Tuple& tuple, PointOfReference at) const {
    if (overlay_) {
      auto it = overlay_->find({pred, tuple, model_.index().flat(at)});
      if (it != overlay_->end()) return it->second;
    }
    return model_.value(pred, tuple, at);
  }

  const Model& model_;
  const Signature& sig_;
  EvalMode mode_;
  const Overlay* overlay_;
  bool tracing_;
  std::set<ClassId> used_witnesses_;
};

void require_closed(const FormulaPtr& f) {
  auto free = free_variables(f);
  if (!free.empty()) throw UnboundVariableError("unbound variable '" + free.front() + "'");
}

void require_point(const Model& model, PointOfReference at) {
  if (!model.index().contains(at)) throw Error("point of reference out of range");
}

}  // namespace

EvalResult eval_formula(const Model& model, const FormulaPtr& f, PointOfReference at, EvalMode mode,
                        const Overlay* overlay) {
  require_closed(f);
  require_point(model, at);
  Evaluator ev(model, mode, overlay, true);
  EvalResult r;
  r.trace = ev.eval(f, at);
  r.value = r.trace.value;
  return r;
}

Truth3 eval_value(const Model& model, const FormulaPtr& f, PointOfReference at, EvalMode mode,
                  const Overlay* overlay) {
  require_closed(f);
  require_point(model, at);
  Evaluator ev(model, mode, overlay, false);
  return ev.eval(f, at).value;
}

SkolemInstance skolemize_existential(const FormulaPtr& f, const Model& model) {
  if (f->kind != Formula::Kind::Exists) throw Error("skolemization needs an existential formula");
  const auto& elems = model.universe(f->var_sort);
  if (elems.empty()) throw Error("uninhabited sort '" + model.signature().sort(f->var_sort).name + "'");
  const Term& w = model.representative(elems.front());
  return {substitute(f->left, f->var, w), w};
}

Truth3 eval_modal(const Model& model, Formula::Kind op, const FormulaPtr& body, PointOfReference at,
                  EvalMode mode) {
  if (op != Formula::Kind::Nec && op != Formula::Kind::Past && op != Formula::Kind::Fut)
    throw Error("not a modal operator");
  require_closed(body);
  require_point(model, at);
  Evaluator ev(model, mode, nullptr, false);
  EvalTrace node;
  ev.modal(op, body, at, node);
  return node.value;
}

std::vector<std::size_t> truth_set(const Model& model, const FormulaPtr& f, std::size_t time, EvalMode mode) {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < model.index().worlds.size(); ++w)
    if (eval_value(model, f, {w, time}, mode) == Truth3::True) out.push_back(w);
  return out;
}

namespace {

void render_node(const EvalTrace& t, const IndexSet& index, int indent, std::string& out) {
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
  out += to_string(t.value);
  out += ' ';
  out += t.formula;
  out += " @" + index.render(t.at);
  if (t.witness) out += (t.kind == Formula::Kind::Forall ? " [counterexample=" : " [witness=") + *t.witness + "]";
  out += '\n';
  for (const auto& c : t.children) render_node(c, index, indent + 1, out);
}

}  // namespace

std::string render_trace(const EvalTrace& trace, const IndexSet& index) {
  std::string out;
  render_node(trace, index, 0, out);
  return out;
}

const EvalTrace* first_unknown_atom(const EvalTrace& trace) {
  if (trace.kind == Formula::Kind::Atom && trace.value == Truth3::Unknown) return &trace;
  for (const auto& c : trace.children)
    if (const EvalTrace* hit = first_unknown_atom(c)) return hit;
  return nullptr;
}

}  // namespace gdiag
