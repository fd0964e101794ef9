#include "gdiagram/diagram.hpp"

#include <functional>

#include "gdiagram/errors.hpp"

namespace gdiag {

std::optional<std::size_t> IndexSet::find_world(const std::string& name) const {
  for (std::size_t i = 0; i < worlds.size(); ++i)
    if (worlds[i] == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> IndexSet::find_time(const std::string& name) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] == name) return i;
  return std::nullopt;
}

std::string IndexSet::render(PointOfReference p) const {
  return "(" + worlds.at(p.world) + "," + times.at(p.time) + ")";
}

DiagramIndex::DiagramIndex(const Signature& sig, const GDiagram& diagram, const Congruence& cc)
    : sig_(sig), diagram_(diagram), cc_(cc), classes_by_sort_(sig.sorts().size()) {
  for (ClassId c = 0; c < cc.class_count(); ++c)
    classes_by_sort_[cc.term(cc.members(c).front()).sort].push_back(c);
  for (const auto& f : diagram.facts) {
    Tuple tuple;
    for (const auto& a : f.atom.args) {
      auto c = cc.find(a);
      if (!c) throw Error("fact argument '" + sig.render(a) + "' is outside the term universe");
      tuple.push_back(*c);
    }
    facts_[{f.atom.pred, tuple}].push_back({f.at, f.value});
  }
}

namespace {

using Bindings = std::map<std::string, ClassId>;
using Cont = std::function<bool()>;

struct Matcher {
  const Congruence& cc;
  const std::vector<std::vector<ClassId>>& classes_by_sort;
  Bindings bindings;

  // Does `pattern` denote class `c` under some extension of the bindings?
  // Calls `k` for each such extension until it returns true.
  bool match(const Term& pattern, ClassId c, const Cont& k) {
    if (pattern.is_var()) {
      if (auto it = bindings.find(pattern.var); it != bindings.end()) return it->second == c && k();
      bindings.emplace(pattern.var, c);
      bool r = k();
      bindings.erase(pattern.var);
      return r;
    }
    for (std::size_t idx : cc.members(c)) {
      const Term& t = cc.term(idx);
      if (t.func != pattern.func) continue;
      if (match_args(pattern, cc.arg_classes(idx), 0, k)) return true;
    }
    return false;
  }

  bool match_args(const Term& pattern, const std::vector<ClassId>& args, std::size_t i, const Cont& k) {
    if (i == args.size()) return k();
    return match(pattern.args[i], args[i], [&] { return match_args(pattern, args, i + 1, k); });
  }

  bool bound(const Term& t) const {
    if (t.is_var()) return bindings.count(t.var) > 0;
    for (const auto& a : t.args)
      if (!bound(a)) return false;
    return true;
  }

  bool guard(const Guard& g, const Cont& k) {
    const Term* lhs = &g.lhs;
    const Term* rhs = &g.rhs;
    if (!bound(*lhs) && bound(*rhs)) std::swap(lhs, rhs);
    if (lhs->is_var() && bindings.count(lhs->var)) return match(*rhs, bindings.at(lhs->var), k);
    if (lhs->is_ground()) {
      auto c = cc.find(*lhs);
      return c && match(*rhs, *c, k);
    }
    for (ClassId c : classes_by_sort[lhs->sort])
      if (match(*lhs, c, [&] { return match(*rhs, c, k); })) return true;
    return false;
  }

  bool guards(const std::vector<Guard>& gs, std::size_t i, const Cont& k) {
    if (i == gs.size()) return k();
    return guard(gs[i], [&] { return guards(gs, i + 1, k); });
  }
};

}  // namespace

bool DiagramIndex::rule_matches(const DiagramRule& rule, const Tuple& tuple) const {
  Matcher m{cc_, classes_by_sort_, {}};
  auto body = [&] {
    if (rule.alternatives.empty()) return true;
    for (const auto& alt : rule.alternatives)
      if (m.guards(alt, 0, [] { return true; })) return true;
    return false;
  };
  std::function<bool(std::size_t)> head = [&](std::size_t i) -> bool {
    if (i == tuple.size()) return body();
    return m.match(rule.head[i], tuple[i], [&] { return head(i + 1); });
  };
  return head(0);
}

std::optional<std::size_t> DiagramIndex::matching_rule(PredId pred, const Tuple& tuple) const {
  for (std::size_t r = 0; r < diagram_.rules.size(); ++r) {
    const auto& rule = diagram_.rules[r];
    if (rule.pred == pred && rule_matches(rule, tuple)) return r;
  }
  return std::nullopt;
}

Truth3 DiagramIndex::lookup(PredId pred, const Tuple& tuple, PointOfReference at) const {
  if (auto it = facts_.find({pred, tuple}); it != facts_.end()) {
    bool any = false, is_true = false, is_false = false;
    for (const auto& s : it->second) {
      if (s.at && *s.at != at) continue;
      any = true;
      is_true |= s.value == Truth3::True;
      is_false |= s.value == Truth3::False;
    }
    if (is_true && is_false) {
      Atom a{pred, {}};
      for (ClassId c : tuple) a.args.push_back(cc_.term(cc_.members(c).front()));
      throw InconsistencyError("atom " + sig_.render(a) + " is assigned both true and false");
    }
    if (any) return is_true ? Truth3::True : (is_false ? Truth3::False : Truth3::Unknown);
  }
  if (auto r = matching_rule(pred, tuple)) return diagram_.rules[*r].value;
  return sig_.predicate(pred).default_truth;
}

Truth3 DiagramIndex::lookup_atom(const Atom& atom, PointOfReference at) const {
  check_sorts(sig_, atom);
  Tuple tuple;
  for (const auto& a : atom.args) {
    auto c = cc_.find(a);
    if (!c) throw Error("term '" + sig_.render(a) + "' is outside the term universe");
    tuple.push_back(*c);
  }
  return lookup(atom.pred, tuple, at);
}

Truth3 lookup_atom(const Signature& sig, const GDiagram& diagram, const Atom& atom, PointOfReference at) {
  std::vector<Term> terms = atom.args;
  for (const auto& f : diagram.facts)
    for (const auto& a : f.atom.args) terms.push_back(a);
  Congruence cc(terms, diagram.equations);
  DiagramIndex index(sig, diagram, cc);
  return index.lookup_atom(atom, at);
}

}  // namespace gdiag
