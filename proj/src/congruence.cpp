#include "gdiagram/congruence.hpp"

#include <numeric>
#include <set>

#include "gdiagram/errors.hpp"

namespace gdiag {

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

std::size_t UnionFind::find(std::size_t x) const {
  while (parent_[x] != x) x = parent_[x];
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  return true;
}

std::size_t Congruence::intern(const Term& t) {
  if (auto it = index_.find(t); it != index_.end()) return it->second;
  for (const auto& a : t.args) intern(a);
  terms_.push_back(t);
  index_.emplace(t, terms_.size() - 1);
  return terms_.size() - 1;
}

Congruence::Congruence(const std::vector<Term>& terms, const std::vector<Equation>& equations) {
  for (const auto& t : terms) {
    if (!t.is_ground()) throw Error("congruence closure needs ground terms");
    intern(t);
  }
  std::vector<std::pair<std::size_t, std::size_t>> eqs;
  for (const auto& [lhs, rhs] : equations) {
    if (!lhs.is_ground() || !rhs.is_ground()) throw Error("equations must be ground");
    if (lhs.sort != rhs.sort) throw SortError("equation relates terms of different sorts");
    eqs.emplace_back(intern(lhs), intern(rhs));
  }

  const std::size_t n = terms_.size();
  std::vector<std::vector<std::size_t>> arg_idx(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& a : terms_[i].args) arg_idx[i].push_back(index_.at(a));

  UnionFind uf(n);
  for (auto [a, b] : eqs) uf.unite(a, b);

  // Lift merges through function application until nothing changes.
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::pair<FuncId, std::vector<std::size_t>>, std::size_t> table;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> key;
      key.reserve(arg_idx[i].size());
      for (auto a : arg_idx[i]) key.push_back(uf.find(a));
      auto [it, inserted] = table.emplace(std::make_pair(terms_[i].func, std::move(key)), i);
      if (!inserted && uf.unite(it->second, i)) changed = true;
    }
  }

  std::map<std::size_t, ClassId> dense;
  class_of_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = dense.emplace(uf.find(i), members_.size());
    if (inserted) members_.emplace_back();
    class_of_[i] = it->second;
    members_[it->second].push_back(i);
  }
  arg_classes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto a : arg_idx[i]) arg_classes_[i].push_back(class_of_[a]);
    signature_table_.emplace(std::make_pair(terms_[i].func, arg_classes_[i]), class_of_[i]);
  }
}

std::optional<ClassId> Congruence::find(const Term& t) const {
  if (t.is_var()) return std::nullopt;
  if (auto it = index_.find(t); it != index_.end()) return class_of_[it->second];
  std::vector<ClassId> key;
  key.reserve(t.args.size());
  for (const auto& a : t.args) {
    auto c = find(a);
    if (!c) return std::nullopt;
    key.push_back(*c);
  }
  if (auto it = signature_table_.find({t.func, key}); it != signature_table_.end()) return it->second;
  return std::nullopt;
}

bool Congruence::congruent(const Term& a, const Term& b) const {
  if (a == b) return true;
  auto ca = find(a);
  auto cb = find(b);
  return ca && cb && *ca == *cb;
}

std::vector<std::vector<Term>> congruence_close(const std::vector<Equation>& equations,
                                                const std::vector<Term>& terms) {
  Congruence cc(terms, equations);
  std::map<ClassId, std::size_t> slot;
  std::vector<std::vector<Term>> out;
  std::set<Term> seen;
  for (const auto& t : terms) {
    if (!seen.insert(t).second) continue;
    ClassId c = *cc.find(t);
    auto [it, inserted] = slot.emplace(c, out.size());
    if (inserted) out.emplace_back();
    out[it->second].push_back(t);
  }
  return out;
}

}  // namespace gdiag
