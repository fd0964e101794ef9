#include "gdiagram/signature.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "gdiagram/errors.hpp"

namespace gdiag {

bool Term::is_ground() const {
  if (is_var()) return false;
  return std::all_of(args.begin(), args.end(), [](const Term& a) { return a.is_ground(); });
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.func <=> b.func; c != 0) return c;
  if (auto c = a.var <=> b.var; c != 0) return c;
  if (auto c = a.sort <=> b.sort; c != 0) return c;
  return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(), b.args.end());
}

bool operator==(const Term& a, const Term& b) {
  return a.kind == b.kind && a.func == b.func && a.var == b.var && a.sort == b.sort && a.args == b.args;
}

int Term::depth() const {
  int d = 0;
  for (const auto& a : args) d = std::max(d, a.depth() + 1);
  return d;
}

bool operator==(const Sort& a, const Sort& b) { return a.name == b.name; }

bool operator==(const FuncSymbol& a, const FuncSymbol& b) {
  return a.name == b.name && a.arg_sorts == b.arg_sorts && a.result_sort == b.result_sort &&
         a.is_constructor == b.is_constructor;
}

bool operator==(const PredSymbol& a, const PredSymbol& b) {
  return a.name == b.name && a.arg_sorts == b.arg_sorts && a.default_truth == b.default_truth;
}

bool operator==(const Signature& a, const Signature& b) {
  return a.sorts_ == b.sorts_ && a.funcs_ == b.funcs_ && a.preds_ == b.preds_;
}

SortId Signature::add_sort(const std::string& name) {
  sorts_.push_back({name});
  return sorts_.size() - 1;
}

FuncId Signature::add_function(const std::string& name, std::vector<SortId> arg_sorts, SortId result,
                               bool is_constructor) {
  funcs_.push_back({name, std::move(arg_sorts), result, is_constructor});
  return funcs_.size() - 1;
}

PredId Signature::add_predicate(const std::string& name, std::vector<SortId> arg_sorts,
                                Truth3 default_truth) {
  preds_.push_back({name, std::move(arg_sorts), default_truth});
  return preds_.size() - 1;
}

namespace {

template <typename T>
std::optional<std::size_t> find_named(const std::vector<T>& v, const std::string& name) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i].name == name) return i;
  return std::nullopt;
}

}  // namespace

std::optional<SortId> Signature::find_sort(const std::string& name) const { return find_named(sorts_, name); }

std::optional<FuncId> Signature::find_function(const std::string& name) const {
  return find_named(funcs_, name);
}

std::optional<PredId> Signature::find_predicate(const std::string& name) const {
  return find_named(preds_, name);
}

SortId Signature::sort_id(const std::string& name) const {
  if (auto id = find_sort(name)) return *id;
  throw UnknownSymbolError("unknown sort '" + name + "'");
}

FuncId Signature::function_id(const std::string& name) const {
  if (auto id = find_function(name)) return *id;
  throw UnknownSymbolError("unknown function symbol '" + name + "'");
}

PredId Signature::predicate_id(const std::string& name) const {
  if (auto id = find_predicate(name)) return *id;
  throw UnknownSymbolError("unknown predicate '" + name + "'");
}

bool Signature::has_symbol(const std::string& name) const {
  return find_function(name).has_value() || find_predicate(name).has_value();
}

Term Signature::make(const std::string& fname, std::vector<Term> args) const {
  FuncId f = function_id(fname);
  Term t = Term::app(f, funcs_[f].result_sort, std::move(args));
  check_sorts(*this, t);
  return t;
}

std::string Signature::render(const Term& t) const {
  if (t.is_var()) return t.var;
  std::string out = funcs_.at(t.func).name;
  if (!t.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ',';
      out += render(t.args[i]);
    }
    out += ')';
  }
  return out;
}

std::string Signature::render(const Atom& a) const {
  std::string out = preds_.at(a.pred).name + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    out += render(a.args[i]);
  }
  return out + ")";
}

void check_sorts(const Signature& sig, const Atom& a) {
  const PredSymbol& p = sig.predicate(a.pred);
  if (a.args.size() != p.arity())
    throw SortError("'" + p.name + "' expects " + std::to_string(p.arity()) + " arguments, got " +
                    std::to_string(a.args.size()));
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    check_sorts(sig, a.args[i]);
    if (a.args[i].sort != p.arg_sorts[i])
      throw SortError("argument " + std::to_string(i + 1) + " of '" + p.name + "' must have sort '" +
                      sig.sort(p.arg_sorts[i]).name + "', got '" + sig.sort(a.args[i].sort).name + "'");
  }
}

void check_sorts(const Signature& sig, const Term& t) {
  if (t.is_var()) {
    if (t.sort >= sig.sorts().size()) throw SortError("variable '" + t.var + "' has an undeclared sort");
    return;
  }
  const FuncSymbol& f = sig.function(t.func);
  if (t.args.size() != f.arity())
    throw SortError("'" + f.name + "' expects " + std::to_string(f.arity()) + " arguments, got " +
                    std::to_string(t.args.size()));
  if (t.sort != f.result_sort) throw SortError("term '" + sig.render(t) + "' carries the wrong sort");
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    check_sorts(sig, t.args[i]);
    if (t.args[i].sort != f.arg_sorts[i])
      throw SortError("argument " + std::to_string(i + 1) + " of '" + f.name + "' must have sort '" +
                      sig.sort(f.arg_sorts[i]).name + "', got '" + sig.sort(t.args[i].sort).name + "'");
  }
}

std::vector<Diagnostic> validate_signature(const Signature& sig) {
  std::vector<Diagnostic> out;
  const auto nsorts = sig.sorts().size();

  std::set<std::string> seen;
  for (const auto& s : sig.sorts())
    if (!seen.insert(s.name).second) out.push_back({"duplicate symbol: sort '" + s.name + "'"});

  seen.clear();
  auto check_ref = [&](SortId s, const std::string& owner) {
    if (s >= nsorts) out.push_back({"unresolved sort reference in '" + owner + "'"});
  };
  for (const auto& f : sig.functions()) {
    if (!seen.insert(f.name).second) out.push_back({"duplicate symbol: '" + f.name + "'"});
    for (SortId s : f.arg_sorts) check_ref(s, f.name);
    check_ref(f.result_sort, f.name);
  }
  for (const auto& p : sig.predicates()) {
    if (!seen.insert(p.name).second) out.push_back({"duplicate symbol: '" + p.name + "'"});
    for (SortId s : p.arg_sorts) check_ref(s, p.name);
  }
  if (!out.empty()) return out;

  // Inhabited sorts: least fixpoint over constructors.
  std::vector<bool> inhabited(nsorts, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& f : sig.functions()) {
      if (!f.is_constructor || inhabited[f.result_sort]) continue;
      if (std::all_of(f.arg_sorts.begin(), f.arg_sorts.end(), [&](SortId s) { return inhabited[s]; })) {
        inhabited[f.result_sort] = true;
        changed = true;
      }
    }
  }
  std::set<SortId> reported;
  for (const auto& p : sig.predicates())
    for (SortId s : p.arg_sorts)
      if (!inhabited[s] && reported.insert(s).second)
        out.push_back({"uninhabited sort '" + sig.sort(s).name + "' used by predicate '" + p.name + "'"});
  return out;
}

std::vector<std::vector<Term>> generate_universe(const Signature& sig, int depth, const TermLimits& limits) {
  if (depth < 0) throw ResourceLimitError("negative depth bound");
  if (depth > limits.max_depth)
    throw ResourceLimitError("depth " + std::to_string(depth) + " exceeds the configured bound " +
                             std::to_string(limits.max_depth));
  const auto nsorts = sig.sorts().size();
  std::vector<std::vector<Term>> all(nsorts);
  std::size_t total = 0;

  for (FuncId f = 0; f < sig.functions().size(); ++f) {
    const auto& fs = sig.function(f);
    if (fs.is_constructor && fs.arity() == 0) {
      all[fs.result_sort].push_back(Term::app(f, fs.result_sort));
      ++total;
    }
  }

  // before[s]: number of terms of sort s with depth <= k - 2 while building layer k.
  std::vector<std::size_t> before(nsorts, 0);
  for (int k = 1; k <= depth; ++k) {
    std::vector<std::vector<Term>> layer(nsorts);
    for (FuncId f = 0; f < sig.functions().size(); ++f) {
      const auto& fs = sig.function(f);
      if (!fs.is_constructor || fs.arity() == 0) continue;
      bool empty = std::any_of(fs.arg_sorts.begin(), fs.arg_sorts.end(),
                               [&](SortId s) { return all[s].empty(); });
      if (empty) continue;
      std::vector<std::size_t> idx(fs.arity(), 0);
      for (;;) {
        bool fresh = false;
        for (std::size_t i = 0; i < idx.size(); ++i)
          if (idx[i] >= before[fs.arg_sorts[i]]) fresh = true;
        if (fresh) {
          if (++total > limits.max_terms)
            throw ResourceLimitError("term universe exceeds " + std::to_string(limits.max_terms) + " terms");
          std::vector<Term> args;
          args.reserve(idx.size());
          for (std::size_t i = 0; i < idx.size(); ++i) args.push_back(all[fs.arg_sorts[i]][idx[i]]);
          layer[fs.result_sort].push_back(Term::app(f, fs.result_sort, std::move(args)));
        }
        // Odometer, last argument fastest.
        bool done = true;
        for (std::size_t pos = idx.size(); pos-- > 0;) {
          if (++idx[pos] < all[fs.arg_sorts[pos]].size()) {
            done = false;
            break;
          }
          idx[pos] = 0;
        }
        if (done) break;
      }
    }
    for (SortId s = 0; s < nsorts; ++s) {
      before[s] = all[s].size();
      for (auto& t : layer[s]) all[s].push_back(std::move(t));
    }
  }
  return all;
}

std::vector<Term> generate_terms(const Signature& sig, SortId sort, int depth, const TermLimits& limits) {
  if (sort >= sig.sorts().size()) throw SortError("unknown sort id");
  return generate_universe(sig, depth, limits)[sort];
}

}  // namespace gdiag
