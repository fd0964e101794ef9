#include "gdiagram/theory_file.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "gdiagram/errors.hpp"
#include "gdiagram/formula.hpp"

namespace gdiag {

namespace {

constexpr SortId kUnsorted = std::numeric_limits<SortId>::max();

struct Word {
  std::string text;
  int column;  // 1-based
};

struct Line {
  int number;
  std::string keyword;
  std::string rest;
  int rest_column;
};

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

/// Splits on whitespace outside parentheses.
std::vector<Word> words(const std::string& s, int base_column) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    std::size_t start = i;
    int depth = 0;
    while (i < s.size() && (depth > 0 || !std::isspace(static_cast<unsigned char>(s[i])))) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') --depth;
      ++i;
    }
    out.push_back({s.substr(start, i - start), base_column + static_cast<int>(start)});
  }
  return out;
}

/// Pattern term with unresolved identifiers.
struct RawTerm {
  std::string name;
  std::vector<RawTerm> args;
  bool applied = false;
  int column = 0;
};

class LineParser {
 public:
  LineParser(const Line& line) : line_(line) {}

  [[noreturn]] void fail(const std::string& msg, int column) const { throw ParseError(msg, line_.number, column); }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, line_.rest_column); }

  /// Re-anchors errors from the formula parser at this line.
  template <typename F>
  auto nested(const std::string& text, int column, F&& f) const {
    try {
      return f(text);
    } catch (const ParseError& e) {
      throw ParseError(e.message(), line_.number, column + e.column() - 1);
    } catch (const Error& e) {
      // No position inside the text; point at its first character.
      std::size_t lead = text.find_first_not_of(" \t");
      throw ParseError(e.what(), line_.number, column + static_cast<int>(lead == std::string::npos ? 0 : lead));
    }
  }

  RawTerm raw_term(const std::string& s, std::size_t& i, int base) const {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    RawTerm t;
    t.column = base + static_cast<int>(i);
    std::size_t start = i;
    while (i < s.size() && is_ident_char(s[i])) ++i;
    if (i == start) fail("expected a term", t.column);
    t.name = s.substr(start, i - start);
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i < s.size() && s[i] == '(') {
      t.applied = true;
      ++i;
      for (;;) {
        t.args.push_back(raw_term(s, i, base));
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i < s.size() && s[i] == ',') {
          ++i;
          continue;
        }
        if (i < s.size() && s[i] == ')') {
          ++i;
          break;
        }
        fail("expected ',' or ')'", base + static_cast<int>(i));
      }
    }
    return t;
  }

  RawTerm raw_full(const std::string& s, int base) const {
    std::size_t i = 0;
    RawTerm t = raw_term(s, i, base);
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i != s.size()) fail("unexpected text after term", base + static_cast<int>(i));
    return t;
  }

 private:
  const Line& line_;
};

/// Turns raw pattern terms into sorted terms, treating undeclared bare
/// identifiers as variables whose sort is fixed by their first position.
struct PatternBuilder {
  const Signature& sig;
  const LineParser& lp;
  std::map<std::string, SortId> vars;

  SortId sort_of(const RawTerm& r) const {
    if (auto f = sig.find_function(r.name)) return sig.function(*f).result_sort;
    if (auto it = vars.find(r.name); it != vars.end()) return it->second;
    return kUnsorted;
  }

  Term build(const RawTerm& r, SortId expected) {
    if (auto f = sig.find_function(r.name)) {
      const auto& fs = sig.function(*f);
      if (r.args.size() != fs.arity())
        lp.fail("'" + r.name + "' expects " + std::to_string(fs.arity()) + " arguments", r.column);
      if (expected != kUnsorted && expected != fs.result_sort)
        lp.fail("'" + r.name + "' has sort '" + sig.sort(fs.result_sort).name + "', expected '" +
                    sig.sort(expected).name + "'",
                r.column);
      std::vector<Term> args;
      for (std::size_t i = 0; i < r.args.size(); ++i) args.push_back(build(r.args[i], fs.arg_sorts[i]));
      return Term::app(*f, fs.result_sort, std::move(args));
    }
    if (r.applied) lp.fail("unknown function symbol '" + r.name + "'", r.column);
    auto it = vars.find(r.name);
    if (it == vars.end()) {
      if (expected == kUnsorted) lp.fail("cannot infer the sort of variable '" + r.name + "'", r.column);
      it = vars.emplace(r.name, expected).first;
    } else if (expected != kUnsorted && it->second != expected) {
      lp.fail("variable '" + r.name + "' used at two sorts", r.column);
    }
    return Term::variable(r.name, it->second);
  }
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

/// Finds `word` as a standalone token outside parentheses.
std::size_t find_word(const std::string& s, const std::string& word, std::size_t from = 0) {
  int depth = 0;
  for (std::size_t i = from; i + word.size() <= s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth != 0) continue;
    if (s.compare(i, word.size(), word) != 0) continue;
    bool left = i == 0 || !is_ident_char(s[i - 1]);
    bool right = i + word.size() == s.size() || !is_ident_char(s[i + word.size()]);
    if (left && right) return i;
  }
  return std::string::npos;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

/// Splits "lhs = rhs" at the top-level '=' (the last one for heads like
/// "p(x) = true").
std::pair<std::string, std::string> split_eq(const std::string& s, const LineParser& lp, int column) {
  int depth = 0;
  std::size_t pos = std::string::npos;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth == 0 && s[i] == '=') pos = i;
  }
  if (pos == std::string::npos) lp.fail("expected '='", column);
  return {s.substr(0, pos), s.substr(pos + 1)};
}

class TheoryBuilder {
 public:
  explicit TheoryBuilder(LoadedTheory& out) : out_(out), sig_(out.theory.sig) {}

  void declaration(const Line& line) {
    LineParser lp(line);
    const auto ws = words(line.rest, line.rest_column);
    const std::string& kw = line.keyword;
    if (kw == "theory") {
      if (ws.size() != 1) lp.fail("expected: theory NAME");
      out_.theory.name = ws[0].text;
    } else if (kw == "sort") {
      if (ws.empty()) lp.fail("expected sort names");
      for (const auto& w : ws) {
        if (sig_.find_sort(w.text)) lp.fail("duplicate symbol: sort '" + w.text + "'", w.column);
        sig_.add_sort(w.text);
      }
    } else if (kw == "const") {
      auto colon = line.rest.find(':');
      if (colon == std::string::npos) lp.fail("expected: const NAME... : SORT [constructor]");
      auto names = words(line.rest.substr(0, colon), line.rest_column);
      auto tail = words(line.rest.substr(colon + 1), line.rest_column + static_cast<int>(colon) + 1);
      if (names.empty() || tail.empty() || tail.size() > 2) lp.fail("expected: const NAME... : SORT [constructor]");
      SortId s = sort_ref(lp, tail[0]);
      bool ctor = constructor_flag(lp, tail, 1);
      for (const auto& n : names) {
        fresh(lp, n);
        sig_.add_constant(n.text, s, ctor);
      }
    } else if (kw == "func") {
      auto colon = line.rest.find(':');
      auto arrow = line.rest.find("->");
      if (colon == std::string::npos || arrow == std::string::npos || arrow < colon)
        lp.fail("expected: func NAME : SORT, ... -> SORT [constructor]");
      auto name = words(line.rest.substr(0, colon), line.rest_column);
      if (name.size() != 1) lp.fail("expected one function name");
      std::vector<SortId> args;
      for (const auto& a : split_csv(line.rest.substr(colon + 1, arrow - colon - 1))) {
        if (a.empty()) lp.fail("empty argument sort");
        args.push_back(sort_ref(lp, {a, line.rest_column + static_cast<int>(colon) + 1}));
      }
      auto tail = words(line.rest.substr(arrow + 2), line.rest_column + static_cast<int>(arrow) + 2);
      if (tail.empty() || tail.size() > 2) lp.fail("expected: -> SORT [constructor]");
      SortId result = sort_ref(lp, tail[0]);
      bool ctor = constructor_flag(lp, tail, 1);
      fresh(lp, name[0]);
      sig_.add_function(name[0].text, std::move(args), result, ctor);
    } else if (kw == "pred") {
      auto colon = line.rest.find(':');
      if (colon == std::string::npos) lp.fail("expected: pred NAME : SORT, ... [default false|unknown]");
      auto name = words(line.rest.substr(0, colon), line.rest_column);
      if (name.size() != 1) lp.fail("expected one predicate name");
      std::string tail = line.rest.substr(colon + 1);
      Truth3 def = Truth3::False;
      if (auto d = find_word(tail, "default"); d != std::string::npos) {
        auto v = words(tail.substr(d + 7), line.rest_column);
        if (v.size() != 1 || (v[0].text != "false" && v[0].text != "unknown"))
          lp.fail("default must be 'false' or 'unknown'");
        def = v[0].text == "false" ? Truth3::False : Truth3::Unknown;
        tail = tail.substr(0, d);
      }
      std::vector<SortId> args;
      for (const auto& a : split_csv(tail)) {
        if (a.empty()) lp.fail("empty argument sort");
        args.push_back(sort_ref(lp, {a, line.rest_column + static_cast<int>(colon) + 1}));
      }
      if (args.empty()) lp.fail("predicates need at least one argument");
      fresh(lp, name[0]);
      sig_.add_predicate(name[0].text, std::move(args), def);
    } else if (kw == "worlds" || kw == "times") {
      if (ws.empty()) lp.fail("expected at least one name");
      std::vector<std::string> names;
      for (const auto& w : ws) {
        if (std::find(names.begin(), names.end(), w.text) != names.end())
          lp.fail("duplicate index '" + w.text + "'", w.column);
        names.push_back(w.text);
      }
      (kw == "worlds" ? index_.worlds : index_.times) = names;
    } else {
      lp.fail("unknown clause '" + kw + "'", 1);
    }
  }

  void intension(const Line& line) {
    LineParser lp(line);
    auto& d = out_.intension;
    const std::string& kw = line.keyword;
    if (kw == "entity") {
      auto ws = words(line.rest, line.rest_column);
      if (ws.empty()) lp.fail("expected entity names");
      for (const auto& w : ws) d.entities.push_back(w.text);
      return;
    }
    auto [lhs, rhs] = split_eq(line.rest, lp, line.rest_column);
    auto name = words(lhs, line.rest_column);
    if (name.size() != 1) lp.fail("expected: " + kw + " NAME = ...");
    int rhs_col = line.rest_column + static_cast<int>(lhs.size()) + 1;
    auto items = words(rhs, rhs_col);
    if (kw == "concept") {
      IndividualConcept c{name[0].text, {}};
      for (const auto& it : items) {
        auto [w, e] = pair_item(lp, it);
        auto wi = index_.find_world(w);
        if (!wi) lp.fail("unknown world '" + w + "'", it.column);
        for (std::size_t t = 0; t < index_.times.size(); ++t) c.graph[{*wi, t}] = e;
      }
      d.concepts.push_back(std::move(c));
    } else if (kw == "conceptset") {
      ConceptSet s{name[0].text, {}, {}};
      for (const auto& it : items) {
        if (!it.text.empty() && it.text.back() == '?')
          s.unknown.push_back(it.text.substr(0, it.text.size() - 1));
        else
          s.members.push_back(it.text);
      }
      d.sets.push_back(std::move(s));
    } else if (kw == "property") {
      ConceptProperty p{name[0].text, {}};
      for (const auto& it : items) {
        auto [w, s] = pair_item(lp, it);
        if (!index_.find_world(w)) lp.fail("unknown world '" + w + "'", it.column);
        p.set_by_world[w] = s;
      }
      d.properties.push_back(std::move(p));
    } else if (kw == "meaning") {
      if (items.size() != 1) lp.fail("expected: meaning SYMBOL = TARGET");
      d.constants.emplace_back(name[0].text, items[0].text);
    }
  }

  void clause(const Line& line) {
    LineParser lp(line);
    const std::string& kw = line.keyword;
    if (kw == "fact") {
      std::string rest = line.rest;
      std::optional<PointOfReference> at;
      if (auto a = find_word(rest, "at"); a != std::string::npos) {
        auto ws = words(rest.substr(a + 2), line.rest_column + static_cast<int>(a) + 2);
        if (ws.size() != 2) lp.fail("expected: at WORLD TIME");
        auto w = out_.theory.index.find_world(ws[0].text);
        auto t = out_.theory.index.find_time(ws[1].text);
        if (!w) lp.fail("unknown world '" + ws[0].text + "'", ws[0].column);
        if (!t) lp.fail("unknown time '" + ws[1].text + "'", ws[1].column);
        at = PointOfReference{*w, *t};
        rest = rest.substr(0, a);
      }
      auto [lhs, rhs] = split_eq(rest, lp, line.rest_column);
      Atom atom = ground_atom(lp, lhs, line.rest_column);
      out_.theory.diagram.facts.push_back({std::move(atom), truth(lp, rhs), at});
    } else if (kw == "rule") {
      rule(lp, line);
    } else if (kw == "equal") {
      auto ws = words(line.rest, line.rest_column);
      if (ws.size() == 3 && ws[1].text == "=") ws.erase(ws.begin() + 1);
      if (ws.size() != 2) lp.fail("expected: equal TERM TERM");
      Term a = lp.nested(ws[0].text, ws[0].column, [&](const std::string& s) { return parse_term(s, sig_); });
      Term b = lp.nested(ws[1].text, ws[1].column, [&](const std::string& s) { return parse_term(s, sig_); });
      if (a.sort != b.sort) lp.fail("equation relates terms of different sorts");
      out_.theory.diagram.equations.emplace_back(std::move(a), std::move(b));
    } else if (kw == "axiom") {
      std::string text = trim(line.rest);
      FormulaPtr f = lp.nested(line.rest, line.rest_column, [&](const std::string& s) { return parse_formula(s, sig_); });
      out_.theory.axioms.push_back({text, f});
    } else if (kw == "family") {
      auto [lhs, rhs] = split_eq(line.rest, lp, line.rest_column);
      auto name = words(lhs, line.rest_column);
      if (name.size() != 1) lp.fail("expected: family NAME = INDEX:PRED ...");
      IndexedFunctionFamily fam{name[0].text, {}};
      for (const auto& it : words(rhs, line.rest_column + static_cast<int>(lhs.size()) + 1)) {
        auto [idx, pred] = pair_item(lp, it);
        auto p = sig_.find_predicate(pred);
        if (!p) lp.fail("unknown predicate '" + pred + "'", it.column);
        if (sig_.predicate(*p).arity() != 1) lp.fail("family members must be unary predicates", it.column);
        if (!fam.members.emplace(idx, *p).second) lp.fail("duplicate family index '" + idx + "'", it.column);
      }
      try {
        validate_family(sig_, fam);
      } catch (const SortError& e) {
        lp.fail(e.what());
      }
      out_.theory.families.push_back(std::move(fam));
    } else {
      lp.fail("unknown clause '" + kw + "'", 1);
    }
  }

  void finish_declarations() { out_.theory.index = index_; }

  void finish_intension() {
    if (out_.intension.empty()) return;
    out_.intension.refs = index_;
    compile_intension(out_.intension, out_.theory);
  }

 private:
  SortId sort_ref(const LineParser& lp, const Word& w) {
    auto s = sig_.find_sort(w.text);
    if (!s) lp.fail("unknown sort '" + w.text + "'", w.column);
    return *s;
  }

  bool constructor_flag(const LineParser& lp, const std::vector<Word>& ws, std::size_t i) {
    if (ws.size() <= i) return false;
    if (ws[i].text != "constructor") lp.fail("expected 'constructor'", ws[i].column);
    return true;
  }

  void fresh(const LineParser& lp, const Word& w) {
    if (sig_.has_symbol(w.text)) lp.fail("duplicate symbol '" + w.text + "'", w.column);
  }

  std::pair<std::string, std::string> pair_item(const LineParser& lp, const Word& w) {
    auto c = w.text.find(':');
    if (c == std::string::npos || c == 0 || c + 1 == w.text.size()) lp.fail("expected KEY:VALUE", w.column);
    return {w.text.substr(0, c), w.text.substr(c + 1)};
  }

  Truth3 truth(const LineParser& lp, const std::string& s) {
    auto v = parse_truth(trim(s));
    if (!v) lp.fail("expected true, false or unknown");
    return *v;
  }

  Atom ground_atom(const LineParser& lp, const std::string& text, int column) {
    FormulaPtr f = lp.nested(text, column, [&](const std::string& s) { return parse_formula(s, sig_); });
    if (f->kind != Formula::Kind::Atom) lp.fail("expected an atom", column);
    return f->atom;
  }

  void rule(const LineParser& lp, const Line& line) {
    std::string rest = line.rest;
    std::string guards;
    if (auto w = find_word(rest, "when"); w != std::string::npos) {
      guards = rest.substr(w + 4);
      rest = rest.substr(0, w);
    }
    auto [head_text, value_text] = split_eq(rest, lp, line.rest_column);
    RawTerm head = lp.raw_full(head_text, line.rest_column);
    auto pred = sig_.find_predicate(head.name);
    if (!pred || !head.applied) lp.fail("rule head must apply a predicate", head.column);
    const auto& ps = sig_.predicate(*pred);
    if (head.args.size() != ps.arity()) lp.fail("'" + head.name + "' expects " + std::to_string(ps.arity()) + " arguments");

    PatternBuilder pb{sig_, lp, {}};
    DiagramRule r;
    r.pred = *pred;
    r.value = truth(lp, value_text);
    for (std::size_t i = 0; i < head.args.size(); ++i) r.head.push_back(pb.build(head.args[i], ps.arg_sorts[i]));

    if (!trim(guards).empty()) {
      int gcol = line.rest_column + static_cast<int>(line.rest.size() - guards.size());
      std::size_t start = 0;
      for (;;) {
        std::size_t orpos = find_word(guards, "or", start);
        std::string alt = guards.substr(start, orpos == std::string::npos ? std::string::npos : orpos - start);
        r.alternatives.push_back(conjunction(lp, pb, alt, gcol + static_cast<int>(start)));
        if (orpos == std::string::npos) break;
        start = orpos + 2;
      }
    }
    out_.theory.diagram.rules.push_back(std::move(r));
  }

  std::vector<Guard> conjunction(const LineParser& lp, PatternBuilder& pb, const std::string& text, int column) {
    std::vector<Guard> out;
    std::size_t start = 0;
    for (;;) {
      std::size_t andpos = find_word(text, "and", start);
      std::string g = text.substr(start, andpos == std::string::npos ? std::string::npos : andpos - start);
      int gcol = column + static_cast<int>(start);
      if (trim(g).empty()) lp.fail("empty guard", gcol);
      auto [l, rr] = split_eq(g, lp, gcol);
      RawTerm lhs = lp.raw_full(l, gcol);
      RawTerm rhs = lp.raw_full(rr, gcol + static_cast<int>(l.size()) + 1);
      SortId s = pb.sort_of(lhs);
      if (s == kUnsorted) s = pb.sort_of(rhs);
      out.push_back({pb.build(lhs, s), pb.build(rhs, s)});
      if (andpos == std::string::npos) break;
      start = andpos + 3;
    }
    return out;
  }

  LoadedTheory& out_;
  Signature& sig_;
  IndexSet index_;
};

bool is_declaration(const std::string& kw) {
  return kw == "theory" || kw == "sort" || kw == "const" || kw == "func" || kw == "pred" || kw == "worlds" ||
         kw == "times";
}

bool is_intensional(const std::string& kw) {
  return kw == "entity" || kw == "concept" || kw == "conceptset" || kw == "property" || kw == "meaning";
}

}  // namespace

LoadedTheory parse_theory(std::string_view text, const std::string& default_name) {
  std::vector<Line> lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (int n = 1; std::getline(in, raw); ++n) {
    if (auto hash = raw.find('#'); hash != std::string::npos) raw = raw.substr(0, hash);
    std::size_t a = raw.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    std::size_t b = a;
    while (b < raw.size() && is_ident_char(raw[b])) ++b;
    if (b == a) throw ParseError("expected a clause keyword", n, static_cast<int>(a) + 1);
    std::string rest = raw.substr(b);
    while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' ' || rest.back() == '\t')) rest.pop_back();
    lines.push_back({n, raw.substr(a, b - a), rest, static_cast<int>(b) + 1});
  }

  LoadedTheory out;
  out.theory.name = default_name;
  TheoryBuilder builder(out);
  // Declarations first, then the intensional block, then everything that
  // refers to declared symbols, each in file order.
  for (const auto& l : lines)
    if (is_declaration(l.keyword)) builder.declaration(l);
  builder.finish_declarations();
  for (const auto& l : lines)
    if (is_intensional(l.keyword)) builder.intension(l);
  try {
    builder.finish_intension();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), 1, 1);
  }
  for (const auto& l : lines)
    if (!is_declaration(l.keyword) && !is_intensional(l.keyword)) builder.clause(l);

  out.diagnostics = validate_signature(out.theory.sig);
  return out;
}

LoadedTheory load_theory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read theory file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (auto dot = name.find_last_of('.'); dot != std::string::npos) name = name.substr(0, dot);
  return parse_theory(buf.str(), name);
}

}  // namespace gdiag
