#include "gdiagram/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace gdiag {

bool operator==(const Formula& a, const Formula& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Formula::Kind::Atom: return a.atom == b.atom;
    case Formula::Kind::Equal: return a.lhs == b.lhs && a.rhs == b.rhs;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      return a.var == b.var && a.var_sort == b.var_sort && equal_formulas(a.left, b.left);
    default: return equal_formulas(a.left, b.left) && equal_formulas(a.right, b.right);
  }
}

bool equal_formulas(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

namespace fml {

namespace {

FormulaPtr node(Formula::Kind k, FormulaPtr l = nullptr, FormulaPtr r = nullptr) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->left = std::move(l);
  f->right = std::move(r);
  return f;
}

FormulaPtr quant(Formula::Kind k, std::string var, SortId sort, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->var = std::move(var);
  f->var_sort = sort;
  f->left = std::move(body);
  return f;
}

}  // namespace

FormulaPtr atom(gdiag::Atom a) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Atom;
  f->atom = std::move(a);
  return f;
}

FormulaPtr equal(Term lhs, Term rhs) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Equal;
  f->lhs = std::move(lhs);
  f->rhs = std::move(rhs);
  return f;
}

FormulaPtr negate(FormulaPtr f) { return node(Formula::Kind::Not, std::move(f)); }
FormulaPtr conj(FormulaPtr f, FormulaPtr g) { return node(Formula::Kind::And, std::move(f), std::move(g)); }
FormulaPtr disj(FormulaPtr f, FormulaPtr g) { return node(Formula::Kind::Or, std::move(f), std::move(g)); }
FormulaPtr implies(FormulaPtr f, FormulaPtr g) {
  return node(Formula::Kind::Implies, std::move(f), std::move(g));
}
FormulaPtr exists(std::string var, SortId sort, FormulaPtr body) {
  return quant(Formula::Kind::Exists, std::move(var), sort, std::move(body));
}
FormulaPtr forall(std::string var, SortId sort, FormulaPtr body) {
  return quant(Formula::Kind::Forall, std::move(var), sort, std::move(body));
}
FormulaPtr nec(FormulaPtr f) { return node(Formula::Kind::Nec, std::move(f)); }
FormulaPtr past(FormulaPtr f) { return node(Formula::Kind::Past, std::move(f)); }
FormulaPtr fut(FormulaPtr f) { return node(Formula::Kind::Fut, std::move(f)); }

}  // namespace fml

// {{{ Lexer and parser.

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Colon, Dot, Not, And, Or, Arrow, Eq, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    int l = line, cl = col;
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::Arrow, "->", l, cl});
      advance(2);
      continue;
    }
    Tok k;
    switch (c) {
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      case ':': k = Tok::Colon; break;
      case '.': k = Tok::Dot; break;
      case '~': k = Tok::Not; break;
      case '&': k = Tok::And; break;
      case '|': k = Tok::Or; break;
      case '=': k = Tok::Eq; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
    }
    out.push_back({k, std::string(1, c), l, cl});
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "exists" || s == "forall" || s == "nec" || s == "past" || s == "fut";
}

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig, const std::map<std::string, SortId>& vars)
      : toks_(tokenize(text)), sig_(sig) {
    for (const auto& [name, sort] : vars) scope_.emplace_back(name, sort);
  }

  FormulaPtr parse_all() {
    FormulaPtr f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

  Term parse_term_all() {
    Term t = term();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ParseError(msg, at.line, at.column);
  }

  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) {
      const Token& t = peek();
      fail(std::string("expected ") + what + (t.kind == Tok::End ? ", got end of input" : ", got '" + t.text + "'"), t);
    }
    return next();
  }

  FormulaPtr formula() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && (t.text == "exists" || t.text == "forall")) {
      bool ex = t.text == "exists";
      next();
      const Token& v = expect(Tok::Ident, "variable name");
      if (is_keyword(v.text)) fail("keyword '" + v.text + "' cannot name a variable", v);
      expect(Tok::Colon, "':'");
      const Token& s = expect(Tok::Ident, "sort name");
      auto sort = sig_.find_sort(s.text);
      if (!sort) throw UnknownSymbolError("unknown sort '" + s.text + "'");
      expect(Tok::Dot, "'.'");
      scope_.emplace_back(v.text, *sort);
      FormulaPtr body = formula();
      scope_.pop_back();
      return ex ? fml::exists(v.text, *sort, body) : fml::forall(v.text, *sort, body);
    }
    if (t.kind == Tok::Ident && (t.text == "nec" || t.text == "past" || t.text == "fut")) {
      std::string op = next().text;
      FormulaPtr body = formula();
      if (op == "nec") return fml::nec(body);
      if (op == "past") return fml::past(body);
      return fml::fut(body);
    }
    return impl();
  }

  FormulaPtr impl() {
    FormulaPtr lhs = disj();
    if (peek().kind == Tok::Arrow) {
      next();
      return fml::implies(lhs, impl());
    }
    return lhs;
  }

  FormulaPtr disj() {
    FormulaPtr f = conj();
    while (peek().kind == Tok::Or) {
      next();
      f = fml::disj(f, conj());
    }
    return f;
  }

  FormulaPtr conj() {
    FormulaPtr f = neg();
    while (peek().kind == Tok::And) {
      next();
      f = fml::conj(f, neg());
    }
    return f;
  }

  FormulaPtr neg() {
    const Token& t = peek();
    if (t.kind == Tok::Not) {
      next();
      return fml::negate(neg());
    }
    if (t.kind == Tok::LParen) {
      next();
      FormulaPtr f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    return atom();
  }

  FormulaPtr atom() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t);
    // A quantifier or modal operand extends as far right as possible.
    if (is_keyword(t.text)) return formula();
    if (!lookup_var(t.text)) {
      if (auto p = sig_.find_predicate(t.text)) {
        next();
        Atom a{*p, {}};
        expect(Tok::LParen, "'(' after predicate");
        a.args.push_back(term());
        while (peek().kind == Tok::Comma) {
          next();
          a.args.push_back(term());
        }
        expect(Tok::RParen, "')'");
        check_sorts(sig_, a);
        return fml::atom(std::move(a));
      }
    }
    Term lhs = term();
    expect(Tok::Eq, "'=' or a predicate");
    Term rhs = term();
    if (lhs.sort != rhs.sort)
      throw SortError("equation between sorts '" + sig_.sort(lhs.sort).name + "' and '" + sig_.sort(rhs.sort).name + "'");
    return fml::equal(std::move(lhs), std::move(rhs));
  }

  std::optional<SortId> lookup_var(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return it->second;
    return std::nullopt;
  }

  Term term() {
    const Token& t = expect(Tok::Ident, "term");
    if (is_keyword(t.text)) fail("keyword '" + t.text + "' cannot be a term", t);
    if (peek().kind != Tok::LParen) {
      if (auto v = lookup_var(t.text)) return Term::variable(t.text, *v);
      auto f = sig_.find_function(t.text);
      if (!f) throw UnboundVariableError("unknown constant or unbound variable '" + t.text + "'");
      Term c = Term::app(*f, sig_.function(*f).result_sort);
      check_sorts(sig_, c);
      return c;
    }
    auto f = sig_.find_function(t.text);
    if (!f) throw UnknownSymbolError("unknown function symbol '" + t.text + "'");
    next();
    std::vector<Term> args;
    args.push_back(term());
    while (peek().kind == Tok::Comma) {
      next();
      args.push_back(term());
    }
    expect(Tok::RParen, "')'");
    Term app = Term::app(*f, sig_.function(*f).result_sort, std::move(args));
    check_sorts(sig_, app);
    return app;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Signature& sig_;
  std::vector<std::pair<std::string, SortId>> scope_;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text, const Signature& sig) {
  Parser p(text, sig, {});
  return p.parse_all();
}

Term parse_term(std::string_view text, const Signature& sig, const std::map<std::string, SortId>& vars) {
  Parser p(text, sig, vars);
  return p.parse_term_all();
}

// }}}

// {{{ Rendering and traversal.

namespace {

int level(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    case Formula::Kind::Not:
    case Formula::Kind::Atom:
    case Formula::Kind::Equal: return 4;
    default: return 0;
  }
}

std::string render_at(const FormulaPtr& f, const Signature& sig, int ctx);

std::string render_node(const FormulaPtr& f, const Signature& sig) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::Atom: return sig.render(f->atom);
    case K::Equal: return sig.render(f->lhs) + " = " + sig.render(f->rhs);
    case K::Not: return "~" + render_at(f->left, sig, 4);
    case K::And: return render_at(f->left, sig, 3) + " & " + render_at(f->right, sig, 4);
    case K::Or: return render_at(f->left, sig, 2) + " | " + render_at(f->right, sig, 3);
    case K::Implies: return render_at(f->left, sig, 2) + " -> " + render_at(f->right, sig, 1);
    case K::Exists:
    case K::Forall: {
      std::string head = (f->kind == K::Exists ? "exists " : "forall ") + f->var + ":" + sig.sort(f->var_sort).name + " . ";
      // Binary bodies get parentheses for readability; they are not needed to reparse.
      return head + render_at(f->left, sig, f->left->is_binary() ? 4 : 0);
    }
    case K::Nec:
    case K::Past:
    case K::Fut: {
      const char* op = f->kind == K::Nec ? "nec " : (f->kind == K::Past ? "past " : "fut ");
      return op + render_at(f->left, sig, f->left->is_binary() ? 4 : 0);
    }
  }
  return {};
}

std::string render_at(const FormulaPtr& f, const Signature& sig, int ctx) {
  std::string s = render_node(f, sig);
  return level(*f) < ctx ? "(" + s + ")" : s;
}

Term subst_term(const Term& t, const std::string& var, const Term& value) {
  if (t.is_var()) return t.var == var ? value : t;
  Term out = t;
  for (auto& a : out.args) a = subst_term(a, var, value);
  return out;
}

void collect_free(const Term& t, const std::set<std::string>& bound, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (!bound.count(t.var) && std::find(out.begin(), out.end(), t.var) == out.end()) out.push_back(t.var);
    return;
  }
  for (const auto& a : t.args) collect_free(a, bound, out);
}

void collect_free(const FormulaPtr& f, std::set<std::string>& bound, std::vector<std::string>& out) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::Atom:
      for (const auto& a : f->atom.args) collect_free(a, bound, out);
      return;
    case K::Equal:
      collect_free(f->lhs, bound, out);
      collect_free(f->rhs, bound, out);
      return;
    case K::Exists:
    case K::Forall: {
      bool fresh = bound.insert(f->var).second;
      collect_free(f->left, bound, out);
      if (fresh) bound.erase(f->var);
      return;
    }
    default:
      if (f->left) collect_free(f->left, bound, out);
      if (f->right) collect_free(f->right, bound, out);
  }
}

}  // namespace

std::string render(const FormulaPtr& f, const Signature& sig) { return render_at(f, sig, 0); }

FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const Term& value) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::Atom: {
      Atom a = f->atom;
      for (auto& t : a.args) t = subst_term(t, var, value);
      return fml::atom(std::move(a));
    }
    case K::Equal: return fml::equal(subst_term(f->lhs, var, value), subst_term(f->rhs, var, value));
    case K::Exists:
    case K::Forall: {
      if (f->var == var) return f;
      auto out = std::make_shared<Formula>(*f);
      out->left = substitute(f->left, var, value);
      return out;
    }
    default: {
      auto out = std::make_shared<Formula>(*f);
      if (f->left) out->left = substitute(f->left, var, value);
      if (f->right) out->right = substitute(f->right, var, value);
      return out;
    }
  }
}

std::vector<std::string> free_variables(const FormulaPtr& f) {
  std::set<std::string> bound;
  std::vector<std::string> out;
  collect_free(f, bound, out);
  return out;
}

int formula_depth(const FormulaPtr& f) {
  int d = 0;
  if (f->left) d = std::max(d, formula_depth(f->left) + 1);
  if (f->right) d = std::max(d, formula_depth(f->right) + 1);
  return d;
}

// }}}

void validate_family(const Signature& sig, const IndexedFunctionFamily& family) {
  const std::vector<SortId>* profile = nullptr;
  for (const auto& [index, pred] : family.members) {
    const auto& p = sig.predicate(pred);
    if (!profile) {
      profile = &p.arg_sorts;
    } else if (*profile != p.arg_sorts) {
      throw SortError("family '" + family.name + "' mixes sort profiles at index '" + index + "'");
    }
  }
}

Atom apply_family(const Signature& sig, const IndexedFunctionFamily& family, const std::string& index,
                  const Term& element) {
  auto it = family.members.find(index);
  if (it == family.members.end())
    throw UnknownSymbolError("family '" + family.name + "' has no index '" + index + "'");
  Atom a{it->second, {element}};
  check_sorts(sig, a);
  return a;
}

}  // namespace gdiag
