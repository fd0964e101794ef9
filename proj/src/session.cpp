#include "gdiagram/session.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "gdiagram/expand.hpp"
#include "gdiagram/formula.hpp"
#include "gdiagram/theory_file.hpp"

namespace gdiag {

std::string_view to_string(BatchPolicy p) {
  switch (p) {
    case BatchPolicy::Leave: return "leave";
    case BatchPolicy::ForceTrue: return "force-true";
    case BatchPolicy::ForceFalse: return "force-false";
  }
  return "leave";
}

std::optional<BatchPolicy> parse_batch_policy(std::string_view s) {
  if (s == "leave") return BatchPolicy::Leave;
  if (s == "force-true") return BatchPolicy::ForceTrue;
  if (s == "force-false") return BatchPolicy::ForceFalse;
  return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

/// Whitespace-separated words, keeping parenthesised groups whole.
std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth <= 0 && std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string join(const std::vector<std::string>& ws, std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to; ++i) out += (i > from ? " " : "") + ws[i];
  return out;
}

std::string stem(const std::string& path) {
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (auto dot = name.find_last_of('.'); dot != std::string::npos) name = name.substr(0, dot);
  return name;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Trailing options of eval / force / truthset, stripped from the word list.
struct Tail {
  std::optional<PointOfReference> at;
  std::optional<EvalMode> mode;
  std::optional<std::size_t> time;
};

Tail strip_tail(std::vector<std::string>& ws, const IndexSet& index, bool allow_at, bool allow_mode,
                bool allow_time) {
  Tail tail;
  for (bool changed = true; changed;) {
    changed = false;
    std::size_t n = ws.size();
    if (allow_mode && !tail.mode && n >= 3 && ws[n - 2] == "mode") {
      auto m = parse_mode(ws[n - 1]);
      if (!m) throw Error("unknown mode '" + ws[n - 1] + "'");
      tail.mode = m;
      ws.resize(n - 2);
      changed = true;
    } else if (allow_time && !tail.time && n >= 3 && ws[n - 2] == "time") {
      auto t = index.find_time(ws[n - 1]);
      if (!t) throw Error("unknown time '" + ws[n - 1] + "'");
      tail.time = t;
      ws.resize(n - 2);
      changed = true;
    } else if (allow_at && !tail.at && n >= 4 && ws[n - 3] == "at") {
      auto w = index.find_world(ws[n - 2]);
      auto t = index.find_time(ws[n - 1]);
      if (!w) throw Error("unknown world '" + ws[n - 2] + "'");
      if (!t) throw Error("unknown time '" + ws[n - 1] + "'");
      tail.at = PointOfReference{*w, *t};
      ws.resize(n - 3);
      changed = true;
    }
  }
  return tail;
}

Atom parse_atom(const std::string& text, const Signature& sig) {
  FormulaPtr f = parse_formula(text, sig);
  if (f->kind != Formula::Kind::Atom) throw Error("expected an atom, got '" + text + "'");
  return f->atom;
}

PredId predicate_named(const Signature& sig, const std::string& name) {
  auto p = sig.find_predicate(name);
  if (!p) throw UnknownSymbolError("unknown predicate '" + name + "'");
  return *p;
}

std::string step_output(const Model& before, const Model& after) {
  std::string out;
  if (after.history().size() == before.history().size())
    out = "UNCHANGED\n";
  else
    out = "STEP " + std::to_string(after.history().size()) + ": " + after.history().back().command + "\n";
  return out + after.report();
}

CommandResult fail(const std::string& msg) { return {false, "ERROR: " + msg + "\n", std::nullopt}; }

bool read_only_verb(const std::string& verb) {
  return verb == "truthset" || verb == "eqtest" || verb == "worlds" || verb == "model" || verb == "history";
}

std::pair<std::string, std::string> split_verb(const std::string& command) {
  std::string c = trim(command);
  std::size_t sp = c.find_first_of(" \t");
  if (sp == std::string::npos) return {c, ""};
  return {c.substr(0, sp), trim(c.substr(sp + 1))};
}

}  // namespace

Session Session::from_text(std::string text, SessionConfig config, std::string name) {
  LoadedTheory lt = parse_theory(text, name);
  Session s(config);
  s.source_ = std::move(text);
  s.name_ = std::move(name);
  s.diagnostics_ = std::move(lt.diagnostics);
  s.model_ = std::make_shared<const Model>(build_canonical_model(lt.theory, config.depth));
  return s;
}

Session Session::from_file(const std::string& path, SessionConfig config) {
  return from_text(read_file(path), config, stem(path));
}

const Model& Session::model() const {
  if (!model_) throw Error("no theory loaded");
  return *model_;
}

bool Session::is_query(const std::string& command, const SessionConfig& config) {
  auto [verb, args] = split_verb(command);
  if (verb == "eval") return config.interactive || config.policy == BatchPolicy::Leave;
  return read_only_verb(verb);
}

CommandResult Session::run(const std::string& command) {
  auto [verb, args] = split_verb(command);
  if (verb.empty()) return {true, "", std::nullopt};
  try {
    if (is_query(command, config_)) return dispatch_query(verb, args);
    return dispatch(verb, args);
  } catch (const Error& e) {
    return fail(e.what());
  }
}

CommandResult Session::query(const std::string& command) const {
  auto [verb, args] = split_verb(command);
  if (!is_query(command, config_)) return fail("'" + verb + "' changes the session");
  try {
    return dispatch_query(verb, args);
  } catch (const Error& e) {
    return fail(e.what());
  }
}

CommandResult Session::dispatch_query(const std::string& verb, const std::string& args) const {
  const Model& m = model();
  const Signature& sig = m.signature();
  auto ws = split_words(args);
  CommandResult r;
  if (verb == "eval") {
    Tail tail = strip_tail(ws, m.index(), true, true, false);
    if (ws.empty()) throw Error("usage: eval FORMULA [at WORLD TIME] [mode MODE]");
    FormulaPtr f = parse_formula(join(ws, 0, ws.size()), sig);
    PointOfReference at = tail.at.value_or(PointOfReference{});
    EvalMode mode = tail.mode.value_or(config_.mode);
    EvalResult res = eval_formula(m, f, at, mode);
    std::ostringstream os;
    os << "VALUE: " << to_string(res.value) << "\n";
    os << "MODE: " << to_string(mode) << "\n";
    os << "AT: " << m.index().render(at) << "\n";
    os << "TRACE:\n" << render_trace(res.trace, m.index());
    if (res.value == Truth3::Unknown && config_.interactive) {
      if (const EvalTrace* node = first_unknown_atom(res.trace)) {
        PendingChoice pc;
        pc.atom = *node->atom;
        pc.atom_text = sig.render(pc.atom);
        pc.formula = render(f, sig);
        pc.at = node->at;
        os << "PENDING: " << pc.atom_text << " @" << m.index().render(pc.at) << "\n";
        os << "OFFER:";
        for (const auto& a : pc.actions) os << ' ' << a;
        os << "\n";
        r.pending = std::move(pc);
      }
    }
    r.output = os.str();
  } else if (verb == "truthset") {
    Tail tail = strip_tail(ws, m.index(), false, true, true);
    if (ws.empty()) throw Error("usage: truthset FORMULA [time TIME] [mode MODE]");
    FormulaPtr f = parse_formula(join(ws, 0, ws.size()), sig);
    EvalMode mode = tail.mode.value_or(config_.mode);
    std::size_t time = tail.time.value_or(0);
    auto worlds = truth_set(m, f, time, mode);
    std::string set = "{";
    for (std::size_t i = 0; i < worlds.size(); ++i) set += (i ? ", " : "") + m.index().worlds[worlds[i]];
    set += "}";
    r.output = "TRUTHSET: " + set + "\nMODE: " + std::string(to_string(mode)) + "\nTIME: " + m.index().times[time] + "\n";
  } else if (verb == "eqtest") {
    if (ws.size() != 2) throw Error("usage: eqtest P Q");
    Truth3 v = test_function_equality(m, predicate_named(sig, ws[0]), predicate_named(sig, ws[1]));
    r.output = "EQTEST: " + std::string(to_string(v)) + "\n";
  } else if (verb == "worlds") {
    if (!ws.empty()) throw Error("usage: worlds");
    std::string out = "WORLDS:";
    for (const auto& w : m.index().worlds) out += " " + w;
    out += "\nTIMES:";
    for (const auto& t : m.index().times) out += " " + t;
    r.output = out + "\n";
  } else if (verb == "model") {
    if (!ws.empty()) throw Error("usage: model");
    r.output = m.report();
  } else if (verb == "history") {
    if (!ws.empty()) throw Error("usage: history");
    std::string out = "HISTORY: " + std::to_string(m.history().size()) + "\n";
    for (std::size_t i = 0; i < m.history().size(); ++i)
      out += "STEP " + std::to_string(i + 1) + ": " + m.history()[i].command + "\n";
    r.output = out;
  } else {
    throw Error("unknown command '" + verb + "'");
  }
  return r;
}

CommandResult Session::eval(const std::string& args) {
  // Batch evaluation: apply the policy to each blocking atom until the value
  // is definite or the policy cannot be applied.
  Truth3 forced_value = config_.policy == BatchPolicy::ForceTrue ? Truth3::True : Truth3::False;
  std::string log;
  std::shared_ptr<const Model> current = model_;
  for (;;) {
    Session probe = *this;
    probe.model_ = current;
    probe.config_.interactive = true;
    CommandResult r = probe.dispatch_query("eval", args);
    if (!r.pending) {
      model_ = current;
      r.output = log + r.output;
      return r;
    }
    try {
      current = std::make_shared<const Model>(force(*current, r.pending->atom, forced_value, r.pending->at));
      log += "FORCED: " + current->history().back().command + "\n";
    } catch (const InconsistencyError& e) {
      model_ = current;
      std::string out = r.output.substr(0, r.output.find("PENDING:"));
      out += "BLOCKED: " + r.pending->atom_text + " " + std::string(to_string(forced_value)) + ": " + e.what() + "\n";
      return {true, log + out, std::nullopt};
    }
  }
}

CommandResult Session::dispatch(const std::string& verb, const std::string& args) {
  if (verb == "load") {
    if (args.empty()) throw Error("usage: load PATH");
    *this = from_file(args, config_);
    return {true, "LOADED: " + name_ + "\n" + model_->report(), std::nullopt};
  }
  if (verb == "restore") {
    if (args.empty()) throw Error("usage: restore PATH");
    *this = restore(args);
    return {true, "RESTORED: " + args + "\n" + model_->report(), std::nullopt};
  }
  const Model& m = model();
  const Signature& sig = m.signature();
  auto ws = split_words(args);
  if (verb == "eval") return eval(args);
  if (verb == "force") {
    Tail tail = strip_tail(ws, m.index(), true, false, false);
    if (ws.size() != 2) throw Error("usage: force ATOM true|false [at WORLD TIME]");
    auto v = parse_truth(ws[1]);
    if (!v || !is_definite(*v)) throw Error("force needs true or false");
    Model next = force(m, parse_atom(ws[0], sig), *v, tail.at);
    std::string out = step_output(m, next);
    model_ = std::make_shared<const Model>(std::move(next));
    return {true, out, std::nullopt};
  }
  if (verb == "extend") {
    Tail tail = strip_tail(ws, m.index(), true, false, false);
    if (ws.size() < 2) throw Error("usage: extend PRED ARG... [at WORLD TIME]");
    PredId p = predicate_named(sig, ws[0]);
    std::vector<Term> tuple;
    for (std::size_t i = 1; i < ws.size(); ++i) tuple.push_back(parse_term(ws[i], sig));
    Model next = extend_set(m, p, tuple, tail.at);
    std::string out = step_output(m, next);
    model_ = std::make_shared<const Model>(std::move(next));
    return {true, out, std::nullopt};
  }
  if (verb == "add") {
    if (ws.size() != 2) throw Error("usage: add SORT NAME");
    auto s = sig.find_sort(ws[0]);
    if (!s) throw UnknownSymbolError("unknown sort '" + ws[0] + "'");
    Model next = add_element(m, *s, ws[1]);
    std::string out = step_output(m, next);
    model_ = std::make_shared<const Model>(std::move(next));
    return {true, out, std::nullopt};
  }
  if (verb == "eqforce") {
    if (ws.size() != 2) throw Error("usage: eqforce P Q");
    MergeResult res = force_predicates_equal(m, predicate_named(sig, ws[0]), predicate_named(sig, ws[1]));
    std::string obligations;
    for (const auto& o : res.obligations)
      obligations += "OBLIGATION: " + sig.render(o.atom) + " " + std::string(to_string(o.required)) + " @" +
                     m.index().render(o.at) + "\n";
    std::string out = step_output(m, res.model);
    out.insert(out.find('\n') + 1, obligations);
    model_ = std::make_shared<const Model>(std::move(res.model));
    return {true, out, std::nullopt};
  }
  if (verb == "undo") {
    if (!ws.empty()) throw Error("usage: undo");
    if (m.history().empty()) throw Error("nothing to undo");
    std::string undone = m.history().back().command;
    auto next = std::make_shared<const Model>(replay(m, m.history().size() - 1));
    model_ = next;
    return {true, "UNDONE: " + undone + "\n" + next->report(), std::nullopt};
  }
  if (verb == "save") {
    if (args.empty()) throw Error("usage: save PATH");
    save(args);
    return {true, "SAVED: " + args + "\n", std::nullopt};
  }
  throw Error("unknown command '" + verb + "'");
}

std::string Session::save_text() const {
  const Model& m = model();
  std::ostringstream os;
  os << "gdiagram-session " << kSessionFormatVersion << "\n";
  os << "name " << name_ << "\n";
  os << "depth " << m.depth() << "\n";
  os << "mode " << to_string(config_.mode) << "\n";
  os << "batch-policy " << to_string(config_.policy) << "\n";
  os << "interactive " << (config_.interactive ? "yes" : "no") << "\n";
  os << "--- theory\n" << source_;
  if (!source_.empty() && source_.back() != '\n') os << "\n";
  os << "--- history\n";
  for (const auto& step : m.history()) os << step.command << "\n";
  return os.str();
}

void Session::save(const std::string& path) const {
  std::string text = save_text();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("cannot write '" + path + "'");
}

Session Session::restore_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty session file");
  std::istringstream header(line);
  std::string magic;
  int version = 0;
  if (!(header >> magic >> version) || magic != "gdiagram-session") throw Error("not a session file");
  if (version > kSessionFormatVersion)
    throw VersionError("session format version " + std::to_string(version) + " is newer than supported version " +
                       std::to_string(kSessionFormatVersion));
  if (version < 1) throw VersionError("unsupported session format version " + std::to_string(version));

  SessionConfig config;
  std::string name = "theory";
  while (std::getline(in, line) && line != "--- theory") {
    auto ws = split_words(line);
    if (ws.size() != 2) throw Error("bad session header line '" + line + "'");
    if (ws[0] == "name") {
      name = ws[1];
    } else if (ws[0] == "depth") {
      config.depth = std::stoi(ws[1]);
    } else if (ws[0] == "mode") {
      auto m = parse_mode(ws[1]);
      if (!m) throw Error("bad mode '" + ws[1] + "'");
      config.mode = *m;
    } else if (ws[0] == "batch-policy") {
      auto p = parse_batch_policy(ws[1]);
      if (!p) throw Error("bad batch policy '" + ws[1] + "'");
      config.policy = *p;
    } else if (ws[0] == "interactive") {
      config.interactive = ws[1] == "yes";
    } else {
      throw Error("unknown session header '" + ws[0] + "'");
    }
  }
  if (line != "--- theory") throw Error("session file has no theory section");
  std::string source;
  while (std::getline(in, line) && line != "--- history") source += line + "\n";
  if (line != "--- history") throw Error("session file has no history section");

  Session s = from_text(source, config, name);
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    CommandResult r = s.dispatch(split_verb(line).first, split_verb(line).second);
    if (!r.ok) throw Error("replaying '" + line + "' failed: " + r.output);
  }
  return s;
}

Session Session::restore(const std::string& path) { return restore_text(read_file(path)); }

std::string run_transcript(Session& session, const std::string& text, int* failures) {
  std::istringstream in(text);
  std::string line, out;
  int failed = 0;
  while (std::getline(in, line)) {
    std::string cmd = trim(line);
    if (cmd.empty() || cmd[0] == '#') continue;
    if (cmd == "quit" || cmd == "exit") break;
    CommandResult r = session.run(cmd);
    out += "> " + cmd + "\n" + r.output;
    if (!r.ok) ++failed;
  }
  if (failures) *failures = failed;
  return out;
}

}  // namespace gdiag
