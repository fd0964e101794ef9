#include "gdiagram/server.hpp"

#include <httplib.h>

#include "gdiagram/errors.hpp"

namespace gdiag {

std::string SessionStore::create(const std::string& theory_text, const SessionConfig& config) {
  auto entry = std::make_shared<Entry>();
  entry->session = Session::from_text(theory_text, config);
  std::lock_guard<std::mutex> g(mu_);
  std::string id = "s" + std::to_string(next_id_++);
  sessions_[id] = std::move(entry);
  return id;
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& id) {
  std::lock_guard<std::mutex> g(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::optional<CommandResult> SessionStore::run(const std::string& id, const std::string& command) {
  auto entry = find(id);
  if (!entry) return std::nullopt;
  {
    std::shared_lock<std::shared_mutex> read(entry->lock);
    if (Session::is_query(command, entry->session.config())) return entry->session.query(command);
  }
  std::unique_lock<std::shared_mutex> write(entry->lock);
  return entry->session.run(command);
}

namespace {

std::string param(const WireRequest& r, const std::string& key) {
  auto it = r.params.find(key);
  return it == r.params.end() ? "" : it->second;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  while (!s.empty() && s.back() == ' ') s.pop_back();
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  return s;
}

std::string at_suffix(const WireRequest& r) {
  std::string w = param(r, "world"), t = param(r, "time");
  if (w.empty() && t.empty()) return "";
  if (w.empty() || t.empty()) throw Error("world and time must be given together");
  return " at " + w + " " + t;
}

}  // namespace

std::string wire_to_command(const WireRequest& r) {
  const std::string& op = r.path_tail;
  std::string body = one_line(r.body);
  std::string mode = param(r, "mode").empty() ? "" : " mode " + param(r, "mode");
  if (r.method == "GET" && (op == "model" || op == "history" || op == "worlds")) return op;
  if (r.method == "GET" && op == "truthset") {
    std::string f = param(r, "f");
    if (f.empty()) throw Error("missing formula parameter f");
    std::string time = param(r, "time").empty() ? "" : " time " + param(r, "time");
    return "truthset " + f + time + mode;
  }
  if (r.method == "POST" && op == "eval") return "eval " + body + at_suffix(r) + mode;
  if (r.method == "POST" && op == "force") {
    // "walk(B)=true" or "walk(B) true"
    std::string atom = body, value = param(r, "value");
    if (auto eq = body.rfind('='); eq != std::string::npos && body.find(')') < eq) {
      atom = one_line(body.substr(0, eq));
      value = one_line(body.substr(eq + 1));
    } else if (auto sp = body.rfind(' '); value.empty() && sp != std::string::npos) {
      atom = body.substr(0, sp);
      value = body.substr(sp + 1);
    }
    return "force " + atom + " " + value + at_suffix(r);
  }
  if (r.method == "POST" && op == "extend") return "extend " + body + at_suffix(r);
  if (r.method == "POST" && op == "add") return "add " + body;
  if (r.method == "POST" && op == "eq") {
    std::string kind = param(r, "op").empty() ? "test" : param(r, "op");
    if (kind != "test" && kind != "force") throw Error("op must be test or force");
    return "eq" + kind + " " + body;
  }
  if (r.method == "POST" && op == "undo") return "undo";
  throw Error("no route " + r.method + " " + op);
}

void install_routes(httplib::Server& server, SessionStore& store) {
  server.Post("/sessions", [&store](const httplib::Request& req, httplib::Response& res) {
    SessionConfig config = store.defaults();
    try {
      if (req.has_param("depth")) config.depth = std::stoi(req.get_param_value("depth"));
      if (req.has_param("mode")) {
        auto m = parse_mode(req.get_param_value("mode"));
        if (!m) throw Error("bad mode");
        config.mode = *m;
      }
      config.interactive = true;
      std::string id = store.create(req.body, config);
      auto report = store.run(id, "model");
      res.status = 201;
      res.set_content("SESSION: " + id + "\n" + report->output, "text/plain");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(std::string("ERROR: ") + e.what() + "\n", "text/plain");
    }
  });

  auto handler = [&store](const httplib::Request& req, httplib::Response& res) {
    WireRequest w;
    w.method = req.method;
    w.path_tail = req.matches[2];
    w.body = req.body;
    for (const auto& [k, v] : req.params) w.params[k] = v;
    std::string command;
    try {
      command = wire_to_command(w);
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(std::string("ERROR: ") + e.what() + "\n", "text/plain");
      return;
    }
    auto result = store.run(req.matches[1], command);
    if (!result) {
      res.status = 404;
      res.set_content("ERROR: no session '" + std::string(req.matches[1]) + "'\n", "text/plain");
      return;
    }
    res.status = result->ok ? 200 : 400;
    res.set_content(result->output, "text/plain");
  };
  server.Get(R"(/sessions/([A-Za-z0-9]+)/(model|history|worlds|truthset))", handler);
  server.Post(R"(/sessions/([A-Za-z0-9]+)/(eval|force|extend|add|eq|undo))", handler);
}

void serve(SessionStore& store, const std::string& address) {
  auto colon = address.rfind(':');
  if (colon == std::string::npos) throw Error("address must be HOST:PORT");
  std::string host = address.substr(0, colon);
  int port = std::stoi(address.substr(colon + 1));
  httplib::Server server;
  install_routes(server, store);
  if (!server.listen(host, port)) throw Error("cannot bind " + address);
}

}  // namespace gdiag
