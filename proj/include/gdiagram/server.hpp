#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "gdiagram/session.hpp"

namespace httplib {
class Server;
}

namespace gdiag {

/// Sessions keyed by id. Each session has its own lock: mutating commands
/// run one at a time in arrival order, queries may share the snapshot.
class SessionStore {
 public:
  explicit SessionStore(SessionConfig defaults = {}) : defaults_(defaults) {}

  /// Builds a session from theory text; returns its id ("s1", "s2", ...).
  std::string create(const std::string& theory_text, const SessionConfig& config);
  /// Runs a REPL command against a session. Unknown ids give nullopt.
  std::optional<CommandResult> run(const std::string& id, const std::string& command);
  const SessionConfig& defaults() const { return defaults_; }

 private:
  struct Entry {
    std::shared_mutex lock;
    Session session;
  };
  std::shared_ptr<Entry> find(const std::string& id);

  SessionConfig defaults_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::size_t next_id_ = 1;
};

/// Installs the wire routes on an httplib server. Each route builds the
/// equivalent REPL command and runs it through the store.
void install_routes(httplib::Server& server, SessionStore& store);

/// The REPL command a wire request maps to; exposed for parity tests.
struct WireRequest {
  std::string method;
  std::string path_tail;  // "eval", "force", ... after /sessions/{id}/
  std::string body;
  std::map<std::string, std::string> params;
};
std::string wire_to_command(const WireRequest& req);

/// Blocks serving on host:port.
void serve(SessionStore& store, const std::string& address);

}  // namespace gdiag
