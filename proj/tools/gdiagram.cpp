// Command-line front end: REPL, transcript runner and HTTP server.
#include <unistd.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gdiagram/server.hpp"
#include "gdiagram/session.hpp"

using namespace gdiag;

namespace {

int run_stream(Session& session, std::istream& in, bool prompt) {
  int failures = 0;
  std::string line;
  for (;;) {
    if (prompt) std::cout << "gd> " << std::flush;
    if (!std::getline(in, line)) break;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.find_first_of("\r") != std::string::npos) line.erase(line.find_last_not_of("\r") + 1);
    if (line.substr(first) == "quit" || line.substr(first) == "exit") break;
    CommandResult r = session.run(line);
    std::cout << r.output;
    if (!r.ok) ++failures;
  }
  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"G-diagram model builder and evaluator"};
  SessionConfig config;
  std::string mode = "paper", policy = "leave", serve_addr, theory, transcript;
  app.add_option("--depth", config.depth, "term depth bound")->check(CLI::Range(0, 16));
  app.add_option("--mode", mode, "existential witness mode")->check(CLI::IsMember({"paper", "exhaustive"}));
  app.add_option("--batch-policy", policy, "what batch eval does with unknown atoms")
      ->check(CLI::IsMember({"leave", "force-true", "force-false"}));
  app.add_option("--serve", serve_addr, "serve the wire interface on HOST:PORT");
  app.add_option("--theory", theory, "theory file to load");
  app.add_option("--transcript", transcript, "run commands from a file, one per line");
  CLI11_PARSE(app, argc, argv);

  config.mode = *parse_mode(mode);
  config.policy = *parse_batch_policy(policy);

  try {
    if (!serve_addr.empty()) {
      SessionStore store(config);
      std::cerr << "serving on " << serve_addr << "\n";
      serve(store, serve_addr);
      return 0;
    }
    config.interactive = transcript.empty();
    Session session(config);
    if (!theory.empty()) {
      session = Session::from_file(theory, config);
      for (const auto& d : session.diagnostics()) std::cerr << "warning: " << d.message << "\n";
    }
    if (!transcript.empty()) {
      std::ifstream in(transcript);
      if (!in) {
        std::cerr << "error: cannot read " << transcript << "\n";
        return 2;
      }
      std::stringstream text;
      text << in.rdbuf();
      int failures = 0;
      std::cout << run_transcript(session, text.str(), &failures);
      return failures == 0 ? 0 : 1;
    }
    run_stream(session, std::cin, isatty(STDIN_FILENO));
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
