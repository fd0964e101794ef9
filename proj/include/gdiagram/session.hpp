#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gdiagram/errors.hpp"
#include "gdiagram/evaluate.hpp"
#include "gdiagram/model.hpp"

namespace gdiag {

class VersionError : public Error {
 public:
  using Error::Error;
};

/// What a non-interactive eval does with an Unknown result.
enum class BatchPolicy { Leave, ForceTrue, ForceFalse };

std::string_view to_string(BatchPolicy p);
std::optional<BatchPolicy> parse_batch_policy(std::string_view s);

struct SessionConfig {
  int depth = 2;
  EvalMode mode = EvalMode::Paper;
  BatchPolicy policy = BatchPolicy::Leave;
  /// Interactive sessions report a PendingChoice instead of applying the
  /// batch policy.
  bool interactive = true;
};

/// The unknown atom that kept an evaluation from a definite value.
struct PendingChoice {
  Atom atom;
  std::string atom_text;
  std::string formula;
  PointOfReference at;
  std::vector<std::string> actions{"force-true", "force-false", "leave-unknown", "add-element"};
};

struct CommandResult {
  bool ok = true;
  std::string output;
  std::optional<PendingChoice> pending;
};

/// A loaded theory, its current snapshot and the command stream that led
/// there. Commands:
///
///   eval FORMULA [at WORLD TIME] [mode paper|exhaustive]
///   force ATOM true|false [at WORLD TIME]
///   extend PRED ARG... [at WORLD TIME]
///   add SORT NAME
///   eqtest P Q          eqforce P Q
///   truthset FORMULA [time TIME] [mode paper|exhaustive]
///   worlds  model  history  undo
///   save PATH  load PATH  restore PATH
class Session {
 public:
  Session() = default;
  explicit Session(SessionConfig config) : config_(config) {}

  /// Parses and builds; throws ParseError / InconsistencyError.
  static Session from_text(std::string text, SessionConfig config = {}, std::string name = "theory");
  static Session from_file(const std::string& path, SessionConfig config = {});

  bool loaded() const { return model_ != nullptr; }
  const Model& model() const;
  const std::string& source() const { return source_; }
  const std::string& name() const { return name_; }
  const SessionConfig& config() const { return config_; }
  void set_config(const SessionConfig& c) { config_ = c; }
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

  /// Executes one command. Errors come back as `ERROR: ...` output with
  /// ok = false and leave the session unchanged.
  CommandResult run(const std::string& command);
  /// Read-only commands (eval without forcing, truthset, eqtest, worlds,
  /// model, history); anything else is an error.
  CommandResult query(const std::string& command) const;
  static bool is_query(const std::string& command, const SessionConfig& config);

  std::string save_text() const;
  void save(const std::string& path) const;
  static Session restore_text(const std::string& text);
  static Session restore(const std::string& path);

 private:
  CommandResult dispatch(const std::string& verb, const std::string& args);
  CommandResult dispatch_query(const std::string& verb, const std::string& args) const;
  CommandResult eval(const std::string& args);

  std::string source_;
  std::string name_ = "theory";
  SessionConfig config_;
  std::vector<Diagnostic> diagnostics_;
  std::shared_ptr<const Model> model_;
};

inline constexpr int kSessionFormatVersion = 1;

/// Runs commands one per line, skipping blanks and `#` comments, and stops
/// at `quit`. Each command is echoed as `> cmd` before its output.
std::string run_transcript(Session& session, const std::string& text, int* failures = nullptr);

}  // namespace gdiag
