#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "brrkit/brkpt.hpp"
#include "brrkit/query.hpp"

namespace brrkit {

struct SessionOptions {
  RewriteConstants rcnst;
  /// Written after every with-brr-data run when nonempty.
  std::string json_dump_path;
  /// Prompt shown at the top level.
  std::string top_prompt = "!>";
};

/// A top-level session: the world, break-rewrite state, collected brr-data
/// and query cursors, driven by commands read from a CommandSource.
class Session {
 public:
  Session(CommandSource& in, Output& out, SessionOptions options = {});

  /// Reads and executes commands until end of input or (quit).
  void run();

  /// Executes one command form. Returns false on (quit).
  bool execute(const std::string& text);
  bool execute(const SExpr& form);

  /// Proves goal in the current mode.
  ProofOutcome thm(const SExpr& goal, bool flatten = true);
  /// Proves goal collecting brr-data.
  ProofOutcome with_brr_data(const SExpr& goal, bool flatten = true);

  void load_rules(const std::string& path);
  void load_rules_text(std::string_view text);

  void set_mode(GStackMode m) { mode_ = m; }
  GStackMode mode() const { return mode_; }
  void monitor(const Rune& rune, const BreakCriteria& criteria);
  void unmonitor(const Rune& rune);
  std::vector<MonitorEntry> monitors() const;
  void set_strategy(const std::string& name);
  const Strategy& strategy() const { return strategies_.find(strategy_name_); }
  StrategyRegistry& strategies() { return strategies_; }
  void set_tracing(bool on) { tracing_ = on; }

  /// The collected records of the last with-brr-data run.
  const std::vector<BrrData>& brr_data() const;
  bool has_brr_data() const { return data_.has_value(); }

  /// Runs a query and prints its transcript. Starred queries continue the
  /// current cursor when the pattern and mode are unchanged.
  std::optional<QueryResult> query(const SExpr& pattern, QueryMode mode, bool iterative);

  const World& world() const { return world_; }
  World& world() { return world_; }
  WormholeStore& wormholes() { return wormholes_; }
  StateGlobals& globals() { return globals_; }
  const SessionOptions& options() const { return options_; }
  SessionOptions& options() { return options_; }
  /// Handler nesting depth reached by the last traced proof.
  int last_trace_level() const { return last_trace_level_; }
  /// The brr status as stored between proofs.
  BrrStatus brr_status_now() const;

  nlohmann::json dump_json() const;

 private:
  bool dispatch(const SExpr& form);
  bool dispatch_keyword(const SExpr& kw);
  bool break_level_command(const SExpr& form);
  ProofOutcome run_proof(const SExpr& goal, bool flatten, bool collect);
  void report_outcome(const ProofOutcome& outcome);
  Rune resolve_rune(const SExpr& s) const;
  void write_json_dump() const;
  void error(const std::string& msg);

  CommandSource& in_;
  Output& out_;
  SessionOptions options_;
  World world_;
  GStackMode mode_ = GStackMode::Off;
  WormholeStore wormholes_;
  StateGlobals globals_;
  StrategyRegistry strategies_;
  std::string strategy_name_ = "DEFAULT";
  std::optional<std::vector<BrrData>> data_;
  std::optional<QueryCursor> cursor_;
  bool tracing_ = false;
  int last_trace_level_ = 0;
};

/// Flattened display form of a clause: (IMPLIES (AND h1 ... hn) c).
Term clause_to_term(const Clause& cl);

std::string session_help();

}  // namespace brrkit
