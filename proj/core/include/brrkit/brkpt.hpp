#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "brrkit/brr_data.hpp"
#include "brrkit/io.hpp"
#include "brrkit/rewriter.hpp"
#include "brrkit/wormhole.hpp"

namespace brrkit {

inline constexpr const char* kBrrWormhole = "BRR";

/// Raised by :a! (or a lost command source) to unwind to the top level.
class Abort : public Error {
 public:
  Abort() : Error("abort") {}
};

enum class ExitMode { None, Eval, Go, Ok, EvalBang, GoBang, OkBang };

std::optional<ExitMode> parse_exit_mode(const SExpr& cmd);
bool is_bang(ExitMode m);

/// Variables of an open break.
struct BrrLocals {
  std::shared_ptr<const RewriteRule> lemma;
  Term target;
  Substitution unify_subst;
  TypeAlist type_alist;
  Ancestors ancestors;
  BreakCriteria criteria;
  bool near_miss = false;
  std::vector<std::string> near_miss_messages;
  std::optional<bool> wonp;
  std::optional<FailureReason> failure_reason;
  std::optional<Term> brr_result;
  ExitMode exit_mode = ExitMode::None;
  std::size_t depth = 0;
};

/// The brr wormhole status: a stack with one layer per open break.
struct BrrStatus {
  EntryCode entry_code = EntryCode::Enter;
  std::vector<MonitorEntry> monitored;
  GStack gstack;
  BrrLocals locals;
  std::shared_ptr<const BrrStatus> previous;
  bool open = false;

  /// Number of open breaks.
  std::size_t depth() const;
  const MonitorEntry* find_monitor(const Rune& r) const;
  /// True if some open break was exited with a bang command.
  bool inner_breaks_suppressed() const;
};

BrrStatus push_status(const BrrStatus& s, GStack gs, BrrLocals locals);
/// Pops one layer; monitor changes made inside the break are kept.
BrrStatus pop_status(const BrrStatus& s);
/// Pops every layer.
BrrStatus base_status(const BrrStatus& s);

/// Reads the brr status from a wormhole status, creating one if absent.
BrrStatus& brr_status(WormholeStatus& ws);
BrrStatus brr_status_copy(const WormholeStatus& ws);

// ---------------------------------------------------------------------------
// Near misses

enum class NearMissCriterion { Lambda, Depth, Abstraction };

struct NearMissHit {
  NearMissCriterion criterion;
  Term pattern;
  std::string message;
};

/// The lhs generalized according to one criterion.
Term near_miss_pattern(NearMissCriterion c, const Term& lhs, const BreakCriteria& criteria);

/// One hit per satisfied near-miss criterion of the entry. Assumes the lhs
/// failed to match the target.
std::vector<NearMissHit> brr_near_missp(const MonitorEntry& entry, const Term& lhs, const Term& target);

// ---------------------------------------------------------------------------
// Break condition evaluation

/// Evaluates a monitor condition under the locals of a prospective break.
/// Supports QUOTE, IF, EQUAL, NOT, BRR@ and the ground primitives.
SExpr eval_condition(const Term& cond, const BrrLocals& locals);

/// The value of (BRR@ key).
SExpr brr_at(const std::string& key, const BrrLocals& locals);

// ---------------------------------------------------------------------------
// Handlers

/// Everything the handlers need from the session.
struct BrrEnvironment {
  WormholeStore* wormholes = nullptr;
  StateGlobals* globals = nullptr;
  const World* world = nullptr;
  GStackMode mode = GStackMode::Off;
  const Strategy* strategy = nullptr;
  CommandSource* in = nullptr;
  Output* out = nullptr;
  /// Handles non-break commands typed at a break prompt. Returns false if
  /// the form is not recognized.
  std::function<bool(const SExpr& form)> extra_command;
};

/// The break-rewrite and brr-data implementation of the handler hooks.
class BrrHandlers : public BreakpointHandlers {
 public:
  explicit BrrHandlers(BrrEnvironment env) : env_(std::move(env)) {}

  void near_miss_brkpt1(const NearMissCall& c) override;
  void brkpt1(const Brkpt1Call& c) override;
  void brkpt2(const Brkpt2Call& c) override;

 private:
  ExitMode interact(WormholeStatus& ws, bool closing);
  bool break_command(const SExpr& cmd, const BrrStatus& s, bool closing);
  void print_result_line(const BrrStatus& s, bool eval);
  void close_break(WormholeStatus& ws);

  BrrEnvironment env_;
};

/// Prints "1> BRKPT1 {p-rule}" / "<1 BRKPT1 {p-rule}" around each brkpt1 and
/// brkpt2 call. Near-miss calls are passed through untraced.
class TracingHandlers : public BreakpointHandlers {
 public:
  TracingHandlers(BreakpointHandlers& inner, Output& out) : inner_(inner), out_(out) {}

  void near_miss_brkpt1(const NearMissCall& c) override;
  void brkpt1(const Brkpt1Call& c) override;
  void brkpt2(const Brkpt2Call& c) override;

  /// Deepest handler nesting observed; 1 when handlers never overlap.
  int max_level() const { return max_level_; }

 private:
  template <typename F>
  void traced(const char* name, const Rune& rune, F&& f);

  BreakpointHandlers& inner_;
  Output& out_;
  int level_ = 0;
  int max_level_ = 0;
};

std::string break_help();

}  // namespace brrkit
