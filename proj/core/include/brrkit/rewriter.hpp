#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "brrkit/context.hpp"

namespace brrkit {

// Arguments passed to the breakpoint handlers. References are valid only for
// the duration of the call.

struct NearMissCall {
  const std::shared_ptr<const RewriteRule>& rule;
  const Term& target;
  const TypeAlist& type_alist;
  const Ancestors& ancestors;
  const GStack& gstack;
};

struct Brkpt1Call {
  const std::shared_ptr<const RewriteRule>& rule;
  const Term& target;
  const Substitution& unify_subst;
  const TypeAlist& type_alist;
  const Ancestors& ancestors;
  const GStack& gstack;
  const RewriteConstants& rcnst;
  const TTree& ttree;
};

struct Brkpt2Call {
  const std::shared_ptr<const RewriteRule>& rule;
  bool wonp;
  const std::optional<FailureReason>& failure_reason;
  const Substitution& unify_subst;
  const std::optional<Term>& brr_result;
  const Ancestors& ancestors;
  const GStack& gstack;
  const RewriteConstants& rcnst;
  const TTree& ttree;
};

/// The three hooks the rewriter calls around every rule it considers.
/// Logically they are no-ops: nothing they do can change the rewriter's result.
class BreakpointHandlers {
 public:
  virtual ~BreakpointHandlers() = default;
  virtual void near_miss_brkpt1(const NearMissCall& c) = 0;
  virtual void brkpt1(const Brkpt1Call& c) = 0;
  virtual void brkpt2(const Brkpt2Call& c) = 0;
};

struct ProofOutcome {
  bool proved = false;
  std::vector<Clause> checkpoints;
  std::vector<std::string> log;
  bool budget_exhausted = false;
  std::size_t steps = 0;

  friend bool operator==(const ProofOutcome&, const ProofOutcome&) = default;
};

/// Turns a goal into a clause: (IMPLIES (AND h1 … hn) c) becomes
/// ((NOT h1) … (NOT hn) c). With flatten false the goal is a single literal.
Clause goal_to_clause(const Term& goal, bool flatten = true);

/// Evaluates primitive functions on quoted arguments; nullopt if fn is not a
/// primitive or the value is not representable.
std::optional<Term> ground_eval(const std::string& fn, std::span<const Term> args);

/// Inside-out conditional rewriter with a clause-level driver.
class Rewriter {
 public:
  Rewriter(const World& world, RewriteConstants rcnst, GStackMode mode, BreakpointHandlers* handlers);

  ProofOutcome prove(const Term& goal, bool flatten = true);

  /// One pass over the literals. Sets proved when the clause became true.
  Clause simplify_clause(const Clause& cl, bool& proved);

  /// Rewrites subst_apply(alist, t). With iff set, only propositional
  /// equivalence of the result is required.
  Term rewrite(const Term& t, const Substitution& alist, const TypeAlist& ta, bool iff = false);

  const GStack& gstack() const { return gstack_; }
  std::size_t steps() const { return steps_; }
  bool exhausted() const { return exhausted_; }
  const TTree& ttree() const { return ttree_; }

 private:
  Term rewrite_app(const Term& t, const Substitution& alist, const TypeAlist& ta, bool iff);
  Term rewrite_if(const Term& t, const Substitution& alist, const TypeAlist& ta, bool iff);
  Term rewrite_lambda_object(const Term& q);
  Term finish_app(const Term& target, const TypeAlist& ta, bool iff);
  std::optional<Term> try_rule(const std::shared_ptr<const RewriteRule>& rule_ptr, const Term& target, const TypeAlist& ta);
  std::optional<FailureReason> relieve_hyps(const RewriteRule& rule, Substitution& u, const TypeAlist& ta);
  bool tick();

  const World& world_;
  RewriteConstants rcnst_;
  GStackMode mode_;
  BreakpointHandlers* handlers_;
  GStack gstack_;
  Ancestors ancestors_;
  std::vector<std::string> expanding_;
  TTree ttree_;
  std::size_t steps_ = 0;
  bool exhausted_ = false;
};

}  // namespace brrkit
