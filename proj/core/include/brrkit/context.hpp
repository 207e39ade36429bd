#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "brrkit/gstack.hpp"

namespace brrkit {

/// Which instrumentation is live: none, interactive breaks, or breaks plus
/// provenance collection.
enum class GStackMode { Off, Brr, BrrData };

std::string to_string(GStackMode m);

/// Assumptions in force at a rewrite site, newest first.
class TypeAlist {
 public:
  struct Entry {
    Term term;
    bool truth;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  /// Adds t with the given truth value; (NOT x) is stored as x with the
  /// opposite value. Constants and already-known terms are not added.
  TypeAlist assume(const Term& t, bool truth) const;

  std::optional<bool> lookup(const Term& t) const;

  /// For an assumed-true (EQUAL a b) with t on one side, returns the other
  /// side when it is smaller in the term order.
  std::optional<Term> equality_replacement(const Term& t) const;

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const TypeAlist&, const TypeAlist&) = default;

 private:
  std::vector<Entry> entries_;
};

/// Functions whose value is always T or NIL.
bool is_boolean_fn(const std::string& fn);

/// The decoded display used by the :type-alist break command.
std::string render_type_alist(const TypeAlist& ta, const World& w);

/// Hypothesis instances currently being relieved, innermost last.
using Ancestors = std::vector<Term>;

struct FailureReason {
  enum class Kind {
    HypFailed,
    FreeVarsNotFound,
    BackchainLimit,
    LoopStopper,
    NearMiss,
    RecursiveExpansionRejected,
  };

  Kind kind = Kind::HypFailed;
  std::size_t hyp = 0;  // 1-based
  Term rewrote_to;

  static FailureReason hyp_failed(std::size_t hyp, Term t) { return {Kind::HypFailed, hyp, std::move(t)}; }
  static FailureReason free_vars(std::size_t hyp) { return {Kind::FreeVarsNotFound, hyp, {}}; }
  static FailureReason backchain_limit(std::size_t hyp) { return {Kind::BackchainLimit, hyp, {}}; }
  static FailureReason loop_stopper() { return {Kind::LoopStopper, 0, {}}; }
  static FailureReason near_miss() { return {Kind::NearMiss, 0, {}}; }
  static FailureReason recursion_rejected() { return {Kind::RecursiveExpansionRejected, 0, {}}; }

  friend bool operator==(const FailureReason&, const FailureReason&) = default;
};

/// e.g. ":HYP 1 rewrote to (R U)".
std::string print_failure(const FailureReason& r);
SExpr to_sexpr(const FailureReason& r);

/// Rewriter settings captured alongside each provenance record.
struct RewriteConstants {
  std::size_t backchain_limit = 3;
  std::size_t step_budget = 20000;
  bool rewrite_lambda_objects = true;
  friend bool operator==(const RewriteConstants&, const RewriteConstants&) = default;
};

/// Runes used so far; a stand-in for a tag tree.
using TTree = std::set<Rune>;

}  // namespace brrkit
