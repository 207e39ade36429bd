#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "brrkit/term.hpp"

namespace brrkit {

enum class RuneClass { Rewrite, Definition };

/// A rule name tagged with its class, printed as (:REWRITE NAME).
struct Rune {
  RuneClass cls = RuneClass::Rewrite;
  std::string name;

  friend auto operator<=>(const Rune&, const Rune&) = default;
  friend bool operator==(const Rune&, const Rune&) = default;
};

std::string print_rune(const Rune& r);
SExpr to_sexpr(const Rune& r);

struct RewriteRule {
  Rune rune;
  std::vector<Term> hyps;
  Term lhs;
  Term rhs;
  bool enabled = true;
  // lhs and rhs are variable permutations of each other.
  bool permutative = false;
  // Definition whose body calls the function being defined.
  bool recursive = false;

  /// Variables of hyp i that are bound neither by the lhs nor by earlier hyps.
  std::vector<std::string> free_vars(std::size_t hyp_index) const;
};

/// Break criteria attached to a monitored rune.
struct BreakCriteria {
  Term condition = Term::t();
  bool lambda = false;
  std::optional<std::size_t> depth;
  std::optional<Term> abstraction;

  bool has_near_miss_criteria() const { return lambda || depth || abstraction; }
  friend bool operator==(const BreakCriteria&, const BreakCriteria&) = default;
};

/// Renders e.g. (:CONDITION 'T :LAMBDA T).
std::string print_criteria(const BreakCriteria& c);

struct MonitorEntry {
  Rune rune;
  BreakCriteria criteria;
  friend bool operator==(const MonitorEntry&, const MonitorEntry&) = default;
};

/// n-ary sugar: (APPEND a b c) reads as (BINARY-APPEND a (BINARY-APPEND b c)).
struct Alias {
  std::string macro;
  std::string function;
  std::size_t arity = 2;
  bool right_assoc = true;
};

/// The logical world: rules, aliases, monitors, and :FN slot registry.
/// World is a value; every update returns a new world.
class World {
 public:
  World();

  World add_rule(RewriteRule rule) const;
  World add_alias(Alias alias) const;
  /// Registers argument `index` (0-based) of fn as a slot holding a lambda object.
  World add_fn_slot(const std::string& fn, std::size_t index) const;

  World monitor(const Rune& rune, BreakCriteria criteria) const;
  World unmonitor(const Rune& rune) const;
  std::optional<MonitorEntry> monitored(const Rune& rune) const;
  const std::vector<MonitorEntry>& monitors() const { return monitors_; }
  World with_monitors(std::vector<MonitorEntry> monitors) const;

  World set_enabled(const Rune& rune, bool enabled) const;

  /// Rules whose lhs is headed by fn, most recent first.
  std::vector<std::shared_ptr<const RewriteRule>> rules_for(const std::string& fn) const;
  std::shared_ptr<const RewriteRule> find_rule(const std::string& name) const;
  std::shared_ptr<const RewriteRule> find_rule(const Rune& rune) const;
  std::size_t rule_count() const;

  bool is_fn_slot(const std::string& fn, std::size_t index) const;

  /// Expands AND/OR/LIST/comparison macros and aliases, then converts to a
  /// term. Every non-constant symbol becomes a variable.
  Term translate(const SExpr& s) const;
  /// Reverses alias expansion for display.
  SExpr untranslate(const Term& t) const;

  /// Applies one rule-file form: defrule, alias, or fn-slot.
  World apply_form(const SExpr& form) const;
  World load_text(std::string_view text) const;
  World load_file(const std::string& path) const;

 private:
  SExpr expand_macros(const SExpr& s) const;

  std::map<std::string, std::vector<std::shared_ptr<const RewriteRule>>> rules_;
  std::map<std::string, Alias> aliases_;
  std::map<std::string, std::set<std::size_t>> fn_slots_;
  std::vector<MonitorEntry> monitors_;
  std::shared_ptr<ArityTable> arities_;
};

/// Builds a rule, checking well-formedness and computing the permutative flag.
RewriteRule make_rule(Rune rune, std::vector<Term> hyps, Term lhs, Term rhs);

/// Parses monitor criteria: T, a keyword list over :condition/:lambda/
/// :depth/:abstraction, or a bare condition term.
BreakCriteria parse_criteria(const SExpr& s, const World& world);

}  // namespace brrkit
