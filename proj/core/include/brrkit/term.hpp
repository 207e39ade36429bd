#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "brrkit/sexpr.hpp"

namespace brrkit {

/// An immutable term in translated form: a variable, a quoted constant,
/// or a function application. Copies share structure.
class Term {
 public:
  enum class Kind { Var, Quote, App };

  Term();  // 'NIL

  static Term var(std::string name);
  static Term quote(SExpr value);
  static Term app(std::string fn, std::vector<Term> args);

  static Term t() { return quote(SExpr::t()); }
  static Term nil() { return quote(SExpr::nil()); }

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  bool is_quote() const { return kind() == Kind::Quote; }
  bool is_app() const { return kind() == Kind::App; }
  bool is_app(std::string_view fn) const { return is_app() && name() == fn; }
  bool is_nil() const { return is_quote() && value().is_nil(); }
  bool is_t() const { return is_quote() && value().is_symbol("T"); }

  /// Variable name or function symbol.
  const std::string& name() const;
  /// The quoted value; only valid for Quote terms.
  const SExpr& value() const;
  std::span<const Term> args() const;
  const Term& arg(std::size_t i) const { return args()[i]; }

  /// Number of Var/Quote/App nodes.
  std::size_t size() const;
  std::size_t hash() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Total syntactic term order: size first, then lexorder of the printed form.
/// Returns <0, 0, >0.
int term_order(const Term& a, const Term& b);

/// A list of variable bindings in binding order.
class Substitution {
 public:
  using Binding = std::pair<std::string, Term>;

  Substitution() = default;
  Substitution(std::initializer_list<Binding> bindings);

  const Term* lookup(std::string_view var) const;
  bool binds(std::string_view var) const { return lookup(var) != nullptr; }
  /// Adds a binding; the variable must not already be bound.
  void bind(std::string var, Term value);

  const std::vector<Binding>& bindings() const { return bindings_; }
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::vector<Binding> bindings_;
};

/// Literals, implicitly disjoined.
using Clause = std::vector<Term>;

/// A quoted (LAMBDA formals body) constant.
struct QuotedLambda {
  std::vector<std::string> formals;
  SExpr body;
};

std::optional<QuotedLambda> as_quoted_lambda(const Term& t);
bool is_quoted_lambda(const Term& t);

// ---------------------------------------------------------------------------
// Conversion

/// Records the arity of every function symbol seen; a later application
/// with a different argument count is an error.
class ArityTable {
 public:
  void check(const std::string& fn, std::size_t arity);
  std::optional<std::size_t> arity(const std::string& fn) const;

 private:
  std::map<std::string, std::size_t> arities_;
};

/// Symbols that always denote constants (T, NIL, keywords).
bool is_constant_symbol(const SExpr& e);

/// Converts an s-expression to a term. With `vars` given, only those symbols
/// become variables and any other non-constant symbol is an error; without
/// it, every non-constant symbol is a variable.
Term to_term(const SExpr& s, const std::set<std::string>* vars = nullptr, ArityTable* arities = nullptr);
Term to_term(const SExpr& s, const std::set<std::string>& vars, ArityTable* arities = nullptr);

SExpr to_sexpr(const Term& t);
SExpr to_sexpr(const Clause& c);
SExpr to_sexpr(const Substitution& s);

std::string print_term(const Term& t);
std::string pretty_term(const Term& t, int indent = 0);
std::string print_clause(const Clause& c);

/// Variables of t in order of first occurrence.
std::vector<std::string> vars_of(const Term& t);
void collect_vars(const Term& t, std::set<std::string>& out);

// ---------------------------------------------------------------------------
// Operations

Term subst_apply(const Substitution& s, const Term& t);

/// True iff small equals big or occurs inside one of its arguments.
/// Quoted constants are atomic.
bool occurs_subterm(const Term& small, const Term& big);

/// Calls f on every subterm in leftmost-innermost (post) order.
void for_each_subterm_postorder(const Term& t, const std::function<void(const Term&)>& f);

/// One-way matching: extends init so that subst_apply(result, pattern) == target.
std::optional<Substitution> match(const Term& pattern, const Term& target, const Substitution& init = {});

/// True iff the pattern matches except at quoted LAMBDA positions (and does
/// not match outright).
bool match_except_lambdas(const Term& pattern, const Term& target);

/// Variable names GENSYM<i> not occurring in `avoid`, in increasing order.
class FreshNames {
 public:
  explicit FreshNames(const Term& avoid);
  std::string next();

 private:
  std::set<std::string> used_;
  int counter_ = 0;
};

}  // namespace brrkit
