#pragma once

#include <string>
#include <vector>

#include "brrkit/rule_db.hpp"

namespace brrkit {

/// One displayable frame of the rewriter's call stack.
struct Frame {
  enum class Kind {
    SimplifyingClause,
    RewritingLiteralAtom,
    RewritingArg,
    ApplyingRule,
    RewritingBody,
    RewritingRhs,
    RelievingHyp,
    RewritingLambdaBody,
  };

  Kind kind = Kind::SimplifyingClause;
  std::size_t ordinal = 0;  // 1-based literal, argument or hypothesis number
  Term term;
  Clause clause;
  Substitution subst;
  Rune rune;

  static Frame simplifying_clause(Clause cl);
  static Frame literal_atom(std::size_t ordinal, Term atom);
  static Frame argument(std::size_t ordinal, Term t, Substitution s);
  static Frame applying(Rune rune, Term target);
  static Frame body(Term t, Substitution s);
  static Frame rhs(Term t, Substitution s);
  static Frame hypothesis(std::size_t ordinal, Term t, Substitution s);
  static Frame lambda_body(Term t);

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// Outermost frame first.
using GStack = std::vector<Frame>;

/// "first" … "tenth", then "#11", "#12", ….
std::string ordinal_word(std::size_t n);

/// Renders frame number `number` in cw-gstack style, without a trailing newline.
std::string render_frame(const Frame& f, std::size_t number);

/// Renders every frame, one per block, each followed by a newline.
std::string render_gstack(const GStack& gs);

}  // namespace brrkit
