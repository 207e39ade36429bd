#include "brrkit/gstack.hpp"

namespace brrkit {

Frame Frame::simplifying_clause(Clause cl) {
  Frame f;
  f.kind = Kind::SimplifyingClause;
  f.clause = std::move(cl);
  return f;
}

Frame Frame::literal_atom(std::size_t ordinal, Term atom) {
  Frame f;
  f.kind = Kind::RewritingLiteralAtom;
  f.ordinal = ordinal;
  f.term = std::move(atom);
  return f;
}

Frame Frame::argument(std::size_t ordinal, Term t, Substitution s) {
  Frame f;
  f.kind = Kind::RewritingArg;
  f.ordinal = ordinal;
  f.term = std::move(t);
  f.subst = std::move(s);
  return f;
}

Frame Frame::applying(Rune rune, Term target) {
  Frame f;
  f.kind = Kind::ApplyingRule;
  f.rune = std::move(rune);
  f.term = std::move(target);
  return f;
}

Frame Frame::body(Term t, Substitution s) {
  Frame f;
  f.kind = Kind::RewritingBody;
  f.term = std::move(t);
  f.subst = std::move(s);
  return f;
}

Frame Frame::rhs(Term t, Substitution s) {
  Frame f;
  f.kind = Kind::RewritingRhs;
  f.term = std::move(t);
  f.subst = std::move(s);
  return f;
}

Frame Frame::hypothesis(std::size_t ordinal, Term t, Substitution s) {
  Frame f;
  f.kind = Kind::RelievingHyp;
  f.ordinal = ordinal;
  f.term = std::move(t);
  f.subst = std::move(s);
  return f;
}

Frame Frame::lambda_body(Term t) {
  Frame f;
  f.kind = Kind::RewritingLambdaBody;
  f.term = std::move(t);
  return f;
}

std::string ordinal_word(std::size_t n) {
  static const char* const words[] = {"zeroth", "first",   "second", "third", "fourth", "fifth",
                                      "sixth",  "seventh", "eighth", "ninth", "tenth"};
  if (n <= 10) return words[n];
  return "#" + std::to_string(n);
}

namespace {

constexpr int kTermIndent = 5;
constexpr int kSubstIndent = 3;

void append_term(std::string& out, const SExpr& e) {
  out.append(kTermIndent, ' ');
  out += pretty(e, kTermIndent);
}

void append_subst(std::string& out, const Substitution& s) {
  if (s.empty()) return;
  out += "\n";
  out.append(kSubstIndent, ' ');
  out += "under the substitution";
  const auto& b = s.bindings();
  for (auto it = b.rbegin(); it != b.rend(); ++it) {
    std::string lead = it->first + " : ";
    out += "\n";
    out.append(kTermIndent, ' ');
    out += lead;
    out += pretty(to_sexpr(it->second), kTermIndent + static_cast<int>(lead.size()));
  }
}

}  // namespace

std::string render_frame(const Frame& f, std::size_t number) {
  std::string out = std::to_string(number) + ". ";
  using K = Frame::Kind;
  switch (f.kind) {
    case K::SimplifyingClause:
      out += "Simplifying the clause\n";
      append_term(out, to_sexpr(f.clause));
      return out;
    case K::RewritingLiteralAtom:
      out += "Rewriting (to simplify) the atom of the " + ordinal_word(f.ordinal) + " literal,\n";
      append_term(out, to_sexpr(f.term));
      out += ",";
      return out;
    case K::RewritingArg:
      out += "Rewriting (to simplify) the " + ordinal_word(f.ordinal) + " argument,\n";
      break;
    case K::ApplyingRule:
      out += "Attempting to apply " + print_rune(f.rune) + " to\n";
      append_term(out, to_sexpr(f.term));
      return out;
    case K::RewritingBody:
      out += "Rewriting (to simplify) the body,\n";
      break;
    case K::RewritingRhs:
      out += "Rewriting (to simplify) the rhs of the conclusion,\n";
      break;
    case K::RelievingHyp:
      out += "Rewriting (to establish) the " + ordinal_word(f.ordinal) + " hypothesis,\n";
      break;
    case K::RewritingLambdaBody:
      out += "Rewriting (to simplify) the body of a lambda object,\n";
      break;
  }
  append_term(out, to_sexpr(f.term));
  out += ",";
  append_subst(out, f.subst);
  return out;
}

std::string render_gstack(const GStack& gs) {
  std::string out;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    out += render_frame(gs[i], i + 1);
    out += "\n";
  }
  return out;
}

}  // namespace brrkit
