#include "brrkit/context.hpp"

#include <algorithm>

namespace brrkit {

std::string to_string(GStackMode m) {
  switch (m) {
    case GStackMode::Off: return "off";
    case GStackMode::Brr: return "brr";
    case GStackMode::BrrData: return "brr-data";
  }
  return "off";
}

TypeAlist TypeAlist::assume(const Term& t, bool truth) const {
  Term u = t;
  while (u.is_app("NOT")) {
    u = u.arg(0);
    truth = !truth;
  }
  if (u.is_quote() || lookup(u)) return *this;
  TypeAlist out = *this;
  out.entries_.insert(out.entries_.begin(), Entry{u, truth});
  return out;
}

std::optional<bool> TypeAlist::lookup(const Term& t) const {
  for (const auto& e : entries_) {
    if (e.term == t) return e.truth;
  }
  return std::nullopt;
}

std::optional<Term> TypeAlist::equality_replacement(const Term& t) const {
  for (const auto& e : entries_) {
    if (!e.truth || !e.term.is_app("EQUAL")) continue;
    const Term& a = e.term.arg(0);
    const Term& b = e.term.arg(1);
    if (a == t && term_order(b, a) < 0) return b;
    if (b == t && term_order(a, b) < 0) return a;
  }
  return std::nullopt;
}

bool is_boolean_fn(const std::string& fn) {
  static const std::set<std::string> fns{"EQUAL", "NOT",  "CONSP", "ATOM", "STRINGP", "INTEGERP",
                                         "SYMBOLP", "<", "NATP", "IMPLIES", "BOOLEANP"};
  return fns.contains(fn);
}

namespace {

struct Decoded {
  std::string type;
  Term term;
};

Decoded decode(const TypeAlist::Entry& e) {
  const Term& t = e.term;
  if (t.is_app() && t.args().size() == 1) {
    static const std::vector<std::pair<std::string, std::string>> recognizers{
        {"CONSP", "*TS-CONS*"}, {"STRINGP", "*TS-STR*"}, {"INTEGERP", "*TS-INTEGER*"}, {"SYMBOLP", "*TS-SYMBOL*"}};
    for (const auto& [fn, ts] : recognizers) {
      if (t.name() == fn) return {e.truth ? ts : "(TS-COMPLEMENT " + ts + ")", t.arg(0)};
    }
  }
  if (!e.truth) return {"*TS-NIL*", t};
  if (t.is_app() && is_boolean_fn(t.name())) return {"*TS-T*", t};
  return {"(TS-COMPLEMENT *TS-NIL*)", t};
}

}  // namespace

std::string render_type_alist(const TypeAlist& ta, const World& w) {
  std::vector<std::pair<std::string, std::vector<Term>>> groups;
  for (const auto& e : ta.entries()) {
    Decoded d = decode(e);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == d.type; });
    if (it == groups.end()) {
      groups.push_back({d.type, {d.term}});
    } else {
      it->second.push_back(d.term);
    }
  }
  std::string out = "\nDecoded type-alist:\n";
  for (const auto& [type, terms] : groups) {
    out += "-----\nTerms with type " + type + ":\n";
    for (const auto& t : terms) out += pretty(w.untranslate(t)) + "\n";
  }
  out += "\n==========\nUse (GET-BRR-LOCAL 'TYPE-ALIST STATE) to see actual type-alist.\n";
  return out;
}

std::string print_failure(const FailureReason& r) {
  using K = FailureReason::Kind;
  std::string hyp = ":HYP " + std::to_string(r.hyp);
  switch (r.kind) {
    case K::HypFailed:
      return hyp + " rewrote to " + print_term(r.rewrote_to);
    case K::FreeVarsNotFound:
      return hyp + " contains free variables for which no suitable instantiation was found";
    case K::BackchainLimit:
      return hyp + " could not be relieved within the backchain limit";
    case K::LoopStopper:
      return "it would permute the target into a term that is not smaller";
    case K::NearMiss:
      return ":LHS did not match :TARGET";
    case K::RecursiveExpansionRejected:
      return "the recursive expansion did not simplify the target";
  }
  return "unknown";
}

SExpr to_sexpr(const FailureReason& r) {
  using K = FailureReason::Kind;
  switch (r.kind) {
    case K::HypFailed:
      return SExpr::list({SExpr::symbol(":HYP"), SExpr::integer(static_cast<std::int64_t>(r.hyp)),
                          SExpr::symbol(":REWROTE-TO"), to_sexpr(r.rewrote_to)});
    case K::FreeVarsNotFound:
      return SExpr::list({SExpr::symbol(":FREE-VARS"), SExpr::integer(static_cast<std::int64_t>(r.hyp))});
    case K::BackchainLimit:
      return SExpr::list({SExpr::symbol(":BACKCHAIN-LIMIT"), SExpr::integer(static_cast<std::int64_t>(r.hyp))});
    case K::LoopStopper:
      return SExpr::symbol(":LOOP-STOPPER");
    case K::NearMiss:
      return SExpr::symbol("NEAR-MISS");
    case K::RecursiveExpansionRejected:
      return SExpr::symbol(":RECURSIVE-EXPANSION-REJECTED");
  }
  return SExpr::nil();
}

}  // namespace brrkit
