#include "brrkit/rewriter.hpp"

#include <algorithm>

namespace brrkit {

namespace {

class FramePush {
 public:
  FramePush(GStack& gs, Frame f) : gs_(gs) { gs_.push_back(std::move(f)); }
  ~FramePush() { gs_.pop_back(); }
  FramePush(const FramePush&) = delete;
  FramePush& operator=(const FramePush&) = delete;

 private:
  GStack& gs_;
};

template <typename T>
class StackPush {
 public:
  StackPush(std::vector<T>& v, T x) : v_(v) { v_.push_back(std::move(x)); }
  ~StackPush() { v_.pop_back(); }
  StackPush(const StackPush&) = delete;
  StackPush& operator=(const StackPush&) = delete;

 private:
  std::vector<T>& v_;
};

bool consp(const SExpr& v) { return v.is_list() && !v.items().empty(); }

Term bool_term(bool b) { return b ? Term::t() : Term::nil(); }

std::int64_t fix(const SExpr& v) { return v.is_integer() ? v.integer_value() : 0; }

Term negate(const Term& t) {
  if (t.is_quote()) return bool_term(t.value().is_nil());
  if (t.is_app("NOT")) return t.arg(0);
  return Term::app("NOT", {t});
}

bool contains_call(const Term& t, const std::string& fn) {
  if (!t.is_app()) return false;
  if (t.name() == fn) return true;
  return std::any_of(t.args().begin(), t.args().end(), [&](const Term& a) { return contains_call(a, fn); });
}

bool if_contains_call(const Term& t, const std::string& fn) {
  if (!t.is_app()) return false;
  if (t.is_app("IF") && contains_call(t, fn)) return true;
  return std::any_of(t.args().begin(), t.args().end(), [&](const Term& a) { return if_contains_call(a, fn); });
}

void split_conjuncts(const Term& t, std::vector<Term>& out) {
  if (t.is_app("IF") && t.arg(2).is_nil()) {
    split_conjuncts(t.arg(0), out);
    split_conjuncts(t.arg(1), out);
  } else {
    out.push_back(t);
  }
}

}  // namespace

Clause goal_to_clause(const Term& goal, bool flatten) {
  if (!flatten) return {goal};
  Clause cl;
  Term g = goal;
  while (g.is_app("IMPLIES")) {
    std::vector<Term> hyps;
    split_conjuncts(g.arg(0), hyps);
    for (const auto& h : hyps) cl.push_back(negate(h));
    g = g.arg(1);
  }
  cl.push_back(g);
  return cl;
}

std::optional<Term> ground_eval(const std::string& fn, std::span<const Term> args) {
  for (const auto& a : args) {
    if (!a.is_quote()) return std::nullopt;
  }
  auto v = [&](std::size_t i) -> const SExpr& { return args[i].value(); };
  if (args.size() == 1) {
    if (fn == "NOT") return bool_term(v(0).is_nil());
    if (fn == "CONSP") return bool_term(consp(v(0)));
    if (fn == "ATOM") return bool_term(!consp(v(0)));
    if (fn == "STRINGP") return bool_term(v(0).is_string());
    if (fn == "INTEGERP") return bool_term(v(0).is_integer());
    if (fn == "SYMBOLP") return bool_term(v(0).is_symbol() || v(0).is_nil());
    if (fn == "NATP") return bool_term(v(0).is_integer() && v(0).integer_value() >= 0);
    if (fn == "BOOLEANP") return bool_term(v(0).is_nil() || v(0).is_symbol("T"));
    if (fn == "CAR") return Term::quote(consp(v(0)) ? v(0)[0] : SExpr::nil());
    if (fn == "CDR") {
      if (!consp(v(0)) || v(0).size() == 1) return Term::nil();
      std::vector<SExpr> rest(v(0).items().begin() + 1, v(0).items().end());
      return Term::quote(SExpr::list(std::move(rest)));
    }
  }
  if (args.size() == 2) {
    if (fn == "EQUAL") return bool_term(v(0) == v(1));
    if (fn == "<") return bool_term(fix(v(0)) < fix(v(1)));
    if (fn == "IMPLIES") return bool_term(v(0).is_nil() || !v(1).is_nil());
    if (fn == "CONS") {
      if (v(1).is_nil()) return Term::quote(SExpr::list({v(0)}));
      if (!consp(v(1))) return std::nullopt;
      std::vector<SExpr> items{v(0)};
      items.insert(items.end(), v(1).items().begin(), v(1).items().end());
      return Term::quote(SExpr::list(std::move(items)));
    }
  }
  return std::nullopt;
}

Rewriter::Rewriter(const World& world, RewriteConstants rcnst, GStackMode mode, BreakpointHandlers* handlers)
    : world_(world), rcnst_(rcnst), mode_(mode), handlers_(mode == GStackMode::Off ? nullptr : handlers) {}

bool Rewriter::tick() {
  if (exhausted_) return false;
  if (++steps_ > rcnst_.step_budget) exhausted_ = true;
  return !exhausted_;
}

ProofOutcome Rewriter::prove(const Term& goal, bool flatten) {
  ProofOutcome out;
  Clause cl = goal_to_clause(goal, flatten);
  for (;;) {
    bool proved = false;
    Clause next = simplify_clause(cl, proved);
    if (proved) {
      out.proved = true;
      out.log.push_back("Q.E.D.");
      break;
    }
    if (next == cl || exhausted_) {
      out.checkpoints.push_back(next);
      out.log.push_back("checkpoint " + print_clause(next));
      break;
    }
    cl = std::move(next);
  }
  out.budget_exhausted = exhausted_;
  if (exhausted_) out.log.push_back("step budget exhausted");
  out.steps = steps_;
  return out;
}

Clause Rewriter::simplify_clause(const Clause& cl, bool& proved) {
  proved = false;
  for (const auto& lit : cl) {
    if (lit.is_quote() && !lit.is_nil()) {
      proved = true;
      return cl;
    }
  }
  FramePush clause_frame(gstack_, Frame::simplifying_clause(cl));
  Clause cur = cl;
  for (std::size_t i = 0; i < cur.size(); ++i) {
    TypeAlist ta;
    for (std::size_t j = 0; j < cur.size(); ++j) {
      if (j != i) ta = ta.assume(cur[j], false);
    }
    bool negated = cur[i].is_app("NOT");
    Term atom = negated ? cur[i].arg(0) : cur[i];
    Term rewritten;
    {
      FramePush atom_frame(gstack_, Frame::literal_atom(i + 1, atom));
      rewritten = rewrite(atom, {}, ta, true);
    }
    cur[i] = negated ? negate(rewritten) : rewritten;
    if (cur[i].is_quote() && !cur[i].is_nil()) {
      proved = true;
      return cur;
    }
  }
  Clause out;
  for (const auto& lit : cur) {
    if (lit.is_nil() || std::find(out.begin(), out.end(), lit) != out.end()) continue;
    out.push_back(lit);
  }
  for (const auto& lit : out) {
    if (std::find(out.begin(), out.end(), negate(lit)) != out.end()) {
      proved = true;
      break;
    }
  }
  return out;
}

Term Rewriter::rewrite(const Term& t, const Substitution& alist, const TypeAlist& ta, bool iff) {
  if (!tick()) return subst_apply(alist, t);
  switch (t.kind()) {
    case Term::Kind::Quote:
      return t;
    case Term::Kind::Var: {
      const Term* bound = alist.lookup(t.name());
      if (bound) return *bound;
      if (auto known = ta.lookup(t)) {
        if (!*known) return Term::nil();
        if (iff) return Term::t();
      }
      return t;
    }
    case Term::Kind::App:
      break;
  }
  if (t.is_app("IF") && t.args().size() == 3) return rewrite_if(t, alist, ta, iff);
  return rewrite_app(t, alist, ta, iff);
}

Term Rewriter::rewrite_if(const Term& t, const Substitution& alist, const TypeAlist& ta, bool iff) {
  Term test;
  {
    FramePush f(gstack_, Frame::argument(1, t.arg(0), alist));
    test = rewrite(t.arg(0), alist, ta, true);
  }
  if (test.is_quote()) {
    std::size_t branch = test.is_nil() ? 2 : 1;
    FramePush f(gstack_, Frame::argument(branch + 1, t.arg(branch), alist));
    return rewrite(t.arg(branch), alist, ta, iff);
  }
  Term then_branch, else_branch;
  {
    FramePush f(gstack_, Frame::argument(2, t.arg(1), alist));
    then_branch = rewrite(t.arg(1), alist, ta.assume(test, true), iff);
  }
  {
    FramePush f(gstack_, Frame::argument(3, t.arg(2), alist));
    else_branch = rewrite(t.arg(2), alist, ta.assume(test, false), iff);
  }
  if (then_branch == else_branch) return then_branch;
  return Term::app("IF", {test, then_branch, else_branch});
}

Term Rewriter::rewrite_app(const Term& t, const Substitution& alist, const TypeAlist& ta, bool iff) {
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    FramePush f(gstack_, Frame::argument(i + 1, t.arg(i), alist));
    Term a = rewrite(t.arg(i), alist, ta, false);
    if (rcnst_.rewrite_lambda_objects && world_.is_fn_slot(t.name(), i) && is_quoted_lambda(a)) {
      a = rewrite_lambda_object(a);
    }
    args.push_back(std::move(a));
  }
  return finish_app(Term::app(t.name(), std::move(args)), ta, iff);
}

Term Rewriter::rewrite_lambda_object(const Term& q) {
  auto lam = as_quoted_lambda(q);
  Term body = to_term(lam->body);
  Term rewritten;
  {
    FramePush f(gstack_, Frame::lambda_body(body));
    Ancestors saved;
    std::swap(saved, ancestors_);
    try {
      rewritten = rewrite(body, {}, {}, false);
    } catch (...) {
      std::swap(saved, ancestors_);
      throw;
    }
    std::swap(saved, ancestors_);
  }
  if (rewritten == body) return q;
  return Term::quote(SExpr::list({SExpr::symbol("LAMBDA"), q.value()[1], to_sexpr(rewritten)}));
}

Term Rewriter::finish_app(const Term& target, const TypeAlist& ta, bool iff) {
  if (auto v = ground_eval(target.name(), target.args())) return *v;
  if (target.is_app("EQUAL") && target.arg(0) == target.arg(1)) return Term::t();
  if (auto known = ta.lookup(target)) {
    if (!*known) return Term::nil();
    if (iff || is_boolean_fn(target.name())) return Term::t();
  }
  if (auto replacement = ta.equality_replacement(target)) return *replacement;
  if (exhausted_) return target;
  for (const auto& rule : world_.rules_for(target.name())) {
    if (!rule->enabled) continue;
    if (rule->rune.cls == RuneClass::Definition &&
        std::find(expanding_.begin(), expanding_.end(), target.name()) != expanding_.end()) {
      continue;
    }
    if (auto r = try_rule(rule, target, ta)) return *r;
  }
  return target;
}

std::optional<Term> Rewriter::try_rule(const std::shared_ptr<const RewriteRule>& rule_ptr, const Term& target,
                                       const TypeAlist& ta) {
  const RewriteRule& rule = *rule_ptr;
  FramePush apply_frame(gstack_, Frame::applying(rule.rune, target));
  auto u = match(rule.lhs, target);
  if (!u) {
    if (handlers_) {
      handlers_->near_miss_brkpt1({rule_ptr, target, ta, ancestors_, gstack_});
      std::optional<FailureReason> reason = FailureReason::near_miss();
      std::optional<Term> none;
      Substitution empty;
      handlers_->brkpt2({rule_ptr, false, reason, empty, none, ancestors_, gstack_, rcnst_, ttree_});
    }
    return std::nullopt;
  }
  if (handlers_) handlers_->brkpt1({rule_ptr, target, *u, ta, ancestors_, gstack_, rcnst_, ttree_});

  std::optional<FailureReason> failure = relieve_hyps(rule, *u, ta);
  if (!failure && rule.permutative && term_order(subst_apply(*u, rule.rhs), target) >= 0) {
    failure = FailureReason::loop_stopper();
  }
  std::optional<Term> result;
  if (!failure) {
    bool definition = rule.rune.cls == RuneClass::Definition;
    Frame f = definition ? Frame::body(rule.rhs, *u) : Frame::rhs(rule.rhs, *u);
    Term r;
    {
      FramePush rhs_frame(gstack_, std::move(f));
      if (definition) {
        StackPush<std::string> guard(expanding_, target.name());
        r = rewrite(rule.rhs, *u, ta, false);
      } else {
        r = rewrite(rule.rhs, *u, ta, false);
      }
    }
    if (rule.recursive && if_contains_call(r, target.name())) {
      failure = FailureReason::recursion_rejected();
    } else {
      result = std::move(r);
      ttree_.insert(rule.rune);
    }
  }
  if (handlers_) {
    handlers_->brkpt2({rule_ptr, result.has_value(), failure, *u, result, ancestors_, gstack_, rcnst_, ttree_});
  }
  return result;
}

std::optional<FailureReason> Rewriter::relieve_hyps(const RewriteRule& rule, Substitution& u, const TypeAlist& ta) {
  for (std::size_t i = 0; i < rule.hyps.size(); ++i) {
    const Term& hyp = rule.hyps[i];
    bool has_free = false;
    for (const auto& v : vars_of(hyp)) has_free = has_free || !u.binds(v);
    if (has_free) {
      bool found = false;
      for (const auto& e : ta.entries()) {
        if (!e.truth) continue;
        if (auto s = match(hyp, e.term, u)) {
          u = std::move(*s);
          found = true;
          break;
        }
      }
      if (!found) return FailureReason::free_vars(i + 1);
      continue;
    }
    if (ancestors_.size() >= rcnst_.backchain_limit) return FailureReason::backchain_limit(i + 1);
    Term inst = subst_apply(u, hyp);
    if (std::find(ancestors_.begin(), ancestors_.end(), inst) != ancestors_.end()) {
      return FailureReason::hyp_failed(i + 1, inst);
    }
    Term r;
    {
      FramePush f(gstack_, Frame::hypothesis(i + 1, hyp, u));
      StackPush<Term> anc(ancestors_, inst);
      r = rewrite(hyp, u, ta, true);
    }
    if (!r.is_quote() || r.is_nil()) return FailureReason::hyp_failed(i + 1, r);
  }
  return std::nullopt;
}

}  // namespace brrkit
