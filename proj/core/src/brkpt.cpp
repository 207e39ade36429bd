#include "brrkit/brkpt.hpp"

#include <algorithm>
#include <cctype>

namespace brrkit {

std::optional<ExitMode> parse_exit_mode(const SExpr& cmd) {
  if (!cmd.is_keyword()) return std::nullopt;
  static const std::vector<std::pair<std::string, ExitMode>> modes{
      {":EVAL", ExitMode::Eval},      {":GO", ExitMode::Go},          {":OK", ExitMode::Ok},
      {":EVAL!", ExitMode::EvalBang}, {":GO!", ExitMode::GoBang}, {":OK!", ExitMode::OkBang}};
  for (const auto& [name, mode] : modes) {
    if (cmd.text() == name) return mode;
  }
  return std::nullopt;
}

bool is_bang(ExitMode m) { return m == ExitMode::EvalBang || m == ExitMode::GoBang || m == ExitMode::OkBang; }

// ---------------------------------------------------------------------------

std::size_t BrrStatus::depth() const {
  std::size_t n = 0;
  for (const BrrStatus* s = this; s; s = s->previous.get()) n += s->open ? 1 : 0;
  return n;
}

const MonitorEntry* BrrStatus::find_monitor(const Rune& r) const {
  for (const auto& e : monitored) {
    if (e.rune == r) return &e;
  }
  return nullptr;
}

bool BrrStatus::inner_breaks_suppressed() const {
  for (const BrrStatus* s = this; s; s = s->previous.get()) {
    if (s->open && is_bang(s->locals.exit_mode)) return true;
  }
  return false;
}

BrrStatus push_status(const BrrStatus& s, GStack gs, BrrLocals locals) {
  BrrStatus next;
  next.entry_code = s.entry_code;
  next.monitored = s.monitored;
  next.gstack = std::move(gs);
  next.locals = std::move(locals);
  next.previous = std::make_shared<const BrrStatus>(s);
  next.open = true;
  next.locals.depth = next.depth();
  return next;
}

BrrStatus pop_status(const BrrStatus& s) {
  if (!s.previous) return s;
  BrrStatus prev = *s.previous;
  prev.monitored = s.monitored;
  prev.entry_code = s.entry_code;
  return prev;
}

BrrStatus base_status(const BrrStatus& s) {
  BrrStatus cur = s;
  while (cur.previous) cur = pop_status(cur);
  cur.open = false;
  return cur;
}

BrrStatus& brr_status(WormholeStatus& ws) {
  if (!ws.data.has_value()) ws.data = BrrStatus{};
  auto* s = std::any_cast<BrrStatus>(&ws.data);
  if (!s) throw Error("brr wormhole holds an unexpected status");
  s->entry_code = ws.entry_code;
  return *s;
}

BrrStatus brr_status_copy(const WormholeStatus& ws) {
  if (const auto* s = std::any_cast<BrrStatus>(&ws.data)) return *s;
  BrrStatus s;
  s.entry_code = ws.entry_code;
  return s;
}

// ---------------------------------------------------------------------------

namespace {

Term generalize_lambdas(const Term& t, FreshNames& fresh) {
  if (is_quoted_lambda(t)) return Term::var(fresh.next());
  if (!t.is_app()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(generalize_lambdas(a, fresh));
  return Term::app(t.name(), std::move(args));
}

Term generalize_below(const Term& t, std::size_t depth, std::size_t k, FreshNames& fresh) {
  if (t.is_var()) return t;
  if (depth > 0 && depth >= k) return Term::var(fresh.next());
  if (!t.is_app()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(generalize_below(a, depth + 1, k, fresh));
  return Term::app(t.name(), std::move(args));
}

}  // namespace

Term near_miss_pattern(NearMissCriterion c, const Term& lhs, const BreakCriteria& criteria) {
  FreshNames fresh(lhs);
  switch (c) {
    case NearMissCriterion::Lambda:
      return generalize_lambdas(lhs, fresh);
    case NearMissCriterion::Depth:
      if (!criteria.depth) throw Error("no :depth criterion");
      return generalize_below(lhs, 0, *criteria.depth, fresh);
    case NearMissCriterion::Abstraction:
      if (!criteria.abstraction) throw Error("no :abstraction criterion");
      return *criteria.abstraction;
  }
  return lhs;
}

std::vector<NearMissHit> brr_near_missp(const MonitorEntry& entry, const Term& lhs, const Term& target) {
  std::vector<NearMissHit> hits;
  const BreakCriteria& c = entry.criteria;
  if (c.lambda && match_except_lambdas(lhs, target)) {
    hits.push_back({NearMissCriterion::Lambda, near_miss_pattern(NearMissCriterion::Lambda, lhs, c),
                    ":LHS matches :TARGET except at one or more quoted LAMBDA constants."});
  }
  if (c.depth) {
    Term p = near_miss_pattern(NearMissCriterion::Depth, lhs, c);
    if (match(p, target)) {
      hits.push_back({NearMissCriterion::Depth, p,
                      ":LHS matches :TARGET down to depth " + std::to_string(*c.depth) + "."});
    }
  }
  if (c.abstraction && match(*c.abstraction, target)) {
    hits.push_back({NearMissCriterion::Abstraction, *c.abstraction,
                    "The :ABSTRACTION pattern, " + print_term(*c.abstraction) + ", matches :TARGET."});
  }
  return hits;
}

// ---------------------------------------------------------------------------

SExpr brr_at(const std::string& key, const BrrLocals& l) {
  auto opt_term = [](const std::optional<Term>& t) { return t ? to_sexpr(*t) : SExpr::nil(); };
  if (key == ":TARGET") return to_sexpr(l.target);
  if (key == ":UNIFY-SUBST") return to_sexpr(l.unify_subst);
  if (key == ":LEMMA") return l.lemma ? to_sexpr(l.lemma->rune) : SExpr::nil();
  if (key == ":LHS") return l.lemma ? to_sexpr(l.lemma->lhs) : SExpr::nil();
  if (key == ":RHS") return l.lemma ? to_sexpr(l.lemma->rhs) : SExpr::nil();
  if (key == ":TYPE-ALIST") {
    std::vector<SExpr> items;
    for (const auto& e : l.type_alist.entries()) {
      items.push_back(SExpr::list({to_sexpr(e.term), e.truth ? SExpr::t() : SExpr::nil()}));
    }
    return SExpr::list(std::move(items));
  }
  if (key == ":ANCESTORS") {
    std::vector<SExpr> items;
    for (const auto& a : l.ancestors) items.push_back(to_sexpr(a));
    return SExpr::list(std::move(items));
  }
  if (key == ":WONP") return l.wonp ? (*l.wonp ? SExpr::t() : SExpr::nil()) : SExpr::nil();
  if (key == ":FAILURE-REASON") return l.failure_reason ? to_sexpr(*l.failure_reason) : SExpr::nil();
  if (key == ":BRR-RESULT") return opt_term(l.brr_result);
  if (key == ":DEPTH") return SExpr::integer(static_cast<std::int64_t>(l.depth));
  throw Error("unknown brr@ key " + key);
}

SExpr eval_condition(const Term& cond, const BrrLocals& locals) {
  switch (cond.kind()) {
    case Term::Kind::Quote:
      return cond.value();
    case Term::Kind::Var:
      throw Error("unbound variable " + cond.name() + " in break condition");
    case Term::Kind::App:
      break;
  }
  const std::string& fn = cond.name();
  if (fn == "IF") {
    SExpr test = eval_condition(cond.arg(0), locals);
    return eval_condition(cond.arg(test.is_nil() ? 2 : 1), locals);
  }
  if (fn == "BRR@") {
    const Term& key = cond.arg(0);
    if (!key.is_quote() || !key.value().is_keyword()) throw Error("brr@ expects a keyword");
    return brr_at(key.value().text(), locals);
  }
  std::vector<Term> args;
  for (const auto& a : cond.args()) args.push_back(Term::quote(eval_condition(a, locals)));
  if (auto v = ground_eval(fn, args)) return v->value();
  throw Error("cannot evaluate " + fn + " in a break condition");
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kMargin = 70;

// A term starting a line of its own: flat when it fits, else pretty-printed.
std::string on_fresh_line(const Term& t) {
  std::string flat = print_term(t);
  return flat.size() <= static_cast<std::size_t>(kMargin) ? flat : pretty(to_sexpr(t));
}

std::string banner_line(std::size_t depth, const Rune& rune, const Term& target) {
  std::string head = "(" + std::to_string(depth) + " Breaking " + print_rune(rune) + " on ";
  std::string flat = print_term(target);
  if (head.size() + flat.size() + 1 <= static_cast<std::size_t>(kMargin)) return head + flat + ":\n";
  return head + "\n" + on_fresh_line(target) + ":\n";
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

nlohmann::json open_payload(const BrrStatus& s) {
  const BrrLocals& l = s.locals;
  nlohmann::json j{{"depth", s.depth()}, {"rune", print_rune(l.lemma->rune)}, {"target", print_term(l.target)}};
  if (l.near_miss) {
    j["criteria"] = print_criteria(l.criteria);
    j["near_miss_messages"] = l.near_miss_messages;
  }
  return j;
}

bool condition_holds(const BreakCriteria& c, const BrrLocals& locals, Output& out) {
  try {
    return !eval_condition(c.condition, locals).is_nil();
  } catch (const Error& e) {
    out.text("Warning: the break condition " + print_term(c.condition) + " could not be evaluated (" + e.what() +
             "); breaking anyway.\n");
    return true;
  }
}

}  // namespace

void BrrHandlers::near_miss_brkpt1(const NearMissCall& c) {
  env_.wormholes->wormhole_enter(kBrrWormhole, *env_.globals, [&](WormholeStatus& ws) {
    BrrStatus& s = brr_status(ws);
    if (s.inner_breaks_suppressed()) return;
    const MonitorEntry* entry = s.find_monitor(c.rule->rune);
    if (!entry || !entry->criteria.has_near_miss_criteria()) return;
    auto hits = brr_near_missp(*entry, c.rule->lhs, c.target);
    if (hits.empty()) return;
    BrrLocals l;
    l.lemma = c.rule;
    l.target = c.target;
    l.type_alist = c.type_alist;
    l.ancestors = c.ancestors;
    l.criteria = entry->criteria;
    l.near_miss = true;
    for (const auto& h : hits) l.near_miss_messages.push_back(h.message);
    if (!condition_holds(l.criteria, l, *env_.out)) return;
    s = push_status(s, c.gstack, std::move(l));

    std::string text = "\n" + banner_line(s.depth(), c.rule->rune, c.target);
    text += "\nThe pattern in this rule failed to match the target.  However, this\n";
    text += "is considered a NEAR MISS under the break criteria, \n";
    text += print_criteria(s.locals.criteria) + ", specified when this rule was monitored.\n";
    text += hits.size() == 1 ? "The following criterion is satisfied.\n" : "The following criteria are satisfied.\n";
    for (const auto& h : hits) text += "\n* " + h.message + "\n";
    text += "\n";
    env_.out->text(text);
    env_.out->message("break-open", open_payload(s));
    ExitMode m = interact(ws, false);
    brr_status(ws).locals.exit_mode = m;
  });
}

void BrrHandlers::brkpt1(const Brkpt1Call& c) {
  if (env_.mode == GStackMode::BrrData && env_.strategy && env_.strategy->entry1(c.ancestors, c.gstack, c.rcnst)) {
    BrrData1 d{c.rule, c.target, c.unify_subst, c.type_alist, {}, c.ancestors, c.rcnst, c.ttree, c.gstack};
    env_.wormholes->wormhole_eval(kBrrDataWormhole, [&](WormholeStatus ws) {
      auto* store = std::any_cast<BrrDataStore>(&ws.data);
      BrrDataStore current = store ? std::move(*store) : BrrDataStore{};
      ws.data = env_.strategy->update1(std::move(current), std::move(d));
      return ws;
    });
  }
  env_.wormholes->wormhole_enter(kBrrWormhole, *env_.globals, [&](WormholeStatus& ws) {
    BrrStatus& s = brr_status(ws);
    if (s.inner_breaks_suppressed()) return;
    const MonitorEntry* entry = s.find_monitor(c.rule->rune);
    if (!entry) return;
    BrrLocals l;
    l.lemma = c.rule;
    l.target = c.target;
    l.unify_subst = c.unify_subst;
    l.type_alist = c.type_alist;
    l.ancestors = c.ancestors;
    l.criteria = entry->criteria;
    l.depth = s.depth() + 1;
    if (!condition_holds(l.criteria, l, *env_.out)) return;
    s = push_status(s, c.gstack, std::move(l));
    env_.out->text("\n" + banner_line(s.depth(), c.rule->rune, c.target));
    env_.out->message("break-open", open_payload(s));
    ExitMode m = interact(ws, false);
    brr_status(ws).locals.exit_mode = m;
  });
}

void BrrHandlers::brkpt2(const Brkpt2Call& c) {
  bool near_miss = c.failure_reason && c.failure_reason->kind == FailureReason::Kind::NearMiss;
  if (env_.mode == GStackMode::BrrData && !near_miss && env_.strategy &&
      env_.strategy->entry2(c.ancestors, c.gstack, c.rcnst)) {
    BrrData2 d{c.failure_reason, c.unify_subst, c.brr_result, c.rcnst, c.ttree, c.gstack};
    env_.wormholes->wormhole_eval(kBrrDataWormhole, [&](WormholeStatus ws) {
      auto* store = std::any_cast<BrrDataStore>(&ws.data);
      BrrDataStore current = store ? std::move(*store) : BrrDataStore{};
      ws.data = env_.strategy->update2(std::move(current), std::move(d));
      return ws;
    });
  }
  env_.wormholes->wormhole_enter(kBrrWormhole, *env_.globals, [&](WormholeStatus& ws) {
    BrrStatus& s = brr_status(ws);
    if (!s.open || s.gstack != c.gstack) return;
    s.locals.wonp = c.wonp;
    s.locals.failure_reason = c.failure_reason;
    s.locals.brr_result = c.brr_result;
    if (!c.unify_subst.empty()) s.locals.unify_subst = c.unify_subst;
    switch (s.locals.exit_mode) {
      case ExitMode::Eval:
      case ExitMode::EvalBang:
        print_result_line(s, true);
        interact(ws, true);
        break;
      case ExitMode::Go:
      case ExitMode::GoBang:
        print_result_line(s, false);
        break;
      default:
        break;
    }
    close_break(ws);
  });
}

void BrrHandlers::print_result_line(const BrrStatus& s, bool eval) {
  const BrrLocals& l = s.locals;
  std::string d = std::to_string(s.depth());
  std::string rune = print_rune(l.lemma->rune);
  std::string line;
  if (l.wonp.value_or(false) && l.brr_result) {
    line = d + (eval ? "! " : " ") + rune + " produced ";
    std::string flat = print_term(*l.brr_result);
    if (line.size() + flat.size() + 1 <= static_cast<std::size_t>(kMargin)) {
      line += flat;
    } else {
      line += "\n" + on_fresh_line(*l.brr_result);
    }
    line += ".";
  } else {
    std::string why = l.failure_reason ? print_failure(*l.failure_reason) : "of an unknown reason";
    line = d + "x " + rune + " failed because " + why + ".";
  }
  env_.out->text(eval ? "\n" + line + "\n\n" : line + "\n");
}

void BrrHandlers::close_break(WormholeStatus& ws) {
  BrrStatus& s = brr_status(ws);
  const BrrLocals& l = s.locals;
  nlohmann::json payload{{"depth", s.depth()}, {"rune", print_rune(l.lemma->rune)}, {"wonp", l.wonp.value_or(false)}};
  if (l.brr_result) payload["result"] = print_term(*l.brr_result);
  if (l.failure_reason) payload["failure_reason"] = print_failure(*l.failure_reason);
  env_.out->text(std::to_string(s.depth()) + ")\n");
  env_.out->message("break-close", payload);
  s = pop_status(s);
}

ExitMode BrrHandlers::interact(WormholeStatus& ws, bool closing) {
  for (;;) {
    std::size_t depth = brr_status(ws).depth();
    std::string prompt = std::to_string(depth) + " brr>";
    env_.out->message("break-prompt", {{"depth", depth}, {"prompt", prompt}, {"closing", closing}});
    auto text = env_.in->read(prompt);
    if (!text) throw Abort();
    SExpr cmd;
    try {
      cmd = parse(*text);
    } catch (const ParseError& e) {
      env_.out->text(std::string("Error: ") + e.what() + "\n");
      continue;
    }
    if (auto m = parse_exit_mode(cmd)) return *m;
    if (cmd.is_symbol(":A!")) throw Abort();
    try {
      if (break_command(cmd, brr_status(ws), closing)) continue;
      if (cmd.is_list() && env_.extra_command && env_.extra_command(cmd)) continue;
      env_.out->text("Unknown break command " + print(cmd) + ".  Type :help for a list of commands.\n");
    } catch (const Abort&) {
      throw;
    } catch (const Error& e) {
      env_.out->text(std::string("Error: ") + e.what() + "\n");
    }
  }
}

bool BrrHandlers::break_command(const SExpr& cmd, const BrrStatus& s, bool closing) {
  const BrrLocals& l = s.locals;
  Output& out = *env_.out;
  auto show = [&](const SExpr& e) { out.text(pretty(e) + "\n"); };
  if (cmd.is_list() && cmd.size() == 2 && cmd[0].is_symbol("GET-BRR-LOCAL")) {
    const SExpr& arg = cmd[1].is_quote_form() ? cmd[1][1] : cmd[1];
    if (!arg.is_symbol()) throw Error("get-brr-local expects a symbol");
    show(brr_at(":" + arg.text(), l));
    return true;
  }
  if (cmd.is_list() && cmd.size() == 2 && cmd[0].is_symbol("BRR@")) {
    if (!cmd[1].is_keyword()) throw Error("brr@ expects a keyword");
    show(brr_at(cmd[1].text(), l));
    return true;
  }
  if (!cmd.is_keyword()) return false;
  const std::string& k = cmd.text();
  auto post_only = [&](auto&& f) {
    if (!closing) {
      out.text(k + " is not available until the rule has been tried.  Use :eval first.\n");
    } else {
      f();
    }
  };
  if (k == ":TARGET") {
    show(to_sexpr(l.target));
  } else if (k == ":LHS") {
    show(to_sexpr(l.lemma->lhs));
  } else if (k == ":RHS") {
    show(to_sexpr(l.lemma->rhs));
  } else if (k == ":HYPS") {
    std::vector<SExpr> hyps;
    for (const auto& h : l.lemma->hyps) hyps.push_back(to_sexpr(h));
    show(SExpr::list(std::move(hyps)));
  } else if (k == ":UNIFY-SUBST") {
    if (l.unify_subst.empty()) out.text("NIL\n");
    for (const auto& [v, t] : l.unify_subst.bindings()) {
      std::string lead = "     " + v + " : ";
      out.text(lead + pretty(to_sexpr(t), static_cast<int>(lead.size())) + "\n");
    }
  } else if (k == ":TYPE-ALIST") {
    out.text(render_type_alist(l.type_alist, *env_.world));
  } else if (k == ":ANCESTORS") {
    if (l.ancestors.empty()) out.text("NIL\n");
    for (const auto& a : l.ancestors) show(to_sexpr(a));
  } else if (k == ":PATH") {
    out.text(render_gstack(s.gstack));
  } else if (k == ":FAILURE-REASON") {
    post_only([&] { out.text(l.failure_reason ? print_failure(*l.failure_reason) + "\n" : "NIL\n"); });
  } else if (k == ":WONP") {
    post_only([&] { out.text(l.wonp.value_or(false) ? "T\n" : "NIL\n"); });
  } else if (k == ":BRR-RESULT") {
    post_only([&] { show(l.brr_result ? to_sexpr(*l.brr_result) : SExpr::nil()); });
  } else if (k == ":DEPTH") {
    out.text(std::to_string(s.depth()) + "\n");
  } else if (k == ":HELP") {
    out.text(break_help());
  } else {
    return false;
  }
  return true;
}

std::string break_help() {
  return "Break commands:\n"
         "  :target :lhs :rhs :hyps :unify-subst :type-alist :ancestors :path\n"
         "  :failure-reason :wonp :brr-result (after :eval)\n"
         "  (get-brr-local 'name) (brr@ :key)\n"
         "  :eval :go :ok, and :eval! :go! :ok! to suppress inner breaks\n"
         "  :a! to abort the proof\n"
         "  (monitor 'rule crit) (unmonitor 'rule) are also accepted.\n";
}

// ---------------------------------------------------------------------------

template <typename F>
void TracingHandlers::traced(const char* name, const Rune& rune, F&& f) {
  ++level_;
  max_level_ = std::max(max_level_, level_);
  std::string tag = std::string(name) + " {" + lower(rune.name) + "}\n";
  out_.text(std::to_string(level_) + "> " + tag);
  try {
    f();
  } catch (...) {
    --level_;
    throw;
  }
  out_.text("<" + std::to_string(level_) + " " + tag);
  --level_;
}

void TracingHandlers::near_miss_brkpt1(const NearMissCall& c) { inner_.near_miss_brkpt1(c); }

void TracingHandlers::brkpt1(const Brkpt1Call& c) {
  traced("BRKPT1", c.rule->rune, [&] { inner_.brkpt1(c); });
}

void TracingHandlers::brkpt2(const Brkpt2Call& c) {
  traced("BRKPT2", c.rule->rune, [&] { inner_.brkpt2(c); });
}

}  // namespace brrkit
