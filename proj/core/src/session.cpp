#include "brrkit/session.hpp"

#include <fstream>

namespace brrkit {

Term clause_to_term(const Clause& cl) {
  if (cl.empty()) return Term::nil();
  if (cl.size() == 1) return cl[0];
  std::vector<Term> hyps;
  for (std::size_t i = 0; i + 1 < cl.size(); ++i) {
    const Term& lit = cl[i];
    hyps.push_back(lit.is_app("NOT") ? lit.arg(0) : Term::app("NOT", {lit}));
  }
  Term h = hyps.back();
  for (std::size_t i = hyps.size() - 1; i-- > 0;) h = Term::app("IF", {hyps[i], h, Term::nil()});
  return Term::app("IMPLIES", {h, cl.back()});
}

namespace {

// (IF a b 'NIL) chains print as AND for display.
SExpr display_form(const Term& t, const World& w) {
  if (t.is_app("IF") && t.arg(2).is_nil()) {
    std::vector<SExpr> items{SExpr::symbol("AND")};
    Term cur = t;
    while (cur.is_app("IF") && cur.arg(2).is_nil()) {
      items.push_back(display_form(cur.arg(0), w));
      cur = cur.arg(1);
    }
    items.push_back(display_form(cur, w));
    return SExpr::list(std::move(items));
  }
  if (!t.is_app()) return w.untranslate(t);
  SExpr u = w.untranslate(t);
  if (u.is_list() && u.size() == t.args().size() + 1) {
    std::vector<SExpr> items{u[0]};
    for (const auto& a : t.args()) items.push_back(display_form(a, w));
    return SExpr::list(std::move(items));
  }
  return u;
}

const SExpr& unquote(const SExpr& s) { return s.is_quote_form() ? s[1] : s; }

bool truthy(const SExpr& s) { return !unquote(s).is_nil(); }

// Keyword commands and the number of arguments they read.
const std::map<std::string, std::size_t>& keyword_arities() {
  static const std::map<std::string, std::size_t> m{
      {":MONITOR", 2},     {":MONITOR!", 2}, {":UNMONITOR", 1}, {":BRR", 1},    {":MONITORED", 0},
      {":HELP", 0},        {":QUIT", 0},     {":ENABLE", 1},    {":DISABLE", 1}, {":TRACE-BRR", 1},
      {":PE", 1},          {":LOAD", 1},     {":THM", 1},
  };
  return m;
}

}  // namespace

Session::Session(CommandSource& in, Output& out, SessionOptions options)
    : in_(in), out_(out), options_(std::move(options)) {}

void Session::run() {
  for (;;) {
    auto text = in_.read(options_.top_prompt);
    if (!text) break;
    if (!execute(*text)) break;
  }
}

bool Session::execute(const std::string& text) {
  out_.message("command", {{"text", text}});
  SExpr form;
  try {
    form = parse(text);
  } catch (const ParseError& e) {
    error(std::string(e.what()) + " (line " + std::to_string(e.line()) + ", column " + std::to_string(e.column()) +
          ")");
    return true;
  }
  return execute(form);
}

bool Session::execute(const SExpr& form) {
  try {
    if (form.is_keyword()) return dispatch_keyword(form);
    return dispatch(form);
  } catch (const Abort&) {
    out_.text("Abort to ACL2 top-level.\n");
    return true;
  } catch (const Error& e) {
    error(e.what());
    return true;
  }
}

void Session::error(const std::string& msg) {
  out_.text("Error: " + msg + "\n");
  out_.message("error", {{"message", msg}});
}

bool Session::dispatch_keyword(const SExpr& kw) {
  const auto& arities = keyword_arities();
  auto it = arities.find(kw.text());
  if (it == arities.end()) throw Error("unknown command " + kw.text());
  std::vector<SExpr> items{SExpr::symbol(kw.text().substr(1))};
  for (std::size_t i = 0; i < it->second; ++i) {
    auto text = in_.read("");
    if (!text) throw Error(kw.text() + " expects " + std::to_string(it->second) + " argument(s)");
    SExpr arg = parse(*text);
    items.push_back(it->first == ":THM" || it->first == ":LOAD" ? arg : SExpr::quoted(arg));
  }
  return dispatch(SExpr::list(std::move(items)));
}

bool Session::dispatch(const SExpr& form) {
  if (!form.is_list() || form.size() == 0 || !form[0].is_symbol()) {
    throw Error("not a command: " + print(form));
  }
  const std::string& head = form[0].text();
  auto arg = [&](std::size_t i) -> const SExpr& {
    if (i >= form.size()) throw Error(head + ": missing argument " + std::to_string(i));
    return form[i];
  };
  auto ack = [&](const std::string& text) {
    out_.text(text + "\n");
  };

  if (head == "QUIT" || head == "EXIT" || head == "GOOD-BYE") return false;
  if (head == "HELP") {
    out_.text(session_help());
  } else if (head == "LOAD") {
    const SExpr& path = unquote(arg(1));
    if (!path.is_string()) throw Error("load expects a file name string");
    load_rules(path.text());
    ack("Loaded " + path.text() + ".");
  } else if (head == "DEFRULE" || head == "ALIAS" || head == "FN-SLOT") {
    world_ = world_.apply_form(form);
    ack(print(arg(1)));
  } else if (head == "THM") {
    bool flatten = true;
    for (std::size_t i = 2; i + 1 < form.size(); i += 2) {
      if (form[i].is_symbol(":FLATTEN")) flatten = truthy(form[i + 1]);
    }
    thm(arg(1), flatten);
  } else if (head == "WITH-BRR-DATA") {
    // A nested with-brr-data clears what the outer one collected, so only
    // the innermost run matters.
    const SExpr* body = &arg(1);
    while (body->is_list() && body->size() == 2 && (*body)[0].is_symbol("WITH-BRR-DATA")) body = &(*body)[1];
    const SExpr& inner = *body;
    if (!inner.is_list() || inner.size() < 2 || !inner[0].is_symbol("THM")) {
      throw Error("with-brr-data expects a (thm ...) form");
    }
    bool flatten = true;
    for (std::size_t i = 2; i + 1 < inner.size(); i += 2) {
      if (inner[i].is_symbol(":FLATTEN")) flatten = truthy(inner[i + 1]);
    }
    with_brr_data(inner[1], flatten);
  } else if (head == "BRR") {
    mode_ = truthy(arg(1)) ? GStackMode::Brr : GStackMode::Off;
    ack(mode_ == GStackMode::Brr ? "Use :a! to exit break-rewrite." : "Break-rewrite is off.");
  } else if (head == "MONITOR" || head == "MONITOR!") {
    Rune r = resolve_rune(unquote(arg(1)));
    BreakCriteria c = form.size() > 2 ? parse_criteria(unquote(form[2]), world_) : BreakCriteria{};
    monitor(r, c);
    if (head == "MONITOR!") mode_ = GStackMode::Brr;
    out_.message("event", {{"text", "monitor"}, {"rune", print_rune(r)}, {"criteria", print_criteria(c)}});
    ack(" T");
  } else if (head == "UNMONITOR") {
    const SExpr& target = unquote(arg(1));
    if (target.is_symbol(":ALL")) {
      for (const auto& m : monitors()) unmonitor(m.rune);
    } else {
      unmonitor(resolve_rune(target));
    }
    ack(" T");
  } else if (head == "MONITORED") {
    auto ms = monitors();
    if (ms.empty()) ack(" NIL");
    for (const auto& m : ms) ack(print_rune(m.rune) + " " + print_criteria(m.criteria));
  } else if (head == "ENABLE" || head == "DISABLE") {
    Rune r = resolve_rune(unquote(arg(1)));
    world_ = world_.set_enabled(r, head == "ENABLE");
    ack(" T");
  } else if (head == "PE") {
    auto rule = world_.find_rule(resolve_rune(unquote(arg(1))));
    std::string text = print_rune(rule->rune) + "\n";
    for (std::size_t i = 0; i < rule->hyps.size(); ++i) {
      text += "  hyp " + std::to_string(i + 1) + ": " + print(display_form(rule->hyps[i], world_)) + "\n";
    }
    text += "  lhs: " + print(display_form(rule->lhs, world_)) + "\n";
    text += "  rhs: " + print(display_form(rule->rhs, world_)) + "\n";
    out_.text(text);
  } else if (head == "CW-GSTACK-FOR-SUBTERM") {
    query(arg(1), QueryMode::Subterm, false);
  } else if (head == "CW-GSTACK-FOR-TERM") {
    query(arg(1), QueryMode::Term, false);
  } else if (head == "CW-GSTACK-FOR-SUBTERM*") {
    query(arg(1), QueryMode::Subterm, true);
  } else if (head == "CW-GSTACK-FOR-TERM*") {
    query(arg(1), QueryMode::Term, true);
  } else if (head == "SET-BRR-DATA-ATTACHMENTS") {
    const SExpr& name = unquote(arg(1));
    if (!name.is_symbol()) throw Error("set-brr-data-attachments expects a symbol");
    set_strategy(name.text());
    ack(" " + strategy_name_);
  } else if (head == "TRACE-BRR") {
    tracing_ = truthy(arg(1));
    ack(tracing_ ? " T" : " NIL");
  } else if (head == "ASSIGN") {
    const SExpr& name = unquote(arg(1));
    if (!name.is_symbol()) throw Error("assign expects a symbol");
    globals_[name.text()] = unquote(arg(2));
    ack(" " + print(unquote(arg(2))));
  } else if (head == "@") {
    const SExpr& name = unquote(arg(1));
    auto it = globals_.find(name.text());
    if (it == globals_.end()) throw Error("unbound state global " + name.text());
    ack(" " + print(it->second));
  } else if (head == "BRR-DATA-COUNT") {
    ack(" " + std::to_string(record_count(brr_data())));
  } else if (head == "DUMP-BRR-DATA") {
    const SExpr& path = unquote(arg(1));
    if (!path.is_string()) throw Error("dump-brr-data expects a file name string");
    std::ofstream os(path.text());
    if (!os) throw Error("cannot write " + path.text());
    os << dump_json().dump(2) << "\n";
    ack("Wrote " + path.text() + ".");
  } else {
    throw Error("unknown command " + head);
  }
  return true;
}

bool Session::break_level_command(const SExpr& form) {
  if (!form.is_list() || form.size() == 0 || !form[0].is_symbol()) return false;
  static const std::set<std::string> allowed{"MONITOR", "UNMONITOR", "MONITORED", "ASSIGN", "@", "HELP"};
  if (!allowed.contains(form[0].text())) return false;
  dispatch(form);
  return true;
}

void Session::load_rules(const std::string& path) { world_ = world_.load_file(path); }

void Session::load_rules_text(std::string_view text) { world_ = world_.load_text(text); }

Rune Session::resolve_rune(const SExpr& s) const {
  if (s.is_list() && s.size() == 2 && s[0].is_keyword() && s[1].is_symbol()) {
    Rune r{s[0].is_symbol(":DEFINITION") ? RuneClass::Definition : RuneClass::Rewrite, s[1].text()};
    if (!s[0].is_symbol(":DEFINITION") && !s[0].is_symbol(":REWRITE")) throw Error("unknown rune class " + print(s));
    if (!world_.find_rule(r)) throw Error("no rule " + print_rune(r));
    return r;
  }
  if (!s.is_symbol()) throw Error("expected a rule name, got " + print(s));
  auto rule = world_.find_rule(s.text());
  if (!rule) throw Error("no rule named " + s.text());
  return rule->rune;
}

void Session::monitor(const Rune& rune, const BreakCriteria& criteria) {
  world_ = world_.monitor(rune, criteria);
  WormholeStatus ws = wormholes_.get_persistent_whs(kBrrWormhole);
  BrrStatus& s = brr_status(ws);
  std::erase_if(s.monitored, [&](const MonitorEntry& e) { return e.rune == rune; });
  s.monitored.push_back({rune, criteria});
  wormholes_.set_persistent_whs(kBrrWormhole, std::move(ws));
}

void Session::unmonitor(const Rune& rune) {
  WormholeStatus ws = wormholes_.get_persistent_whs(kBrrWormhole);
  BrrStatus& s = brr_status(ws);
  auto n = std::erase_if(s.monitored, [&](const MonitorEntry& e) { return e.rune == rune; });
  if (n == 0) throw Error(print_rune(rune) + " is not monitored");
  wormholes_.set_persistent_whs(kBrrWormhole, std::move(ws));
  world_ = world_.unmonitor(rune);
}

std::vector<MonitorEntry> Session::monitors() const {
  return brr_status_copy(wormholes_.get_persistent_whs(kBrrWormhole)).monitored;
}

void Session::set_strategy(const std::string& name) {
  strategies_.find(name);
  strategy_name_ = name;
}

BrrStatus Session::brr_status_now() const { return brr_status_copy(wormholes_.get_persistent_whs(kBrrWormhole)); }

const std::vector<BrrData>& Session::brr_data() const {
  if (!data_) throw Error("no brr-data has been collected; use with-brr-data first");
  return *data_;
}

ProofOutcome Session::thm(const SExpr& goal, bool flatten) { return run_proof(goal, flatten, false); }

ProofOutcome Session::with_brr_data(const SExpr& goal, bool flatten) {
  ProofOutcome outcome = run_proof(goal, flatten, true);
  if (!options_.json_dump_path.empty()) write_json_dump();
  return outcome;
}

ProofOutcome Session::run_proof(const SExpr& goal_form, bool flatten, bool collect) {
  Term goal = world_.translate(goal_form);
  GStackMode mode = collect ? GStackMode::BrrData : mode_;
  if (collect) {
    clear_brr_data_lst(wormholes_);
    data_.reset();
    cursor_.reset();
  }
  World w = world_.with_monitors(monitors());
  BrrEnvironment env;
  env.wormholes = &wormholes_;
  env.globals = &globals_;
  env.world = &w;
  env.mode = mode;
  env.strategy = &strategies_.find(strategy_name_);
  env.in = &in_;
  env.out = &out_;
  env.extra_command = [this](const SExpr& form) { return break_level_command(form); };
  BrrHandlers handlers(env);
  TracingHandlers tracer(handlers, out_);
  BreakpointHandlers* h = tracing_ ? static_cast<BreakpointHandlers*>(&tracer) : &handlers;
  Rewriter rw(w, options_.rcnst, mode, mode == GStackMode::Off ? nullptr : h);

  ProofOutcome outcome;
  try {
    outcome = rw.prove(goal, flatten);
  } catch (...) {
    WormholeStatus ws = wormholes_.get_persistent_whs(kBrrWormhole);
    BrrStatus& s = brr_status(ws);
    s = base_status(s);
    wormholes_.set_persistent_whs(kBrrWormhole, std::move(ws));
    if (collect) clear_brr_data_lst(wormholes_);
    last_trace_level_ = tracer.max_level();
    out_.message("proof-outcome", {{"proved", false}, {"aborted", true}});
    throw;
  }
  last_trace_level_ = tracer.max_level();
  if (collect) data_ = brr_data_lst(wormholes_);
  report_outcome(outcome);
  return outcome;
}

void Session::report_outcome(const ProofOutcome& outcome) {
  std::string text;
  if (outcome.budget_exhausted) text += "Note: the rewrite step budget was exhausted.\n";
  if (outcome.proved) {
    text += "Q.E.D.\n";
  } else {
    for (const auto& cl : outcome.checkpoints) {
      text += "\nThe proof attempt failed.  Checkpoint:\n";
      text += pretty(display_form(clause_to_term(cl), world_)) + "\n";
    }
  }
  out_.text(text);
  nlohmann::json checkpoints = nlohmann::json::array();
  for (const auto& cl : outcome.checkpoints) checkpoints.push_back(print_clause(cl));
  nlohmann::json payload{{"proved", outcome.proved},
                         {"checkpoints", checkpoints},
                         {"steps", outcome.steps},
                         {"budget_exhausted", outcome.budget_exhausted}};
  if (data_) payload["brr_data_records"] = record_count(*data_);
  out_.message("proof-outcome", payload);
}

std::optional<QueryResult> Session::query(const SExpr& pattern_form, QueryMode mode, bool iterative) {
  const auto& data = brr_data();
  QueryPattern p = parse_query_pattern(pattern_form, world_);
  std::optional<QueryResult> r;
  bool continued = false;
  if (iterative) {
    if (cursor_ && cursor_->mode() == mode && cursor_->pattern().term == p.term &&
        cursor_->pattern().free_vars == p.free_vars) {
      continued = true;
    } else {
      cursor_.emplace(p, mode);
    }
    r = cursor_->next(data);
  } else {
    r = run_query(data, p, mode);
  }
  if (r) {
    out_.text(render_query_result(*r));
    out_.message("query-result", to_json(*r, data));
  } else {
    std::string msg = continued ? no_further_results_message(p, mode) : no_product_message(p, mode);
    out_.text(msg);
    out_.message("query-result", {{"found", false}, {"text", msg}});
  }
  return r;
}

nlohmann::json Session::dump_json() const {
  nlohmann::json j{{"strategy", strategy_name_}};
  if (data_) {
    j["records"] = to_json(*data_);
    j["record_count"] = record_count(*data_);
  } else {
    j["records"] = nlohmann::json::array();
    j["record_count"] = 0;
  }
  return j;
}

void Session::write_json_dump() const {
  std::ofstream os(options_.json_dump_path);
  if (!os) throw Error("cannot write " + options_.json_dump_path);
  os << dump_json().dump(2) << "\n";
}

std::string session_help() {
  return "Commands:\n"
         "  (load \"file\")  (defrule name :hyps (...) :lhs l :rhs r)  (alias ...)  (fn-slot f i)\n"
         "  (thm term [:flatten nil])  (with-brr-data (thm term))\n"
         "  (brr t|nil)  (monitor 'name crit)  (monitor! 'name crit)  (unmonitor 'name|:all)  (monitored)\n"
         "  (enable 'name)  (disable 'name)  (pe 'name)\n"
         "  (cw-gstack-for-subterm tm)  (cw-gstack-for-term tm)  and the * variants\n"
         "  (set-brr-data-attachments default|failures|all)  (dump-brr-data \"file\")  (brr-data-count)\n"
         "  (trace-brr t|nil)  (assign name val)  (@ name)  (help)  (quit)\n";
}

}  // namespace brrkit
