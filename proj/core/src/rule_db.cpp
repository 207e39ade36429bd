#include "brrkit/rule_db.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace brrkit {

std::string print_rune(const Rune& r) { return print(to_sexpr(r)); }

SExpr to_sexpr(const Rune& r) {
  return SExpr::list({SExpr::symbol(r.cls == RuneClass::Rewrite ? ":REWRITE" : ":DEFINITION"),
                      SExpr::symbol(r.name)});
}

std::vector<std::string> RewriteRule::free_vars(std::size_t hyp_index) const {
  std::set<std::string> bound;
  collect_vars(lhs, bound);
  for (std::size_t i = 0; i < hyp_index && i < hyps.size(); ++i) collect_vars(hyps[i], bound);
  std::vector<std::string> out;
  for (const auto& v : vars_of(hyps.at(hyp_index))) {
    if (!bound.contains(v)) out.push_back(v);
  }
  return out;
}

std::string print_criteria(const BreakCriteria& c) {
  std::vector<SExpr> items{SExpr::symbol(":CONDITION"), to_sexpr(c.condition)};
  if (c.lambda) {
    items.push_back(SExpr::symbol(":LAMBDA"));
    items.push_back(SExpr::t());
  }
  if (c.depth) {
    items.push_back(SExpr::symbol(":DEPTH"));
    items.push_back(SExpr::integer(static_cast<std::int64_t>(*c.depth)));
  }
  if (c.abstraction) {
    items.push_back(SExpr::symbol(":ABSTRACTION"));
    items.push_back(to_sexpr(*c.abstraction));
  }
  return print(SExpr::list(std::move(items)));
}

// ---------------------------------------------------------------------------

namespace {

bool is_variable_permutation(const Term& a, const Term& b) {
  auto s = match(a, b);
  if (!s) return false;
  std::set<std::string> images;
  for (const auto& [k, v] : s->bindings()) {
    if (!v.is_var() || !images.insert(v.name()).second) return false;
  }
  return true;
}

bool calls(const Term& t, const std::string& fn) {
  if (!t.is_app()) return false;
  if (t.name() == fn) return true;
  return std::any_of(t.args().begin(), t.args().end(), [&](const Term& a) { return calls(a, fn); });
}

}  // namespace

RewriteRule make_rule(Rune rune, std::vector<Term> hyps, Term lhs, Term rhs) {
  if (!lhs.is_app()) {
    throw Error("the left-hand side of " + print_rune(rune) + " must be a function application");
  }
  if (lhs.is_app("IF")) throw Error("the left-hand side of " + print_rune(rune) + " may not be an IF");
  if (rune.cls == RuneClass::Definition) {
    std::set<std::string> seen;
    for (const auto& a : lhs.args()) {
      if (!a.is_var() || !seen.insert(a.name()).second) {
        throw Error("definition " + rune.name + " must have distinct variable formals");
      }
    }
  }
  std::set<std::string> bound;
  collect_vars(lhs, bound);
  for (const auto& h : hyps) collect_vars(h, bound);
  std::set<std::string> rhs_vars;
  collect_vars(rhs, rhs_vars);
  for (const auto& v : rhs_vars) {
    if (!bound.contains(v)) {
      throw Error("the right-hand side of " + print_rune(rune) + " mentions unbound variable " + v);
    }
  }
  RewriteRule r;
  r.rune = std::move(rune);
  r.hyps = std::move(hyps);
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.permutative = r.rhs.is_app() && r.lhs != r.rhs && is_variable_permutation(r.lhs, r.rhs) &&
                  is_variable_permutation(r.rhs, r.lhs);
  r.recursive = r.rune.cls == RuneClass::Definition && calls(r.rhs, r.lhs.name());
  return r;
}

// ---------------------------------------------------------------------------

World::World() : arities_(std::make_shared<ArityTable>()) {
  // Primitives whose arities are fixed up front.
  for (auto [fn, n] : {std::pair<const char*, std::size_t>{"IF", 3}, {"EQUAL", 2}, {"NOT", 1},
                       {"CONS", 2}, {"CAR", 1}, {"CDR", 1}, {"CONSP", 1}, {"ATOM", 1},
                       {"IMPLIES", 2}, {"<", 2}}) {
    arities_->check(fn, n);
  }
}

World World::add_rule(RewriteRule rule) const {
  if (find_rule(rule.rune.name)) throw Error("a rule named " + rule.rune.name + " already exists");
  arities_->check(rule.lhs.name(), rule.lhs.args().size());
  World w = *this;
  auto& bucket = w.rules_[rule.lhs.name()];
  bucket.insert(bucket.begin(), std::make_shared<const RewriteRule>(std::move(rule)));
  return w;
}

World World::add_alias(Alias alias) const {
  if (alias.arity < 1) throw Error("alias arity must be positive");
  World w = *this;
  std::string key = alias.macro;
  w.aliases_[key] = std::move(alias);
  return w;
}

World World::add_fn_slot(const std::string& fn, std::size_t index) const {
  World w = *this;
  w.fn_slots_[fn].insert(index);
  return w;
}

World World::monitor(const Rune& rune, BreakCriteria criteria) const {
  if (!find_rule(rune)) throw Error("unknown rune " + print_rune(rune));
  World w = *this;
  auto it = std::find_if(w.monitors_.begin(), w.monitors_.end(),
                         [&](const MonitorEntry& e) { return e.rune == rune; });
  if (it != w.monitors_.end()) {
    it->criteria = std::move(criteria);
  } else {
    w.monitors_.push_back({rune, std::move(criteria)});
  }
  return w;
}

World World::unmonitor(const Rune& rune) const {
  if (!find_rule(rune)) throw Error("unknown rune " + print_rune(rune));
  World w = *this;
  std::erase_if(w.monitors_, [&](const MonitorEntry& e) { return e.rune == rune; });
  return w;
}

std::optional<MonitorEntry> World::monitored(const Rune& rune) const {
  for (const auto& e : monitors_) {
    if (e.rune == rune) return e;
  }
  return std::nullopt;
}

World World::with_monitors(std::vector<MonitorEntry> monitors) const {
  World w = *this;
  w.monitors_ = std::move(monitors);
  return w;
}

World World::set_enabled(const Rune& rune, bool enabled) const {
  World w = *this;
  for (auto& [fn, bucket] : w.rules_) {
    for (auto& r : bucket) {
      if (r->rune == rune) {
        auto copy = std::make_shared<RewriteRule>(*r);
        copy->enabled = enabled;
        r = std::move(copy);
        return w;
      }
    }
  }
  throw Error("unknown rune " + print_rune(rune));
}

std::vector<std::shared_ptr<const RewriteRule>> World::rules_for(const std::string& fn) const {
  auto it = rules_.find(fn);
  if (it == rules_.end()) return {};
  return it->second;
}

std::shared_ptr<const RewriteRule> World::find_rule(const std::string& name) const {
  for (const auto& [fn, bucket] : rules_) {
    for (const auto& r : bucket) {
      if (r->rune.name == name) return r;
    }
  }
  return nullptr;
}

std::shared_ptr<const RewriteRule> World::find_rule(const Rune& rune) const {
  auto r = find_rule(rune.name);
  return r && r->rune == rune ? r : nullptr;
}

std::size_t World::rule_count() const {
  std::size_t n = 0;
  for (const auto& [fn, bucket] : rules_) n += bucket.size();
  return n;
}

bool World::is_fn_slot(const std::string& fn, std::size_t index) const {
  auto it = fn_slots_.find(fn);
  return it != fn_slots_.end() && it->second.contains(index);
}

// ---------------------------------------------------------------------------

SExpr World::expand_macros(const SExpr& s) const {
  if (!s.is_list() || s.items().empty() || s.is_quote_form()) return s;
  if (!s[0].is_symbol()) return s;
  const std::string& head = s[0].text();
  std::vector<SExpr> args;
  for (std::size_t i = 1; i < s.size(); ++i) args.push_back(expand_macros(s[i]));
  auto sym = [](const char* n) { return SExpr::symbol(n); };
  auto nil = SExpr::quoted(SExpr::nil());

  auto fold_right = [&](auto&& self, std::size_t i, auto&& combine, SExpr empty) -> SExpr {
    if (i >= args.size()) return empty;
    if (i + 1 == args.size()) return args[i];
    return combine(args[i], self(self, i + 1, combine, empty));
  };

  if (head == "AND") {
    return fold_right(fold_right, 0,
                      [&](const SExpr& a, SExpr rest) { return SExpr::list({sym("IF"), a, std::move(rest), nil}); },
                      SExpr::quoted(SExpr::t()));
  }
  if (head == "OR") {
    return fold_right(fold_right, 0,
                      [&](const SExpr& a, SExpr rest) { return SExpr::list({sym("IF"), a, a, std::move(rest)}); },
                      nil);
  }
  if (head == "LIST") {
    SExpr out = nil;
    for (auto it = args.rbegin(); it != args.rend(); ++it) out = SExpr::list({sym("CONS"), *it, out});
    return out;
  }
  if (args.size() == 2) {
    if (head == ">") return SExpr::list({sym("<"), args[1], args[0]});
    if (head == "<=") return SExpr::list({sym("NOT"), SExpr::list({sym("<"), args[1], args[0]})});
    if (head == ">=") return SExpr::list({sym("NOT"), SExpr::list({sym("<"), args[0], args[1]})});
  }
  if (auto it = aliases_.find(head); it != aliases_.end()) {
    const Alias& a = it->second;
    if (args.size() == a.arity) {
      args.insert(args.begin(), SExpr::symbol(a.function));
      return SExpr::list(std::move(args));
    }
    if (a.arity == 2 && args.size() > 2) {
      if (a.right_assoc) {
        SExpr acc = args.back();
        for (std::size_t i = args.size() - 1; i-- > 0;) acc = SExpr::list({SExpr::symbol(a.function), args[i], acc});
        return acc;
      }
      SExpr acc = args.front();
      for (std::size_t i = 1; i < args.size(); ++i) acc = SExpr::list({SExpr::symbol(a.function), acc, args[i]});
      return acc;
    }
    if (a.arity == 2 && args.size() == 1) return args[0];
    throw Error("wrong number of arguments to " + head);
  }
  args.insert(args.begin(), s[0]);
  return SExpr::list(std::move(args));
}

Term World::translate(const SExpr& s) const { return to_term(expand_macros(s), nullptr, arities_.get()); }

SExpr World::untranslate(const Term& t) const {
  if (!t.is_app()) return to_sexpr(t);
  for (const auto& [macro, a] : aliases_) {
    if (a.function == t.name() && a.arity == t.args().size()) {
      std::vector<SExpr> items{SExpr::symbol(macro)};
      if (a.arity == 2 && a.right_assoc) {
        Term cur = t;
        while (cur.is_app(a.function) && cur.args().size() == 2) {
          items.push_back(untranslate(cur.arg(0)));
          cur = cur.arg(1);
        }
        items.push_back(untranslate(cur));
      } else {
        for (const auto& arg : t.args()) items.push_back(untranslate(arg));
      }
      return SExpr::list(std::move(items));
    }
  }
  std::vector<SExpr> items{SExpr::symbol(t.name())};
  for (const auto& arg : t.args()) items.push_back(untranslate(arg));
  return SExpr::list(std::move(items));
}

// ---------------------------------------------------------------------------

namespace {

const SExpr* keyword_arg(const SExpr& form, std::size_t start, std::string_view key) {
  for (std::size_t i = start; i + 1 < form.size(); i += 2) {
    if (form[i].is_symbol(key)) return &form[i + 1];
  }
  return nullptr;
}

void check_keywords(const SExpr& form, std::size_t start, std::initializer_list<std::string_view> allowed) {
  if ((form.size() - start) % 2 != 0) throw Error("odd keyword argument list in " + print(form));
  for (std::size_t i = start; i < form.size(); i += 2) {
    if (!form[i].is_keyword() ||
        std::find(allowed.begin(), allowed.end(), form[i].text()) == allowed.end()) {
      throw Error("unexpected keyword " + print(form[i]) + " in " + print(form));
    }
  }
}

std::size_t natural(const SExpr& e, const std::string& what) {
  if (!e.is_integer() || e.integer_value() < 0) throw Error(what + " must be a natural number");
  return static_cast<std::size_t>(e.integer_value());
}

}  // namespace

World World::apply_form(const SExpr& form) const {
  if (!form.is_list() || form.items().empty() || !form[0].is_symbol()) {
    throw Error("malformed rule-file form: " + print(form));
  }
  const std::string& head = form[0].text();
  if (head == "DEFRULE") {
    if (form.size() < 2 || !form[1].is_symbol()) throw Error("defrule needs a name");
    check_keywords(form, 2, {":CLASS", ":HYPS", ":LHS", ":RHS", ":ENABLED"});
    Rune rune{RuneClass::Rewrite, form[1].text()};
    if (const SExpr* cls = keyword_arg(form, 2, ":CLASS")) {
      if (cls->is_symbol(":DEFINITION")) {
        rune.cls = RuneClass::Definition;
      } else if (!cls->is_symbol(":REWRITE")) {
        throw Error("unknown rule class " + print(*cls));
      }
    }
    const SExpr* lhs = keyword_arg(form, 2, ":LHS");
    const SExpr* rhs = keyword_arg(form, 2, ":RHS");
    if (!lhs || !rhs) throw Error("defrule " + rune.name + " needs :lhs and :rhs");
    std::vector<Term> hyps;
    if (const SExpr* h = keyword_arg(form, 2, ":HYPS")) {
      if (!h->is_list()) throw Error(":hyps must be a list");
      for (const auto& e : h->items()) hyps.push_back(translate(e));
    }
    RewriteRule rule = make_rule(rune, std::move(hyps), translate(*lhs), translate(*rhs));
    if (const SExpr* en = keyword_arg(form, 2, ":ENABLED")) rule.enabled = !en->is_nil();
    return add_rule(std::move(rule));
  }
  if (head == "ALIAS") {
    if (form.size() < 3 || !form[1].is_symbol() || !form[2].is_symbol()) {
      throw Error("alias needs a macro name and a function name");
    }
    check_keywords(form, 3, {":ARITY", ":ASSOC"});
    Alias a{form[1].text(), form[2].text()};
    if (const SExpr* ar = keyword_arg(form, 3, ":ARITY")) a.arity = natural(*ar, ":arity");
    if (const SExpr* as = keyword_arg(form, 3, ":ASSOC")) a.right_assoc = !as->is_symbol("LEFT");
    return add_alias(std::move(a));
  }
  if (head == "FN-SLOT") {
    if (form.size() != 3 || !form[1].is_symbol()) throw Error("usage: (fn-slot FN ARG-INDEX)");
    std::size_t index = natural(form[2], "fn-slot index");
    if (index == 0) throw Error("fn-slot indices are 1-based");
    return add_fn_slot(form[1].text(), index - 1);
  }
  throw Error("unknown rule-file form " + head);
}

World World::load_text(std::string_view text) const {
  World w = *this;
  for (const auto& form : parse_all(text)) w = w.apply_form(form);
  return w;
}

World World::load_file(const std::string& path) const {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_text(ss.str());
}

// ---------------------------------------------------------------------------

BreakCriteria parse_criteria(const SExpr& s, const World& world) {
  BreakCriteria c;
  if (s.is_symbol("T")) return c;
  if (!(s.is_list() && !s.items().empty() && s[0].is_keyword())) {
    c.condition = world.translate(s);
    return c;
  }
  if (s.size() % 2 != 0) throw Error("malformed break criteria " + print(s));
  for (std::size_t i = 0; i < s.size(); i += 2) {
    const SExpr& key = s[i];
    const SExpr& val = s[i + 1];
    if (key.is_symbol(":CONDITION")) {
      c.condition = world.translate(val);
    } else if (key.is_symbol(":LAMBDA")) {
      c.lambda = !val.is_nil();
    } else if (key.is_symbol(":DEPTH")) {
      c.depth = natural(val, ":depth");
    } else if (key.is_symbol(":ABSTRACTION")) {
      c.abstraction = world.translate(val);
    } else {
      throw Error("unknown break criterion " + print(key));
    }
  }
  return c;
}

}  // namespace brrkit
