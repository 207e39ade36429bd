#include "brrkit/term.hpp"

#include <algorithm>

namespace brrkit {

struct Term::Node {
  Kind kind;
  std::string name;
  SExpr value;
  std::vector<Term> args;
  std::size_t size = 1;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term::Term() : Term(quote(SExpr::nil())) {}

Term Term::var(std::string name) {
  if (name.empty()) throw Error("variable name must be nonempty");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->hash = mix(1, std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::quote(SExpr value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Quote;
  n->hash = mix(2, std::hash<std::string>{}(print(value)));
  n->value = std::move(value);
  return Term(std::move(n));
}

Term Term::app(std::string fn, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  std::size_t h = mix(3, std::hash<std::string>{}(fn));
  for (const auto& a : args) {
    h = mix(h, a.hash());
    n->size += a.size();
  }
  n->hash = h;
  n->name = std::move(fn);
  n->args = std::move(args);
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const SExpr& Term::value() const { return node_->value; }
std::span<const Term> Term::args() const { return node_->args; }
std::size_t Term::size() const { return node_->size; }
std::size_t Term::hash() const { return node_->hash; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind || x.size != y.size) return false;
  switch (x.kind) {
    case Term::Kind::Var:
      return x.name == y.name;
    case Term::Kind::Quote:
      return x.value == y.value;
    case Term::Kind::App:
      return x.name == y.name && x.args == y.args;
  }
  return false;
}

int term_order(const Term& a, const Term& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return lexorder(to_sexpr(a), to_sexpr(b));
}

// ---------------------------------------------------------------------------

Substitution::Substitution(std::initializer_list<Binding> bindings) {
  for (const auto& [k, v] : bindings) bind(k, v);
}

const Term* Substitution::lookup(std::string_view var) const {
  for (const auto& [k, v] : bindings_) {
    if (k == var) return &v;
  }
  return nullptr;
}

void Substitution::bind(std::string var, Term value) {
  if (binds(var)) throw Error("variable " + var + " is already bound");
  bindings_.emplace_back(std::move(var), std::move(value));
}

// ---------------------------------------------------------------------------

std::optional<QuotedLambda> as_quoted_lambda(const Term& t) {
  if (!t.is_quote()) return std::nullopt;
  const SExpr& v = t.value();
  if (!v.is_list() || v.size() != 3 || !v[0].is_symbol("LAMBDA")) return std::nullopt;
  const SExpr& formals = v[1];
  if (!formals.is_list() && !formals.is_nil()) return std::nullopt;
  QuotedLambda q;
  if (formals.is_list()) {
    for (const auto& f : formals.items()) {
      if (!f.is_symbol() || is_constant_symbol(f)) return std::nullopt;
      q.formals.push_back(f.text());
    }
  }
  q.body = v[2];
  return q;
}

bool is_quoted_lambda(const Term& t) { return as_quoted_lambda(t).has_value(); }

void ArityTable::check(const std::string& fn, std::size_t arity) {
  auto [it, inserted] = arities_.emplace(fn, arity);
  if (!inserted && it->second != arity) {
    throw Error("arity mismatch: " + fn + " was used with " + std::to_string(it->second) +
                " argument(s), now with " + std::to_string(arity));
  }
}

std::optional<std::size_t> ArityTable::arity(const std::string& fn) const {
  auto it = arities_.find(fn);
  if (it == arities_.end()) return std::nullopt;
  return it->second;
}

bool is_constant_symbol(const SExpr& e) {
  return e.is_symbol() && (e.text() == "T" || e.text() == "NIL" || e.is_keyword());
}

Term to_term(const SExpr& s, const std::set<std::string>* vars, ArityTable* arities) {
  switch (s.kind()) {
    case SExpr::Kind::Integer:
    case SExpr::Kind::String:
      return Term::quote(s);
    case SExpr::Kind::Symbol:
      if (is_constant_symbol(s)) return Term::quote(s);
      if (vars && !vars->contains(s.text())) throw Error("unbound symbol " + s.text());
      return Term::var(s.text());
    case SExpr::Kind::List:
      break;
  }
  if (s.items().empty()) return Term::nil();
  const SExpr& head = s[0];
  if (head.is_symbol("QUOTE")) {
    if (s.size() != 2) throw Error("QUOTE takes exactly one argument: " + print(s));
    return Term::quote(s[1]);
  }
  if (!head.is_symbol() || is_constant_symbol(head)) {
    throw Error("not a function application: " + print(s));
  }
  std::vector<Term> args;
  args.reserve(s.size() - 1);
  for (std::size_t i = 1; i < s.size(); ++i) args.push_back(to_term(s[i], vars, arities));
  if (arities) arities->check(head.text(), args.size());
  return Term::app(head.text(), std::move(args));
}

Term to_term(const SExpr& s, const std::set<std::string>& vars, ArityTable* arities) {
  return to_term(s, &vars, arities);
}

SExpr to_sexpr(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return SExpr::symbol(t.name());
    case Term::Kind::Quote:
      return SExpr::quoted(t.value());
    case Term::Kind::App: {
      std::vector<SExpr> items;
      items.reserve(t.args().size() + 1);
      items.push_back(SExpr::symbol(t.name()));
      for (const auto& a : t.args()) items.push_back(to_sexpr(a));
      return SExpr::list(std::move(items));
    }
  }
  return SExpr::nil();
}

SExpr to_sexpr(const Clause& c) {
  std::vector<SExpr> items;
  for (const auto& lit : c) items.push_back(to_sexpr(lit));
  return SExpr::list(std::move(items));
}

SExpr to_sexpr(const Substitution& s) {
  std::vector<SExpr> items;
  for (const auto& [k, v] : s.bindings()) {
    items.push_back(SExpr::list({SExpr::symbol(k), to_sexpr(v)}));
  }
  return SExpr::list(std::move(items));
}

std::string print_term(const Term& t) { return print(to_sexpr(t)); }
std::string pretty_term(const Term& t, int indent) { return pretty(to_sexpr(t), indent); }
std::string print_clause(const Clause& c) { return print(to_sexpr(c)); }

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name());
  } else if (t.is_app()) {
    for (const auto& a : t.args()) collect_vars(a, out);
  }
}

std::vector<std::string> vars_of(const Term& t) {
  std::vector<std::string> out;
  std::function<void(const Term&)> walk = [&](const Term& u) {
    if (u.is_var()) {
      if (std::find(out.begin(), out.end(), u.name()) == out.end()) out.push_back(u.name());
    } else if (u.is_app()) {
      for (const auto& a : u.args()) walk(a);
    }
  };
  walk(t);
  return out;
}

// ---------------------------------------------------------------------------

Term subst_apply(const Substitution& s, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (const Term* v = s.lookup(t.name())) return *v;
      return t;
    case Term::Kind::Quote:
      return t;
    case Term::Kind::App: {
      if (s.empty()) return t;
      std::vector<Term> args;
      args.reserve(t.args().size());
      bool changed = false;
      for (const auto& a : t.args()) {
        args.push_back(subst_apply(s, a));
        changed = changed || args.back() != a;
      }
      if (!changed) return t;
      return Term::app(t.name(), std::move(args));
    }
  }
  return t;
}

bool occurs_subterm(const Term& small, const Term& big) {
  if (small == big) return true;
  if (!big.is_app() || small.size() >= big.size()) return false;
  for (const auto& a : big.args()) {
    if (occurs_subterm(small, a)) return true;
  }
  return false;
}

void for_each_subterm_postorder(const Term& t, const std::function<void(const Term&)>& f) {
  if (t.is_app()) {
    for (const auto& a : t.args()) for_each_subterm_postorder(a, f);
  }
  f(t);
}

namespace {

bool match_into(const Term& pattern, const Term& target, Substitution& s) {
  switch (pattern.kind()) {
    case Term::Kind::Var:
      if (const Term* bound = s.lookup(pattern.name())) return *bound == target;
      s.bind(pattern.name(), target);
      return true;
    case Term::Kind::Quote:
      return target.is_quote() && pattern.value() == target.value();
    case Term::Kind::App: {
      if (!target.is_app() || target.name() != pattern.name() ||
          target.args().size() != pattern.args().size()) {
        return false;
      }
      for (std::size_t i = 0; i < pattern.args().size(); ++i) {
        if (!match_into(pattern.arg(i), target.arg(i), s)) return false;
      }
      return true;
    }
  }
  return false;
}

Term replace_lambdas(const Term& t, FreshNames& fresh, std::vector<std::string>& replaced) {
  if (is_quoted_lambda(t)) {
    replaced.push_back(fresh.next());
    return Term::var(replaced.back());
  }
  if (!t.is_app()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(replace_lambdas(a, fresh, replaced));
  return Term::app(t.name(), std::move(args));
}

}  // namespace

std::optional<Substitution> match(const Term& pattern, const Term& target, const Substitution& init) {
  Substitution s = init;
  if (!match_into(pattern, target, s)) return std::nullopt;
  return s;
}

bool match_except_lambdas(const Term& pattern, const Term& target) {
  if (match(pattern, target)) return false;
  FreshNames fresh(pattern);
  std::vector<std::string> replaced;
  Term general = replace_lambdas(pattern, fresh, replaced);
  if (replaced.empty()) return false;
  auto s = match(general, target);
  if (!s) return false;
  return std::any_of(replaced.begin(), replaced.end(), [&](const std::string& v) {
    const Term* b = s->lookup(v);
    return b && is_quoted_lambda(*b);
  });
}

FreshNames::FreshNames(const Term& avoid) { collect_vars(avoid, used_); }

std::string FreshNames::next() {
  for (;;) {
    std::string name = "GENSYM" + std::to_string(counter_++);
    if (used_.insert(name).second) return name;
  }
}

}  // namespace brrkit
