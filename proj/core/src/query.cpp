#include "brrkit/query.hpp"

#include <algorithm>

namespace brrkit {

QueryPattern parse_query_pattern(const SExpr& s, const World& world) {
  QueryPattern p;
  if (s.is_list() && s.size() > 0 && s[0].is_symbol(":FREE")) {
    if (s.size() != 3 || !s[1].is_list()) throw Error("expected (:free (v1 ... vk) tm), got " + print(s));
    p.term = world.translate(s[2]);
    std::set<std::string> vars;
    collect_vars(p.term, vars);
    for (const auto& v : s[1].items()) {
      if (!v.is_symbol() || is_constant_symbol(v)) throw Error(":free expects variables, got " + print(v));
      if (!vars.contains(v.text())) throw Error(":free variable " + v.text() + " does not occur in " + print(s[2]));
      p.free_vars.insert(v.text());
    }
    return p;
  }
  p.term = world.translate(s);
  return p;
}

const BrrData& record_at(const std::vector<BrrData>& data, const RecordPath& path) {
  if (path.empty()) throw Error("empty record path");
  const std::vector<BrrData>* level = &data;
  const BrrData* d = nullptr;
  for (std::size_t i : path) {
    if (i >= level->size()) throw Error("record path out of range");
    d = &(*level)[i];
    level = &d->completed;
  }
  return *d;
}

namespace {

bool contains(const Term& big, const Term& instance, QueryMode mode) {
  return mode == QueryMode::Subterm ? occurs_subterm(instance, big) : big == instance;
}

// Instances of p occurring in t, leftmost-innermost first.
std::vector<Term> candidate_instances(const QueryPattern& p, const Term& t) {
  if (p.free_vars.empty()) return {p.term};
  Substitution init;
  for (const auto& v : vars_of(p.term)) {
    if (!p.free_vars.contains(v)) init.bind(v, Term::var(v));
  }
  std::vector<Term> out;
  for_each_subterm_postorder(t, [&](const Term& s) {
    if (auto sigma = match(p.term, s, init)) {
      Term inst = subst_apply(*sigma, p.term);
      if (std::find(out.begin(), out.end(), inst) == out.end()) out.push_back(std::move(inst));
    }
  });
  return out;
}

bool search(const std::vector<BrrData>& level, RecordPath& path, const QueryPattern& p, QueryMode mode,
            const std::set<RecordPath>& excluded, std::optional<ProductHit>& hit) {
  for (std::size_t i = 0; i < level.size(); ++i) {
    path.push_back(i);
    if (!excluded.contains(path)) {
      const BrrData& d = level[i];
      if (d.succeeded()) {
        for (const auto& inst : candidate_instances(p, *d.post.brr_result)) {
          if (introduces(d, inst, mode)) {
            hit = ProductHit{path, inst};
            return true;
          }
        }
      }
      if (search(d.completed, path, p, mode, excluded, hit)) return true;
    }
    path.pop_back();
  }
  return false;
}

std::string mode_name(QueryMode mode) { return mode == QueryMode::Subterm ? "subterm" : "term"; }

std::string pattern_text(const QueryPattern& p) {
  if (p.free_vars.empty()) return print_term(p.term);
  std::vector<SExpr> vars;
  for (const auto& v : p.free_vars) vars.push_back(SExpr::symbol(v));
  return print(SExpr::list({SExpr::symbol(":FREE"), SExpr::list(std::move(vars)), to_sexpr(p.term)}));
}

}  // namespace

bool introduces(const BrrData& d, const Term& instance, QueryMode mode) {
  return d.succeeded() && contains(*d.post.brr_result, instance, mode) && !contains(d.pre.target, instance, mode);
}

bool suitable(const BrrData& d, const Term& instance, QueryMode mode) {
  return d.succeeded() && contains(*d.post.brr_result, instance, mode);
}

std::optional<ProductHit> find_product(const std::vector<BrrData>& data, const QueryPattern& p, QueryMode mode,
                                       const std::set<RecordPath>& excluded) {
  RecordPath path;
  std::optional<ProductHit> hit;
  search(data, path, p, mode, excluded, hit);
  return hit;
}

QueryResult extend_stack(const std::vector<BrrData>& data, const ProductHit& hit, QueryMode mode) {
  QueryResult r;
  r.product = hit.path;
  r.instance = hit.instance;
  r.chain.push_back(hit.path);
  RecordPath cur = hit.path;
  for (;;) {
    const BrrData& d = record_at(data, cur);
    std::optional<std::size_t> next;
    for (std::size_t i = d.completed.size(); i-- > 0;) {
      if (suitable(d.completed[i], hit.instance, mode)) {
        next = i;
        break;
      }
    }
    if (!next) break;
    cur.push_back(*next);
    r.chain.push_back(cur);
  }
  const BrrData& product = record_at(data, hit.path);
  const BrrData& deepest = record_at(data, cur);
  r.stack = deepest.pre.gstack;
  r.final_result = *deepest.post.brr_result;
  r.product_frame = product.pre.gstack.size();
  if (r.chain.size() > 1) r.product_result = *product.post.brr_result;
  return r;
}

std::optional<QueryResult> run_query(const std::vector<BrrData>& data, const QueryPattern& p, QueryMode mode,
                                     const std::set<RecordPath>& excluded) {
  auto hit = find_product(data, p, mode, excluded);
  if (!hit) return std::nullopt;
  return extend_stack(data, *hit, mode);
}

std::string render_query_result(const QueryResult& r) {
  std::string out = render_gstack(r.stack);
  out += "The resulting (translated) term is\n  ";
  out += pretty(to_sexpr(r.final_result), 2);
  out += ".\n";
  if (r.product_result) {
    out += "Note: The first lemma application above that provides a suitable result\n";
    out += "is at frame " + std::to_string(r.product_frame) + ", and that result is\n  ";
    out += pretty(to_sexpr(*r.product_result), 2);
    out += ".\n";
  }
  return out;
}

nlohmann::json to_json(const Frame& f) {
  static const char* const kinds[] = {"simplifying-clause", "rewriting-literal-atom", "rewriting-arg",
                                      "applying-rule",      "rewriting-body",         "rewriting-rhs",
                                      "relieving-hyp",      "rewriting-lambda-body"};
  nlohmann::json j{{"kind", kinds[static_cast<int>(f.kind)]}};
  if (f.kind == Frame::Kind::SimplifyingClause) {
    j["clause"] = print_clause(f.clause);
  } else {
    j["term"] = print_term(f.term);
  }
  if (f.ordinal) j["ordinal"] = f.ordinal;
  if (f.kind == Frame::Kind::ApplyingRule) j["rune"] = print_rune(f.rune);
  if (!f.subst.empty()) {
    nlohmann::json s = nlohmann::json::array();
    for (const auto& [v, t] : f.subst.bindings()) s.push_back({v, print_term(t)});
    j["subst"] = s;
  }
  return j;
}

nlohmann::json to_json(const QueryResult& r, const std::vector<BrrData>& data) {
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t i = 0; i < r.stack.size(); ++i) {
    nlohmann::json f = to_json(r.stack[i]);
    f["number"] = i + 1;
    f["text"] = render_frame(r.stack[i], i + 1);
    frames.push_back(f);
  }
  nlohmann::json chain = nlohmann::json::array();
  for (const auto& p : r.chain) {
    const BrrData& d = record_at(data, p);
    chain.push_back({{"path", p}, {"rune", print_rune(d.rune())}, {"frame", d.pre.gstack.size()}});
  }
  nlohmann::json j{{"found", true},
                   {"product", {{"path", r.product}, {"rune", print_rune(record_at(data, r.product).rune())}}},
                   {"product_frame", r.product_frame},
                   {"instance", print_term(r.instance)},
                   {"frames", frames},
                   {"chain", chain},
                   {"final_result", print_term(r.final_result)},
                   {"text", render_query_result(r)}};
  if (r.product_result) j["product_result"] = print_term(*r.product_result);
  return j;
}

std::string no_product_message(const QueryPattern& p, QueryMode mode) {
  return "No rule application found that introduces " + pattern_text(p) + " as a " + mode_name(mode) + ".\n";
}

std::string no_further_results_message(const QueryPattern& p, QueryMode mode) {
  return "No further results for " + pattern_text(p) + " as a " + mode_name(mode) + ".\n";
}

std::optional<QueryResult> QueryCursor::next(const std::vector<BrrData>& data) {
  auto r = run_query(data, pattern_, mode_, excluded_);
  if (r) excluded_.insert(r->product);
  return r;
}

}  // namespace brrkit
