#include "brrkit/brr_data.hpp"

namespace brrkit {

namespace {

void file_closed(BrrDataStore& store, BrrData&& rec) {
  if (store.open.empty()) {
    store.finished.push_back(std::move(rec));
  } else {
    store.open.back().completed.push_back(std::move(rec));
  }
}

BrrData pop_open(BrrDataStore& store, BrrData2&& d) {
  if (store.open.empty()) throw Error("brr-data: close without a matching open record");
  BrrData rec = std::move(store.open.back());
  store.open.pop_back();
  rec.post = std::move(d);
  return rec;
}

}  // namespace

BrrDataStore update_brr_data_1_builtin(BrrDataStore&& store, BrrData1&& d) {
  store.open.push_back(BrrData{std::move(d), {}, {}});
  return std::move(store);
}

BrrDataStore update_brr_data_2_builtin(BrrDataStore&& store, BrrData2&& d) {
  file_closed(store, pop_open(store, std::move(d)));
  return std::move(store);
}

BrrDataStore update_brr_data_2_failures(BrrDataStore&& store, BrrData2&& d) {
  BrrData rec = pop_open(store, std::move(d));
  if (rec.succeeded()) {
    for (auto& child : rec.completed) file_closed(store, std::move(child));
  } else {
    file_closed(store, std::move(rec));
  }
  return std::move(store);
}

StrategyRegistry::StrategyRegistry() {
  auto top_level = [](const Ancestors& anc, const GStack&, const RewriteConstants&) { return anc.empty(); };
  auto backchaining = [](const Ancestors& anc, const GStack&, const RewriteConstants&) { return !anc.empty(); };
  auto always = [](const Ancestors&, const GStack&, const RewriteConstants&) { return true; };
  add({"DEFAULT", top_level, top_level, update_brr_data_1_builtin, update_brr_data_2_builtin});
  add({"FAILURES", backchaining, backchaining, update_brr_data_1_builtin, update_brr_data_2_failures});
  add({"ALL", always, always, update_brr_data_1_builtin, update_brr_data_2_builtin});
}

void StrategyRegistry::add(Strategy s) {
  if (!s.entry1 || !s.entry2 || !s.update1 || !s.update2) {
    throw Error("strategy " + s.name + " is missing a function");
  }
  std::string key = s.name;
  strategies_[key] = std::move(s);
}

const Strategy& StrategyRegistry::find(const std::string& name) const {
  auto it = strategies_.find(name);
  if (it == strategies_.end()) throw Error("unknown brr-data attachment suffix " + name);
  return it->second;
}

void clear_brr_data_lst(WormholeStore& store) {
  store.wormhole_eval(kBrrDataWormhole, [](WormholeStatus s) {
    s.data = BrrDataStore{};
    return s;
  });
}

std::vector<BrrData> brr_data_lst(const WormholeStore& store) {
  WormholeStatus s = store.get_persistent_whs(kBrrDataWormhole);
  const auto* data = std::any_cast<BrrDataStore>(&s.data);
  if (!data) return {};
  if (!data->open.empty()) throw Error("brr-data: " + std::to_string(data->open.size()) + " record(s) still open");
  // Records are appended as they complete, so they are already in
  // application order.
  return data->finished;
}

std::size_t record_count(const std::vector<BrrData>& data) {
  std::size_t n = 0;
  for (const auto& d : data) n += 1 + record_count(d.completed);
  return n;
}

nlohmann::json to_json(const BrrData& d) {
  nlohmann::json j;
  j["rune"] = print_rune(d.rune());
  j["target"] = print_term(d.pre.target);
  j["result"] = d.post.brr_result ? nlohmann::json(print_term(*d.post.brr_result)) : nlohmann::json(nullptr);
  j["failure_reason"] =
      d.post.failure_reason ? nlohmann::json(print_failure(*d.post.failure_reason)) : nlohmann::json(nullptr);
  nlohmann::json subst = nlohmann::json::object();
  for (const auto& [k, v] : d.pre.unify_subst.bindings()) subst[k] = print_term(v);
  j["unify_subst"] = std::move(subst);
  nlohmann::json anc = nlohmann::json::array();
  for (const auto& a : d.pre.ancestors) anc.push_back(print_term(a));
  j["ancestors"] = std::move(anc);
  j["gstack_depth"] = d.pre.gstack.size();
  j["completed"] = to_json(d.completed);
  return j;
}

nlohmann::json to_json(const std::vector<BrrData>& data) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : data) arr.push_back(to_json(d));
  return arr;
}

SExpr to_sexpr(const BrrData& d) {
  std::vector<SExpr> completed;
  for (const auto& c : d.completed) completed.push_back(to_sexpr(c));
  return SExpr::list({
      SExpr::symbol(":RUNE"), to_sexpr(d.rune()),
      SExpr::symbol(":TARGET"), to_sexpr(d.pre.target),
      SExpr::symbol(":RESULT"), d.post.brr_result ? to_sexpr(*d.post.brr_result) : SExpr::nil(),
      SExpr::symbol(":FAILURE-REASON"), d.post.failure_reason ? to_sexpr(*d.post.failure_reason) : SExpr::nil(),
      SExpr::symbol(":COMPLETED"), SExpr::list(std::move(completed)),
  });
}

}  // namespace brrkit
