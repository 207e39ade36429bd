#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "brrkit/rewriter.hpp"
#include "brrkit/wormhole.hpp"

namespace brrkit {

inline constexpr const char* kBrrDataWormhole = "BRR-DATA";

/// Snapshot taken when a rule's lhs has matched (brkpt1).
struct BrrData1 {
  std::shared_ptr<const RewriteRule> lemma;
  Term target;
  Substitution unify_subst;
  TypeAlist type_alist;
  std::vector<Term> pot_list;  // always empty
  Ancestors ancestors;
  RewriteConstants rcnst;
  TTree initial_ttree;
  GStack gstack;
};

/// Snapshot taken when the rewriter is done with the rule (brkpt2).
struct BrrData2 {
  std::optional<FailureReason> failure_reason;
  Substitution unify_subst;
  std::optional<Term> brr_result;
  RewriteConstants rcnst;
  TTree final_ttree;
  GStack gstack;
};

/// One rule application together with its subsidiary applications.
struct BrrData {
  BrrData1 pre;
  BrrData2 post;
  std::vector<BrrData> completed;

  bool succeeded() const { return !post.failure_reason && post.brr_result.has_value(); }
  const Rune& rune() const { return pre.lemma->rune; }
};

/// The status data of the BRR-DATA wormhole.
struct BrrDataStore {
  std::vector<BrrData> open;
  std::vector<BrrData> finished;
};

/// A bundle of the four swappable collection functions.
struct Strategy {
  using Entry = std::function<bool(const Ancestors&, const GStack&, const RewriteConstants&)>;
  using Update1 = std::function<BrrDataStore(BrrDataStore&&, BrrData1&&)>;
  using Update2 = std::function<BrrDataStore(BrrDataStore&&, BrrData2&&)>;

  std::string name;
  Entry entry1;
  Entry entry2;
  Update1 update1;
  Update2 update2;
};

/// Opens a record for d.
BrrDataStore update_brr_data_1_builtin(BrrDataStore&& store, BrrData1&& d);
/// Closes the innermost open record and files it under its parent.
BrrDataStore update_brr_data_2_builtin(BrrDataStore&& store, BrrData2&& d);
/// Like the builtin close, but a successful record is dropped and its
/// children are promoted to its parent.
BrrDataStore update_brr_data_2_failures(BrrDataStore&& store, BrrData2&& d);

/// Named strategies: default (top-level only), failures (failed
/// backchaining), all (everything), plus any user bundles.
class StrategyRegistry {
 public:
  StrategyRegistry();
  void add(Strategy s);
  const Strategy& find(const std::string& name) const;
  bool contains(const std::string& name) const { return strategies_.contains(name); }

 private:
  std::map<std::string, Strategy> strategies_;
};

/// Clears the BRR-DATA wormhole.
void clear_brr_data_lst(WormholeStore& store);

/// Reads the finished records out of the BRR-DATA wormhole in application
/// order. Throws if records are still open.
std::vector<BrrData> brr_data_lst(const WormholeStore& store);

/// Count of records in a forest, including nested ones.
std::size_t record_count(const std::vector<BrrData>& data);

nlohmann::json to_json(const BrrData& d);
nlohmann::json to_json(const std::vector<BrrData>& data);
SExpr to_sexpr(const BrrData& d);

}  // namespace brrkit
