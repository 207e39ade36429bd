#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "brrkit/brr_data.hpp"
#include "brrkit/query.hpp"
#include "brrkit/rewriter.hpp"

namespace brrkit::testing {

/// Outcome of a randomized property run.
struct PropertyResult {
  bool ok = true;
  std::size_t cases = 0;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

/// Rules file and goal text.
using Goal = std::pair<std::string, std::string>;

/// Hand-written goals over the sample rule files.
const std::vector<Goal>& sample_goals();
/// The sample goals plus random chain goals, 30 in all.
std::vector<Goal> goal_corpus();

/// Runs one proof under BrrHandlers with a fresh store and returns the records.
std::vector<BrrData> collect_records(const World& w, const Term& goal, const std::string& strategy,
                                     RewriteConstants rc = {}, ProofOutcome* outcome = nullptr);

/// First introducing application by a flat pre-order scan.
std::optional<ProductHit> oracle_product(const std::vector<BrrData>& data, const QueryPattern& p, QueryMode mode,
                                         const std::set<RecordPath>& excluded);

/// match agrees with exhaustive search over subterm substitutions.
PropertyResult match_property(std::uint32_t seed, int instances);
/// find_product agrees with oracle_product on random worlds.
PropertyResult query_property(std::uint32_t seed, int worlds);
/// Random break commands, including aborts, never leave a break open.
PropertyResult abort_property(std::uint32_t seed, int rounds);
/// Random wormhole programs agree with a map model.
PropertyResult wormhole_property(std::uint32_t first_seed, int seeds, int ops);
/// Proof outcomes do not depend on instrumentation.
PropertyResult non_perturbation_property();
/// Strategy invariants on every sample goal.
PropertyResult strategy_property();

}  // namespace brrkit::testing
