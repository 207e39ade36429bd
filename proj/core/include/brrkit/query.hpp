#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "brrkit/brr_data.hpp"

namespace brrkit {

enum class QueryMode { Subterm, Term };

/// A query term, optionally with (:FREE (v1 ... vk) tm) variables.
struct QueryPattern {
  Term term;
  std::set<std::string> free_vars;
};

/// Reads tm or (:FREE (v1 ... vk) tm).
QueryPattern parse_query_pattern(const SExpr& s, const World& world);

/// Position of a record: child indices from the top-level list down.
using RecordPath = std::vector<std::size_t>;

const BrrData& record_at(const std::vector<BrrData>& data, const RecordPath& path);

/// True iff d succeeded and its result introduces instance: in subterm mode
/// the result contains it and the target does not; in term mode the result
/// is it and the target is not.
bool introduces(const BrrData& d, const Term& instance, QueryMode mode);

/// True iff d succeeded and its result contains (or, in term mode, is) instance.
bool suitable(const BrrData& d, const Term& instance, QueryMode mode);

struct ProductHit {
  RecordPath path;
  Term instance;
};

/// First record in application order, outside the excluded subtrees, that
/// introduces an instance of the pattern.
std::optional<ProductHit> find_product(const std::vector<BrrData>& data, const QueryPattern& p, QueryMode mode,
                                       const std::set<RecordPath>& excluded = {});

struct QueryResult {
  RecordPath product;
  Term instance;
  /// Records from the product down to the deepest suitable descendant.
  std::vector<RecordPath> chain;
  GStack stack;
  Term final_result;
  /// The product's result when the stack extends beyond the product.
  std::optional<Term> product_result;
  std::size_t product_frame = 0;
};

/// Descends from the product through the last suitable child, repeatedly.
QueryResult extend_stack(const std::vector<BrrData>& data, const ProductHit& hit, QueryMode mode);

std::optional<QueryResult> run_query(const std::vector<BrrData>& data, const QueryPattern& p, QueryMode mode,
                                     const std::set<RecordPath>& excluded = {});

/// The cw-gstack style transcript of a result.
std::string render_query_result(const QueryResult& r);
nlohmann::json to_json(const QueryResult& r, const std::vector<BrrData>& data);
nlohmann::json to_json(const Frame& f);

std::string no_product_message(const QueryPattern& p, QueryMode mode);
std::string no_further_results_message(const QueryPattern& p, QueryMode mode);

/// State of an iterative (starred) query.
class QueryCursor {
 public:
  QueryCursor(QueryPattern p, QueryMode mode) : pattern_(std::move(p)), mode_(mode) {}

  /// The next result; its product subtree is excluded from later calls.
  std::optional<QueryResult> next(const std::vector<BrrData>& data);

  const QueryPattern& pattern() const { return pattern_; }
  QueryMode mode() const { return mode_; }
  const std::set<RecordPath>& excluded() const { return excluded_; }

 private:
  QueryPattern pattern_;
  QueryMode mode_;
  std::set<RecordPath> excluded_;
};

}  // namespace brrkit
