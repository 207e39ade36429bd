#include <gtest/gtest.h>

#include "brrkit/query.hpp"
#include "brrkit/rewriter.hpp"
#include "properties.hpp"
#include "test_support.hpp"

using namespace brrkit;
using brrkit::testing::data_path;
using brrkit::testing::S;
using brrkit::testing::ScriptedSource;
using brrkit::testing::T;

namespace {

std::vector<BrrData> collect(const World& w, const Term& goal, const std::string& strategy = "ALL") {
  return brrkit::testing::collect_records(w, goal, strategy);
}

std::vector<BrrData> collect(const World& w, const std::string& goal, const std::string& strategy = "ALL") {
  return collect(w, w.translate(S(goal)), strategy);
}

}  // namespace

TEST(Patterns, ParsesFreeVariables) {
  World w;
  QueryPattern p = parse_query_pattern(S("(:free (y) (fp x y))"), w);
  EXPECT_EQ(p.term, T("(fp x y)"));
  EXPECT_EQ(p.free_vars, (std::set<std::string>{"Y"}));
  EXPECT_TRUE(parse_query_pattern(S("(fq x)"), w).free_vars.empty());
  EXPECT_THROW(parse_query_pattern(S("(:free (z) (fq x))"), w), Error);
  EXPECT_THROW(parse_query_pattern(S("(:free y (fq y))"), w), Error);
}

TEST(Paths, RecordAt) {
  World w = World().load_file(data_path("nest.lisp"));
  auto data = collect(w, "(f1 a)", "DEFAULT");
  EXPECT_EQ(record_at(data, {0}).pre.target, T("(f1 a)"));
  EXPECT_EQ(record_at(data, {0, 0}).pre.target, T("(f2 a)"));
  EXPECT_THROW(record_at(data, {0, 1}), Error);
  EXPECT_THROW(record_at(data, {}), Error);
}

TEST(Introduces, SubtermAndTermModes) {
  World w = World().load_file(data_path("nest.lisp"));
  auto data = collect(w, "(f1 a)", "DEFAULT");
  const BrrData& top = data[0];
  EXPECT_TRUE(introduces(top, T("(f3 a)"), QueryMode::Subterm));
  EXPECT_TRUE(introduces(top, T("(f3 a)"), QueryMode::Term));
  EXPECT_FALSE(introduces(top, T("a"), QueryMode::Subterm));
  EXPECT_TRUE(suitable(top, T("a"), QueryMode::Subterm));
  EXPECT_FALSE(suitable(top, T("a"), QueryMode::Term));
}

TEST(Query, DescendsToDeepestSuitableRecord) {
  World w = World().load_file(data_path("nest.lisp"));
  auto data = collect(w, "(f1 a)", "DEFAULT");
  auto r = run_query(data, {T("(f3 a)"), {}}, QueryMode::Subterm);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->product, (RecordPath{0}));
  EXPECT_EQ(r->chain, (std::vector<RecordPath>{{0}, {0, 0}}));
  EXPECT_EQ(r->stack, data[0].completed[0].pre.gstack);
  EXPECT_EQ(r->final_result, T("(f3 a)"));
  EXPECT_EQ(r->product_result, T("(f3 a)"));
  EXPECT_EQ(r->product_frame, data[0].pre.gstack.size());
  std::string text = render_query_result(*r);
  EXPECT_NE(text.find("The resulting (translated) term is\n  (F3 A).\n"), std::string::npos);
  EXPECT_NE(text.find("Note: The first lemma application above that provides a suitable result\nis at frame "),
            std::string::npos);
}

TEST(Query, NoDescentMeansNoNote) {
  World w = World().load_file(data_path("nest.lisp"));
  auto data = collect(w, "(f2 a)", "DEFAULT");
  auto r = run_query(data, {T("(f3 a)"), {}}, QueryMode::Subterm);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->product, (RecordPath{0}));
  EXPECT_FALSE(r->product_result);
  EXPECT_EQ(render_query_result(*r).find("Note:"), std::string::npos);
}

TEST(Query, MissingProduct) {
  World w = World().load_file(data_path("nest.lisp"));
  auto data = collect(w, "(f1 a)", "DEFAULT");
  EXPECT_FALSE(run_query(data, {T("(f9 a)"), {}}, QueryMode::Subterm));
  EXPECT_EQ(no_product_message({T("(f9 a)"), {}}, QueryMode::Subterm),
            "No rule application found that introduces (F9 A) as a subterm.\n");
  EXPECT_EQ(no_further_results_message({T("(f9 a)"), {}}, QueryMode::Term),
            "No further results for (F9 A) as a term.\n");
}

TEST(Query, CursorSkipsEarlierProducts) {
  World w = World().load_file(data_path("chain.lisp"));
  auto data = collect(w, "(k (g a) (g b))", "DEFAULT");
  QueryCursor c(parse_query_pattern(S("(:free (v) (h v))"), w), QueryMode::Subterm);
  auto first = c.next(data);
  ASSERT_TRUE(first);
  EXPECT_EQ(first->instance, T("(h a)"));
  auto second = c.next(data);
  ASSERT_TRUE(second);
  EXPECT_EQ(second->instance, T("(h b)"));
  EXPECT_FALSE(c.next(data));
  EXPECT_EQ(c.excluded().size(), 2u);
}

TEST(Query, JsonShape) {
  World w = World().load_file(data_path("nest.lisp"));
  auto data = collect(w, "(f1 a)", "DEFAULT");
  auto r = run_query(data, {T("(f3 a)"), {}}, QueryMode::Subterm);
  ASSERT_TRUE(r);
  nlohmann::json j = to_json(*r, data);
  EXPECT_EQ(j["instance"], "(F3 A)");
  EXPECT_EQ(j["product"]["path"], nlohmann::json::array({0}));
  EXPECT_EQ(j["product"]["rune"], "(:REWRITE R1)");
  EXPECT_EQ(j["chain"].size(), 2u);
  EXPECT_TRUE(j["frames"].is_array());
  EXPECT_EQ(j["frames"].size(), r->stack.size());
}

TEST(QueryProperty, ProductMatchesLinearScanOn200Worlds) {
  auto r = brrkit::testing::query_property(424242, 200);
  EXPECT_TRUE(r.ok) << r.detail;
  EXPECT_GT(r.cases, 1000u);
}
