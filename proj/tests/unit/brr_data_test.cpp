#include <gtest/gtest.h>

#include <functional>

#include "brrkit/brr_data.hpp"
#include "brrkit/rewriter.hpp"
#include "test_support.hpp"

using namespace brrkit;
using brrkit::testing::CountingHandlers;
using brrkit::testing::data_path;
using brrkit::testing::S;
using brrkit::testing::ScriptedSource;
using brrkit::testing::T;

namespace {

std::shared_ptr<const RewriteRule> rule(const std::string& name) {
  return std::make_shared<const RewriteRule>(make_rule({RuneClass::Rewrite, name}, {}, T("(f x)"), T("x")));
}

BrrData1 pre(const std::string& name) {
  BrrData1 d;
  d.lemma = rule(name);
  d.target = T("(f a)");
  return d;
}

BrrData2 won() {
  BrrData2 d;
  d.brr_result = T("a");
  return d;
}

BrrData2 lost() {
  BrrData2 d;
  d.failure_reason = FailureReason::hyp_failed(1, T("'nil"));
  return d;
}

struct Collected {
  std::vector<BrrData> data;
  ProofOutcome outcome;
};

Collected collect(const World& w, const std::string& goal, const std::string& strategy) {
  StrategyRegistry reg;
  WormholeStore wormholes;
  StateGlobals globals;
  ScriptedSource in;
  StringOutput out;
  BrrEnvironment env;
  env.wormholes = &wormholes;
  env.globals = &globals;
  env.world = &w;
  env.mode = GStackMode::BrrData;
  env.strategy = &reg.find(strategy);
  env.in = &in;
  env.out = &out;
  BrrHandlers h(env);
  clear_brr_data_lst(wormholes);
  Rewriter r(w, {}, GStackMode::BrrData, &h);
  Collected c;
  c.outcome = r.prove(w.translate(S(goal)));
  c.data = brr_data_lst(wormholes);
  EXPECT_TRUE(in.prompts().empty());
  return c;
}

void each_record(const std::vector<BrrData>& data, const std::function<void(const BrrData&)>& f) {
  for (const auto& d : data) {
    f(d);
    each_record(d.completed, f);
  }
}

struct Case {
  const char* rules;
  const char* goal;
};

const Case kCases[] = {
    {"prq.lisp", "(implies (r v) (p (f v u)))"},
    {"prq.lisp", "(implies (r v) (p (f u v)))"},
    {"prq2.lisp", "(implies (r u) (p (f u v)))"},
    {"rev.lisp", "(equal (nth n (revappend x y)) (nth n (reverse x)))"},
    {"append.lisp", "(equal (append x y) (append y x))"},
    {"chain.lisp", "(equal (g a) (f3 (h a)))"},
    {"nest.lisp", "(equal (f1 a) (f3 a))"},
};

}  // namespace

TEST(Updates, BuiltinNestsByCompletion) {
  BrrDataStore s;
  s = update_brr_data_1_builtin(std::move(s), pre("OUTER"));
  s = update_brr_data_1_builtin(std::move(s), pre("INNER1"));
  s = update_brr_data_2_builtin(std::move(s), won());
  s = update_brr_data_1_builtin(std::move(s), pre("INNER2"));
  s = update_brr_data_2_builtin(std::move(s), lost());
  s = update_brr_data_2_builtin(std::move(s), won());
  ASSERT_TRUE(s.open.empty());
  ASSERT_EQ(s.finished.size(), 1u);
  const BrrData& outer = s.finished[0];
  EXPECT_EQ(outer.rune().name, "OUTER");
  ASSERT_EQ(outer.completed.size(), 2u);
  EXPECT_EQ(outer.completed[0].rune().name, "INNER1");
  EXPECT_TRUE(outer.completed[0].succeeded());
  EXPECT_FALSE(outer.completed[1].succeeded());
  EXPECT_EQ(record_count(s.finished), 3u);
}

TEST(Updates, FailuresPromotesChildrenOfSuccesses) {
  BrrDataStore s;
  s = update_brr_data_1_builtin(std::move(s), pre("OUTER"));
  s = update_brr_data_1_builtin(std::move(s), pre("BAD"));
  s = update_brr_data_2_failures(std::move(s), lost());
  s = update_brr_data_2_failures(std::move(s), won());
  ASSERT_EQ(s.finished.size(), 1u);
  EXPECT_EQ(s.finished[0].rune().name, "BAD");
}

TEST(Updates, CloseWithoutOpenIsAnError) {
  EXPECT_THROW(update_brr_data_2_builtin(BrrDataStore{}, won()), Error);
}

TEST(Store, OpenRecordsAreRejected) {
  WormholeStore w;
  w.wormhole_eval(kBrrDataWormhole, [](WormholeStatus s) {
    s.data = update_brr_data_1_builtin(BrrDataStore{}, pre("X"));
    return s;
  });
  EXPECT_THROW(brr_data_lst(w), Error);
  clear_brr_data_lst(w);
  EXPECT_TRUE(brr_data_lst(w).empty());
}

TEST(Registry, NamesAndValidation) {
  StrategyRegistry reg;
  EXPECT_TRUE(reg.contains("DEFAULT"));
  EXPECT_TRUE(reg.contains("FAILURES"));
  EXPECT_TRUE(reg.contains("ALL"));
  EXPECT_THROW(reg.find("NOPE"), Error);
  EXPECT_THROW(reg.add(Strategy{"HALF", nullptr, nullptr, nullptr, nullptr}), Error);
}

TEST(Strategies, AllRecordsEveryBrkpt1) {
  for (const auto& c : kCases) {
    World w = World().load_file(data_path(c.rules));
    CountingHandlers counts;
    Rewriter r(w, {}, GStackMode::Brr, &counts);
    r.prove(w.translate(S(c.goal)));
    Collected all = collect(w, c.goal, "ALL");
    EXPECT_EQ(record_count(all.data), counts.brkpt1_calls) << c.goal;
  }
}

TEST(Strategies, DefaultKeepsTopLevelOnly) {
  for (const auto& c : kCases) {
    World w = World().load_file(data_path(c.rules));
    Collected d = collect(w, c.goal, "DEFAULT");
    each_record(d.data, [&](const BrrData& r) { EXPECT_TRUE(r.pre.ancestors.empty()) << c.goal; });
  }
}

TEST(Strategies, FailuresKeepsFailedBackchaining) {
  std::size_t seen = 0;
  for (const auto& c : kCases) {
    World w = World().load_file(data_path(c.rules));
    Collected f = collect(w, c.goal, "FAILURES");
    each_record(f.data, [&](const BrrData& r) {
      ++seen;
      EXPECT_FALSE(r.pre.ancestors.empty()) << c.goal;
      EXPECT_TRUE(r.post.failure_reason.has_value()) << c.goal;
    });
  }
  EXPECT_GT(seen, 0u);
}

TEST(Strategies, NestedRewritesNestRecords) {
  World w = World().load_file(data_path("nest.lisp"));
  Collected d = collect(w, "(f1 a)", "DEFAULT");
  ASSERT_EQ(d.data.size(), 1u);
  EXPECT_EQ(d.data[0].pre.target, T("(f1 a)"));
  EXPECT_EQ(d.data[0].post.brr_result, T("(f3 a)"));
  ASSERT_EQ(d.data[0].completed.size(), 1u);
  EXPECT_EQ(d.data[0].completed[0].pre.target, T("(f2 a)"));
  EXPECT_EQ(d.data[0].completed[0].post.brr_result, T("(f3 a)"));
}

TEST(Strategies, CollectionDoesNotChangeOutcome) {
  for (const auto& c : kCases) {
    World w = World().load_file(data_path(c.rules));
    Rewriter plain(w, {}, GStackMode::Off, nullptr);
    ProofOutcome base = plain.prove(w.translate(S(c.goal)));
    for (const char* s : {"DEFAULT", "FAILURES", "ALL"}) {
      EXPECT_EQ(collect(w, c.goal, s).outcome, base) << c.goal << " " << s;
    }
  }
}

TEST(Json, RecordShape) {
  World w = World().load_file(data_path("nest.lisp"));
  Collected d = collect(w, "(f1 a)", "DEFAULT");
  nlohmann::json j = to_json(d.data);
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["rune"], "(:REWRITE R1)");
  EXPECT_EQ(j[0]["target"], "(F1 A)");
  EXPECT_EQ(j[0]["result"], "(F3 A)");
  EXPECT_TRUE(j[0]["failure_reason"].is_null());
  EXPECT_EQ(j[0]["unify_subst"]["X"], "A");
  EXPECT_EQ(j[0]["completed"].size(), 1u);
  EXPECT_EQ(print(to_sexpr(d.data[0].completed[0])),
            "(:RUNE (:REWRITE R2) :TARGET (F2 A) :RESULT (F3 A) :FAILURE-REASON NIL :COMPLETED NIL)");
}
