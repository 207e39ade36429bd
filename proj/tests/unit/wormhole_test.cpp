#include <gtest/gtest.h>

#include <map>
#include <random>

#include "brrkit/wormhole.hpp"
#include "properties.hpp"

using namespace brrkit;

namespace {

int value_of(const WormholeStatus& s) { return s.data.has_value() ? std::any_cast<int>(s.data) : 0; }

WormholeStatus with_value(WormholeStatus s, int v) {
  s.data = v;
  return s;
}

struct Boom {};

}  // namespace

TEST(Wormhole, UnknownNameYieldsFreshStatus) {
  WormholeStore store;
  EXPECT_EQ(store.get_persistent_whs("X").entry_code, EntryCode::Enter);
  EXPECT_FALSE(store.get_persistent_whs("X").data.has_value());
}

TEST(Wormhole, EvalUpdatesPersistentStatus) {
  WormholeStore store;
  store.wormhole_eval("X", [](WormholeStatus s) { return with_value(s, value_of(s) + 2); });
  store.wormhole_eval("X", [](WormholeStatus s) { return with_value(s, value_of(s) * 5); });
  EXPECT_EQ(value_of(store.get_persistent_whs("X")), 10);
}

TEST(Wormhole, EnterWritesBackStatusAndRestoresGlobals) {
  WormholeStore store;
  StateGlobals globals{{"G", SExpr::integer(1)}};
  store.wormhole_enter("X", globals, [&](WormholeStatus& s) {
    EXPECT_TRUE(store.is_open("X"));
    s.data = 7;
    globals["G"] = SExpr::integer(2);
    globals["NEW"] = SExpr::t();
  });
  EXPECT_FALSE(store.is_open("X"));
  EXPECT_EQ(value_of(store.get_persistent_whs("X")), 7);
  EXPECT_EQ(globals, (StateGlobals{{"G", SExpr::integer(1)}}));
}

TEST(Wormhole, SetterInsideOpenWormholeSurvivesExit) {
  WormholeStore store;
  StateGlobals globals;
  store.wormhole_enter("X", globals, [&](WormholeStatus&) {
    store.set_persistent_whs("X", with_value({}, 3));
    EXPECT_EQ(value_of(store.get_persistent_whs("X")), 3);
  });
  EXPECT_EQ(value_of(store.get_persistent_whs("X")), 3);
}

TEST(Wormhole, SkipEntryCodeDoesNotRun) {
  WormholeStore store;
  store.set_persistent_whs("X", WormholeStatus{EntryCode::Skip, 1});
  StateGlobals globals;
  bool ran = false;
  store.wormhole_enter("X", globals, [&](WormholeStatus&) { ran = true; });
  EXPECT_FALSE(ran);
}

TEST(Wormhole, ExceptionsStillWriteBack) {
  WormholeStore store;
  StateGlobals globals{{"G", SExpr::integer(1)}};
  EXPECT_THROW(store.wormhole_enter("X", globals,
                                    [&](WormholeStatus& s) {
                                      s.data = 9;
                                      globals["G"] = SExpr::nil();
                                      throw Boom{};
                                    }),
               Boom);
  EXPECT_FALSE(store.is_open("X"));
  EXPECT_EQ(value_of(store.get_persistent_whs("X")), 9);
  EXPECT_EQ(globals.at("G"), SExpr::integer(1));
}

TEST(Wormhole, MisuseIsRejected) {
  WormholeStore store;
  StateGlobals globals;
  store.wormhole_enter("X", globals, [&](WormholeStatus&) {
    EXPECT_THROW(store.wormhole_enter("X", globals, [](WormholeStatus&) {}), Error);
    EXPECT_THROW(store.wormhole_eval("X", [](WormholeStatus s) { return s; }), Error);
  });
  EXPECT_THROW(store.wormhole_eval("Y",
                                   [&](WormholeStatus s) {
                                     store.wormhole_eval("Y", [](WormholeStatus t) { return t; });
                                     return s;
                                   }),
               Error);
  // The failed reentrant call must not leave Y marked busy.
  EXPECT_NO_THROW(store.wormhole_eval("Y", [](WormholeStatus s) { return s; }));
}

TEST(WormholeCoherence, RandomProgramsMatchModel) {
  auto r = brrkit::testing::wormhole_property(1, 200, 60);
  EXPECT_TRUE(r.ok) << r.detail;
  EXPECT_GT(r.cases, 10000u);
}
