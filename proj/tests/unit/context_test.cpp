#include <gtest/gtest.h>

#include "brrkit/context.hpp"
#include "test_support.hpp"

using namespace brrkit;
using brrkit::testing::T;

TEST(TypeAlistTest, NegationsAreNormalized) {
  TypeAlist ta = TypeAlist().assume(T("(not (consp x))"), true);
  ASSERT_EQ(ta.entries().size(), 1u);
  EXPECT_EQ(ta.entries()[0].term, T("(consp x)"));
  EXPECT_FALSE(ta.entries()[0].truth);
  EXPECT_EQ(ta.lookup(T("(consp x)")), false);
  EXPECT_EQ(ta.lookup(T("(consp y)")), std::nullopt);
}

TEST(TypeAlistTest, ConstantsAndDuplicatesSkipped) {
  TypeAlist ta = TypeAlist().assume(T("'t"), true).assume(T("(p x)"), true).assume(T("(p x)"), false);
  ASSERT_EQ(ta.entries().size(), 1u);
  EXPECT_EQ(ta.lookup(T("(p x)")), true);
}

TEST(TypeAlistTest, NewestFirst) {
  TypeAlist ta = TypeAlist().assume(T("(p x)"), true).assume(T("(q x)"), true);
  EXPECT_EQ(ta.entries()[0].term, T("(q x)"));
}

TEST(TypeAlistTest, EqualityReplacesBySmallerSide) {
  TypeAlist ta = TypeAlist().assume(T("(equal (binary-append (cdr x) y) (binary-append y (cdr x)))"), true);
  EXPECT_EQ(ta.equality_replacement(T("(binary-append (cdr x) y)")), T("(binary-append y (cdr x))"));
  EXPECT_EQ(ta.equality_replacement(T("(binary-append y (cdr x))")), std::nullopt);
  TypeAlist neg = TypeAlist().assume(T("(equal (f a) b)"), false);
  EXPECT_EQ(neg.equality_replacement(T("(f a)")), std::nullopt);
}

TEST(TypeAlistTest, DecodedDisplayGroupsByType) {
  TypeAlist ta =
      TypeAlist().assume(T("(consp x)"), true).assume(T("(equal a b)"), true).assume(T("(p a)"), false);
  World w;
  std::string out = render_type_alist(ta, w);
  EXPECT_NE(out.find("Terms with type *TS-NIL*:\n(P A)\n"), std::string::npos);
  EXPECT_NE(out.find("Terms with type *TS-T*:\n(EQUAL A B)\n"), std::string::npos);
  EXPECT_NE(out.find("Terms with type *TS-CONS*:\nX\n"), std::string::npos);
}

TEST(Failures, Printing) {
  EXPECT_EQ(print_failure(FailureReason::hyp_failed(1, T("(r u)"))), ":HYP 1 rewrote to (R U)");
  EXPECT_EQ(print(to_sexpr(FailureReason::hyp_failed(2, T("'nil")))), "(:HYP 2 :REWROTE-TO 'NIL)");
  EXPECT_EQ(to_string(GStackMode::BrrData), "brr-data");
}
