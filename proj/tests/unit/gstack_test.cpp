#include <gtest/gtest.h>

#include "brrkit/gstack.hpp"
#include "test_support.hpp"

using namespace brrkit;
using brrkit::testing::T;

TEST(Ordinals, Words) {
  EXPECT_EQ(ordinal_word(1), "first");
  EXPECT_EQ(ordinal_word(10), "tenth");
  EXPECT_EQ(ordinal_word(11), "#11");
}

TEST(Frames, ApplyingRuleHasNoComma) {
  Frame f = Frame::applying({RuneClass::Rewrite, "P-RULE"}, T("(p (f u v))"));
  EXPECT_EQ(render_frame(f, 3),
            "3. Attempting to apply (:REWRITE P-RULE) to\n"
            "     (P (F U V))");
}

TEST(Frames, SubstitutionInReverseBindingOrder) {
  Frame f = Frame::rhs(T("(binary-append (rev x) y)"), Substitution{{"X", T("a")}, {"Y", T("'nil")}});
  EXPECT_EQ(render_frame(f, 2),
            "2. Rewriting (to simplify) the rhs of the conclusion,\n"
            "     (BINARY-APPEND (REV X) Y),\n"
            "   under the substitution\n"
            "     Y : 'NIL\n"
            "     X : A");
}

TEST(Frames, EmptySubstitutionIsOmitted) {
  Frame f = Frame::argument(2, T("(cdr x)"), {});
  EXPECT_EQ(render_frame(f, 4), "4. Rewriting (to simplify) the second argument,\n     (CDR X),");
}

TEST(Frames, LiteralAndHypothesis) {
  EXPECT_EQ(render_frame(Frame::literal_atom(1, T("(p x)")), 1),
            "1. Rewriting (to simplify) the atom of the first literal,\n     (P X),");
  EXPECT_EQ(render_frame(Frame::hypothesis(1, T("(q x)"), Substitution{{"X", T("u")}}), 5),
            "5. Rewriting (to establish) the first hypothesis,\n"
            "     (Q X),\n"
            "   under the substitution\n"
            "     X : U");
}

TEST(Frames, WholeStack) {
  GStack gs{Frame::simplifying_clause({T("(not (r v))"), T("(p (f u v))")}),
            Frame::literal_atom(2, T("(p (f u v))"))};
  std::string out = render_gstack(gs);
  EXPECT_EQ(out,
            "1. Simplifying the clause\n"
            "     ((NOT (R V)) (P (F U V)))\n"
            "2. Rewriting (to simplify) the atom of the second literal,\n"
            "     (P (F U V)),\n");
}
