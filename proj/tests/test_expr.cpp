#include <gtest/gtest.h>

#include "kbpair/expr.hpp"

using namespace kbpair;

TEST(Expr, Precedence) {
  const Expr e = parse_tangle("1 + 2 * 3 + 4");
  ASSERT_EQ(e->kind, NodeKind::Sum);
  EXPECT_EQ(e->right->kind, NodeKind::Twist);
  ASSERT_EQ(e->left->kind, NodeKind::Sum);
  EXPECT_EQ(e->left->right->kind, NodeKind::Star);
  EXPECT_TRUE(equal(parse_tangle("1*2*3"), expr::star(expr::star(expr::twist(1), expr::twist(2)), expr::twist(3))));
}

TEST(Expr, Literals) {
  EXPECT_TRUE(equal(parse_tangle("-3"), expr::twist(-3)));
  EXPECT_TRUE(equal(parse_tangle("(-1/2)"), expr::vtwist(-2)));
  EXPECT_TRUE(equal(parse_tangle("1/1"), expr::vtwist(1)));
  EXPECT_TRUE(equal(parse_tangle("0"), expr::zero()));
  EXPECT_TRUE(equal(parse_tangle("inf"), expr::infinity()));
  EXPECT_TRUE(equal(parse_tangle("-(2)"), expr::mirror(expr::twist(2))));
  EXPECT_TRUE(equal(parse_tangle("- T821"), expr::mirror(build_named({NamedTangle::Kind::T821}))));
}

TEST(Expr, NamedTangles) {
  using Kind = NamedTangle::Kind;
  EXPECT_EQ(crossing_count(build_named({Kind::T821})), 8u);
  EXPECT_EQ(crossing_count(build_named({Kind::T10})), 10u);
  EXPECT_EQ(crossing_count(build_named({Kind::T20})), 20u);
  for (int r = 1; r <= 12; ++r)
    EXPECT_EQ(crossing_count(build_named({Kind::M, r})), 20ull << (r - 1)) << r;
  EXPECT_EQ(crossing_count(build_named({Kind::M, 58})), 20ull << 57);
  EXPECT_EQ(crossing_count(build_named({Kind::D, 3})), 81u);
  EXPECT_TRUE(equal(parse_tangle("T821"), parse_tangle("(((1/2)+1)*2)+(-3)")));
  EXPECT_TRUE(equal(parse_tangle("T10"), parse_tangle("T821 * 2")));
  EXPECT_TRUE(equal(parse_tangle("M2"), parse_tangle("T20 + T20")));
  EXPECT_THROW(build_named({Kind::M, 0}), DomainError);
  EXPECT_THROW(build_named({Kind::M, 59}), DomainError);
}

TEST(Expr, SharedChainIsShallow) {
  const Expr m = parse_tangle("M40");
  EXPECT_EQ(m->left.get(), m->right.get());
  EXPECT_EQ(format(m), "M40");
}

TEST(Expr, FormatRoundTrip) {
  for (const char* text : {"(((1/2)+1)*2)+(-3)", "1 + (2 + 3)", "1 * (2 * 3)", "-(1 + 0) * inf",
                           "(-1/4) + -(3)", "(1 + 2) * (3 + 4)", "T20 + -(T10)"}) {
    const Expr e = parse_tangle(text);
    EXPECT_TRUE(equal(parse_tangle(format(e)), e)) << text << " -> " << format(e);
  }
}

TEST(Expr, ParseErrors) {
  struct Case {
    const char* text;
    std::size_t offset;
  };
  for (const Case c : {Case{"", 0}, Case{"1 +", 3}, Case{"(1 + 2", 6}, Case{"2/3", 0},
                       Case{"1/0", 2}, Case{"-0", 1}, Case{"1 2", 2}, Case{"M0", 0},
                       Case{"M59", 0}, Case{"Tfoo", 0}, Case{"1 # 2", 2},
                       Case{"99999999999999999999", 0}}) {
    try {
      parse_tangle(c.text);
      ADD_FAILURE() << "accepted " << c.text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.offset(), c.offset) << c.text << ": " << e.what();
      EXPECT_FALSE(e.expected().empty()) << c.text;
    }
  }
}
