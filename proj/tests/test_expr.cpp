#include <gtest/gtest.h>

#include <random>

#include "qfb/error.hpp"
#include "qfb/expr.hpp"

using namespace qfb;

TEST(Expr, ParsesExampleOperators) {
  auto e = parseOperator("E^2 - (1+q)*E - (q^4*qn^2 - q)", {});
  EXPECT_EQ(exprString(e), "E^2 - (1 + q)*E - (q^4*qn^2 - q)");
  auto z = parseOperator("E - 1 + z*qn", {"z"});
  EXPECT_EQ(z->kind, ExprNode::Kind::Add);
  auto a = parseOperator("E", {});
  EXPECT_EQ(a->kind, ExprNode::Kind::Symbol);
}

TEST(Expr, Errors) {
  try {
    parseOperator("E + 2*", {});
    FAIL();
  } catch (const ParseError& err) {
    EXPECT_EQ(err.position(), 6u);
  }
  EXPECT_THROW(parseOperator("E + z", {}), ParseError);
  EXPECT_THROW(parseOperator("qn^(-1)", {}), ParseError);
  EXPECT_THROW(parseOperator("E S", {}), ParseError);
  EXPECT_NO_THROW(parseExpr("S^(-1) + qk", Domain::K, {}));
}

TEST(Expr, NormalFormPushesScalarsLeft) {
  auto vars = VarTable::make({}, "qn", ShiftKind::geometric(1));
  OreOp L = parseOreOp("E*qn", vars, "E");
  EXPECT_EQ(L, parseOreOp("q*qn*E", vars, "E"));
}

TEST(Expr, RoundTrip) {
  auto vars = VarTable::make({"a", "b"}, "qk", ShiftKind::geometric(1));
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> c(-4, 4), ex(0, 3), sh(-1, 3);
  for (int it = 0; it < 40; ++it) {
    std::map<int, RatFn> m;
    for (int t = 0; t < 4; ++t) {
      RatFn x = RatFn::constant(vars, c(rng)) * RatFn::var(vars, 0).pow(ex(rng)) *
                RatFn::shiftVar(vars).pow(ex(rng)) * RatFn::var(vars, 1 + t % 2).pow(ex(rng) % 2);
      RatFn d = RatFn::constant(vars, 1) - RatFn::var(vars, 0).pow(ex(rng)) * RatFn::shiftVar(vars);
      if (t == 3 && !d.isZero()) x = x / d;
      if (it % 3 == 0) x = x / RatFn::qPow(vars, 2);
      int i = sh(rng);
      auto it = m.find(i);
      if (it == m.end()) m.emplace(i, x);
      else it->second += x;
    }
    for (auto i = m.begin(); i != m.end();) i = i->second.isZero() ? m.erase(i) : std::next(i);
    OreOp L = OreOp::fromCoeffs(vars, m);
    EXPECT_EQ(parseOreOp(L.str(), vars), L) << L.str();
  }
}

TEST(Expr, Display) {
  auto vars = VarTable::make({}, "qk", ShiftKind::geometric(1));
  EXPECT_EQ(displayOp(parseOreOp("S^2 - q^4*qk^2", vars)), "S^2 - q^(2k+4)");
  EXPECT_EQ(displayOp(parseOreOp("S^(-1) + qk", vars), "S", "k", true), "S^(-1) + q^k");
  EXPECT_EQ(displayRatFn(parseRatFn("qk*(qk-1)/q", vars)), "q^(2k-1) - q^(k-1)");
}
