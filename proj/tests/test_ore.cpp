#include <gtest/gtest.h>

#include <random>

#include "qfb/error.hpp"
#include "qfb/expr.hpp"
#include "qfb/ore.hpp"

using namespace qfb;

namespace {

VarTablePtr kTable() {
  static VarTablePtr t = VarTable::make({}, "qk", ShiftKind::geometric(1));
  return t;
}
OreOp op(const std::string& s) { return parseOreOp(s, kTable()); }
RatFn rf(const std::string& s) { return parseRatFn(s, kTable()->base()); }

IndexedSeq seq(const std::vector<std::string>& xs, long offset = 0) {
  IndexedSeq s{offset, {}};
  for (const auto& x : xs) s.values.push_back(rf(x));
  return s;
}

void expectAllZero(const IndexedSeq& s) {
  ASSERT_FALSE(s.values.empty());
  for (const auto& v : s.values) EXPECT_TRUE(v.isZero()) << v.str();
}

OreOp randomOp(std::mt19937& rng, int order, int terms = 2) {
  auto vars = kTable();
  std::uniform_int_distribution<int> c(-3, 3), ex(0, 2);
  RatFn q = RatFn::var(vars, 0), v = RatFn::shiftVar(vars);
  std::map<int, RatFn> m;
  for (int i = 0; i <= order; ++i) {
    RatFn x(vars);
    for (int t = 0; t < terms; ++t) x += RatFn::constant(vars, c(rng)) * q.pow(ex(rng)) * v.pow(ex(rng));
    if (i == order && x.isZero()) x = v + RatFn::constant(vars, 1);
    if (i == 0 && x.isZero()) x = q * v - RatFn::constant(vars, 2);
    m.emplace(i, x);
  }
  return OreOp::fromCoeffs(vars, m);
}

}  // namespace

TEST(Ore, ShiftCommutation) {
  EXPECT_EQ(op("S") * op("qk"), op("q*qk*S"));
  EXPECT_EQ(op("S+1") * op("1"), op("S+1"));
  EXPECT_EQ(op("S - qk") * op("S + qk"), op("S^2 + (q-1)*qk*S - qk^2"));
}

TEST(Ore, RightDivideExamples) {
  OreOp L = op("S^2 + qk*S - q^2*qk");
  auto d = rightDivide(L, L);
  EXPECT_EQ(d.quotient, op("1"));
  EXPECT_TRUE(d.remainder.isZero());

  OreOp num = op("S^2 - qk^2"), den = op("S - qk");
  auto r = rightDivide(num, den);
  EXPECT_EQ(r.quotient, op("S + q*qk"));
  EXPECT_EQ(r.remainder, op("(q-1)*qk^2"));
  EXPECT_EQ(r.quotient * den + r.remainder, num);
  EXPECT_THROW(rightDivide(num, OreOp(kTable())), Error);
}

TEST(Ore, GcrdRecoversCommonFactor) {
  std::mt19937 rng(7);
  for (int it = 0; it < 10; ++it) {
    OreOp A = randomOp(rng, 1), B = randomOp(rng, 2), G = randomOp(rng, 1);
    OreOp g = gcrd(A * G, B * G);
    EXPECT_EQ(g, G.monic());
    EXPECT_TRUE(rightDivide(A * G, g).remainder.isZero());
  }
  OreOp L = op("S^2 - (1+q)*S + qk");
  EXPECT_EQ(gcrd(L, L), L.monic());
}

TEST(Ore, LclmBasic) {
  auto l = lclm(op("S-1"), op("S-qk"));
  EXPECT_EQ(l.l.order(), 2);
  EXPECT_EQ(l.u * op("S-1"), l.w * op("S-qk"));
  OreOp L = op("S^2 + qk*S - 1");
  auto s = lclm(L, L);
  EXPECT_EQ(s.l, L.monic());
  EXPECT_EQ(s.u.order(), 0);
}

TEST(Ore, OrderSumIdentity) {
  std::mt19937 rng(11);
  for (int it = 0; it < 8; ++it) {
    OreOp p = randomOp(rng, 1 + it % 2), q = randomOp(rng, 1);
    if (it % 3 == 0) {
      OreOp G = randomOp(rng, 1);
      p = p * G;
      q = q * G;
    }
    auto l = lclm(p, q);
    OreOp g = gcrd(p, q);
    EXPECT_EQ(l.l.order() + g.order(), p.order() + q.order());
    EXPECT_EQ(l.u * p, l.w * q);
  }
}

TEST(Ore, AlgebraLaws) {
  std::mt19937 rng(3);
  for (int it = 0; it < 10; ++it) {
    OreOp a = randomOp(rng, 1), b = randomOp(rng, 2), c = randomOp(rng, 1);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a + b) * c, a * c + b * c);
  }
}

TEST(Ore, ApplyComposition) {
  std::mt19937 rng(5);
  IndexedSeq s = seq({"1", "q", "1-q", "q^3", "2", "q+q^2", "1-q^4", "3*q", "q^5", "1"}, 2);
  for (int it = 0; it < 5; ++it) {
    OreOp A = randomOp(rng, 1), B = randomOp(rng, 2);
    IndexedSeq lhs = applyToSeq(A * B, s);
    IndexedSeq rhs = applyToSeq(A, applyToSeq(B, s));
    ASSERT_EQ(lhs.begin(), rhs.begin());
    ASSERT_EQ(lhs.values.size(), rhs.values.size());
    for (std::size_t i = 0; i < lhs.values.size(); ++i) EXPECT_EQ(lhs.values[i], rhs.values[i]);
  }
}

TEST(Ore, AnnihilatesRogersRamanujanCoefficients) {
  OreOp L = op("S^2 + q*qk*S - q^2*qk");
  expectAllZero(applyToSeq(L, seq({"1", "q", "0", "q^4", "-q^7", "q^9+q^11", "-q^13-q^14-q^16"})));
  expectAllZero(applyToSeq(op("S-1"), seq({"3", "3", "3", "3"})));
  EXPECT_THROW(applyToSeq(L, seq({"1", "q"})), Error);
}

TEST(Ore, AnnihilatesSillsCoefficients) {
  OreOp L = op(
      "S^4 - (1+q)*(1-q^2*qk)*S^3 - (q^8*qk^2 - q^4*qk^2 + q^3*qk + q^2*qk - q)*S^2"
      " + q^6*qk^2*(1+q)*(1-q^2*qk)*S - q^5*qk^2*(1-q*qk)*(1-q^2*qk)");
  expectAllZero(applyToSeq(L, seq({"1", "q", "q^4", "q^7", "q^12", "q^17"})));
  expectAllZero(applyToSeq(op("S^2 - q^4*qk^2"), seq({"1", "q", "q^4", "q^7", "q^12", "q^17"})));
}

TEST(Ore, RemoveShiftFactor) {
  auto r = removeShiftFactor(op("S^3"));
  EXPECT_EQ(r.core, op("1"));
  EXPECT_EQ(r.power, 3);
  OreOp L = op("S^2 + qk*S - 1");
  EXPECT_EQ(removeShiftFactor(L).core, L);
  EXPECT_EQ(removeShiftFactor(L).power, 0);
  OreOp M = op("S^3 - qk*S^2 + (1-qk)*S");
  auto m = removeShiftFactor(M);
  EXPECT_EQ(m.power, 1);
  EXPECT_EQ(OreOp::shift(kTable(), 1) * m.core, M);
}

TEST(Ore, ZeroIndices) {
  auto vars = kTable();
  MPoly lead = (op("1 - qk/q^2").coeff(0)).num();
  EXPECT_EQ(zeroIndices(lead, 0), std::vector<long>{2});
  EXPECT_TRUE(zeroIndices(op("1 - q^2*qk").coeff(0).num(), 0).empty());
  EXPECT_TRUE(zeroIndices(op("q^4*qk^4").coeff(0).num(), 0).empty());
  EXPECT_EQ(zeroIndices(op("(1-q^3*qk^2)*(qk-q^5)").coeff(0).num(), 0), std::vector<long>{5});
  EXPECT_EQ(leadingNonvanishing(op("(qk - q^2)*S + 1"), 0), std::vector<long>{2});
}

TEST(Ore, ArithmeticShift) {
  auto vars = VarTable::make({}, "n", ShiftKind::arithmetic());
  OreOp S = OreOp::shift(vars, 1);
  RatFn n = RatFn::shiftVar(vars);
  EXPECT_EQ(S * OreOp::scalar(n), OreOp::term(n + RatFn::constant(vars, 1), 1));
  MPoly p = (n * n - RatFn::constant(vars, 9)).num();
  EXPECT_EQ(zeroIndices(p, 0), std::vector<long>{3});
  EXPECT_EQ(zeroIndices(p, -5), (std::vector<long>{-3, 3}));
}

TEST(Ore, MatrixProduct) {
  auto vars = kTable();
  OreMat A(2, vars), B = OreMat::identity(2, vars);
  A.at(0, 1) = op("S");
  A.at(1, 0) = op("qk");
  EXPECT_EQ(A * B, A);
  OreMat A2 = A * A;
  EXPECT_EQ(A2.at(0, 0), op("q*qk*S"));
  EXPECT_EQ(A2.at(1, 1), op("qk*S"));
  EXPECT_TRUE(A2.at(0, 1).isZero());
}
