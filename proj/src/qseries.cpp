#include "qfb/qseries.hpp"

#include "qfb/error.hpp"

namespace qfb {

RatFn qPochhammer(const RatFn& x, int e, long n) {
  const VarTablePtr& vars = x.vars();
  RatFn one = RatFn::constant(vars, 1), r = one;
  for (long j = 0; j < n; ++j) r *= one - x * RatFn::qPow(vars, e * j);
  return r;
}

RatFn qBinomial(const VarTablePtr& vars, long N, long K, int e) {
  if (K < 0 || N < 0 || K > N) return RatFn(vars);
  if (K > N - K) K = N - K;
  RatFn q = RatFn::qPow(vars, e);
  RatFn one = RatFn::constant(vars, 1), num = one, den = one;
  for (long j = 0; j < K; ++j) {
    num *= one - RatFn::qPow(vars, e * (N - j));
    den *= one - RatFn::qPow(vars, e * (j + 1));
  }
  return num / den;
}

MPoly truncate(const MPoly& f, long order) {
  std::vector<MPoly::Term> ts;
  for (const auto& t : f.terms())
    if (static_cast<long>(t.m.e[0]) <= order) ts.push_back(t);
  return MPoly::fromTerms(f.vars(), std::move(ts));
}

MPoly seriesMul(const MPoly& a, const MPoly& b, long order) {
  auto pa = a.split(0), pb = b.split(0);
  MPoly out(a.vars());
  std::vector<MPoly> acc(static_cast<std::size_t>(order + 1), MPoly(a.vars()));
  for (std::size_t i = 0; i < pa.size() && static_cast<long>(i) <= order; ++i) {
    if (pa[i].isZero()) continue;
    for (std::size_t j = 0; j < pb.size() && static_cast<long>(i + j) <= order; ++j)
      if (!pb[j].isZero()) acc[i + j] += pa[i] * pb[j];
  }
  return MPoly::join(a.vars(), acc, 0);
}

MPoly seriesInverse(const MPoly& f, long order) {
  auto c = f.split(0);
  if (c.empty() || c[0].isZero() || !c[0].isConstant())
    throw Error(ErrorCode::InvalidArgument, "series inverse needs a rational constant term");
  BigRat c0 = c[0].constantValue();
  if (c0 != 1) {
    for (auto& x : c) x = x.scaled(1 / c0);
    return seriesInverse(MPoly::join(f.vars(), c, 0), order).scaled(1 / c0);
  }
  std::vector<MPoly> g(static_cast<std::size_t>(order + 1), MPoly(f.vars()));
  g[0] = MPoly::constant(f.vars(), 1);
  for (long n = 1; n <= order; ++n) {
    MPoly s(f.vars());
    for (long i = 1; i <= n && i < static_cast<long>(c.size()); ++i)
      if (!c[i].isZero() && !g[n - i].isZero()) s += c[i] * g[n - i];
    g[n] = -s;
  }
  return MPoly::join(f.vars(), g, 0);
}

MPoly seriesOf(const RatFn& f, long order) {
  return seriesMul(truncate(f.num(), order), seriesInverse(truncate(f.den(), order), order), order);
}

MPoly infiniteProduct(const MPoly& x, long start, long step, int sign, long order) {
  const VarTablePtr& vars = x.vars();
  MPoly r = MPoly::constant(vars, 1);
  if (step <= 0 || start < 0)
    throw Error(ErrorCode::InvalidArgument, "infinite product needs positive q-step");
  for (long p = start; p <= order; p += step) {
    MPoly f = MPoly::constant(vars, 1) + (x * MPoly::var(vars, 0, static_cast<std::uint32_t>(p))).scaled(sign);
    r = seriesMul(r, f, order);
  }
  return r;
}

}  // namespace qfb
