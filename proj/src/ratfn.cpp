#include "qfb/ratfn.hpp"

#include <algorithm>
#include <limits>

#include "qfb/error.hpp"

namespace qfb {

namespace {

MPoly one(const VarTablePtr& v) { return MPoly::constant(v, 1); }

// Polynomial times q^shift, shift possibly negative.
struct Laurent {
  MPoly poly;
  long qShift;
};

}  // namespace

RatFn::RatFn(const MPoly& num) : num_(num), den_(one(num.vars())) {}

RatFn RatFn::make(MPoly n, MPoly d) {
  requireSameTable(n.vars(), d.vars());
  if (d.isZero()) throw Error(ErrorCode::DivisionByZero, "rational function with zero denominator");
  if (n.isZero()) return RatFn(n.vars());
  if (d.isConstant()) {
    BigRat c = d.constantValue();
    if (c != 1) n = n.scaled(1 / c);
    return RatFn(std::move(n), one(d.vars()), true);
  }
  Monomial g = minMonomial(n.gcdMonomial(), d.gcdMonomial());
  if (!g.isUnit()) {
    n = n.divMonomial(g);
    d = d.divMonomial(g);
  }
  if (!d.isMonomial()) {
    if (auto quo = n.divideExact(d)) {
      return RatFn(std::move(*quo), one(d.vars()), true);
    }
    MPoly h = gcd(n, d);
    if (!h.isConstant()) {
      n = *n.divideExact(h);
      d = *d.divideExact(h);
    }
  }
  BigRat c = d.lead().c;
  if (c != 1) {
    BigRat inv = 1 / c;
    n = n.scaled(inv);
    d = d.scaled(inv);
  }
  return RatFn(std::move(n), std::move(d), true);
}

RatFn RatFn::constant(VarTablePtr vars, const BigRat& c) { return RatFn(MPoly::constant(std::move(vars), c)); }

RatFn RatFn::var(VarTablePtr vars, std::size_t slot) { return RatFn(MPoly::var(std::move(vars), slot)); }

RatFn RatFn::qPow(VarTablePtr vars, long e) {
  MPoly m = MPoly::var(vars, 0, static_cast<std::uint32_t>(e < 0 ? -e : e));
  if (e >= 0) return RatFn(m);
  return RatFn(one(vars), std::move(m), true);
}

RatFn RatFn::shiftVar(VarTablePtr vars) {
  std::size_t s = vars->shiftSlot();
  return var(std::move(vars), s);
}

RatFn RatFn::operator-() const { return RatFn(-num_, den_, true); }

RatFn RatFn::operator+(const RatFn& o) const {
  requireSameTable(vars(), o.vars());
  if (isZero()) return o;
  if (o.isZero()) return *this;
  if (den_ == o.den_) return make(num_ + o.num_, den_);
  if (den_.isConstant()) return RatFn(num_ * o.den_ + o.num_, o.den_, true);
  if (o.den_.isConstant()) return RatFn(num_ + o.num_ * den_, den_, true);
  MPoly g = gcd(den_, o.den_);
  if (g.isConstant()) return make(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  MPoly d1 = *den_.divideExact(g), d2 = *o.den_.divideExact(g);
  return make(num_ * d2 + o.num_ * d1, den_ * d2);
}

RatFn RatFn::operator-(const RatFn& o) const { return *this + (-o); }

RatFn RatFn::operator*(const RatFn& o) const {
  requireSameTable(vars(), o.vars());
  if (isZero() || o.isZero()) return RatFn(vars());
  if (den_.isConstant() && o.den_.isConstant()) return RatFn(num_ * o.num_, den_, true);
  MPoly a = num_, b = den_, c = o.num_, d = o.den_;
  if (!d.isConstant()) {
    MPoly g = gcd(a, d);
    if (!g.isConstant()) a = *a.divideExact(g), d = *d.divideExact(g);
  }
  if (!b.isConstant()) {
    MPoly g = gcd(c, b);
    if (!g.isConstant()) c = *c.divideExact(g), b = *b.divideExact(g);
  }
  MPoly n = a * c, dd = b * d;
  BigRat lc = dd.lead().c;
  if (lc != 1) {
    n = n.scaled(1 / lc);
    dd = dd.scaled(1 / lc);
  }
  return RatFn(std::move(n), std::move(dd), true);
}

RatFn RatFn::inverse() const {
  if (isZero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  BigRat lc = num_.lead().c;
  return RatFn(den_.scaled(1 / lc), num_.scaled(1 / lc), true);
}

RatFn RatFn::operator/(const RatFn& o) const {
  if (o.isZero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
  return *this * o.inverse();
}

RatFn RatFn::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  return RatFn(num_.pow(static_cast<unsigned>(n)), den_.pow(static_cast<unsigned>(n)), true);
}

RatFn RatFn::scaled(const BigRat& c) const {
  if (c == 0) return RatFn(vars());
  return RatFn(num_.scaled(c), den_, true);
}

RatFn RatFn::retag(const VarTablePtr& v) const { return RatFn(num_.retag(v), den_.retag(v), true); }

std::string RatFn::str() const {
  if (den_.isConstant()) return num_.str();
  auto wrap = [](const MPoly& p) {
    return p.size() == 1 && p.lead().c == 1 ? p.str() : "(" + p.str() + ")";
  };
  return wrap(num_) + "/" + wrap(den_);
}

// ---------------------------------------------------------------------------

namespace {

// v -> q^{c} v^lambda on a polynomial (lambda >= 0), result table `out`.
Laurent mapGeometric(const MPoly& p, std::size_t vslot, long lambda, long c, const VarTablePtr& out,
                     bool dropV) {
  std::vector<MPoly::Term> ts;
  ts.reserve(p.size());
  long minQ = 0;
  std::vector<long> qexp;
  qexp.reserve(p.size());
  for (const auto& t : p.terms()) {
    long beta = t.m.e[vslot];
    long qe = static_cast<long>(t.m.e[0]) + c * beta;
    qexp.push_back(qe);
    minQ = std::min(minQ, qe);
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    Monomial m = p.terms()[i].m;
    long beta = m.e[vslot];
    m.e[0] = static_cast<std::uint32_t>(qexp[i] - minQ);
    m.e[vslot] = dropV ? 0 : static_cast<std::uint32_t>(beta * lambda);
    m.recompute();
    ts.push_back({m, p.terms()[i].c});
  }
  return {MPoly::fromTerms(out, std::move(ts)), minQ};
}

RatFn fromLaurent(const Laurent& n, const Laurent& d) {
  long s = n.qShift - d.qShift;
  const VarTablePtr& v = n.poly.vars();
  MPoly num = n.poly, den = d.poly;
  if (s > 0) num = num * MPoly::var(v, 0, static_cast<std::uint32_t>(s));
  if (s < 0) den = den * MPoly::var(v, 0, static_cast<std::uint32_t>(-s));
  return RatFn::make(std::move(num), std::move(den));
}

// Horner evaluation of p in variable `slot` at a polynomial value.
MPoly hornerPoly(const MPoly& p, std::size_t slot, const MPoly& value) {
  auto cs = p.split(slot);
  MPoly acc(p.vars());
  for (std::size_t i = cs.size(); i-- > 0;) acc = acc * value + cs[i];
  return acc;
}

RatFn hornerRat(const MPoly& p, std::size_t slot, const RatFn& value) {
  auto cs = p.split(slot);
  RatFn acc(p.vars());
  for (std::size_t i = cs.size(); i-- > 0;) acc = acc * value + RatFn(cs[i]);
  return acc;
}

}  // namespace

RatFn reindex(const RatFn& f, long lambda, long c) {
  const VarTablePtr& vars = f.vars();
  if (!vars->hasShift()) throw Error(ErrorCode::NoShiftVariable, "no shift variable declared");
  if (lambda < 0) throw Error(ErrorCode::InvalidArgument, "negative reindex factor");
  std::size_t vs = vars->shiftSlot();
  const ShiftKind& kind = vars->shiftKind();
  if (lambda == 1 && c == 0) return f;
  if (kind.isGeometric()) {
    long qc = c * kind.e;
    return fromLaurent(mapGeometric(f.num(), vs, lambda, qc, vars, false),
                       mapGeometric(f.den(), vs, lambda, qc, vars, false));
  }
  MPoly value = MPoly::var(vars, vs).scaled(lambda) + MPoly::constant(vars, c);
  return RatFn::make(hornerPoly(f.num(), vs, value), hornerPoly(f.den(), vs, value));
}

RatFn substituteShift(const RatFn& f, long steps) { return reindex(f, 1, steps); }

RatFn evalAtPower(const RatFn& f, long k) {
  const VarTablePtr& vars = f.vars();
  if (!vars->hasShift()) throw Error(ErrorCode::NoShiftVariable, "no shift variable declared");
  std::size_t vs = vars->shiftSlot();
  const ShiftKind& kind = vars->shiftKind();
  VarTablePtr base = vars->base();
  if (kind.isGeometric()) {
    long qc = k * kind.e;
    Laurent n = mapGeometric(f.num(), vs, 0, qc, base, true);
    Laurent d = mapGeometric(f.den(), vs, 0, qc, base, true);
    if (d.poly.isZero())
      throw SingularEvaluation(k, "denominator vanishes at index " + std::to_string(k));
    return fromLaurent(n, d);
  }
  MPoly value = MPoly::constant(vars, k);
  MPoly n = hornerPoly(f.num(), vs, value).retag(base);
  MPoly d = hornerPoly(f.den(), vs, value).retag(base);
  if (d.isZero()) throw SingularEvaluation(k, "denominator vanishes at index " + std::to_string(k));
  return RatFn::make(n, d);
}

RatFn substituteVar(const RatFn& f, std::size_t slot, const RatFn& value) {
  requireSameTable(f.vars(), value.vars());
  RatFn n = hornerRat(f.num(), slot, value), d = hornerRat(f.den(), slot, value);
  return n / d;
}

long qValuation(const RatFn& f) {
  if (f.isZero()) throw Error(ErrorCode::InvalidArgument, "valuation of zero");
  return static_cast<long>(f.num().minDegree(0)) - static_cast<long>(f.den().minDegree(0));
}

}  // namespace qfb
