#include "qfb/ore.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "qfb/error.hpp"
#include "qfb/linalg.hpp"

namespace qfb {

OreOp::OreOp(VarTablePtr vars) : vars_(std::move(vars)) {
  if (!vars_->hasShift()) throw Error(ErrorCode::NoShiftVariable, "operator table needs a shift variable");
}

OreOp OreOp::shift(const VarTablePtr& vars, int power) {
  OreOp r(vars);
  r.coeffs_.emplace(power, RatFn::constant(vars, 1));
  return r;
}

OreOp OreOp::scalar(const RatFn& c) { return term(c, 0); }

OreOp OreOp::term(const RatFn& c, int power) {
  OreOp r(c.vars());
  if (!c.isZero()) r.coeffs_.emplace(power, c);
  return r;
}

OreOp OreOp::fromCoeffs(const VarTablePtr& vars, std::map<int, RatFn> coeffs) {
  OreOp r(vars);
  for (auto& [i, c] : coeffs) {
    requireSameTable(vars, c.vars());
    if (!c.isZero()) r.coeffs_.emplace(i, std::move(c));
  }
  return r;
}

int OreOp::minExp() const {
  if (coeffs_.empty()) throw Error(ErrorCode::InvalidArgument, "zero operator has no exponent range");
  return coeffs_.begin()->first;
}

int OreOp::maxExp() const {
  if (coeffs_.empty()) throw Error(ErrorCode::InvalidArgument, "zero operator has no exponent range");
  return coeffs_.rbegin()->first;
}

RatFn OreOp::coeff(int i) const {
  auto it = coeffs_.find(i);
  return it == coeffs_.end() ? RatFn(vars_) : it->second;
}

const RatFn& OreOp::leading() const {
  if (coeffs_.empty()) throw Error(ErrorCode::InvalidArgument, "zero operator");
  return coeffs_.rbegin()->second;
}

const RatFn& OreOp::trailing() const {
  if (coeffs_.empty()) throw Error(ErrorCode::InvalidArgument, "zero operator");
  return coeffs_.begin()->second;
}

OreOp OreOp::operator-() const {
  OreOp r(vars_);
  for (const auto& [i, c] : coeffs_) r.coeffs_.emplace(i, -c);
  return r;
}

OreOp OreOp::operator+(const OreOp& o) const {
  requireSameTable(vars_, o.vars_);
  OreOp r = *this;
  for (const auto& [i, c] : o.coeffs_) {
    auto it = r.coeffs_.find(i);
    if (it == r.coeffs_.end()) {
      r.coeffs_.emplace(i, c);
    } else {
      it->second += c;
      if (it->second.isZero()) r.coeffs_.erase(it);
    }
  }
  return r;
}

OreOp OreOp::operator-(const OreOp& o) const { return *this + (-o); }

OreOp OreOp::operator*(const OreOp& o) const {
  requireSameTable(vars_, o.vars_);
  OreOp r(vars_);
  for (const auto& [i, a] : coeffs_)
    for (const auto& [j, b] : o.coeffs_) {
      RatFn p = a * substituteShift(b, i);
      auto it = r.coeffs_.find(i + j);
      if (it == r.coeffs_.end()) {
        if (!p.isZero()) r.coeffs_.emplace(i + j, std::move(p));
      } else {
        it->second += p;
        if (it->second.isZero()) r.coeffs_.erase(it);
      }
    }
  return r;
}

OreOp oreMul(const OreOp& a, const OreOp& b) { return a * b; }

OreOp OreOp::leftScale(const RatFn& c) const {
  requireSameTable(vars_, c.vars());
  OreOp r(vars_);
  if (c.isZero()) return r;
  for (const auto& [i, a] : coeffs_) r.coeffs_.emplace(i, c * a);
  return r;
}

OreOp OreOp::leftShift(int m) const {
  OreOp r(vars_);
  for (const auto& [i, a] : coeffs_) r.coeffs_.emplace(i + m, substituteShift(a, m));
  return r;
}

OreOp OreOp::normalized() const {
  if (isZero()) return *this;
  return leftShift(-minExp());
}

OreOp OreOp::monic() const {
  if (isZero()) return *this;
  return leftScale(leading().inverse());
}

OreOp OreOp::primitive() const {
  if (isZero()) return *this;
  MPoly den = MPoly::constant(vars_, 1);
  for (const auto& [i, c] : coeffs_) {
    if (c.den().isConstant()) continue;
    MPoly g = gcd(den, c.den());
    den = den * *c.den().divideExact(g);
  }
  std::vector<MPoly> nums;
  for (const auto& [i, c] : coeffs_) nums.push_back(*(c.num() * den).divideExact(c.den()));
  MPoly g = nums.front().primitive();
  for (std::size_t k = 1; k < nums.size() && !g.isConstant(); ++k) g = gcd(g, nums[k]);
  OreOp r(vars_);
  std::size_t k = 0;
  for (const auto& [i, c] : coeffs_) r.coeffs_.emplace(i, RatFn(*nums[k++].divideExact(g)));
  BigRat lc = r.coeffs_.rbegin()->second.num().lead().c;
  // clear rational content across all coefficients
  BigInt gn = 0, ld = 1;
  for (const auto& [i, c] : r.coeffs_)
    for (const auto& t : c.num().terms()) {
      mpz_gcd(gn.get_mpz_t(), gn.get_mpz_t(), t.c.get_num_mpz_t());
      mpz_lcm(ld.get_mpz_t(), ld.get_mpz_t(), t.c.get_den_mpz_t());
    }
  BigRat s(ld, gn);
  s.canonicalize();
  if (lc < 0) s = -s;
  for (auto& [i, c] : r.coeffs_) c = c.scaled(s);
  return r;
}

bool OreOp::operator==(const OreOp& o) const {
  if (!sameTable(vars_, o.vars_) || coeffs_.size() != o.coeffs_.size()) return false;
  auto a = coeffs_.begin();
  for (auto b = o.coeffs_.begin(); b != o.coeffs_.end(); ++a, ++b)
    if (a->first != b->first || a->second != b->second) return false;
  return true;
}

std::string OreOp::str(const std::string& S) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    int i = it->first;
    RatFn c = it->second;
    std::string sh;
    if (i == 1) sh = S;
    else if (i > 1) sh = S + "^" + std::to_string(i);
    else if (i < 0) sh = S + "^(" + std::to_string(i) + ")";
    bool neg = c.isPolynomial() && c.num().isMonomial() && c.num().lead().c < 0;
    if (neg) c = -c;
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    std::string cs = c.str();
    bool simple = c.isPolynomial() && c.num().isMonomial();
    if (c.isOne()) {
      os << (sh.empty() ? "1" : sh);
    } else {
      os << (simple || sh.empty() ? cs : "(" + cs + ")");
      if (!sh.empty()) os << "*" << sh;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

void requirePolynomialForm(const OreOp& L) {
  if (!L.isZero() && L.minExp() < 0)
    throw Error(ErrorCode::InvalidArgument, "operator has negative shift exponents; normalize first");
}

}  // namespace

Division rightDivide(const OreOp& num, const OreOp& den) {
  requireSameTable(num.vars(), den.vars());
  if (den.isZero()) throw Error(ErrorCode::DivisionByZero, "right division by the zero operator");
  requirePolynomialForm(num);
  requirePolynomialForm(den);
  OreOp q(num.vars()), r = num;
  int d = den.maxExp();
  const RatFn& lcd = den.leading();
  while (!r.isZero() && r.maxExp() >= d) {
    int s = r.maxExp() - d;
    RatFn c = r.leading() / substituteShift(lcd, s);
    OreOp t = OreOp::term(c, s);
    q += t;
    OreOp sub = t * den;
    r = r - sub;
    // exact cancellation of the top term is guaranteed by construction
  }
#ifdef QFB_CHECK_DIVISION
  if (q * den + r != num) throw Error(ErrorCode::InvalidArgument, "internal: right division check failed");
#endif
  return {q, r};
}

OreOp gcrd(const OreOp& p, const OreOp& q) {
  requireSameTable(p.vars(), q.vars());
  if (p.isZero() && q.isZero()) throw Error(ErrorCode::InvalidArgument, "gcrd of zero operators");
  OreOp a = p.isZero() ? p : p.normalized();
  OreOp b = q.isZero() ? q : q.normalized();
  if (a.isZero()) return b.monic();
  if (b.isZero()) return a.monic();
  if (a.order() < b.order()) std::swap(a, b);
  while (!b.isZero()) {
    OreOp r = rightDivide(a, b).remainder;
    a = b;
    b = r.isZero() ? r : r.monic();
  }
  return a.monic();
}

Lclm lclm(const OreOp& p0, const OreOp& q0) {
  requireSameTable(p0.vars(), q0.vars());
  if (p0.isZero() || q0.isZero()) throw Error(ErrorCode::InvalidArgument, "lclm of the zero operator");
  requirePolynomialForm(p0);
  requirePolynomialForm(q0);
  const VarTablePtr& vars = p0.vars();
  int dp = p0.maxExp(), dq = q0.maxExp();
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  for (int N = std::max(dp, dq); N <= dp + dq; ++N) {
    std::size_t nu = N - dp + 1, nw = N - dq + 1, cols = nu + nw;
    RatMatrix m(N + 1, std::vector<RatFn>(cols, RatFn(vars)));
    for (std::size_t i = 0; i < nu; ++i)
      for (const auto& [j, c] : p0.coeffs()) m[i + j][i] = substituteShift(c, static_cast<long>(i));
    for (std::size_t i = 0; i < nw; ++i)
      for (const auto& [j, c] : q0.coeffs()) m[i + j][nu + i] = -substituteShift(c, static_cast<long>(i));
    if (specializedRank(m, cols, rng) == cols) continue;
    auto ns = nullspace(m, cols, vars);
    if (ns.empty()) continue;
    const auto& x = ns.front();
    std::map<int, RatFn> u, w;
    for (std::size_t i = 0; i < nu; ++i) u.emplace(static_cast<int>(i), x[i]);
    for (std::size_t i = 0; i < nw; ++i) w.emplace(static_cast<int>(i), x[nu + i]);
    OreOp U = OreOp::fromCoeffs(vars, u), W = OreOp::fromCoeffs(vars, w);
    OreOp l = U * p0;
    RatFn s = l.leading().inverse();
    U = U.leftScale(s);
    W = W.leftScale(s);
    l = l.leftScale(s);
    if (W * q0 != l) throw Error(ErrorCode::InvalidArgument, "internal: lclm identity failed");
    return {l, U, W};
  }
  throw Error(ErrorCode::InvalidArgument, "internal: lclm not found within order bound");
}

IndexedSeq applyToSeq(const OreOp& L, const IndexedSeq& terms) {
  if (L.isZero()) {
    IndexedSeq out{terms.offset, std::vector<RatFn>(terms.values.size(), RatFn(L.vars()->base()))};
    return out;
  }
  long lo = terms.begin() - L.minExp(), hi = terms.end() - L.maxExp();
  if (hi <= lo)
    throw Error(ErrorCode::InsufficientData, "not enough terms to apply an operator of order " +
                                                 std::to_string(L.order()));
  VarTablePtr base = L.vars()->base();
  IndexedSeq out{lo, {}};
  out.values.reserve(static_cast<std::size_t>(hi - lo));
  for (long k = lo; k < hi; ++k) {
    RatFn acc(base);
    for (const auto& [i, c] : L.coeffs()) {
      const RatFn& t = terms.at(k + i);
      if (t.isZero()) continue;
      acc += evalAtPower(c, k) * t.retag(base);
    }
    out.values.push_back(std::move(acc));
  }
  return out;
}

ShiftFactor removeShiftFactor(const OreOp& L) {
  if (L.isZero()) throw Error(ErrorCode::InvalidArgument, "zero operator");
  int p = L.minExp();
  return {L.leftShift(-p), p};
}

// ---------------------------------------------------------------------------

std::vector<long> zeroIndices(const MPoly& p, long from) {
  const VarTablePtr& vars = p.vars();
  if (p.isZero()) throw Error(ErrorCode::InvalidArgument, "zero polynomial vanishes everywhere");
  std::size_t vs = vars->shiftSlot();
  if (!p.involves(vs)) return {};
  std::set<long> candidates;
  auto parts = p.split(vs);
  if (vars->shiftKind().isGeometric()) {
    long e = vars->shiftKind().e;
    std::vector<std::pair<long, long>> lows;  // (beta, lowest q-degree)
    for (std::size_t b = 0; b < parts.size(); ++b)
      if (!parts[b].isZero()) lows.emplace_back(static_cast<long>(b), parts[b].minDegree(0));
    for (std::size_t i = 0; i < lows.size(); ++i)
      for (std::size_t j = i + 1; j < lows.size(); ++j) {
        long num = lows[j].second - lows[i].second;
        long den = e * (lows[i].first - lows[j].first);
        if (num % den == 0 && num / den >= from) candidates.insert(num / den);
      }
  } else {
    // integer roots of one coefficient slice, bounded by Cauchy's bound
    Monomial mu = p.lead().m;
    mu.e[vs] = 0;
    mu.recompute();
    std::vector<BigRat> a(parts.size(), 0);
    for (std::size_t b = 0; b < parts.size(); ++b)
      for (const auto& t : parts[b].terms())
        if (t.m == mu) a[b] = t.c;
    while (!a.empty() && a.back() == 0) a.pop_back();
    if (a.size() <= 1) return {};
    BigRat bound = 0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      BigRat r = abs(a[i] / a.back());
      if (r > bound) bound = r;
    }
    long B = static_cast<long>(std::ceil(bound.get_d())) + 1;
    for (long k = std::max(from, -B); k <= B; ++k) {
      BigRat acc = 0;
      for (std::size_t i = a.size(); i-- > 0;) acc = acc * k + a[i];
      if (acc == 0) candidates.insert(k);
    }
  }
  std::vector<long> out;
  RatFn f(p);
  for (long k : candidates)
    if (evalAtPower(f, k).isZero()) out.push_back(k);
  return out;
}

std::vector<long> leadingNonvanishing(const OreOp& L, long from) {
  return zeroIndices(L.leading().num(), from);
}

std::vector<long> singularIndices(const OreOp& L, long from) {
  std::set<long> s;
  for (long k : zeroIndices(L.leading().num(), from)) s.insert(k);
  for (const auto& [i, c] : L.coeffs())
    for (long k : zeroIndices(c.den(), from)) s.insert(k);
  return {s.begin(), s.end()};
}

// ---------------------------------------------------------------------------

OreMat::OreMat(std::size_t t, const VarTablePtr& vars)
    : t_(t), vars_(vars), e_(t, std::vector<OreOp>(t, OreOp(vars))) {}

OreMat OreMat::identity(std::size_t t, const VarTablePtr& vars) {
  return scalar(t, RatFn::constant(vars, 1));
}

OreMat OreMat::scalar(std::size_t t, const RatFn& c) {
  OreMat m(t, c.vars());
  for (std::size_t i = 0; i < t; ++i) m.e_[i][i] = OreOp::scalar(c);
  return m;
}

OreMat OreMat::operator+(const OreMat& o) const {
  if (t_ != o.t_) throw Error(ErrorCode::InvalidArgument, "matrix size mismatch");
  OreMat r = *this;
  for (std::size_t i = 0; i < t_; ++i)
    for (std::size_t j = 0; j < t_; ++j) r.e_[i][j] += o.e_[i][j];
  return r;
}

OreMat OreMat::operator-() const {
  OreMat r = *this;
  for (auto& row : r.e_)
    for (auto& x : row) x = -x;
  return r;
}

OreMat OreMat::operator-(const OreMat& o) const { return *this + (-o); }

OreMat OreMat::operator*(const OreMat& o) const {
  if (t_ != o.t_) throw Error(ErrorCode::InvalidArgument, "matrix size mismatch");
  OreMat r(t_, vars_);
  for (std::size_t i = 0; i < t_; ++i)
    for (std::size_t j = 0; j < t_; ++j)
      for (std::size_t k = 0; k < t_; ++k)
        if (!e_[i][k].isZero() && !o.e_[k][j].isZero()) r.e_[i][j] += e_[i][k] * o.e_[k][j];
  return r;
}

bool OreMat::operator==(const OreMat& o) const { return t_ == o.t_ && e_ == o.e_; }

}  // namespace qfb
