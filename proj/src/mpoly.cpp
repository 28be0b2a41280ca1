#include "qfb/mpoly.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "qfb/error.hpp"

namespace qfb {

Monomial Monomial::var(std::size_t slot, std::uint32_t pow) {
  Monomial m;
  m.e.at(slot) = pow;
  m.deg = pow;
  return m;
}

void Monomial::recompute() {
  std::uint64_t d = 0;
  for (auto x : e) d += x;
  if (d > std::numeric_limits<std::uint32_t>::max())
    throw Error(ErrorCode::BudgetExceeded, "monomial degree overflow");
  deg = static_cast<std::uint32_t>(d);
}

int compare(const Monomial& a, const Monomial& b) {
  if (a.deg != b.deg) return a.deg < b.deg ? -1 : 1;
  for (std::size_t i = kMaxVars; i-- > 0;)
    if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? -1 : 1;
  return 0;
}

namespace {
struct Desc {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }
};
}  // namespace

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    std::uint64_t s = std::uint64_t(a.e[i]) + b.e[i];
    if (s > std::numeric_limits<std::uint32_t>::max())
      throw Error(ErrorCode::BudgetExceeded, "exponent overflow");
    r.e[i] = static_cast<std::uint32_t>(s);
  }
  r.recompute();
  return r;
}

bool divides(const Monomial& d, const Monomial& m) {
  if (d.deg > m.deg) return false;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (d.e[i] > m.e[i]) return false;
  return true;
}

Monomial operator/(const Monomial& m, const Monomial& d) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = m.e[i] - d.e[i];
  r.deg = m.deg - d.deg;
  return r;
}

Monomial minMonomial(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = std::min(a.e[i], b.e[i]);
  r.recompute();
  return r;
}

// ---------------------------------------------------------------------------

MPoly MPoly::constant(VarTablePtr vars, const BigRat& c) {
  MPoly p(std::move(vars));
  if (c != 0) p.terms_.push_back({Monomial::unit(), c});
  return p;
}

MPoly MPoly::var(VarTablePtr vars, std::size_t slot, std::uint32_t pow) {
  if (slot >= vars->arity()) throw Error(ErrorCode::InvalidArgument, "variable slot out of range");
  MPoly p(std::move(vars));
  p.terms_.push_back({Monomial::var(slot, pow), BigRat(1)});
  return p;
}

MPoly MPoly::monomial(VarTablePtr vars, const Monomial& m, const BigRat& c) {
  MPoly p(std::move(vars));
  if (c != 0) p.terms_.push_back({m, c});
  return p;
}

MPoly MPoly::fromTerms(VarTablePtr vars, std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return compare(a.m, b.m) > 0; });
  MPoly p(std::move(vars));
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().m == t.m) {
      p.terms_.back().c += t.c;
      if (p.terms_.back().c == 0) p.terms_.pop_back();
    } else if (t.c != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

BigRat MPoly::constantValue() const {
  if (!isConstant()) throw Error(ErrorCode::InvalidArgument, "polynomial is not constant");
  return terms_.empty() ? BigRat(0) : terms_[0].c;
}

std::uint32_t MPoly::degree(std::size_t slot) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.m.e[slot]);
  return d;
}

std::uint32_t MPoly::minDegree(std::size_t slot) const {
  if (terms_.empty()) return 0;
  std::uint32_t d = std::numeric_limits<std::uint32_t>::max();
  for (const auto& t : terms_) d = std::min(d, t.m.e[slot]);
  return d;
}

bool MPoly::involves(std::size_t slot) const {
  for (const auto& t : terms_)
    if (t.m.e[slot] != 0) return true;
  return false;
}

Monomial MPoly::gcdMonomial() const {
  if (terms_.empty()) return {};
  Monomial m = terms_[0].m;
  for (const auto& t : terms_) m = minMonomial(m, t.m);
  return m;
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto& t : r.terms_) t.c = -t.c;
  return r;
}

namespace {

std::vector<MPoly::Term> mergeTerms(const std::vector<MPoly::Term>& a,
                                    const std::vector<MPoly::Term>& b, bool negateB) {
  std::vector<MPoly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c = (i == a.size()) ? -1 : (j == b.size()) ? 1 : compare(a[i].m, b[j].m);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back({b[j].m, negateB ? BigRat(-b[j].c) : b[j].c});
      ++j;
    } else {
      BigRat s = negateB ? BigRat(a[i].c - b[j].c) : BigRat(a[i].c + b[j].c);
      if (s != 0) out.push_back({a[i].m, std::move(s)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

MPoly MPoly::operator+(const MPoly& o) const {
  requireSameTable(vars_, o.vars_);
  MPoly r(vars_);
  r.terms_ = mergeTerms(terms_, o.terms_, false);
  return r;
}

MPoly MPoly::operator-(const MPoly& o) const {
  requireSameTable(vars_, o.vars_);
  MPoly r(vars_);
  r.terms_ = mergeTerms(terms_, o.terms_, true);
  return r;
}


namespace {

// Slot of the single variable of p, kMaxVars for constants, or -1 when several.
long soleSlot(const MPoly& p) {
  long s = kMaxVars;
  for (const auto& t : p.terms())
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (t.m.e[i]) {
        if (s == static_cast<long>(kMaxVars)) s = static_cast<long>(i);
        else if (s != static_cast<long>(i)) return -1;
      }
  return s;
}

// Dense integer image c * p with c the lcm of coefficient denominators.
std::vector<BigInt> denseInt(const MPoly& p, std::size_t slot, BigInt& scale) {
  scale = 1;
  for (const auto& t : p.terms()) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), t.c.get_den_mpz_t());
  std::vector<BigInt> d(p.lead().m.e[slot] + 1);
  for (const auto& t : p.terms()) d[t.m.e[slot]] = t.c.get_num() * (scale / t.c.get_den());
  return d;
}

MPoly fromDense(const VarTablePtr& vars, std::size_t slot, const std::vector<BigInt>& d, const BigInt& scale) {
  std::vector<MPoly::Term> ts;
  for (std::size_t i = d.size(); i-- > 0;) {
    if (d[i] == 0) continue;
    BigRat c(d[i], scale);
    c.canonicalize();
    ts.push_back({Monomial::var(slot, static_cast<std::uint32_t>(i)), c});
  }
  return MPoly::fromTerms(vars, std::move(ts));
}

}  // namespace

MPoly MPoly::mulTerm(const Monomial& m, const BigRat& c) const {
  MPoly r(vars_);
  if (c == 0) return r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.m * m, t.c * c});
  return r;
}

MPoly MPoly::scaled(const BigRat& c) const { return mulTerm(Monomial::unit(), c); }

MPoly MPoly::operator*(const MPoly& o) const {
  requireSameTable(vars_, o.vars_);
  const MPoly* a = this;
  const MPoly* b = &o;
  if (a->size() < b->size()) std::swap(a, b);
  MPoly r(vars_);
  if (b->isZero()) return r;
  if (b->size() == 1) return a->mulTerm(b->terms_[0].m, b->terms_[0].c);
  long slotA = soleSlot(*a), slotB = soleSlot(*b);
  if (slotA >= 0 && slotA == slotB && b->size() > 4) {
    std::size_t x = static_cast<std::size_t>(slotA);
    BigInt ca, cb;
    auto da = denseInt(*a, x, ca), db = denseInt(*b, x, cb);
    std::vector<BigInt> out(da.size() + db.size() - 1);
    for (std::size_t i = 0; i < da.size(); ++i) {
      if (da[i] == 0) continue;
      for (std::size_t j = 0; j < db.size(); ++j)
        if (db[j] != 0) mpz_addmul(out[i + j].get_mpz_t(), da[i].get_mpz_t(), db[j].get_mpz_t());
    }
    return fromDense(vars_, x, out, ca * cb);
  }
  if (b->size() <= 4) {
    r = a->mulTerm(b->terms_[0].m, b->terms_[0].c);
    for (std::size_t j = 1; j < b->size(); ++j)
      r.terms_ = mergeTerms(r.terms_, a->mulTerm(b->terms_[j].m, b->terms_[j].c).terms_, false);
    return r;
  }
  // exponent vectors packed into one integer, integer coefficient accumulation
  std::array<std::uint64_t, kMaxVars> radix{}, width{};
  std::uint64_t total = 1;
  for (std::size_t s = 0; s < kMaxVars; ++s) {
    std::uint64_t w = static_cast<std::uint64_t>(a->degree(s)) + b->degree(s) + 1;
    if (total > (std::uint64_t(1) << 62) / w)
      throw Error(ErrorCode::BudgetExceeded, "polynomial degrees too large to multiply");
    radix[s] = total;
    width[s] = w;
    total *= w;
  }
  auto pack = [&](const Monomial& m) {
    std::uint64_t k = 0;
    for (std::size_t s = 0; s < kMaxVars; ++s) k += m.e[s] * radix[s];
    return k;
  };
  auto ints = [](const MPoly& p, BigInt& scale) {
    scale = 1;
    for (const auto& t : p.terms_) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), t.c.get_den_mpz_t());
    std::vector<BigInt> v;
    v.reserve(p.terms_.size());
    for (const auto& t : p.terms_) v.push_back(t.c.get_num() * (scale / t.c.get_den()));
    return v;
  };
  BigInt sa, sb;
  auto ia = ints(*a, sa), ib = ints(*b, sb);
  std::vector<std::uint64_t> kb;
  kb.reserve(b->size());
  for (const auto& t : b->terms_) kb.push_back(pack(t.m));
  std::unordered_map<std::uint64_t, std::size_t> slot;
  slot.reserve(a->size() * 4);
  std::vector<std::uint64_t> keys;
  std::vector<BigInt> acc;
  for (std::size_t i = 0; i < a->size(); ++i) {
    std::uint64_t ka = pack(a->terms_[i].m);
    for (std::size_t j = 0; j < b->size(); ++j) {
      auto [it, fresh] = slot.try_emplace(ka + kb[j], acc.size());
      if (fresh) {
        keys.push_back(ka + kb[j]);
        acc.emplace_back(0);
      }
      mpz_addmul(acc[it->second].get_mpz_t(), ia[i].get_mpz_t(), ib[j].get_mpz_t());
    }
  }
  BigInt scale = sa * sb;
  for (std::size_t n = 0; n < keys.size(); ++n) {
    if (acc[n] == 0) continue;
    Monomial m;
    for (std::size_t s = 0; s < kMaxVars; ++s) m.e[s] = static_cast<std::uint32_t>((keys[n] / radix[s]) % width[s]);
    m.recompute();
    BigRat c(acc[n], scale);
    c.canonicalize();
    r.terms_.push_back({m, c});
  }
  std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& x, const Term& y) { return compare(x.m, y.m) > 0; });
  return r;
}

MPoly MPoly::divMonomial(const Monomial& m) const {
  MPoly r(vars_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!divides(m, t.m)) throw Error(ErrorCode::InvalidArgument, "monomial does not divide");
    r.terms_.push_back({t.m / m, t.c});
  }
  return r;
}

MPoly MPoly::pow(unsigned n) const {
  MPoly r = constant(vars_, 1);
  MPoly b = *this;
  while (n) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

std::optional<MPoly> MPoly::divideExact(const MPoly& d) const {
  requireSameTable(vars_, d.vars_);
  if (d.isZero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
  MPoly q(vars_);
  if (isZero()) return q;
  const Term& ld = d.lead();
  if (d.size() == 1) {
    q.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (!divides(ld.m, t.m)) return std::nullopt;
      q.terms_.push_back({t.m / ld.m, t.c / ld.c});
    }
    return q;
  }
  if (!divides(ld.m, lead().m)) return std::nullopt;
  for (std::size_t s = 0; s < kMaxVars; ++s)
    if (d.degree(s) > degree(s)) return std::nullopt;
  long sa = soleSlot(*this);
  if (sa >= 0 && sa == soleSlot(d)) {
    // dense long division; integer arithmetic when the divisor leads with +-1
    std::size_t x = static_cast<std::size_t>(sa);
    BigInt ca, cd;
    auto a = denseInt(*this, x, ca), b = denseInt(d, x, cd);
    const BigInt lb = b.back();
    std::size_t db = b.size() - 1;
    std::vector<BigInt> quo(a.size() - db);
    BigInt qc, rem;
    bool unit = (lb == 1 || lb == -1), stuck = false;
    for (std::size_t i = a.size(); i-- > db;) {
      if (a[i] == 0) continue;
      if (unit) {
        qc = a[i] * lb;
      } else {
        mpz_fdiv_qr(qc.get_mpz_t(), rem.get_mpz_t(), a[i].get_mpz_t(), lb.get_mpz_t());
        if (rem != 0) {
          stuck = true;
          break;
        }
      }
      quo[i - db] = qc;
      for (std::size_t j = 0; j <= db; ++j) mpz_submul(a[i - db + j].get_mpz_t(), qc.get_mpz_t(), b[j].get_mpz_t());
    }
    if (!stuck) {
      for (const auto& c : a)
        if (c != 0) return std::nullopt;
      // ca * this = quo * (cd * d)
      BigRat sc(cd, ca);
      sc.canonicalize();
      MPoly r = fromDense(vars_, x, quo, BigInt(1));
      return sc == 1 ? r : r.scaled(sc);
    }
  }
  std::map<Monomial, BigRat, Desc> pending;
  std::size_t fi = 0;
  while (true) {
    bool haveF = fi < terms_.size();
    bool haveP = !pending.empty();
    if (!haveF && !haveP) break;
    Monomial m;
    BigRat c;
    if (haveF && (!haveP || compare(terms_[fi].m, pending.begin()->first) > 0)) {
      m = terms_[fi].m;
      c = terms_[fi].c;
      ++fi;
    } else if (haveF && compare(terms_[fi].m, pending.begin()->first) == 0) {
      m = terms_[fi].m;
      c = terms_[fi].c + pending.begin()->second;
      ++fi;
      pending.erase(pending.begin());
    } else {
      m = pending.begin()->first;
      c = pending.begin()->second;
      pending.erase(pending.begin());
    }
    if (c == 0) continue;
    if (!divides(ld.m, m)) return std::nullopt;
    Monomial tm = m / ld.m;
    BigRat tc = c / ld.c;
    for (std::size_t k = 1; k < d.terms_.size(); ++k) {
      Monomial pm = d.terms_[k].m * tm;
      auto [it, inserted] = pending.try_emplace(pm, 0);
      it->second -= d.terms_[k].c * tc;
      if (it->second == 0) pending.erase(it);
    }
    q.terms_.push_back({tm, tc});
  }
  return q;
}

std::vector<MPoly> MPoly::split(std::size_t slot) const {
  std::vector<MPoly> out(terms_.empty() ? 0 : degree(slot) + 1, MPoly(vars_));
  for (const auto& t : terms_) {
    Monomial m = t.m;
    std::uint32_t p = m.e[slot];
    m.e[slot] = 0;
    m.deg -= p;
    out[p].terms_.push_back({m, t.c});
  }
  return out;  // each bucket inherits decreasing order from the source
}

MPoly MPoly::join(const VarTablePtr& vars, const std::vector<MPoly>& coeffs, std::size_t slot) {
  std::vector<Term> all;
  for (std::size_t p = 0; p < coeffs.size(); ++p)
    for (const auto& t : coeffs[p].terms_) {
      Monomial m = t.m;
      m.e[slot] += static_cast<std::uint32_t>(p);
      m.deg += static_cast<std::uint32_t>(p);
      all.push_back({m, t.c});
    }
  return fromTerms(vars, std::move(all));
}

MPoly MPoly::retag(const VarTablePtr& vars) const {
  if (sameTable(vars, vars_)) return *this;
  if (!vars->sameBase(*vars_)) throw Error(ErrorCode::VarTableMismatch, "parameter lists differ");
  if (vars_->hasShift() && (!vars->hasShift() || vars->shiftKind() != vars_->shiftKind() ||
                            vars->shiftName() != vars_->shiftName())) {
    if (involves(vars_->shiftSlot()))
      throw Error(ErrorCode::VarTableMismatch, "polynomial uses the shift variable");
  }
  MPoly r(vars);
  r.terms_ = terms_;
  return r;
}

BigRat MPoly::content() const {
  if (terms_.empty()) return 0;
  BigInt g = 0, l = 1;
  for (const auto& t : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.c.get_den_mpz_t());
  }
  BigRat c(g, l);
  c.canonicalize();
  if (terms_[0].c < 0) c = -c;
  return c;
}

MPoly MPoly::primitive() const {
  if (terms_.empty()) return *this;
  BigRat c = content();
  if (c == 1) return *this;
  MPoly r(vars_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.m, t.c / c});
  return r;
}

bool MPoly::operator==(const MPoly& o) const {
  if (!sameTable(vars_, o.vars_) || terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (!(terms_[i].m == o.terms_[i].m) || terms_[i].c != o.terms_[i].c) return false;
  return true;
}

std::string MPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    BigRat c = t.c;
    if (c < 0) {
      os << (first ? "-" : " - ");
      c = -c;
    } else if (!first) {
      os << " + ";
    }
    first = false;
    bool wroteCoeff = false;
    if (c != 1 || t.m.isUnit()) {
      os << c.get_str();
      wroteCoeff = true;
    }
    for (std::size_t s = 0; s < vars_->arity(); ++s) {
      if (t.m.e[s] == 0) continue;
      if (wroteCoeff) os << "*";
      os << vars_->name(s);
      if (t.m.e[s] != 1) os << "^" << t.m.e[s];
      wroteCoeff = true;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// gcd: content/primitive-part recursion, dense integer PRS in one variable.

namespace {

using Dense = std::vector<BigInt>;

void trim(Dense& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

void makePrimitive(Dense& a) {
  BigInt g = 0;
  for (const auto& x : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (a.back() < 0) g = -g;
  if (g != 1)
    for (auto& x : a) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

void premDense(Dense& a, const Dense& b) {
  const BigInt& lb = b.back();
  std::size_t db = b.size() - 1;
  while (!a.empty() && a.size() - 1 >= db) {
    BigInt la = a.back();
    std::size_t shift = a.size() - 1 - db;
    if (lb != 1)
      for (auto& x : a) x *= lb;
    for (std::size_t j = 0; j <= db; ++j) a[j + shift] -= la * b[j];
    trim(a);
  }
}

Dense gcdDense(Dense a, Dense b) {
  makePrimitive(a);
  makePrimitive(b);
  if (a.size() < b.size()) std::swap(a, b);
  while (true) {
    if (b.size() == 1) return {BigInt(1)};
    premDense(a, b);
    if (a.empty()) return b;
    makePrimitive(a);
    std::swap(a, b);
  }
}

std::vector<std::size_t> slotsOf(const MPoly& p) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < p.vars()->arity(); ++i)
    if (p.involves(i)) s.push_back(i);
  return s;
}

MPoly gcdPrimitive(const MPoly& f, const MPoly& g);

MPoly gcdList(std::vector<MPoly> xs) {
  std::sort(xs.begin(), xs.end(), [](const MPoly& a, const MPoly& b) { return a.size() < b.size(); });
  MPoly acc(xs.front().vars());
  bool started = false;
  for (const auto& x : xs) {
    if (x.isZero()) continue;
    acc = started ? gcdPrimitive(acc, x.primitive()) : x.primitive();
    started = true;
    if (acc.isConstant()) break;
  }
  return acc;
}

MPoly exactOrThrow(const MPoly& a, const MPoly& b) {
  auto r = a.divideExact(b);
  if (!r) throw Error(ErrorCode::InvalidArgument, "internal: inexact division in gcd");
  return *r;
}

std::vector<MPoly> ppx(std::vector<MPoly> r) {
  MPoly c = gcdList(r);
  if (!c.isConstant())
    for (auto& x : r)
      if (!x.isZero()) x = exactOrThrow(x, c);
  // rescale to integer content and positive leading coefficient
  std::vector<MPoly> nz;
  for (auto& x : r)
    if (!x.isZero()) nz.push_back(x);
  BigInt g = 0, l = 1;
  for (const auto& x : nz)
    for (const auto& t : x.terms()) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_num_mpz_t());
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.c.get_den_mpz_t());
    }
  BigRat s(l, g);
  s.canonicalize();
  if (r.back().lead().c < 0) s = -s;
  if (s != 1)
    for (auto& x : r) x = x.scaled(s);
  return r;
}

void trimPoly(std::vector<MPoly>& a) {
  while (!a.empty() && a.back().isZero()) a.pop_back();
}

void premPoly(std::vector<MPoly>& a, const std::vector<MPoly>& b) {
  const MPoly& lb = b.back();
  std::size_t db = b.size() - 1;
  while (!a.empty() && a.size() - 1 >= db) {
    MPoly la = a.back();
    std::size_t shift = a.size() - 1 - db;
    bool unitLead = lb.isConstant() && lb.constantValue() == 1;
    if (!unitLead)
      for (auto& x : a) x = x * lb;
    for (std::size_t j = 0; j <= db; ++j) a[j + shift] -= la * b[j];
    trimPoly(a);
  }
}

// Heuristic gcd: evaluate one variable at a large integer, recurse, and lift
// the result back by a balanced xi-adic expansion. Every answer is confirmed by
// trial division; nullopt means the heuristic gave up.
BigInt maxNorm(const MPoly& p) {
  BigInt m = 0;
  for (const auto& t : p.terms()) {
    BigInt a = abs(t.c.get_num());
    if (a > m) m = a;
  }
  return m;
}

BigInt intContent(const MPoly& p) {
  BigInt g = 0;
  for (const auto& t : p.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_num_mpz_t());
  return g;
}

MPoly evalSlot(const MPoly& p, std::size_t x, const BigInt& xi) {
  std::vector<BigInt> pw{BigInt(1)};
  std::vector<MPoly::Term> ts;
  ts.reserve(p.size());
  for (const auto& t : p.terms()) {
    std::uint32_t e = t.m.e[x];
    while (pw.size() <= e) pw.push_back(pw.back() * xi);
    Monomial m = t.m;
    m.e[x] = 0;
    m.deg -= e;
    ts.push_back({m, BigRat(t.c.get_num() * pw[e])});
  }
  return MPoly::fromTerms(p.vars(), std::move(ts));
}

MPoly liftSlot(const MPoly& h, std::size_t x, const BigInt& xi) {
  std::vector<MPoly::Term> ts;
  BigInt half = xi / 2, d, c;
  for (const auto& t : h.terms()) {
    c = t.c.get_num();
    std::uint32_t i = 0;
    while (c != 0) {
      mpz_fdiv_r(d.get_mpz_t(), c.get_mpz_t(), xi.get_mpz_t());
      if (d > half) d -= xi;
      if (d != 0) {
        Monomial m = t.m;
        m.e[x] += i;
        m.deg += i;
        ts.push_back({m, BigRat(d)});
      }
      c = (c - d) / xi;
      ++i;
    }
  }
  return MPoly::fromTerms(h.vars(), std::move(ts));
}

MPoly dividedByInt(const MPoly& p, const BigInt& c) {
  if (c == 1) return p;
  return p.scaled(BigRat(1) / BigRat(c));
}

std::optional<MPoly> heuGcd(MPoly f, MPoly g, int budget) {
  const VarTablePtr& vars = f.vars();
  BigInt cf = intContent(f), cg = intContent(g), c;
  mpz_gcd(c.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
  f = dividedByInt(f, c);
  g = dividedByInt(g, c);
  std::size_t x = kMaxVars;
  for (std::size_t s = vars->arity(); s-- > 0;)
    if (f.involves(s) || g.involves(s)) {
      x = s;
      break;
    }
  if (x == kMaxVars) {
    BigInt a = f.lead().c.get_num(), b = g.lead().c.get_num(), r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return MPoly::constant(vars, BigRat(r * c));
  }
  BigInt fn = maxNorm(f), gn = maxNorm(g);
  BigInt xi = 2 * std::min(fn, gn) + 29;
  for (int iter = 0; iter < 6 && budget > 0; ++iter, --budget) {
    MPoly ff = evalSlot(f, x, xi), gg = evalSlot(g, x, xi);
    if (!ff.isZero() && !gg.isZero()) {
      auto hh = heuGcd(ff, gg, budget);
      if (!hh) return std::nullopt;
      MPoly H = liftSlot(*hh, x, xi);
      if (!H.isZero()) {
        H = H.primitive();
        if (f.divideExact(H) && g.divideExact(H)) return H.scaled(BigRat(c));
      }
      if (auto cff = ff.divideExact(*hh)) {
        MPoly F = liftSlot(*cff, x, xi);
        if (!F.isZero())
          if (auto h2 = f.divideExact(F)) {
            MPoly H2 = h2->primitive();
            if (g.divideExact(H2)) return H2.scaled(BigRat(c));
          }
      }
      if (auto cgg = gg.divideExact(*hh)) {
        MPoly G = liftSlot(*cgg, x, xi);
        if (!G.isZero())
          if (auto h2 = g.divideExact(G)) {
            MPoly H2 = h2->primitive();
            if (f.divideExact(H2)) return H2.scaled(BigRat(c));
          }
      }
    }
    xi = xi * 73794 / 27011;
  }
  return std::nullopt;
}

MPoly gcdPrimitive(const MPoly& f0, const MPoly& g0) {
  const VarTablePtr& vars = f0.vars();
  if (f0.isConstant() || g0.isConstant()) return MPoly::constant(vars, 1);
  Monomial mf = f0.gcdMonomial(), mg = g0.gcdMonomial();
  MPoly mono = MPoly::monomial(vars, minMonomial(mf, mg), 1);
  MPoly f = f0.divMonomial(mf), g = g0.divMonomial(mg);
  if (f.isConstant() || g.isConstant()) return mono;
  if (f == g) return mono * f;
  if (g.size() <= f.size()) {
    if (f.divideExact(g)) return mono * g;
  } else if (g.divideExact(f)) {
    return mono * f;
  }
  auto sf = slotsOf(f), sg = slotsOf(g);
  for (auto s : sf)
    if (!g.involves(s)) return (mono * gcdPrimitive(gcdList(f.split(s)), g)).primitive();
  for (auto s : sg)
    if (!f.involves(s)) return (mono * gcdPrimitive(f, gcdList(g.split(s)))).primitive();
  if (auto h = heuGcd(f, g, 64)) return (mono * *h).primitive();
  if (sf.size() == 1) {
    std::size_t x = sf[0];
    auto toDense = [x](const MPoly& p) {
      Dense d(p.degree(x) + 1);
      for (const auto& t : p.terms()) d[t.m.e[x]] = t.c.get_num();
      return d;
    };
    Dense h = gcdDense(toDense(f), toDense(g));
    std::vector<MPoly::Term> ts;
    for (std::size_t i = 0; i < h.size(); ++i)
      if (h[i] != 0) ts.push_back({Monomial::var(x, static_cast<std::uint32_t>(i)), BigRat(h[i])});
    return mono * MPoly::fromTerms(vars, std::move(ts));
  }
  std::size_t x = sf[0];
  std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
  for (auto s : sf) {
    std::uint32_t d = std::max(f.degree(s), g.degree(s));
    if (d < best) best = d, x = s;
  }
  auto fc = f.split(x), gc = g.split(x);
  MPoly cf = gcdList(fc), cg = gcdList(gc);
  MPoly c = gcdPrimitive(cf, cg);
  std::vector<MPoly> a = ppx(fc), b = ppx(gc);
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<MPoly> h;
  while (true) {
    if (b.size() == 1) {
      h = {MPoly::constant(vars, 1)};
      break;
    }
    premPoly(a, b);
    if (a.empty()) {
      h = b;
      break;
    }
    a = ppx(a);
    std::swap(a, b);
  }
  return (mono * c * MPoly::join(vars, h, x)).primitive();
}

}  // namespace

MPoly gcd(const MPoly& a, const MPoly& b) {
  requireSameTable(a.vars(), b.vars());
  if (a.isZero()) return b.primitive();
  if (b.isZero()) return a.primitive();
  return gcdPrimitive(a.primitive(), b.primitive()).primitive();
}

}  // namespace qfb
