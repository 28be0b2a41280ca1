#include "qfb/basis.hpp"

#include <cctype>

#include "qfb/error.hpp"
#include "qfb/product.hpp"
#include "qfb/qseries.hpp"

namespace qfb {

BetaDescriptor BetaDescriptor::geometric(const VarTablePtr& base, int g) {
  if (g < 1) throw Error(ErrorCode::InvalidArgument, "geometric beta needs a positive exponent");
  return {ShiftKind::geometric(g), RatFn::qPow(base, g), RatFn(base)};
}

BetaDescriptor BetaDescriptor::arithmetic(const VarTablePtr& base) {
  return {ShiftKind::arithmetic(), RatFn::constant(base, 1), RatFn::constant(base, 1)};
}

FactorialBasis::FactorialBasis(BetaDescriptor beta, VarTablePtr mvars, std::vector<RatFn> a, std::vector<RatFn> b,
                               std::string label, std::vector<QBinomPrefactor> prefactors)
    : beta_(std::move(beta)),
      mvars_(std::move(mvars)),
      a_(std::move(a)),
      b_(std::move(b)),
      label_(std::move(label)),
      prefactors_(std::move(prefactors)),
      memo_(std::make_shared<Memo>()) {
  if (a_.empty() || a_.size() != b_.size())
    throw Error(ErrorCode::InvalidArgument, "basis needs matching a and b families");
  if (!mvars_->hasShift()) throw Error(ErrorCode::NoShiftVariable, "section table needs a shift variable");
  if (mvars_->shiftKind().isGeometric() != beta_.isGeometric())
    throw Error(ErrorCode::InvalidArgument, "section variable kind must follow beta");
  for (std::size_t r = 0; r < a_.size(); ++r) {
    requireSameTable(mvars_, a_[r].vars());
    requireSameTable(mvars_, b_[r].vars());
    if (a_[r].isZero()) throw Error(ErrorCode::InvalidArgument, "a(k) vanishes identically");
  }
}

RatFn FactorialBasis::root(int r) const { return -b_.at(r) / a_.at(r); }

RatFn FactorialBasis::aAt(long k) const {
  long t = sections();
  RatFn v = evalAtPower(a_[k % t], k / t);
  if (v.isZero()) throw Error(ErrorCode::InvalidArgument, "a(k) vanishes at k = " + std::to_string(k));
  return v;
}

RatFn FactorialBasis::bAt(long k) const {
  long t = sections();
  return evalAtPower(b_[k % t], k / t);
}

RatFn FactorialBasis::rootAt(long k) const { return -bAt(k) / aAt(k); }

RatFn FactorialBasis::betaAt(long n) const {
  if (beta_.isGeometric()) return RatFn::qPow(base(), static_cast<long>(beta_.exponent()) * n);
  return RatFn::constant(base(), n);
}

RatFn FactorialBasis::element(long k, long n) const {
  if (k < 0) return RatFn(base());
  std::lock_guard<std::mutex> lock(memo_->mu);
  auto& col = memo_->byN[n];
  if (col.empty()) {
    RatFn p = RatFn::constant(base(), 1);
    for (const auto& f : prefactors_) p *= qBinomial(base(), static_cast<long>(f.a) * n + f.c, f.t, f.e);
    col.push_back(p);
  }
  auto& av = memo_->aVals;
  auto& bv = memo_->bVals;
  RatFn beta = betaAt(n);
  while (static_cast<long>(col.size()) <= k) {
    long j = static_cast<long>(col.size()) - 1;
    while (static_cast<long>(av.size()) <= j) {
      av.push_back(aAt(static_cast<long>(av.size())));
      bv.push_back(bAt(static_cast<long>(bv.size())));
    }
    col.push_back(col.back() * (av[j] * beta + bv[j]));
  }
  return col[k];
}

std::optional<long> FactorialBasis::leadingIndex(long k, std::optional<long> bound) const {
  long hi = bound.value_or(k + 8);
  for (long n = 0; n <= hi; ++n)
    if (!element(k, n).isZero()) return n;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

VarTablePtr sectionTable(const std::vector<std::string>& params, bool geometric) {
  if (geometric) return VarTable::make(params, "qk", ShiftKind::geometric(1));
  return VarTable::make(params, "k", ShiftKind::arithmetic());
}

BasisPtr qPowerBasis(int e, const std::vector<std::string>& params) {
  if (e < 1) throw Error(ErrorCode::InvalidArgument, "P(e) needs e >= 1");
  auto m = sectionTable(params);
  return std::make_shared<FactorialBasis>(BetaDescriptor::geometric(m->base(), e), m,
                                          std::vector<RatFn>{RatFn::constant(m, 1)}, std::vector<RatFn>{RatFn(m)},
                                          "P(" + std::to_string(e) + ")");
}

BasisPtr qFallingBasis(const std::vector<std::string>& params) {
  auto m = sectionTable(params);
  return std::make_shared<FactorialBasis>(BetaDescriptor::geometric(m->base(), 1), m,
                                          std::vector<RatFn>{RatFn::constant(m, 1)},
                                          std::vector<RatFn>{-RatFn::shiftVar(m)}, "F");
}

BasisPtr qBinomialBasis(int aArg, int c, int tShift, int e, const std::vector<std::string>& params) {
  if (aArg < 1 || e < 1) throw Error(ErrorCode::InvalidArgument, "C(a,c;t;e) needs a >= 1 and e >= 1");
  if (tShift < 0) throw Error(ErrorCode::InvalidArgument, "C(a,c;t;e) with t < 0 has a vanishing denominator");
  auto m = sectionTable(params);
  RatFn one = RatFn::constant(m, 1);
  RatFn ve = RatFn::shiftVar(m).pow(e);  // q^{e k}
  RatFn d = one - RatFn::qPow(m, static_cast<long>(e) * (tShift + 1)) * ve;
  RatFn a = -RatFn::qPow(m, static_cast<long>(e) * (c - tShift)) / (ve * d);
  RatFn b = one / d;
  std::vector<QBinomPrefactor> pre;
  if (tShift != 0) pre.push_back({aArg, c, tShift, e});
  std::string label = "C(" + std::to_string(aArg) + "," + std::to_string(c) + ";" + std::to_string(tShift) + ";" +
                      std::to_string(e) + ")";
  return std::make_shared<FactorialBasis>(BetaDescriptor::geometric(m->base(), aArg * e), m, std::vector<RatFn>{a},
                                          std::vector<RatFn>{b}, label, pre);
}

BasisPtr binomialBasis(const std::vector<std::string>& params) {
  auto m = sectionTable(params, false);
  RatFn k = RatFn::shiftVar(m), one = RatFn::constant(m, 1);
  return std::make_shared<FactorialBasis>(BetaDescriptor::arithmetic(m->base()), m,
                                          std::vector<RatFn>{one / (k + one)}, std::vector<RatFn>{-k / (k + one)},
                                          "Binomial");
}

BasisPtr generalBasis(BetaDescriptor beta, VarTablePtr mvars, std::vector<RatFn> a, std::vector<RatFn> b,
                      std::string label) {
  return std::make_shared<FactorialBasis>(std::move(beta), std::move(mvars), std::move(a), std::move(b),
                                          std::move(label));
}

BasisPtr basisFromRoots(BetaDescriptor beta, VarTablePtr mvars, const std::vector<RatFn>& rho,
                        const std::vector<RatFn>& lead, std::string label) {
  std::size_t t = rho.size();
  if (t == 0 || lead.size() != t) throw Error(ErrorCode::InvalidArgument, "root and lead families differ in size");
  std::vector<RatFn> a, b;
  for (std::size_t r = 0; r < t; ++r) {
    RatFn next = r + 1 < t ? lead[r + 1] : substituteShift(lead[0], 1);
    RatFn ar = next / lead[r];
    a.push_back(ar);
    b.push_back(-rho[r] * ar);
  }
  return generalBasis(std::move(beta), std::move(mvars), std::move(a), std::move(b), std::move(label));
}

// ---------------------------------------------------------------------------

namespace {

class BasisParser {
 public:
  BasisParser(const std::string& s, const std::vector<std::string>& params) : s_(s), params_(params) {}

  BasisPtr run() {
    BasisPtr b = spec();
    skip();
    if (i_ != s_.size()) throw ParseError(i_, "trailing characters in basis spec");
    return b;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  void expect(char c) {
    skip();
    if (i_ >= s_.size() || s_[i_] != c) throw ParseError(i_, std::string("expected '") + c + "'");
    ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  long integer() {
    skip();
    bool neg = false;
    if (i_ < s_.size() && s_[i_] == '-') {
      neg = true;
      ++i_;
    }
    std::size_t b = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (b == i_) throw ParseError(b, "expected integer");
    long v = std::stol(s_.substr(b, i_ - b));
    return neg ? -v : v;
  }
  std::string word() {
    skip();
    std::size_t b = i_;
    while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (b == i_) throw ParseError(b, "expected basis name");
    return s_.substr(b, i_ - b);
  }

  BasisPtr spec() {
    std::size_t at = i_;
    std::string w = word();
    if (w == "F") return qFallingBasis(params_);
    if (w == "Binomial") return binomialBasis(params_);
    if (w == "P") {
      expect('(');
      long e = integer();
      expect(')');
      return qPowerBasis(static_cast<int>(e), params_);
    }
    if (w == "C") {
      expect('(');
      long a = integer();
      expect(',');
      long c = integer();
      expect(';');
      long t = integer();
      expect(';');
      long e = integer();
      expect(')');
      return qBinomialBasis(static_cast<int>(a), static_cast<int>(c), static_cast<int>(t), static_cast<int>(e),
                            params_);
    }
    if (w == "Product") {
      expect('(');
      std::vector<BasisPtr> fs{spec()};
      while (peek(',')) {
        ++i_;
        fs.push_back(spec());
      }
      expect(')');
      return productBasis(fs);
    }
    throw ParseError(at, "unknown basis '" + w + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& params_;
  std::size_t i_ = 0;
};

}  // namespace

BasisPtr parseBasis(const std::string& text, const std::vector<std::string>& params) {
  return BasisParser(text, params).run();
}

}  // namespace qfb
