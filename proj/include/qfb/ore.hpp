#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "qfb/ratfn.hpp"

namespace qfb {

// A finite run of sequence terms: values[j] is the term at index offset + j.
struct IndexedSeq {
  long offset = 0;
  std::vector<RatFn> values;

  long begin() const { return offset; }
  long end() const { return offset + static_cast<long>(values.size()); }
  bool has(long k) const { return k >= begin() && k < end(); }
  const RatFn& at(long k) const { return values.at(static_cast<std::size_t>(k - offset)); }
};

// Laurent skew polynomial sum_i c_i S^i with S c(v) = sigma(c)(v) S, where
// sigma is the shift declared by the coefficient table's shift variable.
class OreOp {
 public:
  explicit OreOp(VarTablePtr vars);
  static OreOp shift(const VarTablePtr& vars, int power = 1);
  static OreOp scalar(const RatFn& c);
  static OreOp term(const RatFn& c, int power);
  static OreOp fromCoeffs(const VarTablePtr& vars, std::map<int, RatFn> coeffs);

  const VarTablePtr& vars() const { return vars_; }
  const ShiftKind& shiftKind() const { return vars_->shiftKind(); }
  const std::map<int, RatFn>& coeffs() const { return coeffs_; }
  bool isZero() const { return coeffs_.empty(); }
  int minExp() const;
  int maxExp() const;
  int order() const { return maxExp() - minExp(); }
  RatFn coeff(int i) const;
  const RatFn& leading() const;
  const RatFn& trailing() const;

  OreOp operator-() const;
  OreOp operator+(const OreOp& o) const;
  OreOp operator-(const OreOp& o) const;
  OreOp operator*(const OreOp& o) const;
  OreOp& operator+=(const OreOp& o) { return *this = *this + o; }
  OreOp& operator*=(const OreOp& o) { return *this = *this * o; }

  // c * L and S^m * L.
  OreOp leftScale(const RatFn& c) const;
  OreOp leftShift(int m) const;
  // S^{-minExp} * L, so that the smallest exponent is 0 and L still annihilates
  // the same sequences (up to finitely many boundary indices).
  OreOp normalized() const;
  OreOp monic() const;
  // Left multiple by a scalar with polynomial, content-free coefficients and
  // positive leading coefficient of the leading coefficient.
  OreOp primitive() const;

  bool operator==(const OreOp& o) const;
  bool operator!=(const OreOp& o) const { return !(*this == o); }
  // Grammar form, round-trips through the k-domain parser.
  std::string str(const std::string& shiftSymbol = "S") const;

 private:
  VarTablePtr vars_;
  std::map<int, RatFn> coeffs_;
};

inline std::ostream& operator<<(std::ostream& os, const OreOp& L) { return os << L.str(); }

OreOp oreMul(const OreOp& a, const OreOp& b);

struct Division {
  OreOp quotient;
  OreOp remainder;
};
// num = quotient * den + remainder, order of remainder below that of den.
// Both operands must have nonnegative exponents.
Division rightDivide(const OreOp& num, const OreOp& den);
OreOp gcrd(const OreOp& p, const OreOp& q);

struct Lclm {
  OreOp l, u, w;  // l = u p = w q
};
Lclm lclm(const OreOp& p, const OreOp& q);

// out(k) = sum_i c_i(k) terms(k + i) for every k whose window is covered.
IndexedSeq applyToSeq(const OreOp& L, const IndexedSeq& terms);

struct ShiftFactor {
  OreOp core;
  int power;
};
// L = S^power * core with core(0) != 0.
ShiftFactor removeShiftFactor(const OreOp& L);

// Indices k >= from with p(v = q^{ek}) = 0 (or p(k) = 0 for arithmetic shifts).
std::vector<long> zeroIndices(const MPoly& p, long from);
std::vector<long> leadingNonvanishing(const OreOp& L, long from);
// Zeros of the leading coefficient together with poles of every coefficient.
std::vector<long> singularIndices(const OreOp& L, long from);

// t x t matrix of operators; entry (j, r) maps section r to section j.
class OreMat {
 public:
  OreMat(std::size_t t, const VarTablePtr& vars);
  static OreMat identity(std::size_t t, const VarTablePtr& vars);
  static OreMat scalar(std::size_t t, const RatFn& c);

  std::size_t size() const { return t_; }
  const VarTablePtr& vars() const { return vars_; }
  const OreOp& at(std::size_t j, std::size_t r) const { return e_[j][r]; }
  OreOp& at(std::size_t j, std::size_t r) { return e_[j][r]; }

  OreMat operator+(const OreMat& o) const;
  OreMat operator-(const OreMat& o) const;
  OreMat operator*(const OreMat& o) const;
  OreMat operator-() const;
  bool operator==(const OreMat& o) const;

 private:
  std::size_t t_;
  VarTablePtr vars_;
  std::vector<std::vector<OreOp>> e_;
};

}  // namespace qfb
