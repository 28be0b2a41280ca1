#pragma once

#include <ostream>
#include <string>

#include "qfb/mpoly.hpp"

namespace qfb {

// Reduced fraction num/den; den has leading coefficient 1 in the fixed monomial
// order, which makes the stored form canonical.
class RatFn {
 public:
  explicit RatFn(VarTablePtr vars) : num_(vars), den_(MPoly::constant(vars, 1)) {}
  RatFn(const MPoly& num);  // NOLINT(google-explicit-constructor)
  static RatFn make(MPoly num, MPoly den);
  static RatFn constant(VarTablePtr vars, const BigRat& c);
  static RatFn var(VarTablePtr vars, std::size_t slot);
  static RatFn qPow(VarTablePtr vars, long e);
  // The shift variable v itself.
  static RatFn shiftVar(VarTablePtr vars);

  const MPoly& num() const { return num_; }
  const MPoly& den() const { return den_; }
  const VarTablePtr& vars() const { return num_.vars(); }
  bool isZero() const { return num_.isZero(); }
  bool isPolynomial() const { return den_.isConstant(); }
  bool isConstant() const { return num_.isConstant() && den_.isConstant(); }
  BigRat constantValue() const { return num_.constantValue(); }
  bool isOne() const { return isConstant() && constantValue() == 1; }

  RatFn operator-() const;
  RatFn operator+(const RatFn& o) const;
  RatFn operator-(const RatFn& o) const;
  RatFn operator*(const RatFn& o) const;
  RatFn operator/(const RatFn& o) const;
  RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
  RatFn& operator-=(const RatFn& o) { return *this = *this - o; }
  RatFn& operator*=(const RatFn& o) { return *this = *this * o; }
  RatFn& operator/=(const RatFn& o) { return *this = *this / o; }
  RatFn inverse() const;
  RatFn pow(long n) const;
  RatFn scaled(const BigRat& c) const;

  bool operator==(const RatFn& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatFn& o) const { return !(*this == o); }

  RatFn retag(const VarTablePtr& vars) const;
  std::string str() const;

 private:
  RatFn(MPoly num, MPoly den, bool) : num_(std::move(num)), den_(std::move(den)) {}
  MPoly num_;
  MPoly den_;
};

inline std::ostream& operator<<(std::ostream& os, const RatFn& f) { return os << f.str(); }

// v -> q^{e*steps} v (geometric) or v -> v + steps (arithmetic).
RatFn substituteShift(const RatFn& f, long steps);
// g(m) = f(lambda*m + c): v -> q^{e*c} v^lambda (geometric) or lambda*v + c.
RatFn reindex(const RatFn& f, long lambda, long c);
// Value at v = q^{e*k} (or v = k), as a function on the base table.
RatFn evalAtPower(const RatFn& f, long k);
// Replace the variable in `slot` by `value` (same table).
RatFn substituteVar(const RatFn& f, std::size_t slot, const RatFn& value);

// Lowest power of q appearing in the numerator minus that in the denominator,
// for functions without the shift variable. Requires f != 0.
long qValuation(const RatFn& f);

}  // namespace qfb
