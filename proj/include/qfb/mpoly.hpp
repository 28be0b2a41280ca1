#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfb/var_table.hpp"

namespace qfb {

using BigInt = mpz_class;
using BigRat = mpq_class;

struct Monomial {
  std::array<std::uint32_t, kMaxVars> e{};
  std::uint32_t deg = 0;

  static Monomial unit() { return {}; }
  static Monomial var(std::size_t slot, std::uint32_t pow);
  void recompute();
  bool isUnit() const { return deg == 0; }
  bool operator==(const Monomial& o) const { return deg == o.deg && e == o.e; }
};

// Graded lex, q (slot 0) least significant. Returns <0, 0, >0.
int compare(const Monomial& a, const Monomial& b);
Monomial operator*(const Monomial& a, const Monomial& b);
bool divides(const Monomial& d, const Monomial& m);
Monomial operator/(const Monomial& m, const Monomial& d);
Monomial minMonomial(const Monomial& a, const Monomial& b);

// Sparse polynomial over Q; terms kept sorted in decreasing monomial order.
class MPoly {
 public:
  struct Term {
    Monomial m;
    BigRat c;
  };

  explicit MPoly(VarTablePtr vars) : vars_(std::move(vars)) {}
  static MPoly constant(VarTablePtr vars, const BigRat& c);
  static MPoly var(VarTablePtr vars, std::size_t slot, std::uint32_t pow = 1);
  static MPoly monomial(VarTablePtr vars, const Monomial& m, const BigRat& c);
  static MPoly fromTerms(VarTablePtr vars, std::vector<Term> terms);

  const VarTablePtr& vars() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool isZero() const { return terms_.empty(); }
  bool isConstant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.isUnit()); }
  bool isMonomial() const { return terms_.size() == 1; }
  BigRat constantValue() const;
  const Term& lead() const { return terms_.front(); }

  std::uint32_t degree(std::size_t slot) const;
  std::uint32_t minDegree(std::size_t slot) const;
  bool involves(std::size_t slot) const;
  Monomial gcdMonomial() const;

  MPoly operator-() const;
  MPoly operator+(const MPoly& o) const;
  MPoly operator-(const MPoly& o) const;
  MPoly operator*(const MPoly& o) const;
  MPoly& operator+=(const MPoly& o) { return *this = *this + o; }
  MPoly& operator-=(const MPoly& o) { return *this = *this - o; }
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
  MPoly scaled(const BigRat& c) const;
  MPoly mulTerm(const Monomial& m, const BigRat& c) const;
  MPoly divMonomial(const Monomial& m) const;
  MPoly pow(unsigned n) const;

  // Quotient if d divides *this exactly over Q, otherwise nullopt.
  std::optional<MPoly> divideExact(const MPoly& d) const;

  // Coefficients of successive powers of the variable in `slot`.
  std::vector<MPoly> split(std::size_t slot) const;
  static MPoly join(const VarTablePtr& vars, const std::vector<MPoly>& coeffs, std::size_t slot);

  // Same exponent layout under another table (adds or drops a trailing shift slot).
  MPoly retag(const VarTablePtr& vars) const;

  // Integer coefficients with trivial content and positive leading coefficient.
  MPoly primitive() const;
  // Rational c with *this = c * primitive().
  BigRat content() const;

  bool operator==(const MPoly& o) const;
  bool operator!=(const MPoly& o) const { return !(*this == o); }
  std::string str() const;

 private:
  VarTablePtr vars_;
  std::vector<Term> terms_;
  friend class MPolyBuilder;
};

MPoly gcd(const MPoly& a, const MPoly& b);

}  // namespace qfb
