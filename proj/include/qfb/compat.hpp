#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qfb/basis.hpp"
#include "qfb/expr.hpp"
#include "qfb/ore.hpp"

namespace qfb {

enum class Atom { Shift, MulBeta };

// L B_k = sum_{i=-A}^{B} alpha_{r,i}(m) B_{k+i} for k = m t + r.
struct Compatibility {
  int A = 0, B = 0, t = 1;
  VarTablePtr mvars;
  std::vector<std::vector<RatFn>> alpha;  // alpha[r][i + A]

  RatFn at(int r, int i) const;
  RatFn valueAt(long k, int i) const;
};

// Table of an n-domain operator: the shift variable qn stands for q^n (or n).
VarTablePtr nTable(const std::vector<std::string>& params, bool geometric = true);

Compatibility compatMulBeta(const FactorialBasis& basis);
// Least A (or exactly `A` when given) from root matching; verified before return.
Compatibility compatShift(const FactorialBasis& basis, std::optional<int> A = std::nullopt, int cap = 6);

struct CompatReport {
  bool ok = true;
  long k = -1, n = -1;  // first counterexample
  std::string detail;
};
// Checks the defining identity for k <= kMax at n = 0..k+A+B+2.
CompatReport compatVerify(const FactorialBasis& basis, const OreOp& Ln, const Compatibility& comp, long kMax = 25);
CompatReport compatVerify(const FactorialBasis& basis, Atom atom, const Compatibility& comp, long kMax = 25);
OreOp atomOperator(const FactorialBasis& basis, Atom atom);

Compatibility sectionRefine(const Compatibility& comp, int lambda);
OreOp recOperator(const Compatibility& comp);
OreMat recMatrix(const Compatibility& comp);

struct BasisCompat {
  Compatibility shift, mulBeta;
};
BasisCompat atomCompat(const FactorialBasis& basis);

// Image of an n-domain expression under R in `sections` sections (a multiple
// of the basis section count), by structural recursion.
OreMat compileExpr(const FactorialBasis& basis, const BasisCompat& comps, const OperatorExpr& expr, int sections);
OreMat compileExpr(const FactorialBasis& basis, const OperatorExpr& expr, int sections);
// Second route: from the normal form sum_i c_i(qn) E^i, mapping each c_i
// through powers of R(beta).
OreMat compileNormalForm(const FactorialBasis& basis, const BasisCompat& comps, const OreOp& Ln, int sections);
// Scalar operator for one section.
OreOp compileScalar(const FactorialBasis& basis, const OperatorExpr& expr);

}  // namespace qfb
