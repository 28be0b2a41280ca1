#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qfb/basis.hpp"
#include "qfb/compat.hpp"
#include "qfb/expr.hpp"
#include "qfb/ore.hpp"

namespace qfb {

// ---------------------------------------------------------------------------
// Sequences

// Terms of the sequence annihilated by `annihilator` (min exponent 0) with
// initials[j] the term at offset + j. Extra initials override the recurrence.
class SeqGen {
 public:
  SeqGen(OreOp annihilator, std::vector<RatFn> initials, long offset = 0);

  const OreOp& annihilator() const { return op_; }
  const std::vector<RatFn>& initials() const { return initials_; }
  long offset() const { return offset_; }
  // Indices k >= offset where the step k -> k + order cannot divide.
  const std::vector<long>& singularIndices() const { return singular_; }

  // Terms offset .. offset + count - 1. Not thread safe; one generator per worker.
  const std::vector<RatFn>& unroll(long count) const;
  IndexedSeq seq(long count) const;

 private:
  OreOp op_;
  std::vector<RatFn> initials_;
  long offset_;
  std::vector<long> singular_;
  mutable std::vector<RatFn> cache_;
};

inline std::vector<RatFn> unroll(const SeqGen& gen, long count) { return gen.unroll(count); }

// ---------------------------------------------------------------------------
// Expansion oracle

// c with y(n) = sum_j c_j B_{j t + r}(n), by triangular solve at the leading
// indices of the section elements, plus a consistency check on every other
// n below the first unused leading index.
struct SectionFit {
  std::vector<RatFn> coeffs;
  bool consistent = true;
  long witnessN = -1;  // first n where the expansion fails to reproduce y
  long checked = 0;    // n-values compared
};
SectionFit fitSection(const std::vector<RatFn>& y, const FactorialBasis& basis, int sections, int section, long count);
// All coefficients of the full basis (sections = 1); throws unless consistent.
std::vector<RatFn> expandInBasis(const std::vector<RatFn>& y, const FactorialBasis& basis, long count);
// Number of y values the triangular solve needs for `count` coefficients.
long requiredValues(const FactorialBasis& basis, int sections, int section, long count);
std::vector<RatFn> initialCoefficients(const std::vector<RatFn>& yInitials, const FactorialBasis& basis, long upTo,
                                       int sections = 1, int section = 0);

// ---------------------------------------------------------------------------
// Transformation

enum class SectionMode {
  Isolated,    // expansion supported on one section: common right divisor of its column
  Eliminated,  // every section present: eliminate the others
};

struct TransformResult {
  OreMat matrix;
  OreOp op;  // normalized, primitive
  SectionMode mode = SectionMode::Isolated;
  long oracleChecks = 0;
  // Isolated mode: whether the values y admit an expansion on this section.
  bool consistent = true;
  long witnessN = -1;
  std::vector<RatFn> coefficients;  // oracle coefficients used for the check
};

struct TransformOptions {
  SectionMode mode = SectionMode::Isolated;
  int maxOrder = 12;
  // Oracle terms: the n-domain sequence values, and how many coefficients to check.
  std::vector<RatFn> y;
  long checkTerms = 12;
};

// Scalar operator annihilating the section sequence c(m t + r); every result is
// checked against oracle coefficients from fitSection when y is given.
TransformResult transformedAnnihilator(const OperatorExpr& expr, const FactorialBasis& basis, int sections, int section,
                                       const TransformOptions& opts = {});
// Annihilator of column `section` (common right divisor of its nonzero entries).
OreOp isolatedSection(const OreMat& m, int section);
// Ore elimination of every other section.
OreOp eliminateSections(const OreMat& m, int section, int maxOrder);

// ---------------------------------------------------------------------------
// Guessing and certification

struct GuessConfig {
  int maxOrder = 4;
  int maxDegree = 8;
  long termsUsed = 0;  // 0: the minimum allowed by the invariant
  long margin = 10;
  long required() const { return (maxOrder + 1L) * (maxDegree + 2L) + margin; }
};

// Lowest (order, degree) operator with polynomial coefficients in the index
// variable of `vars` annihilating `terms` (term j at index j).
std::optional<OreOp> guessMinimal(const std::vector<RatFn>& terms, const VarTablePtr& vars, const GuessConfig& cfg = {});

struct Certificate {
  OreOp proven, guessed;
  Lclm witness;
  long residualChecks = 0;
  bool leadingOK = false;
  bool valid = false;
  long witnessIndex = -1;  // first failing index when invalid
  std::string detail;
};

// Proves that the sequence defined by (proven, initials) is annihilated by
// guessed, through lclm(proven, guessed) = u proven = w guessed.
Certificate certify(const OreOp& proven, const std::vector<RatFn>& provenInitials, const OreOp& guessed);

// ---------------------------------------------------------------------------
// Closed forms

struct PochFactor {
  RatFn x;  // (x; q^step)_k
  int step = 1;
};

// c(k) = initial * prod_{j<k} r(j), recognized as
// initial * alpha^k * q^{(a k^2 + b k)/2} * prod num / prod den, or left as an
// explicit product when the pattern does not match.
struct ClosedForm {
  RatFn initial;
  RatFn ratio;  // r as a function of the index variable
  bool matched = false;
  RatFn alpha;
  long quad2 = 0, lin2 = 0;  // exponent (quad2 k^2 + lin2 k) / 2
  std::vector<PochFactor> num, den;

  RatFn at(long k) const;
  std::string str(const std::string& index = "k") const;
};

ClosedForm firstOrderClosedForm(const OreOp& op, const RatFn& initial);

// ---------------------------------------------------------------------------
// Identity checks

struct IdentityCheck {
  long index = 0;
  bool equal = false;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  bool allEqual() const;
  long firstFailure() const;
};

IdentityReport verifyIdentity(const std::function<RatFn(long)>& lhs, const std::function<RatFn(long)>& rhs, long upTo,
                              long from = 0);

// Sum over k >= 0 of term(k), compared with a power series through q^order.
// lowerBound(k) bounds the q-valuation of term(k) from below and must be
// nondecreasing in k; it is asserted on every computed term.
struct SeriesSide {
  std::function<RatFn(long)> term;
  std::function<long(long)> lowerBound;
};

struct SeriesReport {
  bool equal = false;
  long termsSummed = 0;
  long order = 0;
  long firstMismatch = -1;  // q-degree
  std::string detail;
};

SeriesReport verifySeries(const SeriesSide& lhs, const MPoly& rhs, long order, long maxTerms = 400);

}  // namespace qfb
