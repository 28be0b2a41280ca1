#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qfb/ratfn.hpp"

namespace qfb {

// beta(n) = q^{g n} (geometric) or n (arithmetic); E.beta = gamma*beta + nu.
struct BetaDescriptor {
  ShiftKind kind;
  RatFn gamma;
  RatFn nu;

  static BetaDescriptor geometric(const VarTablePtr& base, int g);
  static BetaDescriptor arithmetic(const VarTablePtr& base);
  bool isGeometric() const { return kind.isGeometric(); }
  int exponent() const { return kind.e; }  // g
  bool operator==(const BetaDescriptor& o) const { return kind == o.kind; }
};

// Extra factor qbinom_{q^e}(a n + c, t) carried by C(a,c;t;e) with t != 0;
// it multiplies every element and is invisible to the (a, b) recurrence.
struct QBinomPrefactor {
  int a, c, t, e;
};

// A beta(n)-factorial basis in t sections: B_0 = 1 (times prefactors) and
// B_{k+1}(n) = (a(k) beta(n) + b(k)) B_k(n), where a(mt+r) = a_r(m).
// Section sequences are functions of the section index m through the shift
// variable of mvars() (q^m for geometric beta, m itself for arithmetic beta).
class FactorialBasis {
 public:
  FactorialBasis(BetaDescriptor beta, VarTablePtr mvars, std::vector<RatFn> a, std::vector<RatFn> b,
                 std::string label, std::vector<QBinomPrefactor> prefactors = {});

  const BetaDescriptor& beta() const { return beta_; }
  const VarTablePtr& mvars() const { return mvars_; }
  VarTablePtr base() const { return mvars_->base(); }
  int sections() const { return static_cast<int>(a_.size()); }
  const std::vector<RatFn>& a() const { return a_; }
  const std::vector<RatFn>& b() const { return b_; }
  const std::string& label() const { return label_; }
  const std::vector<QBinomPrefactor>& prefactors() const { return prefactors_; }

  // Symbolic section data: rho_r(m) = -b_r(m)/a_r(m).
  RatFn root(int r) const;
  // Values at a global index k >= 0, on the base table.
  RatFn aAt(long k) const;
  RatFn bAt(long k) const;
  RatFn rootAt(long k) const;
  RatFn betaAt(long n) const;

  // Exact B_k(n). Memoized; safe for concurrent readers.
  RatFn element(long k, long n) const;
  // Least n <= bound with B_k(n) != 0 (bound defaults to k + 8).
  std::optional<long> leadingIndex(long k, std::optional<long> bound = std::nullopt) const;

 private:
  BetaDescriptor beta_;
  VarTablePtr mvars_;
  std::vector<RatFn> a_, b_;
  std::string label_;
  std::vector<QBinomPrefactor> prefactors_;

  struct Memo {
    std::mutex mu;
    std::map<long, std::vector<RatFn>> byN;  // n -> prefix products B_0..B_j
    std::vector<RatFn> aVals, bVals;
  };
  std::shared_ptr<Memo> memo_;
};

using BasisPtr = std::shared_ptr<const FactorialBasis>;

// Section table for bases over `params`: geometric(1) variable qk, or the
// arithmetic variable k.
VarTablePtr sectionTable(const std::vector<std::string>& params, bool geometric = true);

BasisPtr qPowerBasis(int e, const std::vector<std::string>& params = {});
BasisPtr qFallingBasis(const std::vector<std::string>& params = {});
BasisPtr qBinomialBasis(int aArg, int c, int tShift, int e, const std::vector<std::string>& params = {});
// Classical binomial basis binom(n, k), beta(n) = n.
BasisPtr binomialBasis(const std::vector<std::string>& params = {});
BasisPtr generalBasis(BetaDescriptor beta, VarTablePtr mvars, std::vector<RatFn> a, std::vector<RatFn> b,
                      std::string label);
// From root sequences rho_r(m) and leading coefficients c_r(m) of p_k(Y):
// a(k) = c(k+1)/c(k), b(k) = -rho(k) a(k).
BasisPtr basisFromRoots(BetaDescriptor beta, VarTablePtr mvars, const std::vector<RatFn>& rho,
                        const std::vector<RatFn>& lead, std::string label);

// Text forms: P(e), F, C(a,c;t;e), Binomial, Product(spec, spec, ...).
BasisPtr parseBasis(const std::string& text, const std::vector<std::string>& params = {});

}  // namespace qfb
