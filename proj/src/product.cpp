#include "qfb/product.hpp"

#include <numeric>

#include "qfb/error.hpp"

namespace qfb {

BasisPtr productBasis(const std::vector<BasisPtr>& factors) {
  if (factors.size() < 2) throw Error(ErrorCode::InvalidArgument, "a product basis needs at least two factors");
  const auto& f0 = *factors[0];
  long T = 1;
  for (const auto& f : factors) {
    if (!(f->beta() == f0.beta())) throw Error(ErrorCode::InvalidArgument, "product factors have different beta(n)");
    if (!sameTable(f->mvars(), f0.mvars()))
      throw Error(ErrorCode::VarTableMismatch, "product factors have different parameters");
    T = std::lcm(T, static_cast<long>(f->sections()));
  }
  long m = static_cast<long>(factors.size()), t = m * T;
  std::vector<RatFn> a, b;
  std::vector<QBinomPrefactor> pre;
  std::string label = "Product(";
  for (long s = 0; s < t; ++s) {
    const auto& f = *factors[s % m];
    long k = s / m, tr = f.sections();
    long lam = T / tr, res = k % tr, off = k / tr;
    a.push_back(reindex(f.a()[res], lam, off));
    b.push_back(reindex(f.b()[res], lam, off));
  }
  for (std::size_t i = 0; i < factors.size(); ++i) {
    label += (i ? ", " : "") + factors[i]->label();
    for (const auto& p : factors[i]->prefactors()) pre.push_back(p);
  }
  label += ")";
  return std::make_shared<FactorialBasis>(f0.beta(), f0.mvars(), std::move(a), std::move(b), label, pre);
}

Compatibility inheritCompat(const BasisPtr& product, const std::vector<BasisPtr>& factors, Atom atom) {
  int maxA = 0, maxB = 0;
  long T = 1;
  for (const auto& f : factors) {
    Compatibility c = atom == Atom::Shift ? compatShift(*f) : compatMulBeta(*f);
    maxA = std::max(maxA, c.A);
    maxB = std::max(maxB, c.B);
    T = std::lcm(T, static_cast<long>(f->sections()));
  }
  int m = static_cast<int>(factors.size());
  Compatibility c = atom == Atom::Shift ? compatShift(*product, std::nullopt, std::max(6, m * maxA))
                                        : compatMulBeta(*product);
  if (c.A > m * maxA || c.B > maxB || c.t != m * T)
    throw Error(ErrorCode::NotCompatible, "inherited compatibility exceeds the product bounds");
  CompatReport rep = compatVerify(*product, atom, c, 25);
  if (!rep.ok) throw Error(ErrorCode::NotCompatible, "inherited compatibility failed: " + rep.detail);
  return c;
}

}  // namespace qfb
