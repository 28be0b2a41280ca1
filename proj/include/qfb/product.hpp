#pragma once

#include <vector>

#include "qfb/basis.hpp"
#include "qfb/compat.hpp"

namespace qfb {

// Interlaced product: B_{mk+r} = prod_{i<r} P^(i)_{k+1} prod_{i>=r} P^(i)_k,
// in m * lcm(t_i) sections. Factors must share beta and parameters.
BasisPtr productBasis(const std::vector<BasisPtr>& factors);

// Compatibility of the product with an atom, re-derived on the interlaced
// data, verified, and checked against A' <= m max A_i, B' <= max B_i.
Compatibility inheritCompat(const BasisPtr& product, const std::vector<BasisPtr>& factors, Atom atom);

}  // namespace qfb
