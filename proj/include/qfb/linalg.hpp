#pragma once

#include <optional>
#include <random>
#include <vector>

#include "qfb/ratfn.hpp"

namespace qfb {

using RatMatrix = std::vector<std::vector<RatFn>>;

// Basis of {x : M x = 0} over the field of rational functions.
std::vector<std::vector<RatFn>> nullspace(RatMatrix m, std::size_t cols, const VarTablePtr& vars);

// Rank of M at a random specialization modulo a large prime. A value equal to
// the column count proves full column rank of M itself.
std::size_t specializedRank(const RatMatrix& m, std::size_t cols, std::mt19937_64& rng);

}  // namespace qfb
