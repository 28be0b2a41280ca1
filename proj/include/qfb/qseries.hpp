#pragma once

#include "qfb/ratfn.hpp"

namespace qfb {

// (x; q^e)_n = prod_{j<n} (1 - x q^{e j}), n >= 0.
RatFn qPochhammer(const RatFn& x, int e, long n);
// Gaussian binomial [N choose K] in base q^e; 0 unless 0 <= K <= N.
RatFn qBinomial(const VarTablePtr& vars, long N, long K, int e = 1);

// Truncated power series in q with polynomial coefficients in the parameters,
// stored as an MPoly with every q-degree <= order.
MPoly truncate(const MPoly& f, long order);
MPoly seriesMul(const MPoly& a, const MPoly& b, long order);
// 1/f for f with constant term 1 in q.
MPoly seriesInverse(const MPoly& f, long order);
// Series expansion of a RatFn whose denominator has q-constant term 1 and
// whose q-valuation is >= 0.
MPoly seriesOf(const RatFn& f, long order);
// prod_{j >= 0} (1 + sign * x q^{start + step j}) truncated at q^order;
// x is a polynomial in the parameters.
MPoly infiniteProduct(const MPoly& x, long start, long step, int sign, long order);

}  // namespace qfb
