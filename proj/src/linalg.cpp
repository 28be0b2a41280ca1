#include "qfb/linalg.hpp"

#include "qfb/error.hpp"
#include "qfb/modp.hpp"

namespace qfb {

namespace {

std::size_t weight(const RatFn& f) { return f.num().size() + f.den().size(); }

}  // namespace

std::vector<std::vector<RatFn>> nullspace(RatMatrix m, std::size_t cols, const VarTablePtr& vars) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t best = m.size();
    for (std::size_t i = r; i < m.size(); ++i)
      if (!m[i][c].isZero() && (best == m.size() || weight(m[i][c]) < weight(m[best][c]))) best = i;
    if (best == m.size()) continue;
    std::swap(m[best], m[r]);
    RatFn iv = m[r][c].inverse();
    for (std::size_t j = c; j < cols; ++j)
      if (!m[r][j].isZero()) m[r][j] = m[r][j] * iv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c].isZero()) continue;
      RatFn f = m[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (!m[r][j].isZero()) m[i][j] = m[i][j] - f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<bool> isPivot(cols, false);
  for (auto c : pivots) isPivot[c] = true;
  std::vector<std::vector<RatFn>> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (isPivot[f]) continue;
    std::vector<RatFn> v(cols, RatFn(vars));
    v[f] = RatFn::constant(vars, 1);
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][f];
    out.push_back(std::move(v));
  }
  return out;
}

std::size_t specializedRank(const RatMatrix& m, std::size_t cols, std::mt19937_64& rng) {
  if (m.empty()) return 0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto pt = modp::Point::random(m[0][0].vars()->arity(), rng);
    modp::Matrix mm(m.size(), std::vector<std::uint64_t>(cols, 0));
    bool ok = true;
    for (std::size_t i = 0; i < m.size() && ok; ++i)
      for (std::size_t j = 0; j < cols && ok; ++j) {
        if (m[i][j].isZero()) continue;
        auto v = modp::eval(m[i][j], pt);
        if (!v) ok = false;
        else mm[i][j] = *v;
      }
    if (ok) return modp::rank(std::move(mm));
  }
  throw Error(ErrorCode::BudgetExceeded, "could not find a regular specialization point");
}

}  // namespace qfb
