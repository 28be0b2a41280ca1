#include "qfb/modp.hpp"

namespace qfb::modp {

std::uint64_t pow(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv(std::uint64_t a) { return pow(a, P - 2); }

std::uint64_t reduce(const BigInt& x) {
  static_assert(sizeof(unsigned long) >= sizeof(std::uint64_t));
  return mpz_fdiv_ui(x.get_mpz_t(), P);
}

std::optional<std::uint64_t> reduce(const BigRat& x) {
  std::uint64_t d = reduce(x.get_den());
  if (d == 0) return std::nullopt;
  return mul(reduce(x.get_num()), inv(d));
}

Point Point::random(std::size_t arity, std::mt19937_64& rng) {
  Point p;
  std::uniform_int_distribution<std::uint64_t> dist(2, P - 1);
  for (std::size_t i = 0; i < arity; ++i) p.values.push_back(dist(rng));
  return p;
}

std::optional<std::uint64_t> eval(const MPoly& p, const Point& pt) {
  std::uint64_t acc = 0;
  for (const auto& t : p.terms()) {
    auto c = reduce(t.c);
    if (!c) return std::nullopt;
    std::uint64_t v = *c;
    for (std::size_t s = 0; s < p.vars()->arity(); ++s)
      if (t.m.e[s]) v = mul(v, pow(pt.values[s], t.m.e[s]));
    acc = add(acc, v);
  }
  return acc;
}

std::optional<std::uint64_t> eval(const RatFn& f, const Point& pt) {
  auto n = eval(f.num(), pt), d = eval(f.den(), pt);
  if (!n || !d || *d == 0) return std::nullopt;
  return mul(*n, inv(*d));
}

namespace {

// Row echelon in place; returns pivot columns.
std::vector<std::size_t> echelon(Matrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    std::uint64_t iv = inv(m[r][c]);
    for (std::size_t j = c; j < cols; ++j) m[r][j] = mul(m[r][j], iv);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      std::uint64_t f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] = sub(m[i][j], mul(f, m[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank(Matrix m) {
  if (m.empty()) return 0;
  return echelon(m, m[0].size()).size();
}

std::vector<std::vector<std::uint64_t>> nullspace(Matrix m, std::size_t cols) {
  auto piv = echelon(m, cols);
  std::vector<bool> isPivot(cols, false);
  for (auto c : piv) isPivot[c] = true;
  std::vector<std::vector<std::uint64_t>> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (isPivot[f]) continue;
    std::vector<std::uint64_t> v(cols, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = sub(0, m[r][f]);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace qfb::modp
