#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qfb/ratfn.hpp"

// Arithmetic modulo the Mersenne prime 2^61 - 1, used for fast rank screening.
// A full-rank specialization proves full rank of the symbolic matrix.
namespace qfb::modp {

inline constexpr std::uint64_t P = (std::uint64_t(1) << 61) - 1;

inline std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= P ? s - P : s;
}
inline std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + P - b; }
inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 x = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(x & P), hi = static_cast<std::uint64_t>(x >> 61);
  return add(lo, hi);
}
std::uint64_t pow(std::uint64_t a, std::uint64_t e);
std::uint64_t inv(std::uint64_t a);
std::uint64_t reduce(const BigInt& x);
std::optional<std::uint64_t> reduce(const BigRat& x);

// Values for each variable slot of a table.
struct Point {
  std::vector<std::uint64_t> values;
  static Point random(std::size_t arity, std::mt19937_64& rng);
};

std::optional<std::uint64_t> eval(const MPoly& p, const Point& pt);
std::optional<std::uint64_t> eval(const RatFn& f, const Point& pt);

using Matrix = std::vector<std::vector<std::uint64_t>>;
std::size_t rank(Matrix m);
// Nullspace basis vectors (length = column count).
std::vector<std::vector<std::uint64_t>> nullspace(Matrix m, std::size_t cols);

}  // namespace qfb::modp
