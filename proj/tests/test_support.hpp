#pragma once

#include <random>

#include "triadica/linalg.hpp"

namespace triadica::testing {

/// Small random rationals with numerators in [-bound, bound] and
/// denominators in [1, 3], from a seeded engine.
inline Rational random_rational(std::mt19937& rng, int bound = 3) {
  std::uniform_int_distribution<int> num(-bound, bound);
  std::uniform_int_distribution<int> den(1, 3);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline Vector random_vector(std::mt19937& rng, std::size_t n, int bound = 3) {
  Vector v(n);
  for (auto& x : v) x = random_rational(rng, bound);
  return v;
}

inline Matrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int bound = 3) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = random_rational(rng, bound);
  return m;
}

inline Matrix from_ints(std::size_t rows, std::size_t cols, std::initializer_list<int> values) {
  Matrix m(rows, cols);
  std::size_t i = 0;
  for (int v : values) {
    m(i / cols, i % cols) = v;
    ++i;
  }
  return m;
}

}  // namespace triadica::testing
