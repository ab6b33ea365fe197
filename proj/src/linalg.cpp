#include "triadica/linalg.hpp"

#include <cassert>
#include <utility>

namespace triadica {

EchelonForm rref(const Matrix& m) {
  Matrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t lead_row = 0;
  for (std::size_t col = 0; col < a.cols() && lead_row < a.rows(); ++col) {
    std::size_t pivot = lead_row;
    while (pivot < a.rows() && a(pivot, col) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != lead_row) {
      for (std::size_t c = col; c < a.cols(); ++c) std::swap(a(pivot, c), a(lead_row, c));
    }
    Rational inv = 1 / a(lead_row, col);
    for (std::size_t c = col; c < a.cols(); ++c) a(lead_row, c) *= inv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == lead_row || a(r, col) == 0) continue;
      Rational factor = a(r, col);
      for (std::size_t c = col; c < a.cols(); ++c) a(r, c) -= factor * a(lead_row, c);
    }
    pivots.push_back(col);
    ++lead_row;
  }
  Matrix reduced(pivots.size(), a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) reduced(r, c) = a(r, c);
  return {std::move(reduced), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

Subspace Subspace::full(std::size_t n) { return row_space(Matrix::identity(n)); }

Subspace Subspace::span(std::size_t ambient_dim, const std::vector<Vector>& vectors) {
  return row_space(Matrix::from_rows(ambient_dim, vectors));
}

Subspace Subspace::row_space(const Matrix& m) {
  auto echelon = rref(m);
  Subspace s(m.cols());
  s.basis_ = std::move(echelon.reduced);
  s.pivots_ = std::move(echelon.pivots);
  return s;
}

Subspace Subspace::column_space(const Matrix& m) { return row_space(m.transpose()); }

std::vector<Vector> Subspace::basis_vectors() const {
  std::vector<Vector> out;
  out.reserve(dim());
  for (std::size_t i = 0; i < dim(); ++i) out.push_back(basis_.row(i));
  return out;
}

std::optional<Vector> Subspace::coordinates(const Vector& v) const {
  assert(v.size() == ambient_dim_);
  // In reduced echelon form the coefficient of basis row i is v at pivot i.
  Vector coords(dim());
  Vector residual = v;
  for (std::size_t i = 0; i < dim(); ++i) {
    coords[i] = v[pivots_[i]];
    if (coords[i] == 0) continue;
    for (std::size_t c = 0; c < ambient_dim_; ++c) residual[c] -= coords[i] * basis_(i, c);
  }
  if (!is_zero(residual)) return std::nullopt;
  return coords;
}

bool Subspace::contains(const Vector& v) const { return coordinates(v).has_value(); }

bool Subspace::contains(const Subspace& other) const {
  for (std::size_t i = 0; i < other.dim(); ++i) {
    if (!contains(other.basis_vector(i))) return false;
  }
  return true;
}

Subspace kernel(const Matrix& m) {
  auto echelon = rref(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : echelon.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Vector v(n);
    v[free] = 1;
    for (std::size_t r = 0; r < echelon.pivots.size(); ++r) v[echelon.pivots[r]] = -echelon.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return Subspace::span(n, basis);
}

SolveResult solve(const Matrix& m, const Vector& rhs) {
  assert(rhs.size() == m.rows());
  Matrix augmented(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) augmented(r, c) = m(r, c);
    augmented(r, m.cols()) = rhs[r];
  }
  auto echelon = rref(augmented);
  SolveResult result;
  std::size_t coefficient_rank = echelon.pivots.size();
  if (!echelon.pivots.empty() && echelon.pivots.back() == m.cols()) {
    --coefficient_rank;
    result.unique = coefficient_rank == m.cols();
    return result;
  }
  result.unique = coefficient_rank == m.cols();
  Vector v(m.cols());
  for (std::size_t r = 0; r < echelon.pivots.size(); ++r) v[echelon.pivots[r]] = echelon.reduced(r, m.cols());
  result.solution = std::move(v);
  return result;
}

std::optional<Matrix> solve_left(const Matrix& a, const Matrix& b) {
  assert(a.cols() == b.cols());
  const Matrix at = a.transpose();
  Matrix x(b.rows(), a.rows());
  for (std::size_t r = 0; r < b.rows(); ++r) {
    auto result = solve(at, b.row(r));
    if (!result.solution) return std::nullopt;
    for (std::size_t c = 0; c < a.rows(); ++c) x(r, c) = (*result.solution)[c];
  }
  return x;
}

Quotient quotient_space(std::size_t ambient_dim, const Subspace& sub) {
  assert(sub.ambient_dim() == ambient_dim);
  std::vector<bool> is_pivot(ambient_dim, false);
  for (auto p : sub.pivots()) is_pivot[p] = true;
  std::vector<std::size_t> complement;
  for (std::size_t c = 0; c < ambient_dim; ++c) {
    if (!is_pivot[c]) complement.push_back(c);
  }
  Quotient q;
  q.dim = complement.size();
  q.section = Matrix(ambient_dim, q.dim);
  for (std::size_t j = 0; j < q.dim; ++j) q.section(complement[j], j) = 1;
  // Reducing e_c against the echelon basis clears every pivot coordinate;
  // what remains on the complement coordinates is the class of e_c.
  q.projection = Matrix(q.dim, ambient_dim);
  for (std::size_t c = 0; c < ambient_dim; ++c) {
    Vector reduced = unit_vector(ambient_dim, c);
    for (std::size_t i = 0; i < sub.dim(); ++i) {
      Rational coeff = reduced[sub.pivots()[i]];
      if (coeff == 0) continue;
      for (std::size_t k = 0; k < ambient_dim; ++k) reduced[k] -= coeff * sub.basis()(i, k);
    }
    for (std::size_t j = 0; j < q.dim; ++j) q.projection(j, c) = reduced[complement[j]];
  }
  return q;
}

Subspace product_subspace(const Subspace& u, const Subspace& v, const Bilinear& mult) {
  assert(u.ambient_dim() == mult.left_dim() && v.ambient_dim() == mult.right_dim());
  std::vector<Vector> products;
  for (std::size_t i = 0; i < u.dim(); ++i) {
    const Vector a = u.basis_vector(i);
    for (std::size_t j = 0; j < v.dim(); ++j) products.push_back(mult.apply(a, v.basis_vector(j)));
  }
  return Subspace::span(mult.out_dim(), products);
}

}  // namespace triadica
