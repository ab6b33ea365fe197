#pragma once

#include <optional>
#include <vector>

#include "triadica/matrix.hpp"

namespace triadica {

struct EchelonForm {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

/// Gauss-Jordan reduction to reduced row echelon form. Zero rows are dropped.
EchelonForm rref(const Matrix& m);

std::size_t rank(const Matrix& m);

/// A linear subspace of Q^n held by its reduced echelon basis. The basis is
/// unique for the subspace, so equality is entrywise basis equality.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient_dim) : ambient_dim_(ambient_dim), basis_(0, ambient_dim) {}

  static Subspace zero(std::size_t n) { return Subspace(n); }
  static Subspace full(std::size_t n);
  static Subspace span(std::size_t ambient_dim, const std::vector<Vector>& vectors);
  static Subspace row_space(const Matrix& m);
  static Subspace column_space(const Matrix& m);

  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t dim() const noexcept { return basis_.rows(); }

  /// Basis vectors as rows, in reduced echelon form.
  const Matrix& basis() const noexcept { return basis_; }
  Vector basis_vector(std::size_t i) const { return basis_.row(i); }
  std::vector<Vector> basis_vectors() const;
  /// Basis vectors as the columns of an ambient_dim x dim matrix.
  Matrix basis_columns() const { return basis_.transpose(); }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  bool contains(const Vector& v) const;
  bool contains(const Subspace& other) const;
  /// Coordinates of v in the echelon basis, if v lies in the subspace.
  std::optional<Vector> coordinates(const Vector& v) const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_dim_ == b.ambient_dim_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t ambient_dim_ = 0;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

Subspace kernel(const Matrix& m);

struct SolveResult {
  /// Some v with m v = rhs, absent when the system is inconsistent.
  std::optional<Vector> solution;
  /// Whether ker m = 0, i.e. a solution (if any) is the only one.
  bool unique = false;
};

SolveResult solve(const Matrix& m, const Vector& rhs);

/// Solves X * a = b for X, row by row. Returns nullopt if some row has no
/// solution.
std::optional<Matrix> solve_left(const Matrix& a, const Matrix& b);

struct Quotient {
  std::size_t dim = 0;
  /// dim x ambient; annihilates exactly the subspace.
  Matrix projection;
  /// ambient x dim; projection * section = identity.
  Matrix section;
};

Quotient quotient_space(std::size_t ambient_dim, const Subspace& sub);

/// span{ mult(a, b) : a in basis(u), b in basis(v) }.
Subspace product_subspace(const Subspace& u, const Subspace& v, const Bilinear& mult);

}  // namespace triadica
