#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "triadica/rational.hpp"

namespace triadica {

/// Dense row-major matrix of exact rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static Matrix from_rows(std::size_t cols, const std::vector<Vector>& rows);
  static Matrix from_columns(std::size_t rows, const std::vector<Vector>& cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  Vector row(std::size_t r) const;
  Vector column(std::size_t c) const;
  void set_column(std::size_t c, const Vector& v);

  Matrix transpose() const;
  bool is_zero() const;
  bool is_identity() const;

  Vector apply(const Vector& v) const;
  /// Row vector times matrix.
  Vector apply_left(const Vector& v) const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Rational& s, const Matrix& m);
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::span<const Rational> data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Bilinear map U x V -> W stored as a 3-tensor: value(i, j) is the image
/// of the basis pair (u_i, v_j) as a coordinate vector in W.
class Bilinear {
 public:
  Bilinear() = default;
  Bilinear(std::size_t left, std::size_t right, std::size_t out)
      : left_(left), right_(right), out_(out), data_(left * right * out) {}

  std::size_t left_dim() const noexcept { return left_; }
  std::size_t right_dim() const noexcept { return right_; }
  std::size_t out_dim() const noexcept { return out_; }

  Rational& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * right_ + j) * out_ + k];
  }
  const Rational& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * right_ + j) * out_ + k];
  }

  Vector value(std::size_t i, std::size_t j) const;
  void set_value(std::size_t i, std::size_t j, const Vector& v);
  Vector apply(const Vector& u, const Vector& v) const;
  /// The linear map v -> B(u, v), as an out x right matrix.
  Matrix left_operator(const Vector& u) const;

  friend bool operator==(const Bilinear& a, const Bilinear& b) = default;

 private:
  std::size_t left_ = 0;
  std::size_t right_ = 0;
  std::size_t out_ = 0;
  std::vector<Rational> data_;
};

}  // namespace triadica
