#include "triadica/matrix.hpp"

#include <cassert>

namespace triadica {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(std::size_t cols, const std::vector<Vector>& rows) {
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    assert(rows[r].size() == cols);
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Matrix Matrix::from_columns(std::size_t rows, const std::vector<Vector>& cols) {
  Matrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) m.set_column(c, cols[c]);
  return m;
}

Vector Matrix::row(std::size_t r) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector Matrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void Matrix::set_column(std::size_t c, const Vector& v) {
  assert(v.size() == rows_);
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_) {
    if (x != 0) return false;
  }
  return true;
}

bool Matrix::is_identity() const { return rows_ == cols_ && *this == identity(rows_); }

Vector Matrix::apply(const Vector& v) const {
  assert(v.size() == cols_);
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Rational acc;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (v[c] != 0) acc += (*this)(r, c) * v[c];
    }
    out[r] = acc;
  }
  return out;
}

Vector Matrix::apply_left(const Vector& v) const {
  assert(v.size() == rows_);
  Vector out(cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (v[r] == 0) continue;
    for (std::size_t c = 0; c < cols_; ++c) out[c] += v[r] * (*this)(r, c);
  }
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  assert(a.cols_ == b.rows_);
  Matrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
  Matrix out(a.rows_, a.cols_);
  for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
  Matrix out(a.rows_, a.cols_);
  for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] - b.data_[i];
  return out;
}

Matrix operator*(const Rational& s, const Matrix& m) {
  Matrix out(m.rows_, m.cols_);
  for (std::size_t i = 0; i < m.data_.size(); ++i) out.data_[i] = s * m.data_[i];
  return out;
}

Vector Bilinear::value(std::size_t i, std::size_t j) const {
  Vector v(out_);
  for (std::size_t k = 0; k < out_; ++k) v[k] = (*this)(i, j, k);
  return v;
}

void Bilinear::set_value(std::size_t i, std::size_t j, const Vector& v) {
  assert(v.size() == out_);
  for (std::size_t k = 0; k < out_; ++k) (*this)(i, j, k) = v[k];
}

Vector Bilinear::apply(const Vector& u, const Vector& v) const {
  assert(u.size() == left_ && v.size() == right_);
  Vector out(out_);
  for (std::size_t i = 0; i < left_; ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < right_; ++j) {
      if (v[j] == 0) continue;
      Rational coeff = u[i] * v[j];
      for (std::size_t k = 0; k < out_; ++k) {
        const Rational& c = (*this)(i, j, k);
        if (c != 0) out[k] += coeff * c;
      }
    }
  }
  return out;
}

Matrix Bilinear::left_operator(const Vector& u) const {
  Matrix m(out_, right_);
  for (std::size_t j = 0; j < right_; ++j) m.set_column(j, apply(u, unit_vector(right_, j)));
  return m;
}

}  // namespace triadica
