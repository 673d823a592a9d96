#pragma once

#include <initializer_list>
#include <vector>

#include "monodromic/errors.hpp"
#include "monodromic/rational.hpp"

namespace monodromic {

// Dense exact matrix, row-major. Dimensions may be zero in either direction;
// all operations are defined for empty shapes (products of empty matrices are
// zero matrices of the induced shape).
class RationalMatrix {
 public:
  RationalMatrix() : rows_(0), cols_(0) {}
  RationalMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, Rational(0)) {}

  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
    rows_ = static_cast<int>(init.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(init.begin()->size());
    a_.reserve(static_cast<std::size_t>(rows_) * cols_);
    for (const auto& row : init) {
      if (static_cast<int>(row.size()) != cols_)
        throw AmbientMismatch("ragged matrix initializer");
      for (const auto& x : row) a_.push_back(x);
    }
  }

  static RationalMatrix identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static RationalMatrix zero(int rows, int cols) { return RationalMatrix(rows, cols); }

  // Single-column matrix from a vector.
  static RationalMatrix column(const std::vector<Rational>& v) {
    RationalMatrix m(static_cast<int>(v.size()), 1);
    for (int i = 0; i < m.rows(); ++i) m.at(i, 0) = v[static_cast<std::size_t>(i)];
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& at(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Rational& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  bool operator==(const RationalMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const RationalMatrix& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const auto& x : a_)
      if (x != 0) return false;
    return true;
  }

  bool is_square() const { return rows_ == cols_; }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  RationalMatrix operator*(const RationalMatrix& o) const {
    if (cols_ != o.rows_)
      throw AmbientMismatch("matrix product shape mismatch: " + shape() + " * " + o.shape());
    RationalMatrix p(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Rational& x = at(i, k);
        if (x == 0) continue;
        for (int j = 0; j < o.cols_; ++j) {
          if (o.at(k, j) == 0) continue;
          p.at(i, j) += x * o.at(k, j);
        }
      }
    return p;
  }

  RationalMatrix operator+(const RationalMatrix& o) const {
    require_same_shape(o, "+");
    RationalMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] + o.a_[i];
    return s;
  }

  RationalMatrix operator-(const RationalMatrix& o) const {
    require_same_shape(o, "-");
    RationalMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] - o.a_[i];
    return s;
  }

  RationalMatrix operator-() const { return Rational(-1) * (*this); }

  friend RationalMatrix operator*(const Rational& c, const RationalMatrix& m) {
    RationalMatrix s(m.rows_, m.cols_);
    for (std::size_t i = 0; i < m.a_.size(); ++i) s.a_[i] = c * m.a_[i];
    return s;
  }

  // this + c * I
  RationalMatrix plus_scalar(const Rational& c) const {
    if (!is_square()) throw AmbientMismatch("plus_scalar on non-square matrix");
    RationalMatrix s = *this;
    for (int i = 0; i < rows_; ++i) s.at(i, i) += c;
    return s;
  }

  RationalMatrix pow(int e) const {
    if (!is_square()) throw AmbientMismatch("pow on non-square matrix");
    RationalMatrix r = identity(rows_);
    for (int i = 0; i < e; ++i) r = r * (*this);
    return r;
  }

  // Kronecker product; basis of the result is e_i (x) f_j ordered with the
  // right factor fastest (index i * o.rows + j on the row side).
  RationalMatrix kron(const RationalMatrix& o) const {
    RationalMatrix k(rows_ * o.rows_, cols_ * o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) {
        const Rational& x = at(i, j);
        if (x == 0) continue;
        for (int p = 0; p < o.rows_; ++p)
          for (int q = 0; q < o.cols_; ++q)
            k.at(i * o.rows_ + p, j * o.cols_ + q) = x * o.at(p, q);
      }
    return k;
  }

  // Columns of o appended to the right.
  RationalMatrix hcat(const RationalMatrix& o) const {
    if (rows_ != o.rows_)
      throw AmbientMismatch("hcat row mismatch: " + shape() + " | " + o.shape());
    RationalMatrix h(rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) h.at(i, j) = at(i, j);
      for (int j = 0; j < o.cols_; ++j) h.at(i, cols_ + j) = o.at(i, j);
    }
    return h;
  }

  RationalMatrix col(int j) const {
    RationalMatrix c(rows_, 1);
    for (int i = 0; i < rows_; ++i) c.at(i, 0) = at(i, j);
    return c;
  }

  std::vector<Rational> col_vec(int j) const {
    std::vector<Rational> v(static_cast<std::size_t>(rows_));
    for (int i = 0; i < rows_; ++i) v[static_cast<std::size_t>(i)] = at(i, j);
    return v;
  }

  std::string shape() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

 private:
  void require_same_shape(const RationalMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw AmbientMismatch(std::string("matrix ") + op + " shape mismatch: " + shape() +
                            " vs " + o.shape());
  }

  int rows_, cols_;
  std::vector<Rational> a_;
};

// Block-diagonal assembly, in the given order.
inline RationalMatrix block_diag(const std::vector<RationalMatrix>& blocks) {
  int r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  RationalMatrix m(r, c);
  int ro = 0, co = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) m.at(ro + i, co + j) = b.at(i, j);
    ro += b.rows();
    co += b.cols();
  }
  return m;
}

}  // namespace monodromic
