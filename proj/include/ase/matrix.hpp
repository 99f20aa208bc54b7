#pragma once
#include <cmath>
#include <cstddef>
#include <vector>

namespace ase {

// Dense row-major matrix. Deliberately minimal; the hot loops live in
// kernels.hpp where the OpenMP/serial split is.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(size_t(rows) * size_t(cols), fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return a_.empty(); }

  double& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }
  double* row(int i) { return a_.data() + size_t(i) * cols_; }
  const double* row(int i) const { return a_.data() + size_t(i) * cols_; }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

inline double dot(const double* x, const double* y, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

inline double row_norm(const double* x, int n) { return std::sqrt(dot(x, x, n)); }

Matrix multiply(const Matrix& A, const Matrix& B);
Matrix multiply_tn(const Matrix& A, const Matrix& B);  // A^T B
Matrix transpose(const Matrix& A);
Matrix subtract(const Matrix& A, const Matrix& B);
double frobenius_norm(const Matrix& A);
double max_abs(const Matrix& A);

}  // namespace ase
