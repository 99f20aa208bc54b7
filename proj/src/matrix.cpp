#include "ase/matrix.hpp"

#include <cmath>

namespace ase {

Matrix multiply(const Matrix& A, const Matrix& B) {
  Matrix C(A.rows(), B.cols());
  for (int i = 0; i < A.rows(); ++i) {
    const double* a = A.row(i);
    double* c = C.row(i);
    for (int k = 0; k < A.cols(); ++k) {
      const double aik = a[k];
      const double* b = B.row(k);
      for (int j = 0; j < B.cols(); ++j) c[j] += aik * b[j];
    }
  }
  return C;
}

Matrix multiply_tn(const Matrix& A, const Matrix& B) {
  Matrix C(A.cols(), B.cols());
  for (int k = 0; k < A.rows(); ++k) {
    const double* a = A.row(k);
    const double* b = B.row(k);
    for (int i = 0; i < A.cols(); ++i) {
      double* c = C.row(i);
      const double aki = a[i];
      for (int j = 0; j < B.cols(); ++j) c[j] += aki * b[j];
    }
  }
  return C;
}

Matrix transpose(const Matrix& A) {
  Matrix T(A.cols(), A.rows());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) T(j, i) = A(i, j);
  return T;
}

Matrix subtract(const Matrix& A, const Matrix& B) {
  Matrix C(A.rows(), A.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) C(i, j) = A(i, j) - B(i, j);
  return C;
}

double frobenius_norm(const Matrix& A) {
  double s = 0.0;
  const double* p = A.data();
  const size_t m = size_t(A.rows()) * A.cols();
  for (size_t i = 0; i < m; ++i) s += p[i] * p[i];
  return std::sqrt(s);
}

double max_abs(const Matrix& A) {
  double s = 0.0;
  const double* p = A.data();
  const size_t m = size_t(A.rows()) * A.cols();
  for (size_t i = 0; i < m; ++i) s = std::max(s, std::fabs(p[i]));
  return s;
}

}  // namespace ase
