// Dense symmetric eigensolver: Householder reduction to tridiagonal form
// followed by the implicit-shift QL iteration, eigenvectors accumulated.

#include <cmath>
#include <limits>
#include <vector>

#include "ase/errors.hpp"
#include "ase/matrix.hpp"
#include "ase/spectral.hpp"

namespace ase {

namespace {

// Reduce symmetric a to tridiagonal form; a is overwritten with the
// accumulated orthogonal transformation, d gets the diagonal and e the
// subdiagonal (e[i] couples rows i-1 and i).
void tred2(Matrix& a, std::vector<double>& d, std::vector<double>& e) {
  const int n = a.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::fabs(a(i, k));
      if (scale == 0.0) {
        e[i] = a(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          a(i, k) /= scale;
          h += a(i, k) * a(i, k);
        }
        double f = a(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          a(j, i) = a(i, j) / h;
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
          for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
          e[j] = g / h;
          f += e[j] * a(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = a(i, j);
          e[j] = g = e[j] - hh * f;
          for (int k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
        }
      }
    } else {
      e[i] = a(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    const int l = i - 1;
    if (d[i] != 0.0) {
      for (int j = 0; j <= l; ++j) {
        double g = 0.0;
        for (int k = 0; k <= l; ++k) g += a(i, k) * a(k, j);
        for (int k = 0; k <= l; ++k) a(k, j) -= g * a(k, i);
      }
    }
    d[i] = a(i, i);
    a(i, i) = 1.0;
    for (int j = 0; j <= l; ++j) {
      a(j, i) = 0.0;
      a(i, j) = 0.0;
    }
  }
}

// Implicit-shift QL on a tridiagonal matrix; d holds the diagonal in, the
// eigenvalues out; z accumulates rotations (pass the tred2 output, or the
// identity for a plain tridiagonal problem). Eigenvectors land in the
// columns of z.
void tql2(std::vector<double>& d, std::vector<double>& e, Matrix* z, long iteration_cap) {
  const int n = (int)d.size();
  if (n == 0) return;
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  // absolute floor keeps blocks of numerically-zero eigenvalues from
  // iterating forever on rounding debris; zeroing e at eps*scale is a
  // backward-stable perturbation
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::fabs(d[i]) + std::fabs(e[i]));
  long iters = 0;
  for (int l = 0; l < n; ++l) {
    for (;;) {
      int m = l;
      for (; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <=
            std::numeric_limits<double>::epsilon() * std::max(dd, scale))
          break;
      }
      if (m == l) break;
      if (++iters > iteration_cap) {
        double resid = 0.0;
        for (int i = 0; i + 1 < n; ++i) resid = std::max(resid, std::fabs(e[i]));
        throw EigNonConvergence(resid);
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (int i = m - 1; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (z) {
          for (int k = 0; k < z->rows(); ++k) {
            f = (*z)(k, i + 1);
            (*z)(k, i + 1) = s * (*z)(k, i) + c * f;
            (*z)(k, i) = c * (*z)(k, i) - s * f;
          }
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

void sort_ascending(std::vector<double>& d, Matrix* z) {
  const int n = (int)d.size();
  for (int i = 0; i < n - 1; ++i) {
    int k = i;
    for (int j = i + 1; j < n; ++j)
      if (d[j] < d[k]) k = j;
    if (k != i) {
      std::swap(d[i], d[k]);
      if (z)
        for (int r = 0; r < z->rows(); ++r) std::swap((*z)(r, i), (*z)(r, k));
    }
  }
}

}  // namespace

void dense_eig_full(const Matrix& M, std::vector<double>& values, Matrix& vectors) {
  const int n = M.rows();
  if (n == 0 || M.cols() != n) throw ValidationError("dense_eig_full: matrix must be square");
  vectors = M;
  std::vector<double> e;
  tred2(vectors, values, e);
  tql2(values, e, &vectors, 300L * std::max(n, 8));
  sort_ascending(values, &vectors);
}

void tridiag_eig(std::vector<double> alpha, std::vector<double> beta,
                 std::vector<double>& values, Matrix* vectors) {
  const int n = (int)alpha.size();
  if ((int)beta.size() != std::max(0, n - 1))
    throw ValidationError("tridiag_eig: beta must have n-1 entries");
  // shift beta into the e-layout tql2 expects (e[i] below d[i])
  std::vector<double> e(n, 0.0);
  for (int i = 1; i < n; ++i) e[i] = beta[i - 1];
  if (vectors) *vectors = Matrix::identity(n);
  tql2(alpha, e, vectors, 300L * std::max(n, 8));
  sort_ascending(alpha, vectors);
  values = std::move(alpha);
}

}  // namespace ase
