// Test-only oracles, independent of the library's solver paths.
#pragma once
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ase/matrix.hpp"
#include "ase/rng.hpp"

namespace testhelpers {

using ase::Matrix;

inline Matrix random_matrix(int rows, int cols, uint64_t seed, double lo = -1.0,
                            double hi = 1.0) {
  ase::SplitMix64 rng(seed);
  Matrix M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = rng.uniform(lo, hi);
  return M;
}

inline Matrix random_symmetric(int n, uint64_t seed, double lo = -1.0, double hi = 1.0) {
  Matrix M = random_matrix(n, n, seed, lo, hi);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) M(i, j) = M(j, i) = 0.5 * (M(i, j) + M(j, i));
  return M;
}

// random orthogonal matrix via Gram-Schmidt on a random square matrix
inline Matrix random_orthogonal(int d, uint64_t seed) {
  for (int attempt = 0;; ++attempt) {
    Matrix M = random_matrix(d, d, ase::hash2(seed, attempt));
    bool ok = true;
    for (int c = 0; c < d && ok; ++c) {
      for (int c2 = 0; c2 < c; ++c2) {
        double proj = 0.0;
        for (int i = 0; i < d; ++i) proj += M(i, c2) * M(i, c);
        for (int i = 0; i < d; ++i) M(i, c) -= proj * M(i, c2);
      }
      double nn = 0.0;
      for (int i = 0; i < d; ++i) nn += M(i, c) * M(i, c);
      nn = std::sqrt(nn);
      if (nn < 1e-6) {
        ok = false;
        break;
      }
      for (int i = 0; i < d; ++i) M(i, c) /= nn;
    }
    if (ok) return M;
  }
}

// determinant by Gaussian elimination with partial pivoting
inline double determinant(Matrix A) {
  const int n = A.rows();
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(A(r, c)) > std::fabs(A(piv, c))) piv = r;
    if (A(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(A(piv, j), A(c, j));
      det = -det;
    }
    det *= A(c, c);
    for (int r = c + 1; r < n; ++r) {
      const double f = A(r, c) / A(c, c);
      for (int j = c; j < n; ++j) A(r, j) -= f * A(c, j);
    }
  }
  return det;
}

// characteristic polynomial det(xI - A) = x^n + c[n-1] x^{n-1} + ... + c[0]
// via the Faddeev-LeVerrier recurrence
inline std::vector<double> char_poly(const Matrix& A) {
  const int n = A.rows();
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  Matrix Mk = Matrix::identity(n);
  for (int k = 1; k <= n; ++k) {
    Matrix AM = ase::multiply(A, Mk);
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += AM(i, i);
    const double ck = -tr / k;
    c[n - k] = ck;
    Mk = AM;
    for (int i = 0; i < n; ++i) Mk(i, i) += ck;
  }
  return c;
}

inline double eval_poly(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (int k = (int)c.size() - 1; k >= 0; --k) v = v * x + c[k];
  return v;
}

// all real roots of a polynomial with real simple roots inside [lo, hi]:
// scan a fine grid for sign changes, then bisect each bracket
inline std::vector<double> poly_roots_bisect(const std::vector<double>& c, double lo, double hi,
                                             int grid = 200000) {
  std::vector<double> roots;
  double prev_x = lo, prev_f = eval_poly(c, lo);
  for (int g = 1; g <= grid; ++g) {
    const double x = lo + (hi - lo) * g / grid;
    const double f = eval_poly(c, x);
    if (prev_f == 0.0) roots.push_back(prev_x);
    if (prev_f * f < 0.0) {
      double a = prev_x, b = x, fa = prev_f;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = eval_poly(c, m);
        if (fa * fm <= 0.0)
          b = m;
        else {
          a = m;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_f = f;
  }
  return roots;
}

// ---- exhaustive clustering oracles ----------------------------------------

// SSE of an assignment, accumulated in exactly the library's order
inline double assignment_sse(const Matrix& pts, const std::vector<int>& labels, int K) {
  const int n = pts.rows(), d = pts.cols();
  Matrix sums(K, d);
  std::vector<int> sizes(K, 0);
  for (int i = 0; i < n; ++i) {
    ++sizes[labels[i]];
    for (int j = 0; j < d; ++j) sums(labels[i], j) += pts(i, j);
  }
  Matrix centroids(K, d);
  for (int c = 0; c < K; ++c)
    for (int j = 0; j < d; ++j) centroids(c, j) = sums(c, j) / sizes[c];
  double sse = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) {
      const double diff = pts(i, j) - centroids(labels[i], j);
      s += diff * diff;
    }
    sse += s;
  }
  return sse;
}

// minimum SSE over every labeled assignment with all K clusters nonempty
inline double exhaustive_min_sse(const Matrix& pts, int K) {
  const int n = pts.rows();
  std::vector<int> labels(n, 0);
  double best = std::numeric_limits<double>::infinity();
  const long long total = (long long)std::pow((double)K, n);
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    std::vector<int> sizes(K, 0);
    for (int i = 0; i < n; ++i) {
      labels[i] = (int)(c % K);
      ++sizes[labels[i]];
      c /= K;
    }
    bool full = true;
    for (int k = 0; k < K; ++k)
      if (sizes[k] == 0) full = false;
    if (!full) continue;
    best = std::min(best, assignment_sse(pts, labels, K));
  }
  return best;
}

// minimum disagreements over all K! permutations
inline int brute_force_miscluster(const std::vector<int>& tau, const std::vector<int>& tau_hat,
                                  int K) {
  std::vector<int> perm(K);
  std::iota(perm.begin(), perm.end(), 0);
  int best = (int)tau.size();
  do {
    int disagree = 0;
    for (size_t i = 0; i < tau.size(); ++i)
      if (tau[i] != perm[tau_hat[i]]) ++disagree;
    best = std::min(best, disagree);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace testhelpers
