#include "ase/kernels.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <limits>

#include "ase/rng.hpp"

namespace ase::kernels {

static constexpr double kPairTol = 1e-12;

double edge_probability(const double* xi, const double* xj, int d) {
  double p = dot(xi, xj, d);
  if (p < -kPairTol || p > 1.0 + kPairTol) return std::numeric_limits<double>::quiet_NaN();
  if (p < 0.0) p = 0.0;
  if (p > 1.0) p = 1.0;
  return p;
}

void sym_matvec(const Matrix& M, const double* x, double* y) {
  const int n = M.rows();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) y[i] = dot(M.row(i), x, n);
}

void bit_matvec(int n, int words_per_row, const uint64_t* bits, const double* x, double* y) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const uint64_t* row = bits + size_t(i) * words_per_row;
    double acc = 0.0;
    for (int w = 0; w < words_per_row; ++w) {
      uint64_t word = row[w];
      const int base = w << 6;
      while (word) {
        acc += x[base + std::countr_zero(word)];
        word &= word - 1;
      }
    }
    y[i] = acc;
  }
}

void csr_matvec(int n, const uint64_t* offsets, const uint32_t* cols, const double* x,
                double* y) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (uint64_t k = offsets[i]; k < offsets[i + 1]; ++k) acc += x[cols[k]];
    y[i] = acc;
  }
}

Matrix gram(const Matrix& X) {
  const int n = X.rows(), d = X.cols();
  Matrix P(n, n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const double* xi = X.row(i);
    double* pi = P.row(i);
    for (int j = 0; j < n; ++j) pi[j] = dot(xi, X.row(j), d);
  }
  return P;
}

void assign_nearest(const Matrix& points, const Matrix& centroids, int* labels, double* dist2) {
  const int n = points.rows(), d = points.cols(), k = centroids.rows();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const double* p = points.row(i);
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int c = 0; c < k; ++c) {
      const double* q = centroids.row(c);
      double s = 0.0;
      for (int t = 0; t < d; ++t) {
        const double diff = p[t] - q[t];
        s += diff * diff;
      }
      if (s < best) {
        best = s;
        arg = c;
      }
    }
    labels[i] = arg;
    dist2[i] = best;
  }
}

long long sample_bits(const Matrix& X, uint64_t seed, int words_per_row, uint64_t* bits) {
  const int n = X.rows(), d = X.cols();
  std::atomic<long long> first_bad{-1};
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const double* xi = X.row(i);
    uint64_t* row = bits + size_t(i) * words_per_row;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double p = edge_probability(xi, X.row(j), d);
      if (std::isnan(p)) {
        // remember the lexicographically first offending pair
        const long long encoded = ((long long)std::min(i, j) << 32) | (unsigned)std::max(i, j);
        long long cur = first_bad.load();
        while ((cur < 0 || encoded < cur) && !first_bad.compare_exchange_weak(cur, encoded)) {
        }
        continue;
      }
      const int lo = std::min(i, j), hi = std::max(i, j);
      if (pair_uniform(seed, lo, hi) < p) row[j >> 6] |= uint64_t(1) << (j & 63);
    }
  }
  return first_bad.load();
}

namespace serial {

void sym_matvec(const Matrix& M, const double* x, double* y) {
  const int n = M.rows();
  for (int i = 0; i < n; ++i) y[i] = dot(M.row(i), x, n);
}

void bit_matvec(int n, int words_per_row, const uint64_t* bits, const double* x, double* y) {
  for (int i = 0; i < n; ++i) {
    const uint64_t* row = bits + size_t(i) * words_per_row;
    double acc = 0.0;
    for (int w = 0; w < words_per_row; ++w) {
      uint64_t word = row[w];
      const int base = w << 6;
      while (word) {
        acc += x[base + std::countr_zero(word)];
        word &= word - 1;
      }
    }
    y[i] = acc;
  }
}

void csr_matvec(int n, const uint64_t* offsets, const uint32_t* cols, const double* x,
                double* y) {
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (uint64_t k = offsets[i]; k < offsets[i + 1]; ++k) acc += x[cols[k]];
    y[i] = acc;
  }
}

Matrix gram(const Matrix& X) {
  const int n = X.rows(), d = X.cols();
  Matrix P(n, n);
  for (int i = 0; i < n; ++i) {
    const double* xi = X.row(i);
    double* pi = P.row(i);
    for (int j = 0; j < n; ++j) pi[j] = dot(xi, X.row(j), d);
  }
  return P;
}

void assign_nearest(const Matrix& points, const Matrix& centroids, int* labels, double* dist2) {
  const int n = points.rows(), d = points.cols(), k = centroids.rows();
  for (int i = 0; i < n; ++i) {
    const double* p = points.row(i);
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int c = 0; c < k; ++c) {
      const double* q = centroids.row(c);
      double s = 0.0;
      for (int t = 0; t < d; ++t) {
        const double diff = p[t] - q[t];
        s += diff * diff;
      }
      if (s < best) {
        best = s;
        arg = c;
      }
    }
    labels[i] = arg;
    dist2[i] = best;
  }
}

long long sample_bits(const Matrix& X, uint64_t seed, int words_per_row, uint64_t* bits) {
  const int n = X.rows(), d = X.cols();
  for (int i = 0; i < n; ++i) {
    const double* xi = X.row(i);
    for (int j = i + 1; j < n; ++j) {
      const double p = edge_probability(xi, X.row(j), d);
      if (std::isnan(p)) return ((long long)i << 32) | (unsigned)j;
      if (pair_uniform(seed, i, j) < p) {
        bits[size_t(i) * words_per_row + (j >> 6)] |= uint64_t(1) << (j & 63);
        bits[size_t(j) * words_per_row + (i >> 6)] |= uint64_t(1) << (i & 63);
      }
    }
  }
  return -1;
}

}  // namespace serial
}  // namespace ase::kernels
