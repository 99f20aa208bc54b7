#include "ase/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ase/errors.hpp"
#include "ase/kernels.hpp"

namespace ase {

EigResult eig_sym_lanczos(const SymOp& op, int k, const EigOptions& opts);  // lanczos.cpp

SymOp dense_op(const Matrix& M) {
  const Matrix* p = &M;
  return {M.rows(), [p](const double* x, double* y) { kernels::sym_matvec(*p, x, y); }};
}

SymOp gram_op(const Matrix& X) {
  const Matrix* p = &X;
  return {X.rows(), [p](const double* x, double* y) {
            const int n = p->rows(), d = p->cols();
            std::vector<double> t(d, 0.0);
            for (int i = 0; i < n; ++i) {
              const double* xi = p->row(i);
              for (int j = 0; j < d; ++j) t[j] += xi[j] * x[i];
            }
#pragma omp parallel for schedule(static)
            for (int i = 0; i < n; ++i) y[i] = dot(p->row(i), t.data(), d);
          }};
}

SymOp adjacency_op(const AdjacencySample& A) {
  const AdjacencySample* p = &A;
  return {A.n(), [p](const double* x, double* y) { p->matvec(x, y); }};
}

SymOp diff_op(const SymOp& A, const Matrix& X) {
  const Matrix* p = &X;
  auto apply_a = A.apply;
  return {A.n, [p, apply_a](const double* x, double* y) {
            apply_a(x, y);
            const int n = p->rows(), d = p->cols();
            std::vector<double> t(d, 0.0);
            for (int i = 0; i < n; ++i) {
              const double* xi = p->row(i);
              for (int j = 0; j < d; ++j) t[j] += xi[j] * x[i];
            }
            for (int i = 0; i < n; ++i) y[i] -= dot(p->row(i), t.data(), d);
          }};
}

namespace {

void canonical_sign_col(Matrix& V, int c) {
  for (int i = 0; i < V.rows(); ++i) {
    if (std::fabs(V(i, c)) > 1e-300) {
      if (V(i, c) < 0.0)
        for (int j = 0; j < V.rows(); ++j) V(j, c) = -V(j, c);
      return;
    }
  }
}

// Descending selection from a full dense decomposition; ties within 1e-10
// relative are ordered by the sign-canonicalized eigenvectors so the output
// is deterministic.
EigResult select_top_dense(const Matrix& M, std::vector<double>& values, Matrix& vectors,
                           int k) {
  const int n = (int)values.size();
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = n - 1 - i;  // ascending -> descending
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::fabs(v));
  for (int c = 0; c < n; ++c) canonical_sign_col(vectors, c);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (std::fabs(values[a] - values[b]) > 1e-10 * std::max(vmax, 1e-300))
      return values[a] > values[b];
    for (int i = 0; i < vectors.rows(); ++i) {
      if (vectors(i, a) != vectors(i, b)) return vectors(i, a) > vectors(i, b);
    }
    return false;
  });

  EigResult res;
  res.vectors = Matrix(M.rows(), k);
  for (int c = 0; c < k; ++c) {
    res.values.push_back(values[order[c]]);
    for (int i = 0; i < M.rows(); ++i) res.vectors(i, c) = vectors(i, order[c]);
  }
  // direct residuals for the returned pairs
  std::vector<double> x(M.rows()), y(M.rows());
  for (int c = 0; c < k; ++c) {
    for (int i = 0; i < M.rows(); ++i) x[i] = res.vectors(i, c);
    kernels::sym_matvec(M, x.data(), y.data());
    double r2 = 0.0;
    for (int i = 0; i < M.rows(); ++i) {
      const double r = y[i] - res.values[c] * x[i];
      r2 += r * r;
    }
    res.max_residual = std::max(res.max_residual, std::sqrt(r2));
  }
  res.matvecs = k;
  return res;
}

}  // namespace

EigResult eig_sym(const Matrix& M, int k, const EigOptions& opts) {
  const int n = M.rows();
  if (M.cols() != n) throw ValidationError("eig_sym: matrix must be square");
  if (k < 1 || k > n) throw ValidationError("eig_sym: need 1 <= d <= n");
  if (n <= opts.dense_threshold || k > n / 2) {
    std::vector<double> values;
    Matrix vectors;
    dense_eig_full(M, values, vectors);
    return select_top_dense(M, values, vectors, k);
  }
  return eig_sym_lanczos(dense_op(M), k, opts);
}

EigResult eig_sym(const SymOp& op, int k, const EigOptions& opts) {
  if (k < 1 || k > op.n) throw ValidationError("eig_sym: need 1 <= d <= n");
  if (op.n <= std::min(opts.dense_threshold, 128)) {
    // materialize once; small n
    const int n = op.n;
    Matrix M(n, n);
    std::vector<double> e(n, 0.0), y(n);
    for (int j = 0; j < n; ++j) {
      e[j] = 1.0;
      op.apply(e.data(), y.data());
      e[j] = 0.0;
      for (int i = 0; i < n; ++i) M(i, j) = y[i];
    }
    // enforce exact symmetry against fp drift in the operator
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) M(i, j) = M(j, i) = 0.5 * (M(i, j) + M(j, i));
    std::vector<double> values;
    Matrix vectors;
    dense_eig_full(M, values, vectors);
    return select_top_dense(M, values, vectors, k);
  }
  return eig_sym_lanczos(op, k, opts);
}

SpectralEmbedding ase_embed(const SymOp& op, int d, const EigOptions& opts) {
  EigResult eig = eig_sym(op, d, opts);
  for (int i = 0; i < d; ++i)
    if (eig.values[i] <= 0.0) throw NonPositiveSpectrum(i, eig.values[i]);
  SpectralEmbedding emb;
  emb.eigenvalues = eig.values;
  emb.Vhat = eig.vectors;
  emb.Xhat = Matrix(op.n, d);
  for (int j = 0; j < d; ++j) {
    const double s = std::sqrt(eig.values[j]);
    for (int i = 0; i < op.n; ++i) emb.Xhat(i, j) = emb.Vhat(i, j) * s;
  }
  return emb;
}

SpectralEmbedding ase_embed(const AdjacencySample& A, int d, const EigOptions& opts) {
  if (d > A.n()) throw ValidationError("ase: d must not exceed n");
  return ase_embed(adjacency_op(A), d, opts);
}

SpectralEmbedding ase_embed(const Matrix& sym, int d, const EigOptions& opts) {
  if (d > sym.rows()) throw ValidationError("ase: d must not exceed n");
  return ase_embed(dense_op(sym), d, opts);
}

Matrix polar_orthogonal(const Matrix& M) {
  const int d = M.rows();
  if (M.cols() != d) throw ValidationError("polar_orthogonal: matrix must be square");
  Matrix MtM = multiply_tn(M, M);
  std::vector<double> lam;
  Matrix Q;
  dense_eig_full(MtM, lam, Q);  // ascending

  // columns in descending singular-value order
  std::vector<double> sigma(d);
  Matrix V(d, d);
  for (int c = 0; c < d; ++c) {
    const int src = d - 1 - c;
    sigma[c] = std::sqrt(std::max(lam[src], 0.0));
    for (int i = 0; i < d; ++i) V(i, c) = Q(i, src);
  }
  const double smax = sigma.empty() ? 0.0 : sigma[0];

  Matrix U(d, d);
  std::vector<bool> filled(d, false);
  for (int c = 0; c < d; ++c) {
    if (sigma[c] > 1e-13 * std::max(smax, 1e-300)) {
      for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) s += M(i, k) * V(k, c);
        U(i, c) = s / sigma[c];
      }
      filled[c] = true;
    }
  }
  // canonical completion for the null directions
  for (int c = 0; c < d; ++c) {
    if (filled[c]) continue;
    int best = -1;
    double best_norm = 0.0;
    std::vector<double> best_vec(d), cand(d);
    for (int e = 0; e < d; ++e) {
      std::fill(cand.begin(), cand.end(), 0.0);
      cand[e] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (int c2 = 0; c2 < d; ++c2) {
          if (c2 == c || !filled[c2]) continue;
          double proj = 0.0;
          for (int i = 0; i < d; ++i) proj += U(i, c2) * cand[i];
          for (int i = 0; i < d; ++i) cand[i] -= proj * U(i, c2);
        }
      const double nn = row_norm(cand.data(), d);
      if (nn > best_norm) {
        best_norm = nn;
        best = e;
        best_vec = cand;
      }
    }
    (void)best;
    for (int i = 0; i < d; ++i) U(i, c) = best_vec[i] / best_norm;
    filled[c] = true;
  }
  // modified Gram-Schmidt polish so W^T W = I to machine precision
  for (int c = 0; c < d; ++c) {
    for (int pass = 0; pass < 2; ++pass)
      for (int c2 = 0; c2 < c; ++c2) {
        double proj = 0.0;
        for (int i = 0; i < d; ++i) proj += U(i, c2) * U(i, c);
        for (int i = 0; i < d; ++i) U(i, c) -= proj * U(i, c2);
      }
    double nn = 0.0;
    for (int i = 0; i < d; ++i) nn += U(i, c) * U(i, c);
    nn = std::sqrt(nn);
    for (int i = 0; i < d; ++i) U(i, c) /= nn;
  }
  return multiply(U, transpose(V));
}

AlignmentResult align(const Matrix& Xhat, const Matrix& X) {
  if (Xhat.rows() != X.rows() || Xhat.cols() != X.cols())
    throw ValidationError("align: shapes must match");
  AlignmentResult res;
  res.W = polar_orthogonal(multiply_tn(X, Xhat));
  Matrix R = subtract(Xhat, multiply(X, res.W));
  res.residual_2inf = two_to_infty_norm(R);
  res.residual_F = frobenius_norm(R);
  return res;
}

Matrix project_sphere(const Matrix& Xhat) {
  Matrix Y(Xhat.rows(), Xhat.cols());
  for (int i = 0; i < Xhat.rows(); ++i) {
    const double nn = row_norm(Xhat.row(i), Xhat.cols());
    if (nn <= 1e-12) throw ZeroRow(i);
    for (int j = 0; j < Xhat.cols(); ++j) Y(i, j) = Xhat(i, j) / nn;
  }
  return Y;
}

double two_to_infty_norm(const Matrix& M) {
  double best = 0.0;
  for (int i = 0; i < M.rows(); ++i) best = std::max(best, row_norm(M.row(i), M.cols()));
  return best;
}

}  // namespace ase
