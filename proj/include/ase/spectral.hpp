#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "ase/graph_models.hpp"
#include "ase/matrix.hpp"

namespace ase {

// Matrix-free symmetric operator.
struct SymOp {
  int n = 0;
  std::function<void(const double*, double*)> apply;
};

SymOp dense_op(const Matrix& M);
SymOp gram_op(const Matrix& X);  // x -> X (X^T x), i.e. P = X X^T without forming P
SymOp adjacency_op(const AdjacencySample& A);
SymOp diff_op(const SymOp& A, const Matrix& X);  // x -> A x - X (X^T x)

struct EigOptions {
  // Dense Householder+QL below this size (or when many pairs are wanted);
  // restarted Lanczos with full reorthogonalization above it.
  int dense_threshold = 256;
  double tol = 1e-8;      // per-pair residual, relative to the spectral scale
  int basis = 0;          // Lanczos basis cap, 0 = auto
  int max_restarts = 1000;
  uint64_t start_seed = 0xa5e5eedULL;  // deterministic start vector
};

struct EigResult {
  std::vector<double> values;  // descending
  Matrix vectors;              // n x k, orthonormal columns, canonical signs
  double max_residual = 0.0;   // max ||Mv - lambda v|| over the returned pairs
  long matvecs = 0;
};

// k algebraically largest eigenpairs.
EigResult eig_sym(const Matrix& M, int k, const EigOptions& opts = {});
EigResult eig_sym(const SymOp& op, int k, const EigOptions& opts = {});

// Full dense spectrum (ascending) with eigenvectors in the columns of `vectors`.
void dense_eig_full(const Matrix& M, std::vector<double>& values, Matrix& vectors);

// Eigenvalues (ascending) of a symmetric tridiagonal matrix; `vectors`
// optional. alpha = diagonal, beta = subdiagonal (size n-1).
void tridiag_eig(std::vector<double> alpha, std::vector<double> beta,
                 std::vector<double>& values, Matrix* vectors);

// ||M||_2 of a symmetric operator via Lanczos extreme Ritz values with a
// stagnation stop; accurate to ~rel_tol which is plenty for bound checks.
double spectral_norm_sym(const SymOp& op, double rel_tol = 1e-7, int max_basis = 400,
                         uint64_t seed = 0x5ba5eULL);

struct SpectralEmbedding {
  Matrix Xhat;                     // Vhat * diag(eigenvalues)^{1/2}
  std::vector<double> eigenvalues; // descending
  Matrix Vhat;                     // orthonormal columns
};

// Embedding from the d algebraically largest eigenpairs. Throws
// NonPositiveSpectrum if any retained eigenvalue fails to be positive.
SpectralEmbedding ase_embed(const AdjacencySample& A, int d, const EigOptions& opts = {});
SpectralEmbedding ase_embed(const Matrix& sym, int d, const EigOptions& opts = {});
SpectralEmbedding ase_embed(const SymOp& op, int d, const EigOptions& opts = {});

struct AlignmentResult {
  Matrix W;              // d x d orthogonal
  double residual_2inf;  // ||Xhat - X W||_{2->inf}
  double residual_F;
};

// Orthogonal Procrustes: W minimizes ||Xhat - X W||_F over orthogonal W,
// via the SVD of X^T Xhat.
AlignmentResult align(const Matrix& Xhat, const Matrix& X);

// Orthogonal polar factor of a small square matrix (the U V^T of its SVD),
// with a canonical completion when the matrix is rank deficient.
Matrix polar_orthogonal(const Matrix& M);

// Row-normalize onto the unit sphere. Throws ZeroRow for rows with norm <= 1e-12.
Matrix project_sphere(const Matrix& Xhat);

// max_i ||M_i||_2
double two_to_infty_norm(const Matrix& M);

}  // namespace ase
