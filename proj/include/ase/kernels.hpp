#pragma once
#include <cstdint>
#include <vector>

#include "ase/matrix.hpp"

namespace ase::kernels {

// Data-parallel kernels. The OpenMP versions parallelize over independent
// output elements only (each element is produced by a serial inner loop), so
// results are bitwise identical for any thread count. The serial:: twins are
// the reference implementations; tests assert exact equality and the
// benchmark target compares throughput.

// y = M x for dense symmetric M (full storage)
void sym_matvec(const Matrix& M, const double* x, double* y);

// y = A x for a bit-packed {0,1} matrix with `words_per_row` 64-bit words per row
void bit_matvec(int n, int words_per_row, const uint64_t* bits, const double* x, double* y);

// y = A x for a CSR {0,1} matrix
void csr_matvec(int n, const uint64_t* offsets, const uint32_t* cols, const double* x,
                double* y);

// P = X X^T (dense output; intended for moderate n)
Matrix gram(const Matrix& X);

// Nearest-centroid assignment; ties go to the lowest centroid index.
void assign_nearest(const Matrix& points, const Matrix& centroids, int* labels, double* dist2);

// Bernoulli adjacency sampling into bit-packed rows. Each row i is filled
// independently, drawing pair (min(i,j), max(i,j)) from the stateless
// per-pair stream, so the parallel fill is race-free and symmetric by
// construction. Entries X_i.X_j outside [-eps, 1+eps] are reported via the
// return value (lexicographically first offending pair, or -1 if clean);
// entries inside the tolerance are clamped to [0,1].
long long sample_bits(const Matrix& X, uint64_t seed, int words_per_row, uint64_t* bits);

namespace serial {
void sym_matvec(const Matrix& M, const double* x, double* y);
void bit_matvec(int n, int words_per_row, const uint64_t* bits, const double* x, double* y);
void csr_matvec(int n, const uint64_t* offsets, const uint32_t* cols, const double* x,
                double* y);
Matrix gram(const Matrix& X);
void assign_nearest(const Matrix& points, const Matrix& centroids, int* labels, double* dist2);
// Upper-triangle single pass writing both mirror bits.
long long sample_bits(const Matrix& X, uint64_t seed, int words_per_row, uint64_t* bits);
}  // namespace serial

// Shared helper: clamped edge probability for a vertex pair, or NaN when the
// inner product is outside the [-1e-12, 1+1e-12] tolerance.
double edge_probability(const double* xi, const double* xj, int d);

}  // namespace ase::kernels
