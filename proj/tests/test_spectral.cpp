#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ase/bounds.hpp"
#include "ase/errors.hpp"
#include "ase/graph_models.hpp"
#include "ase/kernels.hpp"
#include "ase/spectral.hpp"
#include "helpers.hpp"

using namespace ase;
using namespace testhelpers;

namespace {

AdjacencySample complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return AdjacencySample::from_edges(n, 0, edges);
}

double orthonormality_defect(const Matrix& V) {
  Matrix G = multiply_tn(V, V);
  for (int i = 0; i < G.rows(); ++i) G(i, i) -= 1.0;
  return max_abs(G);
}

}  // namespace

TEST_CASE("identity matrix: both eigenvalues are one") {
  EigResult e = eig_sym(Matrix::identity(5), 2);
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(orthonormality_defect(e.vectors) <= 1e-10);
}

TEST_CASE("complete graph on four vertices") {
  AdjacencySample K4 = complete_graph(4);
  Matrix A(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) A(i, j) = K4.at(i, j) ? 1.0 : 0.0;
  EigResult e = eig_sym(A, 1);
  CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-12));
  for (int i = 0; i < 4; ++i)
    CHECK(std::fabs(e.vectors(i, 0)) == doctest::Approx(0.5).epsilon(1e-10));

  SpectralEmbedding emb = ase_embed(K4, 1);
  for (int i = 0; i < 4; ++i)
    CHECK(std::fabs(emb.Xhat(i, 0)) == doctest::Approx(std::sqrt(3.0) * 0.5).epsilon(1e-10));
}

TEST_CASE("random 6x6 matches a characteristic-polynomial root solve") {
  Matrix M = random_symmetric(6, 42, -2.0, 2.0);
  const std::vector<double> poly = char_poly(M);

  // sanity of the oracle itself: p(x) == det(xI - M) at a few points
  for (double x : {0.3, -1.1, 2.7}) {
    Matrix shifted = Matrix::identity(6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) shifted(i, j) = (i == j ? x : 0.0) - M(i, j);
    CHECK(eval_poly(poly, x) == doctest::Approx(determinant(shifted)).epsilon(1e-9));
  }

  double radius = 0.0;
  for (int i = 0; i < 6; ++i) {
    double s = 0.0;
    for (int j = 0; j < 6; ++j) s += std::fabs(M(i, j));
    radius = std::max(radius, s);
  }
  std::vector<double> roots = poly_roots_bisect(poly, -radius - 1.0, radius + 1.0);
  REQUIRE(roots.size() == 6);
  std::sort(roots.begin(), roots.end(), std::greater<double>());

  EigResult e = eig_sym(M, 6);
  for (int i = 0; i < 6; ++i) CHECK(e.values[i] == doctest::Approx(roots[i]).epsilon(1e-8));
}

TEST_CASE("eigen residual contract on a dense 50x50") {
  Matrix M = random_symmetric(50, 7);
  EigResult e = eig_sym(M, 5);
  std::vector<double> all;
  Matrix vecs;
  dense_eig_full(M, all, vecs);
  const double norm2 = std::max(std::fabs(all.front()), std::fabs(all.back()));
  CHECK(e.max_residual <= 1e-8 * norm2);
}

TEST_CASE("lanczos path agrees with the dense path") {
  Matrix M = random_symmetric(300, 21);
  EigOptions lanczos_opts;
  lanczos_opts.dense_threshold = 1;  // force the iterative path
  EigResult li = eig_sym(dense_op(M), 4, lanczos_opts);
  EigResult de = eig_sym(M, 4);
  const double scale = std::fabs(de.values[0]);
  for (int i = 0; i < 4; ++i)
    CHECK(li.values[i] == doctest::Approx(de.values[i]).epsilon(1e-9));
  CHECK(li.max_residual <= 1e-8 * scale);
  CHECK(orthonormality_defect(li.vectors) <= 1e-8);
}

TEST_CASE("lanczos deflates a rank-2 operator exactly") {
  ModelConfig cfg = example21_config();
  LatentPositionMatrix X = sbm_to_latent(instantiate(cfg, 400, 0));
  EigOptions opts;
  opts.dense_threshold = 1;
  EigResult e = eig_sym(gram_op(X.X), 2, opts);
  CHECK(e.values[0] == doctest::Approx(0.25 * 400).epsilon(1e-10));
  CHECK(e.values[1] == doctest::Approx(0.16 * 400).epsilon(1e-10));
  CHECK(e.max_residual <= 1e-9 * e.values[0]);
}

TEST_CASE("rank recovery: spectrum of P splits at the numerical rank") {
  ModelConfig cfg = example21_config();
  LatentPositionMatrix X = sbm_to_latent(instantiate(cfg, 120, 0));
  Matrix P = kernels::serial::gram(X.X);
  std::vector<double> values;
  Matrix vectors;
  dense_eig_full(P, values, vectors);  // ascending
  const double norm2 = values.back();
  int positive = 0;
  for (double v : values)
    if (v > 1e-8 * norm2) ++positive;
  CHECK(positive == 2);
  for (int i = 0; i < 118; ++i) CHECK(std::fabs(values[i]) <= 1e-8 * norm2);
}

TEST_CASE("noiseless embedding recovers the latent positions") {
  ModelConfig cfg = example21_config();
  LatentPositionMatrix X = sbm_to_latent(instantiate(cfg, 100, 0));
  SpectralEmbedding emb = ase_embed(gram_op(X.X), 2);
  AlignmentResult ar = align(emb.Xhat, X.X);
  CHECK(ar.residual_F <= 1e-8);
}

TEST_CASE("embedding error stays below the two-to-infinity bound across seeds") {
  // the bound is loose by orders of magnitude at this scale, so every seed
  // should satisfy it; require at least 95 percent
  ModelConfig cfg = example21_config();
  const int n = 1000;
  LatentPositionMatrix X = sbm_to_latent(instantiate(cfg, n, 0));
  ModelConstants mc = model_constants(X, {});
  const double beta = beta_bound(mc.d, n, 0.05, mc.Delta, mc.gamma).value;
  int ok = 0;
  const int trials = 200;
  for (int s = 0; s < trials; ++s) {
    AdjacencySample A = sample_adjacency(X, hash2(999, s));
    SpectralEmbedding emb = ase_embed(A, 2);
    if (align(emb.Xhat, X.X).residual_2inf <= beta) ++ok;
  }
  CHECK(ok >= (int)(0.95 * trials));
}

TEST_CASE("non-positive retained eigenvalue raises the degenerate error") {
  // K4 has spectrum {3, -1, -1, -1}: asking for d=2 must fail
  AdjacencySample K4 = complete_graph(4);
  CHECK_THROWS_AS(ase_embed(K4, 2), NonPositiveSpectrum);
  try {
    ase_embed(K4, 2);
  } catch (const NonPositiveSpectrum& e) {
    CHECK(e.index == 1);
    CHECK(e.value == doctest::Approx(-1.0).epsilon(1e-9));
  }
}

TEST_CASE("procrustes alignment") {
  const Matrix X = random_matrix(40, 3, 5);

  SUBCASE("identity") {
    AlignmentResult ar = align(X, X);
    CHECK(ar.residual_F <= 1e-12);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(ar.W(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
  }

  SUBCASE("orthogonal invariance") {
    Matrix Q = random_orthogonal(3, 8);
    AlignmentResult ar = align(multiply(X, Q), X);
    CHECK(ar.residual_F <= 1e-10);
    Matrix WtW = multiply_tn(ar.W, ar.W);
    for (int i = 0; i < 3; ++i) WtW(i, i) -= 1.0;
    CHECK(max_abs(WtW) <= 1e-10);
  }

  SUBCASE("perturbed rotation beats every random candidate") {
    Matrix Q = random_orthogonal(3, 9);
    Matrix Xq = multiply(X, Q);
    Matrix E = random_matrix(40, 3, 10);
    const double target = 0.01 / frobenius_norm(E);
    Matrix Xhat = Xq;
    for (int i = 0; i < 40; ++i)
      for (int j = 0; j < 3; ++j) Xhat(i, j) += target * E(i, j);

    AlignmentResult ar = align(Xhat, X);
    CHECK(ar.residual_F <= 0.01 + 1e-10);
    // optimality: no tested orthogonal W does better
    CHECK(ar.residual_F <= frobenius_norm(subtract(Xhat, multiply(X, Q))) + 1e-12);
    for (int t = 0; t < 100; ++t) {
      Matrix Wrand = random_orthogonal(3, hash2(77, t));
      CHECK(ar.residual_F <= frobenius_norm(subtract(Xhat, multiply(X, Wrand))) + 1e-12);
    }
  }

  SUBCASE("rank-deficient cross product still yields an orthogonal W") {
    Matrix Z(5, 2);  // zero matrix -> degenerate X^T Xhat
    AlignmentResult ar = align(Z, Z);
    Matrix WtW = multiply_tn(ar.W, ar.W);
    for (int i = 0; i < 2; ++i) WtW(i, i) -= 1.0;
    CHECK(max_abs(WtW) <= 1e-10);
  }
}

TEST_CASE("sphere projection") {
  SUBCASE("rescales a single row") {
    Matrix M(1, 2);
    M(0, 0) = 3.0;
    M(0, 1) = 4.0;
    Matrix Y = project_sphere(M);
    CHECK(Y(0, 0) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(Y(0, 1) == doctest::Approx(0.8).epsilon(1e-12));
  }

  SUBCASE("unit rows are left unchanged") {
    Matrix M(2, 2);
    M(0, 0) = 1.0 / 5.0;
    M(0, 1) = 2.0 * std::sqrt(6.0) / 5.0;
    M(1, 0) = 2.0 * std::sqrt(6.0) / 5.0;
    M(1, 1) = 1.0 / 5.0;
    CHECK(dot(M.row(0), M.row(0), 2) == doctest::Approx(1.0).epsilon(1e-15));
    Matrix Y = project_sphere(M);
    CHECK(max_abs(subtract(Y, M)) <= 1e-12);
  }

  SUBCASE("idempotent") {
    Matrix M = random_matrix(30, 3, 3, 0.1, 2.0);
    Matrix Y = project_sphere(M);
    CHECK(max_abs(subtract(project_sphere(Y), Y)) <= 1e-12);
  }

  SUBCASE("zero rows are an error") {
    Matrix M(2, 2);
    M(0, 0) = 1.0;
    CHECK_THROWS_AS(project_sphere(M), ZeroRow);
  }

  SUBCASE("projected errors obey the 2/c_min inflation across sampled graphs") {
    ModelConfig cfg = fig2_config();
    for (int s = 0; s < 20; ++s) {
      BlockModelSpec spec = instantiate(cfg, 200, hash2(5, s));
      LatentPositionMatrix X = sbm_to_latent(spec);
      AdjacencySample A = sample_adjacency(X, hash2(6, s));
      SpectralEmbedding emb = ase_embed(A, 2);
      AlignmentResult ar = align(emb.Xhat, X.X);
      const double c_min =
          *std::min_element(spec.degree_factors.begin(), spec.degree_factors.end());
      Matrix Yhat = project_sphere(emb.Xhat);
      Matrix Ytil = multiply(project_sphere(X.X), ar.W);
      CHECK(two_to_infty_norm(subtract(Yhat, Ytil)) <= 2.0 * ar.residual_2inf / c_min + 1e-12);
    }
  }
}

TEST_CASE("two-to-infinity norm") {
  CHECK(two_to_infty_norm(Matrix(4, 3)) == 0.0);
  Matrix M(2, 2);
  M(0, 0) = 3.0;
  M(0, 1) = 4.0;
  M(1, 0) = 1.0;
  CHECK(two_to_infty_norm(M) == doctest::Approx(5.0));

  Matrix R = random_matrix(50, 3, 13);
  double oracle = 0.0;
  for (int i = 0; i < 50; ++i) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j) s += R(i, j) * R(i, j);
    oracle = std::max(oracle, std::sqrt(s));
  }
  CHECK(two_to_infty_norm(R) == doctest::Approx(oracle).epsilon(1e-15));

  // norm chain against the Frobenius norm
  for (int t = 0; t < 20; ++t) {
    Matrix Q = random_matrix(17, 4, hash2(3, t));
    const double t2i = two_to_infty_norm(Q);
    const double f = frobenius_norm(Q);
    CHECK(t2i <= f + 1e-12);
    CHECK(f <= std::sqrt(17.0) * t2i + 1e-12);
  }
}

TEST_CASE("embedding gram matrix is stable under a different start vector") {
  ModelConfig cfg = example21_config();
  LatentPositionMatrix X = sbm_to_latent(instantiate(cfg, 800, 0));
  AdjacencySample A = sample_adjacency(X, 17);
  EigOptions o1, o2;
  o1.dense_threshold = o2.dense_threshold = 1;
  o2.start_seed = 0xdeadbeefULL;
  SpectralEmbedding e1 = ase_embed(A, 2, o1);
  SpectralEmbedding e2 = ase_embed(A, 2, o2);
  Matrix G1 = kernels::gram(e1.Xhat);
  Matrix G2 = kernels::gram(e2.Xhat);
  CHECK(max_abs(subtract(G1, G2)) <= 1e-10 * std::max(1.0, max_abs(G1)));
}
