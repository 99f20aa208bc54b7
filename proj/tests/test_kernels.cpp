#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include "ase/graph_models.hpp"
#include "ase/kernels.hpp"
#include "ase/matrix.hpp"
#include "helpers.hpp"

using namespace ase;
using testhelpers::random_matrix;
using testhelpers::random_symmetric;

TEST_CASE("matrix multiply basics") {
  Matrix A(2, 3), B(3, 2);
  int v = 1;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = v++;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) B(i, j) = v++;
  Matrix C = multiply(A, B);
  CHECK(C(0, 0) == doctest::Approx(1 * 7 + 2 * 9 + 3 * 11));
  CHECK(C(1, 1) == doctest::Approx(4 * 8 + 5 * 10 + 6 * 12));
  Matrix At = transpose(A);
  Matrix C2 = multiply_tn(At, B);  // (A^T)^T B = A B
  CHECK(max_abs(subtract(C, C2)) == 0.0);
}

TEST_CASE("omp kernels match the serial reference bit for bit") {
  const Matrix X = random_matrix(173, 3, 99);
  const Matrix M = random_symmetric(141, 7);
  const Matrix pts = random_matrix(400, 3, 11);
  const Matrix cent = random_matrix(5, 3, 12);

  for (int threads : {1, 2, 5}) {
    omp_set_num_threads(threads);
    CAPTURE(threads);

    Matrix P1 = kernels::gram(X);
    Matrix P2 = kernels::serial::gram(X);
    CHECK(P1 == P2);

    std::vector<double> x(M.rows()), y1(M.rows()), y2(M.rows());
    for (int i = 0; i < M.rows(); ++i) x[i] = std::sin(i + 1.0);
    kernels::sym_matvec(M, x.data(), y1.data());
    kernels::serial::sym_matvec(M, x.data(), y2.data());
    CHECK(y1 == y2);

    std::vector<int> l1(pts.rows()), l2(pts.rows());
    std::vector<double> d1(pts.rows()), d2(pts.rows());
    kernels::assign_nearest(pts, cent, l1.data(), d1.data());
    kernels::serial::assign_nearest(pts, cent, l2.data(), d2.data());
    CHECK(l1 == l2);
    CHECK(d1 == d2);
  }
  omp_set_num_threads(2);
}

TEST_CASE("parallel and serial adjacency sampling agree") {
  ModelConfig cfg = example21_config();
  LatentPositionMatrix X = sbm_to_latent(instantiate(cfg, 300, 0));
  const int wpr = (300 + 63) / 64;
  std::vector<uint64_t> bits_par(300 * wpr, 0), bits_ser(300 * wpr, 0);
  CHECK(kernels::sample_bits(X.X, 1234, wpr, bits_par.data()) == -1);
  CHECK(kernels::serial::sample_bits(X.X, 1234, wpr, bits_ser.data()) == -1);
  CHECK(bits_par == bits_ser);
}

TEST_CASE("bitset and csr matvec agree on the same graph") {
  ModelConfig cfg = example21_config();
  LatentPositionMatrix X = sbm_to_latent(instantiate(cfg, 500, 0));
  AdjacencySample Ab = sample_adjacency(X, 99, AdjacencyStorage::bitset);
  AdjacencySample Ac = sample_adjacency(X, 99, AdjacencyStorage::csr);
  CHECK(Ab.uses_bitset());
  CHECK_FALSE(Ac.uses_bitset());
  CHECK(Ab.edge_count() == Ac.edge_count());
  for (int i : {0, 3, 250, 499})
    for (int j : {1, 5, 128, 498}) CHECK(Ab.at(i, j) == Ac.at(i, j));

  std::vector<double> x(500), y1(500), y2(500), y3(500);
  for (int i = 0; i < 500; ++i) x[i] = std::cos(0.1 * i);
  Ab.matvec(x.data(), y1.data());
  Ac.matvec(x.data(), y2.data());
  Ab.matvec_serial(x.data(), y3.data());
  CHECK(y1 == y2);
  CHECK(y1 == y3);
}
