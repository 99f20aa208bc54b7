#pragma once
#include <cstdint>
#include <utility>
#include <vector>

#include "ase/matrix.hpp"

namespace ase {

struct ClusteringResult {
  Matrix centroids;           // K x d
  std::vector<int> labels;    // 0-based assignment per row
  double sse = 0.0;           // ||C - points||_F^2 with C_i = centroid of labels[i]
  int restarts_used = 0;
  bool converged = false;     // best restart reached the relative-SSE stop
  bool tied_optimum = false;  // another restart landed within 1e-12 of the best SSE
  std::vector<double> sse_trace;  // recorded Lloyd SSE values of the best restart
};

// k-means++ initialization, Lloyd refinement to relative SSE change < 1e-10
// (or max_iters), best of `restarts` runs. Deterministic given (seed); the
// restarts may execute in parallel without changing the result.
ClusteringResult mse_cluster(const Matrix& points, int K, int restarts, uint64_t seed,
                             int max_iters = 500);

struct MisclusterReport {
  int count = 0;                    // disagreements after the optimal relabeling
  std::vector<int> permutation;     // permutation[h] = true label matched to predicted h
  std::vector<long long> confusion; // K x K row-major; [t*K + h] = #{tau=t, tau_hat=h}
  int K = 0;
};

// Exact minimum over label permutations via optimal assignment on the
// agreement table.
MisclusterReport misclustering_count(const std::vector<int>& tau,
                                     const std::vector<int>& tau_hat, int K);

// Minimum-cost assignment for a dense square cost matrix (row-major),
// shortest augmenting paths. Returns total cost and the column of each row.
std::pair<double, std::vector<int>> min_cost_assignment(const std::vector<double>& cost, int K);

struct PhiLoss {
  enum class Kind { square, abs, power };
  Kind kind = Kind::square;
  double p = 2.0;

  static PhiLoss square() { return {}; }
  static PhiLoss abs() { return {Kind::abs, 1.0}; }
  static PhiLoss power(double exponent);
  double operator()(double r) const;
};

// (1/n) sum_i phi(distance of x_i to its nearest center).
double phi_objective(const Matrix& points, const Matrix& centers, const PhiLoss& phi = {});

}  // namespace ase
