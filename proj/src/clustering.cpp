#include "ase/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ase/errors.hpp"
#include "ase/kernels.hpp"
#include "ase/rng.hpp"

namespace ase {

namespace {

int count_distinct_rows(const Matrix& points) {
  const int n = points.rows(), d = points.cols();
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  auto less = [&](int a, int b) {
    const double* x = points.row(a);
    const double* y = points.row(b);
    for (int j = 0; j < d; ++j) {
      if (x[j] < y[j]) return true;
      if (x[j] > y[j]) return false;
    }
    return false;
  };
  std::sort(order.begin(), order.end(), less);
  int distinct = n == 0 ? 0 : 1;
  for (int i = 1; i < n; ++i)
    if (less(order[i - 1], order[i])) ++distinct;
  return distinct;
}

double point_dist2(const double* x, const double* y, int d) {
  double s = 0.0;
  for (int j = 0; j < d; ++j) {
    const double diff = x[j] - y[j];
    s += diff * diff;
  }
  return s;
}

struct LloydRun {
  Matrix centroids;
  std::vector<int> labels;
  double sse = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::vector<double> trace;
};

LloydRun run_one_restart(const Matrix& points, int K, uint64_t restart_seed, int max_iters) {
  const int n = points.rows(), d = points.cols();
  SplitMix64 rng(restart_seed);
  LloydRun run;
  run.centroids = Matrix(K, d);
  run.labels.assign(n, 0);

  // k-means++ seeding
  std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
  {
    const int first = (int)rng.below((uint64_t)n);
    for (int j = 0; j < d; ++j) run.centroids(0, j) = points(first, j);
    for (int c = 1; c < K; ++c) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d2 = point_dist2(points.row(i), run.centroids.row(c - 1), d);
        if (d2 < dist2[i]) dist2[i] = d2;
        total += dist2[i];
      }
      int pick = -1;
      if (total > 0.0) {
        const double u = rng.uniform() * total;
        double cum = 0.0;
        for (int i = 0; i < n; ++i) {
          cum += dist2[i];
          if (u < cum) {
            pick = i;
            break;
          }
        }
        if (pick < 0) {  // u landed on the accumulated rounding tail
          for (int i = n - 1; i >= 0; --i)
            if (dist2[i] > 0.0) {
              pick = i;
              break;
            }
        }
      }
      if (pick < 0) pick = (int)rng.below((uint64_t)n);
      for (int j = 0; j < d; ++j) run.centroids(c, j) = points(pick, j);
    }
  }

  std::vector<double> best_d2(n);
  std::vector<int> sizes(K);
  double prev_sse = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iters; ++iter) {
    kernels::assign_nearest(points, run.centroids, run.labels.data(), best_d2.data());

    // repair empty clusters: move them onto the farthest points of clusters
    // that can spare one; deterministic order
    std::fill(sizes.begin(), sizes.end(), 0);
    for (int i = 0; i < n; ++i) ++sizes[run.labels[i]];
    for (int c = 0; c < K; ++c) {
      if (sizes[c] > 0) continue;
      int far = -1;
      double far_d2 = -1.0;
      for (int i = 0; i < n; ++i) {
        if (sizes[run.labels[i]] < 2) continue;
        if (best_d2[i] > far_d2) {
          far_d2 = best_d2[i];
          far = i;
        }
      }
      if (far < 0) continue;  // cannot happen when K <= distinct rows
      --sizes[run.labels[far]];
      run.labels[far] = c;
      sizes[c] = 1;
      best_d2[far] = 0.0;
    }

    // means in fixed point order
    Matrix sums(K, d);
    for (int i = 0; i < n; ++i) {
      const double* p = points.row(i);
      double* s = sums.row(run.labels[i]);
      for (int j = 0; j < d; ++j) s[j] += p[j];
    }
    for (int c = 0; c < K; ++c)
      for (int j = 0; j < d; ++j) run.centroids(c, j) = sums(c, j) / sizes[c];

    double sse = 0.0;
    for (int i = 0; i < n; ++i)
      sse += point_dist2(points.row(i), run.centroids.row(run.labels[i]), d);

    run.sse = sse;  // always matches the returned labels/centroids
    if (run.trace.empty() || sse < run.trace.back()) run.trace.push_back(sse);
    if (sse == 0.0 || (std::isfinite(prev_sse) && prev_sse - sse <= 1e-10 * prev_sse)) {
      run.converged = true;
      break;
    }
    prev_sse = sse;
  }
  return run;
}

}  // namespace

ClusteringResult mse_cluster(const Matrix& points, int K, int restarts, uint64_t seed,
                             int max_iters) {
  const int n = points.rows();
  if (n < 1) throw ValidationError("mse_cluster: no points");
  if (K < 1) throw ValidationError("mse_cluster: K must be >= 1");
  if (restarts < 1) throw ValidationError("mse_cluster: restarts must be >= 1");
  if (max_iters < 1) throw ValidationError("mse_cluster: max_iters must be >= 1");
  const int distinct = count_distinct_rows(points);
  if (K > distinct) throw TooFewDistinctRows(distinct, K);

  std::vector<LloydRun> runs(restarts);
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < restarts; ++r)
    runs[r] = run_one_restart(points, K, hash2(seed, (uint64_t)r), max_iters);

  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (runs[r].sse < runs[best].sse) best = r;

  ClusteringResult res;
  res.centroids = std::move(runs[best].centroids);
  res.labels = std::move(runs[best].labels);
  res.sse = runs[best].sse;
  res.converged = runs[best].converged;
  res.sse_trace = std::move(runs[best].trace);
  res.restarts_used = restarts;
  for (int r = 0; r < restarts; ++r)
    if (r != best && std::fabs(runs[r].sse - res.sse) <= 1e-12 * std::max(1.0, res.sse))
      res.tied_optimum = true;
  return res;
}

std::pair<double, std::vector<int>> min_cost_assignment(const std::vector<double>& cost, int K) {
  // shortest augmenting path with potentials, 1-based internal indexing
  const double INF = std::numeric_limits<double>::infinity();
  std::vector<double> u(K + 1, 0.0), v(K + 1, 0.0);
  std::vector<int> p(K + 1, 0), way(K + 1, 0);
  for (int i = 1; i <= K; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(K + 1, INF);
    std::vector<char> used(K + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = INF;
      for (int j = 1; j <= K; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * K + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= K; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(K, -1);
  double total = 0.0;
  for (int j = 1; j <= K; ++j)
    if (p[j]) {
      row_to_col[p[j] - 1] = j - 1;
      total += cost[(p[j] - 1) * K + (j - 1)];
    }
  return {total, row_to_col};
}

MisclusterReport misclustering_count(const std::vector<int>& tau,
                                     const std::vector<int>& tau_hat, int K) {
  if (tau.size() != tau_hat.size())
    throw ValidationError("misclustering_count: label vectors differ in length");
  if (K < 1) throw ValidationError("misclustering_count: K must be >= 1");
  MisclusterReport rep;
  rep.K = K;
  rep.confusion.assign((size_t)K * K, 0);
  for (size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] < 0 || tau[i] >= K || tau_hat[i] < 0 || tau_hat[i] >= K)
      throw ValidationError("misclustering_count: label out of range at vertex " +
                            std::to_string(i));
    ++rep.confusion[(size_t)tau[i] * K + tau_hat[i]];
  }
  // maximize total agreement: assign each predicted label h a true label t
  std::vector<double> cost((size_t)K * K);
  for (int h = 0; h < K; ++h)
    for (int t = 0; t < K; ++t)
      cost[(size_t)h * K + t] = -(double)rep.confusion[(size_t)t * K + h];
  auto [neg_agree, h_to_t] = min_cost_assignment(cost, K);
  rep.permutation = h_to_t;
  rep.count = (int)tau.size() - (int)std::llround(-neg_agree);
  return rep;
}

PhiLoss PhiLoss::power(double exponent) {
  if (!(exponent >= 1.0)) throw ValidationError("phi power loss requires p >= 1");
  return {Kind::power, exponent};
}

double PhiLoss::operator()(double r) const {
  switch (kind) {
    case Kind::square:
      return r * r;
    case Kind::abs:
      return r;
    case Kind::power:
      return std::pow(r, p);
  }
  return 0.0;
}

double phi_objective(const Matrix& points, const Matrix& centers, const PhiLoss& phi) {
  if (centers.rows() < 1) throw ValidationError("phi_objective: centers must be nonempty");
  if (centers.cols() != points.cols())
    throw ValidationError("phi_objective: dimension mismatch");
  const int n = points.rows(), d = points.cols();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < centers.rows(); ++c)
      best = std::min(best, point_dist2(points.row(i), centers.row(c), d));
    total += phi(std::sqrt(best));
  }
  return total / n;
}

}  // namespace ase
