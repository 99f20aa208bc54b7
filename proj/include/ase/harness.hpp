#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "ase/bounds.hpp"
#include "ase/clustering.hpp"
#include "ase/graph_models.hpp"
#include "ase/spectral.hpp"

namespace ase {

struct RunOptions {
  double eta = 0.05;
  int restarts = 32;
  int kmeans_max_iters = 500;
  bool with_bounds = true;
  bool noiseless = false;  // use P itself instead of a sample
  int d_override = 0;
  EigOptions eig;
};

struct StageTimes {
  double build = 0.0, sample = 0.0, embed = 0.0, cluster = 0.0, bounds = 0.0;
};

struct TrialRecord {
  std::string model_id;
  int n = 0;
  int trial = 0;
  uint64_t seed = 0;
  bool degenerate = false;  // embedding hit a non-positive retained eigenvalue
  double err_2inf = 0.0;
  int miscluster = 0;
  double sse = 0.0;
  double cert_lhs = 0.0;  // ||Chat - points||_F
  double cert_rhs = 0.0;  // ||truth - points||_F
  bool cert_holds = false;
  std::vector<BoundEntry> bounds;
  StageTimes times;  // kept out of the canonical CSV so outputs stay byte-stable
};

TrialRecord run_trial(const ModelConfig& cfg, int n, uint64_t seed, const RunOptions& opt,
                      int trial_index = 0);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;  // 95% two-sided
  int points = 0;
};

// Least squares on (log n, log mean).
SlopeFit fit_loglog(const std::vector<double>& n_values, const std::vector<double>& means);

struct PerNSummary {
  int n = 0;
  int trials = 0;
  int degenerate = 0;
  double mean_err = 0.0;
  double stderr_err = 0.0;  // sample stddev / sqrt(trials)
  double perfect_freq = 0.0;
  double cert_freq = 0.0;
  double mean_sse = 0.0;
  std::map<std::string, double> bound_hold_freq;
};

struct SweepSummary {
  std::string model_id;
  double eta = 0.0;
  uint64_t base_seed = 0;
  std::vector<PerNSummary> per_n;
  SlopeFit fit;
};

struct SweepResult {
  SweepSummary summary;
  std::vector<TrialRecord> records;  // grid-major, trial-minor order
};

SweepResult sweep(const ModelConfig& cfg, const std::vector<int>& n_grid, int trials_per_n,
                  uint64_t base_seed, int parallelism, const RunOptions& opt);

// Same aggregation over an injected trial function (test seam).
using TrialFn = std::function<TrialRecord(int n, int trial, uint64_t seed)>;
SweepResult sweep_with(const TrialFn& fn, const std::string& model_id,
                       const std::vector<int>& n_grid, int trials_per_n, uint64_t base_seed,
                       int parallelism, double eta);

struct ConsistencyTrial {
  int n = 0;
  int trial = 0;
  uint64_t seed = 0;
  double phi_true = 0.0;      // K-means objective on the true latent positions
  double phi_embedded = 0.0;  // same on the embedded positions
  double gap = 0.0;
};

struct ConsistencyRow {
  int n = 0;
  double mean_phi_true = 0.0;
  double mean_phi_embedded = 0.0;
  double mean_gap = 0.0;
};

struct ConsistencyResult {
  std::vector<ConsistencyTrial> trials;  // grid-major, trial-minor
  std::vector<ConsistencyRow> rows;
};

ConsistencyResult consistency_experiment(const LatentDistribution& F,
                                         const std::vector<int>& n_grid, int K, int trials,
                                         uint64_t base_seed, int parallelism,
                                         const RunOptions& opt);

// ---- serialization ---------------------------------------------------------

std::string records_csv_header(bool with_times = false);
void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records,
                       bool with_times = false);
void write_summary_json(std::ostream& os, const SweepSummary& s);
void write_consistency_csv(std::ostream& os, const ConsistencyResult& r);
void write_consistency_json(std::ostream& os, const ConsistencyResult& r);
void write_assumption_json(std::ostream& os, const AssumptionReport& r);
void write_miscluster_json(std::ostream& os, const MisclusterReport& r);
void write_bound_json(std::ostream& os, const BoundReport& r);

// stable set of bound column names in the records CSV
const std::vector<std::string>& bound_column_names();

}  // namespace ase
