#include "ase/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "ase/errors.hpp"
#include "ase/io.hpp"
#include "ase/rng.hpp"

namespace ase {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// t quantiles (97.5%) for the slope confidence interval
double t_975(int df) {
  static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                 2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                 2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                 2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) return 0.0;
  if (df <= 30) return table[df - 1];
  return 1.96;
}

}  // namespace

TrialRecord run_trial(const ModelConfig& cfg, int n, uint64_t seed, const RunOptions& opt,
                      int trial_index) {
  TrialRecord rec;
  rec.model_id = cfg.id;
  rec.n = n;
  rec.trial = trial_index;
  rec.seed = seed;

  auto t0 = std::chrono::steady_clock::now();
  BlockModelSpec spec = instantiate(cfg, n, substream(seed, Stream::degree));
  LatentPositionMatrix X = sbm_to_latent(spec, opt.d_override ? opt.d_override : cfg.d_override);
  const int d = X.d();
  const bool dc = spec.degree_corrected();
  rec.times.build = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  AdjacencySample A;
  if (!opt.noiseless) A = sample_adjacency(X, substream(seed, Stream::adjacency));
  rec.times.sample = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  SpectralEmbedding emb;
  try {
    emb = opt.noiseless ? ase_embed(gram_op(X.X), d, opt.eig) : ase_embed(A, d, opt.eig);
  } catch (const NonPositiveSpectrum&) {
    rec.degenerate = true;
    rec.times.embed = seconds_since(t0);
    return rec;
  }
  AlignmentResult ar = align(emb.Xhat, X.X);
  rec.err_2inf = ar.residual_2inf;
  rec.times.embed = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  Matrix points, truth_points;
  try {
    points = dc ? project_sphere(emb.Xhat) : emb.Xhat;
    truth_points = dc ? multiply(project_sphere(X.X), ar.W) : multiply(X.X, ar.W);
  } catch (const ZeroRow&) {
    rec.degenerate = true;
    rec.times.cluster = seconds_since(t0);
    return rec;
  }
  ClusteringResult cl =
      mse_cluster(points, spec.K, opt.restarts, substream(seed, Stream::cluster),
                  opt.kmeans_max_iters);
  rec.sse = cl.sse;
  rec.miscluster = misclustering_count(spec.tau, cl.labels, spec.K).count;
  rec.cert_lhs = std::sqrt(cl.sse);
  rec.cert_rhs = frobenius_norm(subtract(truth_points, points));
  rec.cert_holds = rec.cert_lhs <= rec.cert_rhs;
  rec.times.cluster = seconds_since(t0);

  if (opt.with_bounds) {
    t0 = std::chrono::steady_clock::now();
    const SymOp op = opt.noiseless ? gram_op(X.X) : adjacency_op(A);
    rec.bounds = bound_report(op, X, emb, opt.eta, dc).entries;
    rec.times.bounds = seconds_since(t0);
  }
  return rec;
}

SlopeFit fit_loglog(const std::vector<double>& n_values, const std::vector<double>& means) {
  SlopeFit fit;
  std::vector<double> x, y;
  for (size_t i = 0; i < n_values.size(); ++i) {
    if (means[i] > 0.0 && std::isfinite(means[i])) {
      x.push_back(std::log(n_values[i]));
      y.push_back(std::log(means[i]));
    }
  }
  const int m = (int)x.size();
  fit.points = m;
  if (m < 2) {
    fit.slope = fit.intercept = fit.stderr_slope = fit.ci_lo = fit.ci_hi =
        std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (m > 2) {
    double ssr = 0.0;
    for (int i = 0; i < m; ++i) {
      const double r = y[i] - (fit.intercept + fit.slope * x[i]);
      ssr += r * r;
    }
    fit.stderr_slope = std::sqrt(ssr / (m - 2) / sxx);
    const double t = t_975(m - 2);
    fit.ci_lo = fit.slope - t * fit.stderr_slope;
    fit.ci_hi = fit.slope + t * fit.stderr_slope;
  } else {
    fit.stderr_slope = fit.ci_lo = fit.ci_hi = std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

namespace {

SweepSummary summarize(const std::string& model_id, double eta, uint64_t base_seed,
                       const std::vector<int>& n_grid, int trials_per_n,
                       const std::vector<TrialRecord>& records) {
  SweepSummary s;
  s.model_id = model_id;
  s.eta = eta;
  s.base_seed = base_seed;
  std::vector<double> ns, means;
  for (size_t gi = 0; gi < n_grid.size(); ++gi) {
    PerNSummary p;
    p.n = n_grid[gi];
    p.trials = trials_per_n;
    std::vector<double> errs;
    int perfect = 0, cert = 0;
    double sse_sum = 0.0;
    std::map<std::string, std::pair<int, int>> holds;  // name -> (held, seen)
    for (int t = 0; t < trials_per_n; ++t) {
      const TrialRecord& r = records[gi * trials_per_n + t];
      if (r.degenerate) {
        ++p.degenerate;
        continue;
      }
      errs.push_back(r.err_2inf);
      sse_sum += r.sse;
      if (r.miscluster == 0) ++perfect;
      if (r.cert_holds) ++cert;
      for (const auto& b : r.bounds) {
        auto& h = holds[b.name];
        ++h.second;
        if (b.holds) ++h.first;
      }
    }
    const int m = (int)errs.size();
    if (m > 0) {
      double mean = 0.0;
      for (double e : errs) mean += e;
      mean /= m;
      double var = 0.0;
      for (double e : errs) var += (e - mean) * (e - mean);
      p.mean_err = mean;
      p.stderr_err = m > 1 ? std::sqrt(var / (m - 1)) / std::sqrt((double)m) : 0.0;
      p.perfect_freq = (double)perfect / m;
      p.cert_freq = (double)cert / m;
      p.mean_sse = sse_sum / m;
      ns.push_back(p.n);
      means.push_back(mean);
    }
    for (const auto& [name, h] : holds)
      p.bound_hold_freq[name] = h.second ? (double)h.first / h.second : 0.0;
    s.per_n.push_back(p);
  }
  s.fit = fit_loglog(ns, means);
  return s;
}

}  // namespace

SweepResult sweep_with(const TrialFn& fn, const std::string& model_id,
                       const std::vector<int>& n_grid, int trials_per_n, uint64_t base_seed,
                       int parallelism, double eta) {
  if (n_grid.empty() || trials_per_n < 1)
    throw ValidationError("sweep: need a nonempty grid and at least one trial");
  for (size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1]) throw ValidationError("sweep: n grid must be ascending");
  const int total = (int)n_grid.size() * trials_per_n;
  std::vector<TrialRecord> records(total);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, parallelism))
  for (int idx = 0; idx < total; ++idx) {
    const int gi = idx / trials_per_n;
    const int t = idx % trials_per_n;
    const int n = n_grid[gi];
    try {
      records[idx] = fn(n, t, trial_seed(base_seed, (uint64_t)n, (uint64_t)t));
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  SweepResult res;
  res.records = std::move(records);
  res.summary = summarize(model_id, eta, base_seed, n_grid, trials_per_n, res.records);
  return res;
}

SweepResult sweep(const ModelConfig& cfg, const std::vector<int>& n_grid, int trials_per_n,
                  uint64_t base_seed, int parallelism, const RunOptions& opt) {
  return sweep_with(
      [&](int n, int t, uint64_t seed) { return run_trial(cfg, n, seed, opt, t); }, cfg.id,
      n_grid, trials_per_n, base_seed, parallelism, opt.eta);
}

ConsistencyResult consistency_experiment(const LatentDistribution& F,
                                         const std::vector<int>& n_grid, int K, int trials,
                                         uint64_t base_seed, int parallelism,
                                         const RunOptions& opt) {
  F.validate();
  if (n_grid.empty() || trials < 1)
    throw ValidationError("consistency: need a nonempty grid and at least one trial");
  const int d = F.rank();
  const int total = (int)n_grid.size() * trials;
  ConsistencyResult res;
  res.trials.resize(total);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, parallelism))
  for (int idx = 0; idx < total; ++idx) {
    const int gi = idx / trials;
    const int t = idx % trials;
    const int n = n_grid[gi];
    try {
      ConsistencyTrial ct;
      ct.n = n;
      ct.trial = t;
      ct.seed = trial_seed(base_seed, (uint64_t)n, (uint64_t)t);
      IidLatentSample sample = sample_iid_latent(F, n, substream(ct.seed, Stream::latent));
      ClusteringResult cl_true =
          mse_cluster(sample.X.X, K, opt.restarts, substream(ct.seed, Stream::cluster),
                      opt.kmeans_max_iters);
      ct.phi_true = cl_true.sse / n;
      AdjacencySample A = sample_adjacency(sample.X, substream(ct.seed, Stream::adjacency));
      SpectralEmbedding emb = ase_embed(A, d, opt.eig);
      ClusteringResult cl_emb =
          mse_cluster(emb.Xhat, K, opt.restarts, substream(ct.seed, Stream::cluster_embedded),
                      opt.kmeans_max_iters);
      ct.phi_embedded = cl_emb.sse / n;
      ct.gap = std::fabs(ct.phi_embedded - ct.phi_true);
      res.trials[idx] = ct;
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  for (size_t gi = 0; gi < n_grid.size(); ++gi) {
    ConsistencyRow row;
    row.n = n_grid[gi];
    for (int t = 0; t < trials; ++t) {
      const ConsistencyTrial& ct = res.trials[gi * trials + t];
      row.mean_phi_true += ct.phi_true;
      row.mean_phi_embedded += ct.phi_embedded;
      row.mean_gap += ct.gap;
    }
    row.mean_phi_true /= trials;
    row.mean_phi_embedded /= trials;
    row.mean_gap /= trials;
    res.rows.push_back(row);
  }
  return res;
}

// ---- serialization ---------------------------------------------------------

const std::vector<std::string>& bound_column_names() {
  static const std::vector<std::string> names = {
      "a_minus_p", "vhat_minus_v_sq", "shat_minus_s", "vtvhat_minus_i",
      "avs_minus_xhat", "shat_cap", "two_inf", "sphere"};
  return names;
}

std::string records_csv_header(bool with_times) {
  std::string h = "model_id,n,trial,seed,degenerate,err_2inf,miscluster_count,sse,cert_lhs,cert_rhs,cert_holds";
  for (const auto& name : bound_column_names())
    h += ",b_" + name + "_lhs,b_" + name + "_rhs,b_" + name + "_holds";
  if (with_times) h += ",t_build,t_sample,t_embed,t_cluster,t_bounds";
  return h;
}

void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records,
                       bool with_times) {
  os << records_csv_header(with_times) << '\n';
  for (const TrialRecord& r : records) {
    os << r.model_id << ',' << r.n << ',' << r.trial << ',' << r.seed << ','
       << (r.degenerate ? 1 : 0) << ',';
    if (!r.degenerate)
      os << fmt17(r.err_2inf) << ',' << r.miscluster << ',' << fmt17(r.sse) << ','
         << fmt17(r.cert_lhs) << ',' << fmt17(r.cert_rhs) << ',' << (r.cert_holds ? 1 : 0);
    else
      os << ",,,,,";
    for (const auto& name : bound_column_names()) {
      const BoundEntry* e = nullptr;
      for (const auto& b : r.bounds)
        if (b.name == name) {
          e = &b;
          break;
        }
      if (e)
        os << ',' << fmt17(e->lhs) << ',' << fmt17(e->rhs) << ',' << (e->holds ? 1 : 0);
      else
        os << ",,,";
    }
    if (with_times)
      os << ',' << fmt17(r.times.build) << ',' << fmt17(r.times.sample) << ','
         << fmt17(r.times.embed) << ',' << fmt17(r.times.cluster) << ','
         << fmt17(r.times.bounds);
    os << '\n';
  }
}

void write_summary_json(std::ostream& os, const SweepSummary& s) {
  JsonWriter w(os);
  w.begin_object();
  w.key("model_id").value(s.model_id);
  w.key("eta").value(s.eta);
  w.key("base_seed").value(s.base_seed);
  w.key("per_n").begin_array();
  for (const auto& p : s.per_n) {
    w.begin_object();
    w.key("n").value(p.n);
    w.key("trials").value(p.trials);
    w.key("degenerate").value(p.degenerate);
    w.key("mean_err_2inf").value(p.mean_err);
    w.key("stderr_err_2inf").value(p.stderr_err);
    w.key("perfect_freq").value(p.perfect_freq);
    w.key("cert_freq").value(p.cert_freq);
    w.key("mean_sse").value(p.mean_sse);
    w.key("bound_hold_freq").begin_object();
    for (const auto& [name, freq] : p.bound_hold_freq) w.key(name).value(freq);
    w.end_object();
    w.end_object();
  }
  w.end_array();
  w.key("fit").begin_object();
  w.key("slope").value(s.fit.slope);
  w.key("intercept").value(s.fit.intercept);
  w.key("stderr_slope").value(s.fit.stderr_slope);
  w.key("ci95_lo").value(s.fit.ci_lo);
  w.key("ci95_hi").value(s.fit.ci_hi);
  w.key("points").value(s.fit.points);
  w.end_object();
  w.end_object();
  os << '\n';
}

void write_consistency_csv(std::ostream& os, const ConsistencyResult& r) {
  os << "n,trial,seed,phi_true,phi_embedded,gap\n";
  for (const auto& t : r.trials)
    os << t.n << ',' << t.trial << ',' << t.seed << ',' << fmt17(t.phi_true) << ','
       << fmt17(t.phi_embedded) << ',' << fmt17(t.gap) << '\n';
}

void write_consistency_json(std::ostream& os, const ConsistencyResult& r) {
  JsonWriter w(os);
  w.begin_object();
  w.key("per_n").begin_array();
  for (const auto& row : r.rows) {
    w.begin_object();
    w.key("n").value(row.n);
    w.key("mean_phi_true").value(row.mean_phi_true);
    w.key("mean_phi_embedded").value(row.mean_phi_embedded);
    w.key("mean_gap").value(row.mean_gap);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  os << '\n';
}

void write_assumption_json(std::ostream& os, const AssumptionReport& r) {
  JsonWriter w(os);
  w.begin_object();
  w.key("eta").value(r.eta);
  w.key("beta").value(r.beta);
  w.key("beta_hypothesis_ok").value(r.beta_hypothesis_ok);
  w.key("constants").begin_object();
  w.key("n").value(r.constants.n);
  w.key("Delta").value(r.constants.Delta);
  w.key("gamma").value(r.constants.gamma);
  w.key("d").value(r.constants.d);
  w.key("K").value(r.constants.K);
  w.key("n_min").value(r.constants.n_min);
  w.key("eigenvalues_P").begin_array();
  for (double v : r.constants.eigenvalues_P) w.value(v);
  w.end_array();
  w.end_object();
  w.key("a0").begin_object();
  w.key("holds").value(r.a0);
  w.key("min_rel_gap").value(r.a0_min_rel_gap);
  w.end_object();
  w.key("a1").begin_object();
  w.key("holds").value(r.a1);
  w.key("min_separation").value(r.a1_min_separation);
  w.key("threshold").value(r.a1_threshold);
  w.end_object();
  w.key("a2").begin_object();
  w.key("holds").value(r.a2);
  w.key("lhs").value(r.a2_lhs);
  w.key("rhs").value(r.a2_rhs);
  w.end_object();
  if (r.has_dcsbm) {
    w.key("dcsbm").begin_object();
    w.key("holds").value(r.dcsbm_ok);
    w.key("r").value(r.dcsbm_r);
    w.key("threshold").value(r.dcsbm_threshold);
    w.key("c_min").value(r.c_min);
    w.end_object();
  }
  w.end_object();
  os << '\n';
}

void write_miscluster_json(std::ostream& os, const MisclusterReport& r) {
  JsonWriter w(os);
  w.begin_object();
  w.key("count").value(r.count);
  w.key("permutation").begin_array();
  for (int p : r.permutation) w.value(p);
  w.end_array();
  w.key("confusion").begin_array();
  for (int t = 0; t < r.K; ++t) {
    w.begin_array();
    for (int h = 0; h < r.K; ++h) w.value(r.confusion[(size_t)t * r.K + h]);
    w.end_array();
  }
  w.end_array();
  w.end_object();
  os << '\n';
}

void write_bound_json(std::ostream& os, const BoundReport& r) {
  JsonWriter w(os);
  w.begin_object();
  w.key("eta").value(r.eta);
  w.key("entries").begin_array();
  for (const auto& e : r.entries) {
    w.begin_object();
    w.key("name").value(e.name);
    w.key("lhs").value(e.lhs);
    w.key("rhs").value(e.rhs);
    w.key("holds").value(e.holds);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  os << '\n';
}

}  // namespace ase
