// asecluster command line: sample graphs from latent-position models, embed
// them spectrally, cluster, check the theory constants, run Monte-Carlo
// sweeps, and draw SVG plots.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "ase/bounds.hpp"
#include "ase/clustering.hpp"
#include "ase/errors.hpp"
#include "ase/graph_models.hpp"
#include "ase/harness.hpp"
#include "ase/io.hpp"
#include "ase/rng.hpp"
#include "ase/spectral.hpp"
#include "ase/svg.hpp"

using namespace ase;

namespace {

std::vector<int> parse_grid(const std::string& text) {
  std::vector<int> grid;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    grid.push_back(std::stoi(tok));
  }
  if (grid.empty()) throw ValidationError("empty n grid");
  return grid;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  fn(out);
}

int cmd_sample(const std::string& model, int n, uint64_t seed, const std::string& out,
               const std::string& labels_out) {
  ModelConfig cfg = load_model_config(model);
  if (seed == 0) seed = cfg.seed;
  BlockModelSpec spec = instantiate(cfg, n, substream(seed, Stream::degree));
  LatentPositionMatrix X = sbm_to_latent(spec, cfg.d_override);
  AdjacencySample A = sample_adjacency(X, substream(seed, Stream::adjacency));
  write_file(out, [&](std::ostream& os) { write_edge_list(os, A); });
  if (!labels_out.empty())
    write_file(labels_out, [&](std::ostream& os) { write_labels_csv(os, &spec.tau, nullptr); });
  std::cerr << "sampled n=" << n << " edges=" << A.edge_count() << " -> " << out << "\n";
  return 0;
}

int cmd_embed(const std::string& in, int d, const std::string& out,
              const std::string& eigvals_out, bool one_indexed) {
  std::ifstream is(in);
  if (!is) throw ValidationError("cannot open '" + in + "'");
  EdgeListFile f = read_edge_list(is, one_indexed);
  if (d < 1 || d > f.n) throw ValidationError("embed: need 1 <= d <= n");
  AdjacencySample A = AdjacencySample::from_edges(f.n, f.seed, f.edges);
  SpectralEmbedding emb = ase_embed(A, d);
  write_file(out, [&](std::ostream& os) { write_embedding_csv(os, emb.Xhat); });
  if (!eigvals_out.empty())
    write_file(eigvals_out,
               [&](std::ostream& os) { write_eigenvalues_csv(os, emb.eigenvalues); });
  std::cerr << "embedded n=" << f.n << " d=" << d << " -> " << out << "\n";
  return 0;
}

int cmd_cluster(const std::string& in, int k, int restarts, uint64_t seed,
                const std::string& out, const std::string& truth_path,
                const std::string& report_path, bool dcsbm) {
  std::ifstream is(in);
  if (!is) throw ValidationError("cannot open '" + in + "'");
  Matrix Xhat = read_embedding_csv(is);
  Matrix points = dcsbm ? project_sphere(Xhat) : Xhat;
  ClusteringResult cl = mse_cluster(points, k, restarts, seed);

  std::vector<int> truth;
  if (!truth_path.empty()) {
    std::ifstream ts(truth_path);
    if (!ts) throw ValidationError("cannot open '" + truth_path + "'");
    std::vector<int> pred_ignored;
    read_labels_csv(ts, truth, pred_ignored);
    if ((int)truth.size() != points.rows())
      throw ValidationError("cluster: truth labels do not match the embedding size");
  }
  write_file(out, [&](std::ostream& os) {
    write_labels_csv(os, truth.empty() ? nullptr : &truth, &cl.labels);
  });
  if (!truth.empty()) {
    MisclusterReport rep = misclustering_count(truth, cl.labels, k);
    if (!report_path.empty())
      write_file(report_path, [&](std::ostream& os) { write_miscluster_json(os, rep); });
    std::cerr << "misclustered " << rep.count << " of " << points.rows() << "\n";
  }
  std::cerr << "sse=" << cl.sse << " converged=" << (cl.converged ? "yes" : "no") << " -> "
            << out << "\n";
  return 0;
}

int cmd_check(const std::string& model, int n, double eta, uint64_t seed,
              const std::string& json_path) {
  ModelConfig cfg = load_model_config(model);
  AssumptionReport rep = check_assumptions(cfg, n, eta, seed);
  const ModelConstants& mc = rep.constants;
  std::ostringstream head;
  printf("model=%s n=%d eta=%g\n", cfg.id.c_str(), n, eta);
  printf("constants: Delta=%.6g gamma=%.6g d=%d K=%d n_min=%d\n", mc.Delta, mc.gamma, mc.d,
         mc.K, mc.n_min);
  printf("beta=%.6g (%s)\n", rep.beta,
         rep.beta_hypothesis_ok ? "hypothesis ok" : "hypothesis violated");
  printf("%-28s %-5s min relative gap = %.3g\n", "A0 distinct eigenvalues",
         rep.a0 ? "PASS" : "FAIL", rep.a0_min_rel_gap);
  printf("%-28s %-5s separation = %.6g, threshold = %.6g\n", "A1 row separation",
         rep.a1 ? "PASS" : "FAIL", rep.a1_min_separation, rep.a1_threshold);
  printf("%-28s %-5s gamma*n = %.6g, 4*sqrt(Delta*log(n/eta)) = %.6g\n", "A2 eigenvalue gap",
         rep.a2 ? "PASS" : "FAIL", rep.a2_lhs, rep.a2_rhs);
  if (rep.has_dcsbm)
    printf("%-28s %-5s r = %.6g, threshold = %.6g\n", "DC separation radius",
           rep.dcsbm_ok ? "PASS" : "FAIL", rep.dcsbm_r, rep.dcsbm_threshold);
  if (!json_path.empty())
    write_file(json_path, [&](std::ostream& os) { write_assumption_json(os, rep); });
  return 0;
}

int cmd_sweep(const std::string& model, const std::string& grid_text, int trials,
              uint64_t seed, double eta, int restarts, int threads, bool no_bounds,
              bool noiseless, bool with_times, const std::string& out,
              const std::string& summary_path, const std::string& plot_path) {
  ModelConfig cfg = load_model_config(model);
  std::vector<int> grid = parse_grid(grid_text);
  RunOptions opt;
  opt.eta = eta;
  opt.restarts = restarts;
  opt.with_bounds = !no_bounds;
  opt.noiseless = noiseless;
  SweepResult res = sweep(cfg, grid, trials, seed, threads, opt);
  if (!out.empty())
    write_file(out, [&](std::ostream& os) { write_records_csv(os, res.records, with_times); });
  if (!summary_path.empty())
    write_file(summary_path, [&](std::ostream& os) { write_summary_json(os, res.summary); });
  if (!plot_path.empty())
    write_file(plot_path, [&](std::ostream& os) { write_sweep_svg(os, res.summary); });
  printf("sweep done: %zu records", res.records.size());
  if (std::isfinite(res.summary.fit.slope))
    printf(", slope %.4f [%.4f, %.4f]", res.summary.fit.slope, res.summary.fit.ci_lo,
           res.summary.fit.ci_hi);
  printf("\n");
  return 0;
}

int cmd_consistency(const std::string& model, const std::string& grid_text, int k, int trials,
                    uint64_t seed, int restarts, int threads, const std::string& out,
                    const std::string& summary_path) {
  ModelConfig cfg = load_model_config(model);
  LatentDistribution F = distribution_from_model(cfg);
  RunOptions opt;
  opt.restarts = restarts;
  ConsistencyResult res =
      consistency_experiment(F, parse_grid(grid_text), k, trials, seed, threads, opt);
  if (!out.empty())
    write_file(out, [&](std::ostream& os) { write_consistency_csv(os, res); });
  if (!summary_path.empty())
    write_file(summary_path, [&](std::ostream& os) { write_consistency_json(os, res); });
  for (const auto& row : res.rows)
    printf("n=%-6d phi_true=%.6g phi_embedded=%.6g gap=%.6g\n", row.n, row.mean_phi_true,
           row.mean_phi_embedded, row.mean_gap);
  return 0;
}

int cmd_plot(const std::string& kind, const std::string& in, const std::string& labels_path,
             bool project, const std::string& out) {
  if (kind == "sweep") {
    // rebuild per-n stats from a records CSV
    std::ifstream is(in);
    if (!is) throw ValidationError("cannot open '" + in + "'");
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("plot: empty records file");
    const auto header = split_csv_line(line);
    int col_n = -1, col_err = -1, col_degen = -1;
    for (size_t c = 0; c < header.size(); ++c) {
      if (header[c] == "n") col_n = (int)c;
      if (header[c] == "err_2inf") col_err = (int)c;
      if (header[c] == "degenerate") col_degen = (int)c;
    }
    if (col_n < 0 || col_err < 0)
      throw ValidationError("plot: records file lacks n/err_2inf columns");
    std::map<int, std::vector<double>> by_n;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const auto parts = split_csv_line(line);
      if (col_degen >= 0 && parts[col_degen] == "1") continue;
      if (parts[col_err].empty()) continue;
      by_n[std::stoi(parts[col_n])].push_back(std::stod(parts[col_err]));
    }
    if (by_n.empty()) throw ValidationError("plot: no usable records");
    SweepSummary s;
    std::vector<double> ns, means;
    for (const auto& [n, errs] : by_n) {
      PerNSummary p;
      p.n = n;
      p.trials = (int)errs.size();
      double mean = 0.0;
      for (double e : errs) mean += e;
      mean /= errs.size();
      double var = 0.0;
      for (double e : errs) var += (e - mean) * (e - mean);
      p.mean_err = mean;
      p.stderr_err =
          errs.size() > 1 ? std::sqrt(var / (errs.size() - 1) / errs.size()) : 0.0;
      s.per_n.push_back(p);
      ns.push_back(n);
      means.push_back(mean);
    }
    s.fit = fit_loglog(ns, means);
    write_file(out, [&](std::ostream& os) { write_sweep_svg(os, s); });
    return 0;
  }
  if (kind == "scatter") {
    std::ifstream is(in);
    if (!is) throw ValidationError("cannot open '" + in + "'");
    Matrix Xhat = read_embedding_csv(is);
    std::vector<int> labels;
    if (!labels_path.empty()) {
      std::ifstream ls(labels_path);
      if (!ls) throw ValidationError("cannot open '" + labels_path + "'");
      std::vector<int> truth, pred;
      read_labels_csv(ls, truth, pred);
      labels = truth.empty() ? pred : truth;
    }
    std::optional<Matrix> proj;
    if (project) proj = project_sphere(Xhat);
    write_file(out, [&](std::ostream& os) {
      write_scatter_svg(os, Xhat, labels, proj ? &*proj : nullptr);
    });
    return 0;
  }
  throw ValidationError("plot: --kind must be 'sweep' or 'scatter'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adjacency spectral embedding + blockmodel clustering toolkit"};
  app.require_subcommand(1);

  int threads = 0;
  if (const char* env = std::getenv("ASE_THREADS")) threads = std::atoi(env);
  app.add_option("--threads", threads, "worker threads (default: ASE_THREADS or OpenMP default)");

  std::string model, in, out, labels, truth, report, summary, plot_path, eigvals, grid, kind;
  int n = 1000, d = 2, k = 2, trials = 50, restarts = 32;
  uint64_t seed = 0;
  double eta = 0.05;
  bool one_indexed = false, dcsbm = false, no_bounds = false, noiseless = false,
       with_times = false, project = false;

  auto* sample = app.add_subcommand("sample", "sample an adjacency matrix, write an edge list");
  sample->add_option("--model", model, "preset or model JSON path")->required();
  sample->add_option("--n", n, "vertex count")->required();
  sample->add_option("--seed", seed, "sampling seed");
  sample->add_option("--out", out, "edge list output path")->required();
  sample->add_option("--labels", labels, "also write true block labels CSV");

  auto* embed = app.add_subcommand("embed", "spectral embedding of an edge list");
  embed->add_option("--in", in, "edge list path")->required();
  embed->add_option("--d", d, "embedding dimension")->required();
  embed->add_option("--out", out, "embedding CSV path")->required();
  embed->add_option("--eigvals", eigvals, "eigenvalue CSV path");
  embed->add_flag("--one-indexed", one_indexed, "edge list uses 1-based vertex ids");

  auto* cluster = app.add_subcommand("cluster", "k-means clustering of an embedding");
  cluster->add_option("--in", in, "embedding CSV path")->required();
  cluster->add_option("--k", k, "number of clusters")->required();
  cluster->add_option("--restarts", restarts, "k-means++ restarts");
  cluster->add_option("--seed", seed, "clustering seed");
  cluster->add_option("--out", out, "labels CSV path")->required();
  cluster->add_option("--truth", truth, "true labels CSV for the miscluster report");
  cluster->add_option("--report", report, "miscluster report JSON path");
  cluster->add_flag("--dcsbm", dcsbm, "project rows to the unit sphere before clustering");

  auto* check = app.add_subcommand("check", "evaluate model constants and assumptions");
  check->add_option("--model", model, "preset or model JSON path")->required();
  check->add_option("--n", n, "vertex count")->required();
  check->add_option("--eta", eta, "confidence parameter in (0, 1/2)");
  check->add_option("--seed", seed, "degree-factor seed (degree-corrected models)");
  check->add_option("--json", report, "also write the report as JSON");

  auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo sweep over n");
  sweep_cmd->add_option("--model", model, "preset or model JSON path")->required();
  sweep_cmd->add_option("--grid", grid, "comma-separated n values")
      ->default_val("250,500,1000,2000,4000");
  sweep_cmd->add_option("--trials", trials, "trials per n");
  sweep_cmd->add_option("--seed", seed, "base seed");
  sweep_cmd->add_option("--eta", eta, "confidence parameter");
  sweep_cmd->add_option("--restarts", restarts, "k-means++ restarts");
  sweep_cmd->add_option("--out", out, "records CSV path");
  sweep_cmd->add_option("--summary", summary, "summary JSON path");
  sweep_cmd->add_option("--plot", plot_path, "SVG plot path");
  sweep_cmd->add_flag("--no-bounds", no_bounds, "skip the per-trial bound report");
  sweep_cmd->add_flag("--noiseless", noiseless, "run on P itself instead of sampling");
  sweep_cmd->add_flag("--timings", with_times, "append wall-time columns to the CSV");

  auto* consistency = app.add_subcommand("consistency", "clustering-objective convergence experiment");
  consistency->add_option("--model", model, "point-mass mixture from this model")->required();
  consistency->add_option("--grid", grid, "comma-separated n values")
      ->default_val("500,1000,2000,4000");
  consistency->add_option("--k", k, "number of centers");
  consistency->add_option("--trials", trials, "trials per n")->default_val(50);
  consistency->add_option("--seed", seed, "base seed");
  consistency->add_option("--restarts", restarts, "k-means++ restarts");
  consistency->add_option("--out", out, "per-trial CSV path");
  consistency->add_option("--summary", summary, "summary JSON path");

  auto* plot = app.add_subcommand("plot", "SVG charts from records or embeddings");
  plot->add_option("--kind", kind, "sweep | scatter")->required();
  plot->add_option("--in", in, "records CSV (sweep) or embedding CSV (scatter)")->required();
  plot->add_option("--labels", labels, "labels CSV for scatter coloring");
  plot->add_flag("--project", project, "add a sphere-projection panel");
  plot->add_option("--out", out, "SVG output path")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (sample->parsed()) return cmd_sample(model, n, seed, out, labels);
    if (embed->parsed()) return cmd_embed(in, d, out, eigvals, one_indexed);
    if (cluster->parsed()) return cmd_cluster(in, k, restarts, seed, out, truth, report, dcsbm);
    if (check->parsed()) return cmd_check(model, n, eta, seed, report);
    if (sweep_cmd->parsed())
      return cmd_sweep(model, grid, trials, seed, eta, restarts, threads, no_bounds, noiseless,
                       with_times, out, summary, plot_path);
    if (consistency->parsed())
      return cmd_consistency(model, grid, k, trials, seed, restarts, threads, out, summary);
    if (plot->parsed()) return cmd_plot(kind, in, labels, project, out);
  } catch (const NonPositiveSpectrum& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return 2;
  } catch (const ZeroRow& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return 2;
  } catch (const EigNonConvergence& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
