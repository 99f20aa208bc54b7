#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ase/clustering.hpp"
#include "ase/harness.hpp"
#include "ase/io.hpp"
#include "ase/rng.hpp"
#include "ase/spectral.hpp"

using namespace ase;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ase_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args, const std::string& stdout_path = "") {
  std::string cmd = std::string(ASE_CLI_PATH) + " " + args;
  if (!stdout_path.empty()) cmd += " > " + stdout_path + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("sample -> embed -> cluster reproduces the library pipeline") {
  TempDir tmp;
  const uint64_t seed = 909;
  const int n = 300;

  REQUIRE(run_cli("sample --model example21 --n " + std::to_string(n) + " --seed " +
                  std::to_string(seed) + " --out " + tmp.file("el.txt") + " --labels " +
                  tmp.file("truth.csv"),
                  tmp.file("log1")) == 0);
  REQUIRE(run_cli("embed --in " + tmp.file("el.txt") + " --d 2 --out " + tmp.file("emb.csv"),
                  tmp.file("log2")) == 0);
  const uint64_t cluster_seed = substream(seed, Stream::cluster);
  REQUIRE(run_cli("cluster --in " + tmp.file("emb.csv") + " --k 2 --restarts 32 --seed " +
                  std::to_string(cluster_seed) + " --out " + tmp.file("labels.csv") +
                  " --truth " + tmp.file("truth.csv") + " --report " + tmp.file("rep.json"),
                  tmp.file("log3")) == 0);

  // library-level reference run
  RunOptions opt;
  opt.with_bounds = false;
  TrialRecord rec = run_trial(example21_config(), n, seed, opt);

  std::ifstream ls(tmp.file("labels.csv"));
  std::vector<int> truth, pred;
  read_labels_csv(ls, truth, pred);
  REQUIRE((int)pred.size() == n);

  BlockModelSpec spec = instantiate(example21_config(), n, substream(seed, Stream::degree));
  LatentPositionMatrix X = sbm_to_latent(spec);
  AdjacencySample A = sample_adjacency(X, substream(seed, Stream::adjacency));
  SpectralEmbedding emb = ase_embed(A, 2);
  ClusteringResult ref = mse_cluster(emb.Xhat, 2, 32, cluster_seed);
  CHECK(pred == ref.labels);
  CHECK(misclustering_count(truth, pred, 2).count == rec.miscluster);

  const std::string rep = slurp(tmp.file("rep.json"));
  CHECK(rep.find("\"count\": 0") != std::string::npos);
}

TEST_CASE("check prints the assumption table with exact constants") {
  TempDir tmp;
  REQUIRE(run_cli("check --model example21 --n 8000 --eta 0.05 --json " + tmp.file("a.json"),
                  tmp.file("out.txt")) == 0);
  const std::string out = slurp(tmp.file("out.txt"));
  CHECK(out.find("A0 distinct eigenvalues") != std::string::npos);
  CHECK(out.find("A0 distinct eigenvalues      PASS") != std::string::npos);
  CHECK(out.find("A2 eigenvalue gap            PASS") != std::string::npos);
  CHECK(out.find("Delta=") != std::string::npos);
  const std::string json = slurp(tmp.file("a.json"));
  CHECK(json.find("\"a2\"") != std::string::npos);
}

TEST_CASE("sweep emits the documented csv schema byte for byte") {
  TempDir tmp;
  REQUIRE(run_cli("sweep --model example21 --grid 60 --trials 2 --seed 5 --out " +
                  tmp.file("records.csv") + " --summary " + tmp.file("summary.json"),
                  tmp.file("log")) == 0);
  std::ifstream in(tmp.file("records.csv"));
  std::string header;
  std::getline(in, header);
  CHECK(header == records_csv_header());
  const std::string summary = slurp(tmp.file("summary.json"));
  CHECK(summary.find("\"per_n\"") != std::string::npos);
}

TEST_CASE("plot draws the sweep chart and the two-block scatter") {
  TempDir tmp;
  REQUIRE(run_cli("sweep --model example21 --grid 100,200,400 --trials 3 --seed 9 --out " +
                  tmp.file("records.csv") + " --no-bounds",
                  tmp.file("log")) == 0);
  REQUIRE(run_cli("plot --kind sweep --in " + tmp.file("records.csv") + " --out " +
                  tmp.file("sweep.svg"),
                  tmp.file("log2")) == 0);
  const std::string svg = slurp(tmp.file("sweep.svg"));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("slope") != std::string::npos);

  // degree-corrected scatter with both panels and both block classes
  REQUIRE(run_cli("sample --model fig2 --n 200 --seed 4 --out " + tmp.file("el.txt") +
                  " --labels " + tmp.file("truth.csv"),
                  tmp.file("log3")) == 0);
  REQUIRE(run_cli("embed --in " + tmp.file("el.txt") + " --d 2 --out " + tmp.file("emb.csv"),
                  tmp.file("log4")) == 0);
  REQUIRE(run_cli("plot --kind scatter --in " + tmp.file("emb.csv") + " --labels " +
                  tmp.file("truth.csv") + " --project --out " + tmp.file("scatter.svg"),
                  tmp.file("log5")) == 0);
  const std::string scatter = slurp(tmp.file("scatter.svg"));
  CHECK(scatter.find("id=\"xhat\"") != std::string::npos);
  CHECK(scatter.find("id=\"yhat\"") != std::string::npos);
  CHECK(scatter.find("class=\"block0\"") != std::string::npos);
  CHECK(scatter.find("class=\"block1\"") != std::string::npos);
}

TEST_CASE("consistency subcommand runs the paired experiment") {
  TempDir tmp;
  REQUIRE(run_cli("consistency --model example21 --grid 100,200 --k 2 --trials 2 --seed 3 "
                  "--out " + tmp.file("c.csv") + " --summary " + tmp.file("c.json"),
                  tmp.file("log")) == 0);
  const std::string csv = slurp(tmp.file("c.csv"));
  CHECK(csv.rfind("n,trial,seed,phi_true,phi_embedded,gap\n", 0) == 0);
  CHECK(slurp(tmp.file("c.json")).find("mean_gap") != std::string::npos);
}

TEST_CASE("validation failures exit 1 and name the problem") {
  TempDir tmp;
  CHECK(run_cli("sample --model nosuchmodel --n 50 --out " + tmp.file("x"),
                tmp.file("log")) == 1);
  CHECK(slurp(tmp.file("log")).find("error:") != std::string::npos);
  CHECK(run_cli("check --model example21 --n 100 --eta 0.9", tmp.file("log2")) == 1);
  CHECK(slurp(tmp.file("log2")).find("eta") != std::string::npos);
}

TEST_CASE("degenerate spectra exit 2") {
  TempDir tmp;
  {
    std::ofstream el(tmp.file("k4.txt"));
    el << "# n=4 seed=0\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
  }
  CHECK(run_cli("embed --in " + tmp.file("k4.txt") + " --d 2 --out " + tmp.file("emb.csv"),
                tmp.file("log")) == 2);
  CHECK(slurp(tmp.file("log")).find("degenerate:") != std::string::npos);
}

TEST_CASE("edge lists accept comments and 1-based indexing") {
  TempDir tmp;
  {
    std::ofstream el(tmp.file("one.txt"));
    el << "# n=3 seed=1\n# a comment line\n1 2\n2 3\n";
  }
  REQUIRE(run_cli("embed --in " + tmp.file("one.txt") + " --d 1 --one-indexed --out " +
                  tmp.file("emb.csv"),
                  tmp.file("log")) == 0);
  std::ifstream in(tmp.file("emb.csv"));
  Matrix X = read_embedding_csv(in);
  CHECK(X.rows() == 3);
}
