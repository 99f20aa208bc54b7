#include "ase/graph_models.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ase/errors.hpp"
#include "ase/kernels.hpp"
#include "ase/rng.hpp"
#include "ase/spectral.hpp"

namespace ase {

void LatentPositionMatrix::validate() const {
  const int nn = n(), dd = d();
  if (nn == 0 || dd == 0) throw ValidationError("latent positions: empty matrix");
  Matrix G = multiply_tn(X, X);
  std::vector<double> lam;
  Matrix Q;
  dense_eig_full(G, lam, Q);
  const double lmax = lam.back();
  if (!(lmax > 0.0) || lam.front() <= 1e-20 * lmax || std::sqrt(lam.front() / lmax) <= 1e-10)
    throw ValidationError("latent positions: matrix is numerically rank deficient (d-th singular value <= 1e-10 of largest)");
  if (nn <= 1024) {
    for (int i = 0; i < nn; ++i)
      for (int j = i; j < nn; ++j) {
        const double p = dot(X.row(i), X.row(j), dd);
        if (p < -1e-12 || p > 1.0 + 1e-12)
          throw ValidationError("latent positions: inner product (" + std::to_string(i) + "," +
                                std::to_string(j) + ") = " + std::to_string(p) +
                                " outside [0,1]");
      }
  }
}

std::vector<int> BlockModelSpec::block_sizes() const {
  std::vector<int> sizes(K, 0);
  for (int t : tau) ++sizes[t];
  return sizes;
}

void BlockModelSpec::validate() const {
  if (K < 1) throw ValidationError("block model: K must be >= 1");
  if (B.rows() != K || B.cols() != K) throw ValidationError("block model: B must be K x K");
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) {
      if (std::fabs(B(i, j) - B(j, i)) > 1e-12)
        throw ValidationError("block model: B must be symmetric");
      if (B(i, j) < 0.0 || B(i, j) > 1.0)
        throw ValidationError("block model: B entries must lie in [0,1]");
    }
  std::vector<double> lam;
  Matrix Q;
  dense_eig_full(B, lam, Q);
  if (lam.front() < -1e-10)
    throw ValidationError("block model: B has eigenvalue " + std::to_string(lam.front()) +
                          " < -1e-10, not positive semidefinite");
  if (tau.empty()) throw ValidationError("block model: empty membership vector");
  std::vector<int> sizes(K, 0);
  for (int t : tau) {
    if (t < 0 || t >= K) throw ValidationError("block model: membership out of range");
    ++sizes[t];
  }
  for (int k = 0; k < K; ++k)
    if (sizes[k] < 1)
      throw ValidationError("block model: block " + std::to_string(k + 1) + " is empty");
  if (!degree_factors.empty()) {
    if ((int)degree_factors.size() != n())
      throw ValidationError("block model: degree factors must have one entry per vertex");
    for (double c : degree_factors)
      if (!(c > 0.0 && c < 1.0))
        throw ValidationError("block model: degree factors must lie in (0,1)");
  }
}

Matrix block_latent_rows(const Matrix& B, int d_override) {
  const int K = B.rows();
  std::vector<double> lam;
  Matrix Q;
  dense_eig_full(B, lam, Q);  // ascending
  if (lam.front() < -1e-10)
    throw ValidationError("sbm_to_latent: B has eigenvalue " + std::to_string(lam.front()) +
                          " < -1e-10, not representable as inner products");
  const double lmax = std::max(lam.back(), 0.0);
  std::vector<int> keep;
  for (int i = K - 1; i >= 0; --i)
    if (lam[i] > 1e-10 * std::max(lmax, 1e-300) && lam[i] > 0.0) keep.push_back(i);
  if (keep.empty()) throw ValidationError("sbm_to_latent: B has numerical rank 0");
  int d = (int)keep.size();
  if (d_override > 0) {
    if (d_override > d)
      throw ValidationError("sbm_to_latent: requested d exceeds the positive rank of B");
    d = d_override;
  }
  Matrix N(K, d);
  for (int c = 0; c < d; ++c) {
    const double s = std::sqrt(lam[keep[c]]);
    for (int k = 0; k < K; ++k) N(k, c) = Q(k, keep[c]) * s;
  }
  return N;
}

LatentPositionMatrix sbm_to_latent(const BlockModelSpec& spec, int d_override) {
  spec.validate();
  Matrix N = block_latent_rows(spec.B, d_override);
  if (spec.degree_corrected()) {
    // block directions must be unit vectors, i.e. B has unit diagonal
    for (int k = 0; k < spec.K; ++k)
      if (std::fabs(row_norm(N.row(k), N.cols()) - 1.0) > 1e-9)
        throw ValidationError("degree-corrected model: B must have unit diagonal");
  }
  LatentPositionMatrix res;
  res.X = Matrix(spec.n(), N.cols());
  for (int i = 0; i < spec.n(); ++i) {
    const double c = spec.degree_corrected() ? spec.degree_factors[i] : 1.0;
    const double* src = N.row(spec.tau[i]);
    double* dst = res.X.row(i);
    for (int j = 0; j < N.cols(); ++j) dst[j] = c * src[j];
  }
  res.validate();
  return res;
}

// ---- adjacency -------------------------------------------------------------

bool AdjacencySample::at(int i, int j) const {
  if (i == j) return false;
  if (!bits_.empty())
    return (bits_[size_t(i) * words_per_row_ + (j >> 6)] >> (j & 63)) & 1;
  const uint32_t* lo = neighbors_.data() + offsets_[i];
  const uint32_t* hi = neighbors_.data() + offsets_[i + 1];
  return std::binary_search(lo, hi, (uint32_t)j);
}

int AdjacencySample::degree(int i) const {
  if (!bits_.empty()) {
    int deg = 0;
    const uint64_t* row = bits_.data() + size_t(i) * words_per_row_;
    for (int w = 0; w < words_per_row_; ++w) deg += std::popcount(row[w]);
    return deg;
  }
  return (int)(offsets_[i + 1] - offsets_[i]);
}

long long AdjacencySample::edge_count() const {
  long long total = 0;
  for (int i = 0; i < n_; ++i) total += degree(i);
  return total / 2;
}

void AdjacencySample::matvec(const double* x, double* y) const {
  if (!bits_.empty())
    kernels::bit_matvec(n_, words_per_row_, bits_.data(), x, y);
  else
    kernels::csr_matvec(n_, offsets_.data(), neighbors_.data(), x, y);
}

void AdjacencySample::matvec_serial(const double* x, double* y) const {
  if (!bits_.empty())
    kernels::serial::bit_matvec(n_, words_per_row_, bits_.data(), x, y);
  else
    kernels::serial::csr_matvec(n_, offsets_.data(), neighbors_.data(), x, y);
}

std::vector<std::pair<int, int>> AdjacencySample::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i) {
    if (!bits_.empty()) {
      const uint64_t* row = bits_.data() + size_t(i) * words_per_row_;
      for (int w = 0; w < words_per_row_; ++w) {
        uint64_t word = row[w];
        const int base = w << 6;
        while (word) {
          const int j = base + std::countr_zero(word);
          word &= word - 1;
          if (j > i) out.emplace_back(i, j);
        }
      }
    } else {
      for (uint64_t k = offsets_[i]; k < offsets_[i + 1]; ++k)
        if ((int)neighbors_[k] > i) out.emplace_back(i, (int)neighbors_[k]);
    }
  }
  return out;
}

AdjacencySample AdjacencySample::from_edges(int n, uint64_t seed,
                                            const std::vector<std::pair<int, int>>& edges) {
  AdjacencySample A;
  A.n_ = n;
  A.seed_ = seed;
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw ValidationError("edge (" + std::to_string(i) + "," + std::to_string(j) +
                            ") out of range for n=" + std::to_string(n));
    if (i == j) throw ValidationError("self-loop at vertex " + std::to_string(i));
  }
  if (n <= kBitsetMaxN) {
    A.words_per_row_ = (n + 63) / 64;
    A.bits_.assign(size_t(n) * A.words_per_row_, 0);
    for (auto [i, j] : edges) {
      A.bits_[size_t(i) * A.words_per_row_ + (j >> 6)] |= uint64_t(1) << (j & 63);
      A.bits_[size_t(j) * A.words_per_row_ + (i >> 6)] |= uint64_t(1) << (i & 63);
    }
  } else {
    std::vector<uint64_t> counts(n + 1, 0);
    for (auto [i, j] : edges) {
      ++counts[i + 1];
      ++counts[j + 1];
    }
    for (int i = 0; i < n; ++i) counts[i + 1] += counts[i];
    A.offsets_ = counts;
    A.neighbors_.resize(counts[n]);
    std::vector<uint64_t> cursor(counts.begin(), counts.end() - 1);
    for (auto [i, j] : edges) {
      A.neighbors_[cursor[i]++] = j;
      A.neighbors_[cursor[j]++] = i;
    }
    for (int i = 0; i < n; ++i)
      std::sort(A.neighbors_.begin() + A.offsets_[i], A.neighbors_.begin() + A.offsets_[i + 1]);
  }
  return A;
}

AdjacencySample sample_adjacency(const LatentPositionMatrix& X, uint64_t seed,
                                 AdjacencyStorage storage) {
  const int n = X.n();
  if (n < 1) throw ValidationError("sample_adjacency: empty model");
  bool use_csr = storage == AdjacencyStorage::csr ||
                 (storage == AdjacencyStorage::automatic && n > AdjacencySample::kBitsetMaxN);
  AdjacencySample A;
  A.n_ = n;
  A.seed_ = seed;
  if (!use_csr) {
    A.words_per_row_ = (n + 63) / 64;
    A.bits_.assign(size_t(n) * A.words_per_row_, 0);
    const long long bad = kernels::sample_bits(X.X, seed, A.words_per_row_, A.bits_.data());
    if (bad >= 0) {
      const int bi = (int)(bad >> 32), bj = (int)(bad & 0xffffffffLL);
      throw ValidationError("sample_adjacency: X_i.X_j outside [0,1] at pair (" +
                            std::to_string(bi) + "," + std::to_string(bj) + ")");
    }
    return A;
  }
  // CSR: two passes over the same counter-based stream
  const Matrix& M = X.X;
  const int d = M.cols();
  std::vector<uint64_t> counts(size_t(n) + 1, 0);
  std::atomic<long long> first_bad{-1};
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    uint64_t deg = 0;
    const double* xi = M.row(i);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double p = kernels::edge_probability(xi, M.row(j), d);
      if (std::isnan(p)) {
        const long long enc = ((long long)std::min(i, j) << 32) | (unsigned)std::max(i, j);
        long long cur = first_bad.load();
        while ((cur < 0 || enc < cur) && !first_bad.compare_exchange_weak(cur, enc)) {
        }
        continue;
      }
      if (pair_uniform(seed, std::min(i, j), std::max(i, j)) < p) ++deg;
    }
    counts[i + 1] = deg;
  }
  if (first_bad.load() >= 0) {
    const long long bad = first_bad.load();
    throw ValidationError("sample_adjacency: X_i.X_j outside [0,1] at pair (" +
                          std::to_string((int)(bad >> 32)) + "," +
                          std::to_string((int)(bad & 0xffffffffLL)) + ")");
  }
  for (int i = 0; i < n; ++i) counts[i + 1] += counts[i];
  A.offsets_ = counts;
  A.neighbors_.resize(counts[n]);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    uint64_t pos = A.offsets_[i];
    const double* xi = M.row(i);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double p = kernels::edge_probability(xi, M.row(j), d);
      if (pair_uniform(seed, std::min(i, j), std::max(i, j)) < p) A.neighbors_[pos++] = j;
    }
  }
  return A;
}

// ---- latent distributions --------------------------------------------------

void LatentDistribution::validate() const {
  if (kind == Kind::point_mass) {
    const int m = atoms.rows(), d = atoms.cols();
    if (m < 1 || d < 1) throw ValidationError("latent distribution: no atoms");
    if ((int)weights.size() != m)
      throw ValidationError("latent distribution: one weight per atom required");
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw ValidationError("latent distribution: negative weight");
      total += w;
    }
    if (std::fabs(total - 1.0) > 1e-9)
      throw ValidationError("latent distribution: weights must sum to 1");
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        const double p = dot(atoms.row(i), atoms.row(j), d);
        if (p < -1e-12 || p > 1.0 + 1e-12)
          throw ValidationError("latent distribution: atom inner product outside [0,1]");
      }
  } else {
    const int d = (int)seg_from.size();
    if (d < 1 || seg_to.size() != seg_from.size())
      throw ValidationError("latent distribution: malformed segment");
    // inner products over the segment are bilinear in the endpoints, so the
    // extrema sit at the four corners
    const double* pts[2] = {seg_from.data(), seg_to.data()};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const double p = dot(pts[a], pts[b], d);
        if (p < -1e-12 || p > 1.0 + 1e-12)
          throw ValidationError("latent distribution: segment corner product outside [0,1]");
      }
  }
}

LatentDistribution LatentDistribution::point_masses(Matrix atoms, std::vector<double> weights) {
  LatentDistribution F;
  F.kind = Kind::point_mass;
  F.atoms = std::move(atoms);
  F.weights = std::move(weights);
  F.validate();
  return F;
}

LatentDistribution LatentDistribution::segment(std::vector<double> from, std::vector<double> to) {
  LatentDistribution F;
  F.kind = Kind::segment;
  F.seg_from = std::move(from);
  F.seg_to = std::move(to);
  F.validate();
  return F;
}

int LatentDistribution::ambient_dim() const {
  return kind == Kind::point_mass ? atoms.cols() : (int)seg_from.size();
}

int LatentDistribution::rank() const {
  Matrix D;
  if (kind == Kind::point_mass) {
    D = atoms;
  } else {
    D = Matrix(2, ambient_dim());
    for (int j = 0; j < ambient_dim(); ++j) {
      D(0, j) = seg_from[j];
      D(1, j) = seg_to[j];
    }
  }
  Matrix G = multiply_tn(D, D);
  std::vector<double> lam;
  Matrix Q;
  dense_eig_full(G, lam, Q);
  const double lmax = std::max(lam.back(), 0.0);
  int r = 0;
  for (double l : lam)
    if (l > 1e-10 * std::max(lmax, 1e-300)) ++r;
  return r;
}

IidLatentSample sample_iid_latent(const LatentDistribution& F, int n, uint64_t seed) {
  F.validate();
  if (n < 1) throw ValidationError("sample_iid_latent: n must be >= 1");
  IidLatentSample out;
  out.X.X = Matrix(n, F.ambient_dim());
  SplitMix64 rng(seed);
  if (F.kind == LatentDistribution::Kind::point_mass) {
    out.atom.resize(n);
    std::vector<double> cum(F.weights.size());
    double run = 0.0;
    for (size_t k = 0; k < F.weights.size(); ++k) {
      run += F.weights[k];
      cum[k] = run;
    }
    cum.back() = 1.0;
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform();
      int k = 0;
      while (u >= cum[k]) ++k;
      out.atom[i] = k;
      for (int j = 0; j < F.atoms.cols(); ++j) out.X.X(i, j) = F.atoms(k, j);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const double t = rng.uniform();
      for (int j = 0; j < (int)F.seg_from.size(); ++j)
        out.X.X(i, j) = F.seg_from[j] + t * (F.seg_to[j] - F.seg_from[j]);
    }
  }
  return out;
}

// ---- configuration ---------------------------------------------------------

ModelConfig example21_config() {
  ModelConfig cfg;
  cfg.id = "example21";
  cfg.K = 2;
  cfg.B = Matrix(2, 2);
  cfg.B(0, 0) = 0.41;
  cfg.B(0, 1) = 0.09;
  cfg.B(1, 0) = 0.09;
  cfg.B(1, 1) = 0.41;
  return cfg;
}

ModelConfig fig2_config() {
  // two unit directions y1 = (1/5, 2*sqrt(6)/5), y2 = (2*sqrt(6)/5, 1/5),
  // multiplied by per-vertex Uniform(0.2, 0.5) degree factors
  ModelConfig cfg;
  cfg.id = "fig2";
  cfg.K = 2;
  const double cross = 4.0 * std::sqrt(6.0) / 25.0;
  cfg.B = Matrix(2, 2);
  cfg.B(0, 0) = 1.0;
  cfg.B(0, 1) = cross;
  cfg.B(1, 0) = cross;
  cfg.B(1, 1) = 1.0;
  cfg.degree.kind = DegreeSpec::Kind::uniform;
  cfg.degree.lo = 0.2;
  cfg.degree.hi = 0.5;
  return cfg;
}

ModelConfig example22_config(double a, double b, double c) {
  if (!(a > b)) throw ValidationError("example22 requires a > b");
  if (!(b >= 0.0) || !(c > 0.0) || c * a > 1.0)
    throw ValidationError("example22 requires 0 <= c*b, c*a <= 1");
  ModelConfig cfg;
  std::ostringstream id;
  id << "example22(a=" << a << ",b=" << b << ",c=" << c << ")";
  cfg.id = id.str();
  cfg.K = 2;
  cfg.B = Matrix(2, 2);
  cfg.B(0, 0) = c * a;
  cfg.B(0, 1) = c * b;
  cfg.B(1, 0) = c * b;
  cfg.B(1, 1) = c * a;
  return cfg;
}

ModelConfig model_config_from_json(const std::string& text, const std::string& id) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model config: invalid JSON: ") + e.what());
  }
  ModelConfig cfg;
  cfg.id = id;
  try {
    cfg.K = j.at("K").get<int>();
    if (cfg.K < 1) throw ValidationError("model config: K must be >= 1");
    const auto& b = j.at("B");
    if ((int)b.size() != cfg.K * cfg.K)
      throw ValidationError("model config: B must have K*K row-major entries");
    cfg.B = Matrix(cfg.K, cfg.K);
    for (int i = 0; i < cfg.K; ++i)
      for (int c = 0; c < cfg.K; ++c) cfg.B(i, c) = b.at(i * cfg.K + c).get<double>();
    if (j.contains("block_sizes"))
      cfg.block_sizes = j.at("block_sizes").get<std::vector<int>>();
    if (j.contains("tau")) cfg.tau = j.at("tau").get<std::vector<int>>();
    if (j.contains("degree_factors")) {
      const auto& df = j.at("degree_factors");
      if (df.is_array()) {
        cfg.degree.kind = DegreeSpec::Kind::values;
        cfg.degree.values = df.get<std::vector<double>>();
      } else if (df.is_object() && df.contains("uniform")) {
        cfg.degree.kind = DegreeSpec::Kind::uniform;
        cfg.degree.lo = df.at("uniform").at(0).get<double>();
        cfg.degree.hi = df.at("uniform").at(1).get<double>();
      } else {
        throw ValidationError("model config: degree_factors must be an array or {\"uniform\":[lo,hi]}");
      }
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    if (j.contains("d")) cfg.d_override = j.at("d").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model config: ") + e.what());
  }
  return cfg;
}

ModelConfig load_model_config(const std::string& path_or_preset) {
  if (path_or_preset == "example21") return example21_config();
  if (path_or_preset == "fig2") return fig2_config();
  if (path_or_preset.rfind("example22", 0) == 0) {
    double a = 3.0, b = 1.0, c = 0.25;
    const auto colon = path_or_preset.find(':');
    if (colon != std::string::npos) {
      std::string args = path_or_preset.substr(colon + 1);
      for (char& ch : args)
        if (ch == ',') ch = ' ';
      std::istringstream in(args);
      if (!(in >> a >> b >> c))
        throw ValidationError("example22 preset expects example22:a,b,c");
    }
    return example22_config(a, b, c);
  }
  std::ifstream in(path_or_preset);
  if (!in)
    throw ValidationError("model '" + path_or_preset +
                          "' is neither a preset (example21, fig2, example22[:a,b,c]) nor a readable file");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string stem = path_or_preset;
  const auto slash = stem.find_last_of('/');
  if (slash != std::string::npos) stem = stem.substr(slash + 1);
  const auto dot = stem.find_last_of('.');
  if (dot != std::string::npos) stem = stem.substr(0, dot);
  return model_config_from_json(buf.str(), stem);
}

static std::vector<int> scale_block_sizes(const std::vector<int>& ref, int K, int n) {
  std::vector<double> prop(K);
  if (ref.empty()) {
    for (int k = 0; k < K; ++k) prop[k] = 1.0 / K;
  } else {
    double total = 0.0;
    for (int s : ref) {
      if (s < 1) throw ValidationError("model config: block sizes must be positive");
      total += s;
    }
    for (int k = 0; k < K; ++k) prop[k] = ref[k] / total;
  }
  std::vector<int> sizes(K);
  std::vector<std::pair<double, int>> frac(K);
  int assigned = 0;
  for (int k = 0; k < K; ++k) {
    const double want = prop[k] * n;
    sizes[k] = (int)std::floor(want);
    frac[k] = {want - sizes[k], k};
    assigned += sizes[k];
  }
  std::stable_sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;  // biggest remainder first, index breaks ties
  });
  for (int r = 0; r < n - assigned; ++r) ++sizes[frac[r % K].second];
  for (int k = 0; k < K; ++k)
    if (sizes[k] < 1) {
      int donor = (int)(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
      if (sizes[donor] < 2)
        throw ValidationError("model config: n too small for " + std::to_string(K) + " blocks");
      --sizes[donor];
      ++sizes[k];
    }
  return sizes;
}

BlockModelSpec instantiate(const ModelConfig& cfg, int n, uint64_t degree_seed) {
  if (n < cfg.K) throw ValidationError("instantiate: n must be at least K");
  BlockModelSpec spec;
  spec.K = cfg.K;
  spec.B = cfg.B;
  if (!cfg.tau.empty()) {
    if ((int)cfg.tau.size() != n)
      throw ValidationError("instantiate: explicit tau has size " +
                            std::to_string(cfg.tau.size()) + " but n=" + std::to_string(n));
    spec.tau = cfg.tau;
  } else {
    const std::vector<int> sizes = scale_block_sizes(cfg.block_sizes, cfg.K, n);
    spec.tau.reserve(n);
    for (int k = 0; k < cfg.K; ++k) spec.tau.insert(spec.tau.end(), sizes[k], k);
  }
  switch (cfg.degree.kind) {
    case DegreeSpec::Kind::none:
      break;
    case DegreeSpec::Kind::values:
      if ((int)cfg.degree.values.size() != n)
        throw ValidationError("instantiate: degree factor list must have n entries");
      spec.degree_factors = cfg.degree.values;
      break;
    case DegreeSpec::Kind::uniform: {
      if (!(cfg.degree.lo > 0.0 && cfg.degree.hi < 1.0 && cfg.degree.lo < cfg.degree.hi))
        throw ValidationError("instantiate: uniform degree range must satisfy 0 < lo < hi < 1");
      SplitMix64 rng(degree_seed);
      spec.degree_factors.resize(n);
      for (int i = 0; i < n; ++i)
        spec.degree_factors[i] = rng.uniform(cfg.degree.lo, cfg.degree.hi);
      break;
    }
  }
  spec.validate();
  return spec;
}

LatentDistribution distribution_from_model(const ModelConfig& cfg) {
  if (cfg.dcsbm())
    throw ValidationError("distribution_from_model: degree-corrected models are not point-mass mixtures");
  Matrix atoms = block_latent_rows(cfg.B, cfg.d_override);
  std::vector<double> weights(cfg.K);
  if (cfg.block_sizes.empty()) {
    for (int k = 0; k < cfg.K; ++k) weights[k] = 1.0 / cfg.K;
  } else {
    double total = 0.0;
    for (int s : cfg.block_sizes) total += s;
    for (int k = 0; k < cfg.K; ++k) weights[k] = cfg.block_sizes[k] / total;
  }
  return LatentDistribution::point_masses(std::move(atoms), std::move(weights));
}

}  // namespace ase
