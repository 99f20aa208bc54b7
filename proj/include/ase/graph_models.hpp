#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ase/matrix.hpp"

namespace ase {

// Latent positions, one row per vertex. Edge probabilities are the pairwise
// inner products, so every X_i.X_j must land in [0,1] and the matrix must
// have full column rank.
struct LatentPositionMatrix {
  Matrix X;

  int n() const { return X.rows(); }
  int d() const { return X.cols(); }

  // Rank check always; exhaustive inner-product range check for n <= 1024
  // (the sampler re-validates every pair it draws anyway).
  void validate() const;
};

struct BlockModelSpec {
  int K = 0;
  Matrix B;                            // K x K symmetric edge probabilities
  std::vector<int> tau;                // block of each vertex, 0-based
  std::vector<double> degree_factors;  // empty for a plain blockmodel

  int n() const { return (int)tau.size(); }
  bool degree_corrected() const { return !degree_factors.empty(); }
  std::vector<int> block_sizes() const;
  void validate() const;
};

enum class AdjacencyStorage { automatic, bitset, csr };

// Symmetric hollow {0,1} adjacency matrix plus the seed that produced it.
// Bit-packed rows up to n = 2^15, CSR beyond that.
class AdjacencySample {
 public:
  static constexpr int kBitsetMaxN = 1 << 15;

  AdjacencySample() = default;

  int n() const { return n_; }
  uint64_t seed() const { return seed_; }
  bool uses_bitset() const { return !bits_.empty() || neighbors_.empty(); }

  bool at(int i, int j) const;
  long long edge_count() const;
  int degree(int i) const;

  void matvec(const double* x, double* y) const;
  void matvec_serial(const double* x, double* y) const;

  // Upper-triangle edges in (i, j) order with i < j.
  std::vector<std::pair<int, int>> edges() const;

  bool operator==(const AdjacencySample& o) const {
    return n_ == o.n_ && bits_ == o.bits_ && offsets_ == o.offsets_ && neighbors_ == o.neighbors_;
  }

  static AdjacencySample from_edges(int n, uint64_t seed,
                                    const std::vector<std::pair<int, int>>& edges);

 private:
  int n_ = 0;
  uint64_t seed_ = 0;
  int words_per_row_ = 0;
  std::vector<uint64_t> bits_;      // bitset storage
  std::vector<uint64_t> offsets_;   // CSR storage
  std::vector<uint32_t> neighbors_;

  friend AdjacencySample sample_adjacency(const LatentPositionMatrix&, uint64_t,
                                          AdjacencyStorage);
};

AdjacencySample sample_adjacency(const LatentPositionMatrix& X, uint64_t seed,
                                 AdjacencyStorage storage = AdjacencyStorage::automatic);

// Factor B into latent rows: one distinct row per block (scaled by the
// degree factors when present). d defaults to the numerical rank of B.
LatentPositionMatrix sbm_to_latent(const BlockModelSpec& spec, int d_override = 0);

// The distinct latent rows themselves (K x d), same factorization.
Matrix block_latent_rows(const Matrix& B, int d_override = 0);

struct LatentDistribution {
  enum class Kind { point_mass, segment };
  Kind kind = Kind::point_mass;
  Matrix atoms;                  // point-mass support, one row per atom
  std::vector<double> weights;   // mixture weights
  std::vector<double> seg_from;  // segment endpoints
  std::vector<double> seg_to;

  void validate() const;
  static LatentDistribution point_masses(Matrix atoms, std::vector<double> weights);
  static LatentDistribution segment(std::vector<double> from, std::vector<double> to);
  // latent dimension spanned by the support
  int ambient_dim() const;
  int rank() const;
};

struct IidLatentSample {
  LatentPositionMatrix X;
  std::vector<int> atom;  // atom index per draw (point-mass kind only)
};

IidLatentSample sample_iid_latent(const LatentDistribution& F, int n, uint64_t seed);

// ---- model configuration -------------------------------------------------

struct DegreeSpec {
  enum class Kind { none, values, uniform };
  Kind kind = Kind::none;
  std::vector<double> values;
  double lo = 0.0, hi = 0.0;
};

struct ModelConfig {
  std::string id;
  int K = 0;
  Matrix B;
  std::vector<int> block_sizes;  // optional; proportions kept when rescaling to a new n
  std::vector<int> tau;          // optional explicit memberships
  DegreeSpec degree;
  uint64_t seed = 0;  // default sampling seed for the CLI
  int d_override = 0;

  bool dcsbm() const { return degree.kind != DegreeSpec::Kind::none; }
};

ModelConfig example21_config();
ModelConfig fig2_config();
ModelConfig example22_config(double a, double b, double c);

// Accepts a preset name ("example21", "fig2", "example22[:a,b,c]") or a path
// to a JSON model file.
ModelConfig load_model_config(const std::string& path_or_preset);
ModelConfig model_config_from_json(const std::string& text, const std::string& id);

// Resolve memberships and degree factors at size n. degree_seed feeds the
// Uniform(lo,hi) draw when the config asks for random degree factors.
BlockModelSpec instantiate(const ModelConfig& cfg, int n, uint64_t degree_seed);

// Point-mass latent distribution matching a (non-degree-corrected) model:
// atoms are the distinct latent rows, weights the block proportions.
LatentDistribution distribution_from_model(const ModelConfig& cfg);

}  // namespace ase
