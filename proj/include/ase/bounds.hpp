#pragma once
#include <string>
#include <vector>

#include "ase/graph_models.hpp"
#include "ase/matrix.hpp"
#include "ase/spectral.hpp"

namespace ase {

struct ModelConstants {
  int n = 0;
  double Delta = 0.0;  // max over i of sum_{j != i} P_ij
  double gamma = 0.0;  // (min gap among distinct eigenvalues of P, incl. the gap to 0) / n
  int d = 0;           // numerical rank of P
  int K = 0;
  int n_min = 0;
  std::vector<double> eigenvalues_P;  // distinct nonzero eigenvalues, descending
};

// Exact constants from P = X X^T (never materialized: the nonzero spectrum of
// P equals the spectrum of X^T X). Distinct eigenvalues grouped at 1e-9
// relative tolerance. tau may be empty, in which case blocks are the groups
// of exactly equal rows.
ModelConstants model_constants(const LatentPositionMatrix& X, const std::vector<int>& tau);

struct BetaValue {
  double value = 0.0;
  bool hypothesis_ok = false;  // gamma*n >= 4 sqrt(Delta log(n/eta))
};

// 85 d Delta^3 log(n/eta) / (gamma n)^{7/2}; computed (and flagged) even when
// the hypothesis fails so regime plots can show the transition.
BetaValue beta_bound(int d, int n, double eta, double Delta, double gamma);

struct BoundEntry {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct BoundReport {
  std::vector<BoundEntry> entries;
  double eta = 0.0;
  const BoundEntry* find(const std::string& name) const;
};

// Evaluates every explicit bound against one sample:
//   a_minus_p        ||A - P||_2              vs 2 sqrt(Delta log(n/eta))
//   vhat_minus_v_sq  ||Vhat - V||_F^2         vs 4 d Delta log(n/eta) / (gamma n)^2
//   shat_minus_s     ||Shat - S||_2           vs 18 d Delta^2 log(n/eta) / (gamma n)^2
//   vtvhat_minus_i   ||V^T Vhat - I||_F       vs 10 d Delta log(n/eta) / (gamma n)^2
//   avs_minus_xhat   ||A V Shat^{-1/2}-Xhat||_F vs 24 sqrt(2) d Delta^2 log(n/eta)/(gamma n)^{5/2}
//   shat_cap         ||Shat||_2               vs min(2 Delta, n)
//   two_inf          ||Xhat - X W||_{2->inf}  vs beta
//   sphere           max_i ||Yhat_i - Ytil_i|| vs 2 * measured two-inf error / c_min   (DCSBM)
// Population eigenvector signs are aligned to Vhat before the comparisons.
BoundReport bound_report(const SymOp& A, const LatentPositionMatrix& X,
                         const SpectralEmbedding& emb, double eta, bool dcsbm = false);
BoundReport bound_report(const AdjacencySample& A, const LatentPositionMatrix& X,
                         const SpectralEmbedding& emb, double eta, bool dcsbm = false);

struct AssumptionReport {
  double eta = 0.0;
  double beta = 0.0;
  bool beta_hypothesis_ok = false;

  bool a0 = false;  // distinct nonzero eigenvalues of P
  double a0_min_rel_gap = 0.0;

  bool a1 = false;  // min separation of distinct rows > 6 beta sqrt(n/n_min)
  double a1_min_separation = 0.0;
  double a1_threshold = 0.0;

  bool a2 = false;  // gamma n > 4 sqrt(Delta log(n/eta))
  double a2_lhs = 0.0;
  double a2_rhs = 0.0;

  bool has_dcsbm = false;  // r > 2 beta sqrt(n/n_min) / c_min
  bool dcsbm_ok = false;
  double dcsbm_r = 0.0;
  double dcsbm_threshold = 0.0;
  double c_min = 0.0;

  ModelConstants constants;
};

AssumptionReport check_assumptions(const LatentPositionMatrix& X, const std::vector<int>& tau,
                                   const std::vector<double>& degree_factors, double eta);
AssumptionReport check_assumptions(const ModelConfig& cfg, int n, double eta,
                                   uint64_t degree_seed = 0);

// ---- sparse regime ---------------------------------------------------------

// Sum of alpha * n^p * log(n)^q terms, e.g. "2*n^0.6 + 1" or "n^0.5*log".
struct GrowthTerm {
  double coeff = 0.0;
  double n_pow = 0.0;
  double log_pow = 0.0;
};

struct GrowthExpr {
  std::vector<GrowthTerm> terms;
  double eval(double n) const;
  GrowthTerm leading() const;  // highest (n_pow, log_pow)
  static GrowthExpr parse(const std::string& text);
  std::string str() const;
};

enum class Eventual { holds, fails, borderline };

struct RegimeRow {
  double n = 0.0, a = 0.0, b = 0.0;
  double a1_lhs = 0.0, a1_rhs = 0.0;
  bool a1 = false;
  double a2_lhs = 0.0, a2_rhs = 0.0;
  bool a2 = false;
};

struct SparseRegimeTable {
  std::vector<RegimeRow> rows;
  std::string case_label;  // bounded / b_comparable_to_a / b_small_vs_a / gap_small_vs_b
  Eventual a1_eventually = Eventual::borderline;
  Eventual a2_eventually = Eventual::borderline;
  double eta = 0.0;
};

// Example-2.2 regime evaluation with c = 1/n: reduced inequalities
//   A2: min{b^2, (a-b)^2/4} / (a+b)          > 8 log(n/eta)
//   A1: sqrt(a-b) min{b, (a-b)/2}^{7/2}/(a+b)^3 > 127.5 sqrt(n) log(n/eta)
// on the grid, growth classification, and large-n verdicts.
SparseRegimeTable sparse_regime(const GrowthExpr& a, const GrowthExpr& b,
                                const std::vector<double>& n_grid, double eta);

}  // namespace ase
