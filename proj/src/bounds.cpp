#include "ase/bounds.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "ase/errors.hpp"
#include "ase/rng.hpp"

namespace ase {

namespace {

// groups of exactly equal rows, first-seen order
std::vector<std::vector<int>> group_equal_rows(const Matrix& X) {
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < X.rows(); ++i) {
    bool placed = false;
    for (auto& g : groups) {
      const double* a = X.row(g.front());
      const double* b = X.row(i);
      bool same = true;
      for (int j = 0; j < X.cols(); ++j)
        if (a[j] != b[j]) {
          same = false;
          break;
        }
      if (same) {
        g.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({i});
  }
  return groups;
}

}  // namespace

ModelConstants model_constants(const LatentPositionMatrix& X, const std::vector<int>& tau) {
  ModelConstants mc;
  const int n = X.n(), dcols = X.d();
  mc.n = n;

  // Delta from row sums of P without forming P
  std::vector<double> colsum(dcols, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* xi = X.X.row(i);
    for (int j = 0; j < dcols; ++j) colsum[j] += xi[j];
  }
  double delta = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* xi = X.X.row(i);
    delta = std::max(delta, dot(xi, colsum.data(), dcols) - dot(xi, xi, dcols));
  }
  mc.Delta = delta;

  // nonzero spectrum of P = spectrum of X^T X
  Matrix G = multiply_tn(X.X, X.X);
  std::vector<double> lam;
  Matrix Q;
  dense_eig_full(G, lam, Q);
  std::sort(lam.begin(), lam.end(), std::greater<double>());
  const double lmax = lam.empty() ? 0.0 : std::max(lam.front(), 0.0);
  std::vector<double> nonzero;
  for (double l : lam)
    if (l > 1e-10 * std::max(lmax, 1e-300)) nonzero.push_back(l);
  mc.d = (int)nonzero.size();

  // distinct values at 1e-9 relative tolerance
  for (double l : nonzero) {
    if (mc.eigenvalues_P.empty() || mc.eigenvalues_P.back() - l > 1e-9 * lmax)
      mc.eigenvalues_P.push_back(l);
  }
  double min_gap = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < mc.eigenvalues_P.size(); ++i)
    min_gap = std::min(min_gap, mc.eigenvalues_P[i] - mc.eigenvalues_P[i + 1]);
  if (!mc.eigenvalues_P.empty()) min_gap = std::min(min_gap, mc.eigenvalues_P.back());
  mc.gamma = std::isfinite(min_gap) ? min_gap / n : 0.0;

  if (!tau.empty()) {
    if ((int)tau.size() != n) throw ValidationError("model_constants: tau size mismatch");
    const int K = 1 + *std::max_element(tau.begin(), tau.end());
    std::vector<int> sizes(K, 0);
    for (int t : tau) {
      if (t < 0) throw ValidationError("model_constants: negative label");
      ++sizes[t];
    }
    mc.K = K;
    mc.n_min = *std::min_element(sizes.begin(), sizes.end());
  } else {
    auto groups = group_equal_rows(X.X);
    mc.K = (int)groups.size();
    int nm = n;
    for (const auto& g : groups) nm = std::min(nm, (int)g.size());
    mc.n_min = nm;
  }
  return mc;
}

BetaValue beta_bound(int d, int n, double eta, double Delta, double gamma) {
  if (!(eta > 0.0 && eta < 0.5)) throw ValidationError("beta: eta must lie in (0, 1/2)");
  if (!(Delta > 0.0)) throw ValidationError("beta: Delta must be positive");
  if (!(gamma > 0.0)) throw ValidationError("beta: gamma must be positive");
  if (d < 1 || n < 1) throw ValidationError("beta: d and n must be positive");
  const double logterm = std::log((double)n / eta);
  BetaValue bv;
  bv.value = 85.0 * d * Delta * Delta * Delta * logterm / std::pow(gamma * n, 3.5);
  bv.hypothesis_ok = gamma * n >= 4.0 * std::sqrt(Delta * logterm);
  return bv;
}

const BoundEntry* BoundReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

BoundReport bound_report(const SymOp& A, const LatentPositionMatrix& X,
                         const SpectralEmbedding& emb, double eta, bool dcsbm) {
  const int n = X.n();
  if (A.n != n || emb.Xhat.rows() != n)
    throw ValidationError("bound_report: size mismatch between A, X and the embedding");
  const int d = emb.Xhat.cols();

  ModelConstants mc = model_constants(X, {});
  if (mc.d != d)
    throw ValidationError("bound_report: embedding dimension " + std::to_string(d) +
                          " does not match rank(P) = " + std::to_string(mc.d));
  const double L = std::log((double)n / eta);
  const double gn = mc.gamma * n;

  // population eigenpairs of P from X^T X: V = X Q Lambda^{-1/2}
  Matrix G = multiply_tn(X.X, X.X);
  std::vector<double> lam_all;
  Matrix Q;
  dense_eig_full(G, lam_all, Q);  // ascending
  std::vector<double> S(d);
  Matrix V(n, d);
  for (int c = 0; c < d; ++c) {
    const int src = (int)lam_all.size() - 1 - c;
    S[c] = lam_all[src];
    const double inv = 1.0 / std::sqrt(lam_all[src]);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < X.d(); ++k) s += X.X(i, k) * Q(k, src);
      V(i, c) = s * inv;
    }
  }
  // align population signs to the sample eigenvectors
  for (int c = 0; c < d; ++c) {
    double dotc = 0.0;
    for (int i = 0; i < n; ++i) dotc += V(i, c) * emb.Vhat(i, c);
    if (dotc < 0.0)
      for (int i = 0; i < n; ++i) V(i, c) = -V(i, c);
  }

  BoundReport rep;
  rep.eta = eta;
  auto push = [&rep](const std::string& name, double lhs, double rhs) {
    rep.entries.push_back({name, lhs, rhs, lhs <= rhs});
  };

  push("a_minus_p", spectral_norm_sym(diff_op(A, X.X)), 2.0 * std::sqrt(mc.Delta * L));

  double vdiff2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c) {
      const double r = emb.Vhat(i, c) - V(i, c);
      vdiff2 += r * r;
    }
  push("vhat_minus_v_sq", vdiff2, 4.0 * d * mc.Delta * L / (gn * gn));

  double sdiff = 0.0, smax = 0.0;
  for (int c = 0; c < d; ++c) {
    sdiff = std::max(sdiff, std::fabs(emb.eigenvalues[c] - S[c]));
    smax = std::max(smax, std::fabs(emb.eigenvalues[c]));
  }
  push("shat_minus_s", sdiff, 18.0 * d * mc.Delta * mc.Delta * L / (gn * gn));

  Matrix VtVhat = multiply_tn(V, emb.Vhat);
  for (int c = 0; c < d; ++c) VtVhat(c, c) -= 1.0;
  push("vtvhat_minus_i", frobenius_norm(VtVhat), 10.0 * d * mc.Delta * L / (gn * gn));

  {
    // A V Shat^{-1/2} column by column
    std::vector<double> x(n), y(n);
    double f2 = 0.0;
    for (int c = 0; c < d; ++c) {
      for (int i = 0; i < n; ++i) x[i] = V(i, c);
      A.apply(x.data(), y.data());
      const double inv = 1.0 / std::sqrt(emb.eigenvalues[c]);
      for (int i = 0; i < n; ++i) {
        const double r = y[i] * inv - emb.Xhat(i, c);
        f2 += r * r;
      }
    }
    push("avs_minus_xhat", std::sqrt(f2),
         24.0 * std::sqrt(2.0) * d * mc.Delta * mc.Delta * L / std::pow(gn, 2.5));
  }

  push("shat_cap", smax, std::min(2.0 * mc.Delta, (double)n));

  AlignmentResult ar = align(emb.Xhat, X.X);
  BetaValue beta = beta_bound(d, n, eta, mc.Delta, mc.gamma);
  push("two_inf", ar.residual_2inf, beta.value);

  if (dcsbm) {
    double c_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) c_min = std::min(c_min, row_norm(X.X.row(i), X.d()));
    Matrix Yhat = project_sphere(emb.Xhat);
    Matrix Ytil = multiply(project_sphere(X.X), ar.W);
    push("sphere", two_to_infty_norm(subtract(Yhat, Ytil)),
         2.0 * ar.residual_2inf / c_min);
  }
  return rep;
}

BoundReport bound_report(const AdjacencySample& A, const LatentPositionMatrix& X,
                         const SpectralEmbedding& emb, double eta, bool dcsbm) {
  return bound_report(adjacency_op(A), X, emb, eta, dcsbm);
}

AssumptionReport check_assumptions(const LatentPositionMatrix& X, const std::vector<int>& tau,
                                   const std::vector<double>& degree_factors, double eta) {
  AssumptionReport rep;
  rep.eta = eta;
  rep.constants = model_constants(X, tau);
  const ModelConstants& mc = rep.constants;
  const int n = mc.n;

  BetaValue beta = beta_bound(mc.d, n, eta, mc.Delta, mc.gamma);
  rep.beta = beta.value;
  rep.beta_hypothesis_ok = beta.hypothesis_ok;

  // A0: the d nonzero eigenvalues are pairwise distinct
  {
    Matrix G = multiply_tn(X.X, X.X);
    std::vector<double> lam;
    Matrix Q;
    dense_eig_full(G, lam, Q);
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    const double lmax = std::max(lam.front(), 0.0);
    std::vector<double> nz;
    for (double l : lam)
      if (l > 1e-10 * std::max(lmax, 1e-300)) nz.push_back(l);
    double min_rel = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < nz.size(); ++i)
      min_rel = std::min(min_rel, (nz[i] - nz[i + 1]) / lmax);
    rep.a0_min_rel_gap = nz.size() < 2 ? std::numeric_limits<double>::infinity() : min_rel;
    rep.a0 = rep.a0_min_rel_gap > 1e-9;
  }

  // A1 over the distinct rows of X
  {
    auto groups = group_equal_rows(X.X);
    double min_sep = std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < groups.size(); ++a)
      for (size_t b = a + 1; b < groups.size(); ++b) {
        const double* xa = X.X.row(groups[a].front());
        const double* xb = X.X.row(groups[b].front());
        double s = 0.0;
        for (int j = 0; j < X.d(); ++j) {
          const double diff = xa[j] - xb[j];
          s += diff * diff;
        }
        min_sep = std::min(min_sep, std::sqrt(s));
      }
    rep.a1_min_separation = min_sep;
    rep.a1_threshold = 6.0 * beta.value * std::sqrt((double)n / mc.n_min);
    rep.a1 = !(min_sep <= rep.a1_threshold);  // vacuously true with one block
  }

  rep.a2_lhs = mc.gamma * n;
  rep.a2_rhs = 4.0 * std::sqrt(mc.Delta * std::log((double)n / eta));
  rep.a2 = rep.a2_lhs > rep.a2_rhs;

  if (!degree_factors.empty()) {
    rep.has_dcsbm = true;
    rep.c_min = *std::min_element(degree_factors.begin(), degree_factors.end());
    // unit block directions: any representative row, normalized
    std::vector<std::vector<double>> dirs;
    auto groups = group_equal_rows(X.X);
    for (const auto& g : groups) {
      std::vector<double> y(X.d());
      const double nn = row_norm(X.X.row(g.front()), X.d());
      for (int j = 0; j < X.d(); ++j) y[j] = X.X(g.front(), j) / nn;
      bool dup = false;
      for (const auto& o : dirs) {
        double diff = 0.0;
        for (int j = 0; j < X.d(); ++j) diff += (o[j] - y[j]) * (o[j] - y[j]);
        if (std::sqrt(diff) < 1e-9) {
          dup = true;
          break;
        }
      }
      if (!dup) dirs.push_back(std::move(y));
    }
    double min_dir_sep = std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < dirs.size(); ++a)
      for (size_t b = a + 1; b < dirs.size(); ++b) {
        double s = 0.0;
        for (int j = 0; j < X.d(); ++j) s += (dirs[a][j] - dirs[b][j]) * (dirs[a][j] - dirs[b][j]);
        min_dir_sep = std::min(min_dir_sep, std::sqrt(s));
      }
    rep.dcsbm_r = min_dir_sep / 6.0;  // largest r with ||y_i - y_j|| > 6r
    rep.dcsbm_threshold = 2.0 * beta.value * std::sqrt((double)n / mc.n_min) / rep.c_min;
    rep.dcsbm_ok = rep.dcsbm_r > rep.dcsbm_threshold;
  }
  return rep;
}

AssumptionReport check_assumptions(const ModelConfig& cfg, int n, double eta,
                                   uint64_t degree_seed) {
  BlockModelSpec spec = instantiate(cfg, n, substream(degree_seed, Stream::degree));
  LatentPositionMatrix X = sbm_to_latent(spec, cfg.d_override);
  return check_assumptions(X, spec.tau, spec.degree_factors, eta);
}

// ---- growth expressions ----------------------------------------------------

double GrowthExpr::eval(double n) const {
  double total = 0.0;
  const double ln = std::log(n);
  for (const auto& t : terms)
    total += t.coeff * std::pow(n, t.n_pow) * std::pow(ln, t.log_pow);
  return total;
}

GrowthTerm GrowthExpr::leading() const {
  GrowthTerm best;
  bool first = true;
  for (const auto& t : terms) {
    if (first || t.n_pow > best.n_pow ||
        (t.n_pow == best.n_pow && t.log_pow > best.log_pow)) {
      best = t;
      first = false;
    } else if (t.n_pow == best.n_pow && t.log_pow == best.log_pow) {
      best.coeff += t.coeff;
    }
  }
  return best;
}

GrowthExpr GrowthExpr::parse(const std::string& text) {
  GrowthExpr expr;
  std::string s;
  for (char c : text)
    if (!std::isspace((unsigned char)c)) s += c;
  if (s.empty()) throw ValidationError("growth expression: empty");
  size_t pos = 0;
  while (pos < s.size()) {
    size_t next = s.find('+', pos);
    if (next == std::string::npos) next = s.size();
    std::string term = s.substr(pos, next - pos);
    pos = next + 1;
    if (term.empty()) throw ValidationError("growth expression: empty term");

    GrowthTerm t{1.0, 0.0, 0.0};
    bool saw_coeff = false;
    size_t tp = 0;
    while (tp < term.size()) {
      size_t fend = term.find('*', tp);
      if (fend == std::string::npos) fend = term.size();
      std::string f = term.substr(tp, fend - tp);
      tp = fend + 1;
      if (f.empty()) throw ValidationError("growth expression: empty factor in '" + term + "'");
      if (f[0] == 'n' || f.rfind("log", 0) == 0) {
        double power = 1.0;
        std::string head = f[0] == 'n' ? "n" : (f.rfind("log(n)", 0) == 0 ? "log(n)" : "log");
        std::string rest = f.substr(head.size());
        if (!rest.empty()) {
          if (rest[0] != '^')
            throw ValidationError("growth expression: cannot parse factor '" + f + "'");
          try {
            size_t used = 0;
            power = std::stod(rest.substr(1), &used);
            if (used != rest.size() - 1) throw std::invalid_argument(rest);
          } catch (const std::exception&) {
            throw ValidationError("growth expression: bad exponent in '" + f + "'");
          }
        }
        if (f[0] == 'n')
          t.n_pow += power;
        else
          t.log_pow += power;
      } else {
        try {
          size_t used = 0;
          const double c = std::stod(f, &used);
          if (used != f.size()) throw std::invalid_argument(f);
          t.coeff *= c;
          saw_coeff = true;
        } catch (const std::exception&) {
          throw ValidationError("growth expression: cannot parse factor '" + f + "'");
        }
      }
    }
    (void)saw_coeff;
    if (!(t.coeff > 0.0))
      throw ValidationError("growth expression: coefficients must be positive");
    expr.terms.push_back(t);
  }
  return expr;
}

std::string GrowthExpr::str() const {
  std::ostringstream os;
  for (size_t i = 0; i < terms.size(); ++i) {
    if (i) os << " + ";
    os << terms[i].coeff;
    if (terms[i].n_pow != 0.0) os << "*n^" << terms[i].n_pow;
    if (terms[i].log_pow != 0.0) os << "*log^" << terms[i].log_pow;
  }
  return os.str();
}

namespace {

// symbolic difference a - b; throws if it has no positive leading term
GrowthExpr growth_difference(const GrowthExpr& a, const GrowthExpr& b) {
  std::map<std::pair<double, double>, double> coeffs;
  for (const auto& t : a.terms) coeffs[{t.n_pow, t.log_pow}] += t.coeff;
  for (const auto& t : b.terms) coeffs[{t.n_pow, t.log_pow}] -= t.coeff;
  GrowthExpr d;
  for (const auto& [key, c] : coeffs)
    if (std::fabs(c) > 1e-300) d.terms.push_back({c, key.first, key.second});
  if (d.terms.empty()) throw ValidationError("sparse_regime: requires a > b (a - b vanishes)");
  GrowthTerm lead = d.leading();
  if (lead.coeff <= 0.0)
    throw ValidationError("sparse_regime: requires a > b for large n");
  return d;
}

bool order_less(const GrowthTerm& x, const GrowthTerm& y) {
  if (x.n_pow != y.n_pow) return x.n_pow < y.n_pow;
  return x.log_pow < y.log_pow;
}

Eventual probe_eventual(const std::function<double(double)>& ratio) {
  const double r1 = ratio(1e12), r2 = ratio(1e24);
  if (!std::isfinite(r1) || !std::isfinite(r2)) return Eventual::borderline;
  if (r2 > r1 * 1.0001) return Eventual::holds;
  if (r2 < r1 * 0.9999) return Eventual::fails;
  return r2 > 1.0 ? Eventual::holds : (r2 < 1.0 ? Eventual::fails : Eventual::borderline);
}

}  // namespace

SparseRegimeTable sparse_regime(const GrowthExpr& a, const GrowthExpr& b,
                                const std::vector<double>& n_grid, double eta) {
  if (!(eta > 0.0 && eta < 0.5)) throw ValidationError("sparse_regime: eta must lie in (0, 1/2)");
  if (n_grid.empty()) throw ValidationError("sparse_regime: empty n grid");
  SparseRegimeTable table;
  table.eta = eta;

  GrowthExpr delta = growth_difference(a, b);

  for (double n : n_grid) {
    if (!(n > 1.0)) throw ValidationError("sparse_regime: grid values must exceed 1");
    RegimeRow row;
    row.n = n;
    row.a = a.eval(n);
    row.b = b.eval(n);
    if (!(row.a > row.b) || !(row.b > 0.0))
      throw ValidationError("sparse_regime: requires a(n) > b(n) > 0 on the grid (n=" +
                            std::to_string(n) + ")");
    const double d = row.a - row.b;
    const double minv = std::min(row.b, d / 2.0);
    const double L = std::log(n / eta);
    row.a2_lhs = std::min(row.b * row.b, d * d / 4.0) / (row.a + row.b);
    row.a2_rhs = 8.0 * L;
    row.a2 = row.a2_lhs > row.a2_rhs;
    row.a1_lhs = std::sqrt(d) * std::pow(minv, 3.5) / std::pow(row.a + row.b, 3.0);
    row.a1_rhs = 127.5 * std::sqrt(n) * L;
    row.a1 = row.a1_lhs > row.a1_rhs;
    table.rows.push_back(row);
  }

  // classification from leading orders
  const GrowthTerm la = a.leading(), lb = b.leading(), ld = delta.leading();
  if (la.n_pow == 0.0 && la.log_pow == 0.0 && lb.n_pow == 0.0 && lb.log_pow == 0.0)
    table.case_label = "bounded";
  else if (order_less(lb, la))
    table.case_label = "b_small_vs_a";
  else if (order_less(ld, lb))
    table.case_label = "gap_small_vs_b";
  else
    table.case_label = "b_comparable_to_a";

  table.a2_eventually = probe_eventual([&](double n) {
    const double av = a.eval(n), bv = b.eval(n), d = av - bv;
    return std::min(bv * bv, d * d / 4.0) / (av + bv) / (8.0 * std::log(n / eta));
  });
  table.a1_eventually = probe_eventual([&](double n) {
    const double av = a.eval(n), bv = b.eval(n), d = av - bv;
    const double minv = std::min(bv, d / 2.0);
    return std::sqrt(d) * std::pow(minv, 3.5) / std::pow(av + bv, 3.0) /
           (127.5 * std::sqrt(n) * std::log(n / eta));
  });
  return table;
}

}  // namespace ase
