// Restarted Lanczos with full reorthogonalization for the k algebraically
// largest eigenpairs of a symmetric operator. Converged Ritz vectors are
// locked and later runs proceed in their orthogonal complement; each restart
// continues from the best unconverged Ritz vector.

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "ase/errors.hpp"
#include "ase/matrix.hpp"
#include "ase/rng.hpp"
#include "ase/spectral.hpp"

namespace ase {

namespace {

using Vec = std::vector<double>;

double norm(const Vec& v) { return row_norm(v.data(), (int)v.size()); }

void axpy(double a, const Vec& x, Vec& y) {
  for (size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

// Two-pass classical Gram-Schmidt against a set of basis vectors.
void reorthogonalize(Vec& w, const std::vector<Vec>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Vec& u : basis) {
      const double c = dot(u.data(), w.data(), (int)w.size());
      if (c != 0.0) axpy(-c, u, w);
    }
}

void reorthogonalize2(Vec& w, const std::vector<Vec>& a, const std::vector<Vec>& b) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vec& u : a) {
      const double c = dot(u.data(), w.data(), (int)w.size());
      if (c != 0.0) axpy(-c, u, w);
    }
    for (const Vec& u : b) {
      const double c = dot(u.data(), w.data(), (int)w.size());
      if (c != 0.0) axpy(-c, u, w);
    }
  }
}

Vec pseudo_random_unit(int n, uint64_t seed) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = 2.0 * to_unit(hash2(seed, (uint64_t)i)) - 1.0;
  const double s = norm(v);
  for (double& x : v) x /= s;
  return v;
}

// first component of magnitude > tol becomes positive
void canonical_sign(double* v, int n) {
  for (int i = 0; i < n; ++i) {
    if (std::fabs(v[i]) > 1e-300) {
      if (v[i] < 0.0)
        for (int j = 0; j < n; ++j) v[j] = -v[j];
      return;
    }
  }
}

}  // namespace

EigResult eig_sym_lanczos(const SymOp& op, int k, const EigOptions& opts) {
  const int n = op.n;
  if (k < 1 || k > n) throw ValidationError("eig_sym: need 1 <= k <= n");

  const int m = std::min(n, opts.basis > 0 ? opts.basis : std::max(2 * k + 16, 40));
  std::vector<Vec> locked;
  Vec locked_values;
  long matvecs = 0;
  double scale = 0.0;

  Vec start = pseudo_random_unit(n, opts.start_seed);
  bool have_start = true;

  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    // fresh deterministic vector if the previous run exhausted its subspace
    if (!have_start) start = pseudo_random_unit(n, hash2(opts.start_seed, 77 + restart));
    reorthogonalize(start, locked);
    double s = norm(start);
    int tries = 0;
    while (s < 1e-8 && tries < 64) {
      start = pseudo_random_unit(n, hash3(opts.start_seed, 991, restart * 64 + tries));
      reorthogonalize(start, locked);
      s = norm(start);
      ++tries;
    }
    if (s < 1e-8) throw EigNonConvergence(s);
    for (double& x : start) x /= s;

    std::vector<Vec> basis;
    basis.reserve(m + 1);
    basis.push_back(start);
    Vec alpha, beta;
    Vec w(n);
    bool breakdown = false;

    for (int j = 0; j < m; ++j) {
      op.apply(basis[j].data(), w.data());
      ++matvecs;
      const double a = dot(basis[j].data(), w.data(), n);
      alpha.push_back(a);
      axpy(-a, basis[j], w);
      if (j > 0) axpy(-beta[j - 1], basis[j - 1], w);
      reorthogonalize2(w, locked, basis);
      const double b = norm(w);
      scale = std::max({scale, std::fabs(a), b});
      if (b <= 1e-13 * std::max(scale, 1e-300)) {
        breakdown = true;
        break;
      }
      if (j + 1 < m) {
        beta.push_back(b);
        Vec next = w;
        for (double& x : next) x /= b;
        basis.push_back(std::move(next));
      } else {
        beta.push_back(b);  // residual coupling for the Ritz residual formula
      }
    }

    const int q = (int)alpha.size();
    if (q == 0) {
      have_start = false;
      continue;
    }
    std::vector<double> theta;
    Matrix S;
    {
      Vec sub(beta.begin(), beta.begin() + std::max(0, q - 1));
      tridiag_eig(Vec(alpha.begin(), alpha.end()), sub, theta, &S);
    }
    // descending order
    std::vector<int> order(q);
    for (int i = 0; i < q; ++i) order[i] = q - 1 - i;

    const double beta_last = breakdown || (int)beta.size() < q ? 0.0 : beta[q - 1];
    for (double t : theta) scale = std::max(scale, std::fabs(t));
    const double tol = opts.tol * std::max(scale, 1e-300);

    // Lock a prefix of converged Ritz pairs, largest first.
    bool progressed = false;
    Vec next_start;
    for (int rank = 0; rank < q && (int)locked.size() < k; ++rank) {
      const int idx = order[rank];
      const double resid = std::fabs(beta_last * S(q - 1, idx));
      Vec y(n, 0.0);
      for (int j = 0; j < q; ++j)
        if (S(j, idx) != 0.0) axpy(S(j, idx), basis[j], y);
      if (resid <= tol || breakdown) {
        reorthogonalize(y, locked);
        const double ny = norm(y);
        if (ny < 1e-8) continue;  // collapsed onto the locked space
        for (double& x : y) x /= ny;
        locked.push_back(std::move(y));
        locked_values.push_back(theta[idx]);
        progressed = true;
      } else {
        next_start = std::move(y);
        break;  // only a converged prefix may be locked
      }
    }

    if ((int)locked.size() >= k) break;
    if (!next_start.empty()) {
      start = std::move(next_start);
      have_start = true;
    } else {
      have_start = false;  // exhausted an invariant subspace; draw fresh
    }
    if (restart == opts.max_restarts - 1 && !progressed) {
      double worst = 0.0;
      if (!theta.empty()) worst = std::fabs(beta_last * S(q - 1, order[0]));
      throw EigNonConvergence(worst);
    }
  }

  if ((int)locked.size() < k) throw EigNonConvergence(std::numeric_limits<double>::quiet_NaN());

  // sort locked pairs by value, descending, and keep the top k
  std::vector<int> idx(locked.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
  for (size_t i = 0; i + 1 < idx.size(); ++i)
    for (size_t j = i + 1; j < idx.size(); ++j)
      if (locked_values[idx[j]] > locked_values[idx[i]]) std::swap(idx[i], idx[j]);

  EigResult res;
  res.vectors = Matrix(n, k);
  res.matvecs = matvecs;
  Vec tmp(n);
  for (int c = 0; c < k; ++c) {
    Vec& v = locked[idx[c]];
    canonical_sign(v.data(), n);
    res.values.push_back(locked_values[idx[c]]);
    op.apply(v.data(), tmp.data());
    ++res.matvecs;
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = tmp[i] - res.values[c] * v[i];
      r2 += r * r;
      res.vectors(i, c) = v[i];
    }
    res.max_residual = std::max(res.max_residual, std::sqrt(r2));
  }
  return res;
}

double spectral_norm_sym(const SymOp& op, double rel_tol, int max_basis, uint64_t seed) {
  const int n = op.n;
  if (n == 0) return 0.0;
  if (n == 1) {
    double x = 1.0, y = 0.0;
    op.apply(&x, &y);
    return std::fabs(y);
  }
  const int m = std::min(n, max_basis);
  std::vector<Vec> basis;
  basis.push_back(pseudo_random_unit(n, seed));
  Vec alpha, beta;
  Vec w(n);
  double best = 0.0;
  int stagnant = 0;

  for (int j = 0; j < m; ++j) {
    op.apply(basis[j].data(), w.data());
    const double a = dot(basis[j].data(), w.data(), n);
    alpha.push_back(a);
    axpy(-a, basis[j], w);
    if (j > 0) axpy(-beta[j - 1], basis[j - 1], w);
    reorthogonalize(w, basis);
    const double b = norm(w);

    std::vector<double> theta;
    {
      Vec sub(beta.begin(), beta.end());
      tridiag_eig(Vec(alpha.begin(), alpha.end()), sub, theta, nullptr);
    }
    const double cur = std::max(std::fabs(theta.front()), std::fabs(theta.back()));
    if (cur <= best * (1.0 + rel_tol) && cur >= best * (1.0 - rel_tol))
      ++stagnant;
    else
      stagnant = 0;
    best = std::max(best, cur);
    if (stagnant >= 8) break;

    if (b <= 1e-13 * std::max(best, 1e-300)) {
      // invariant subspace: extend with a fresh direction
      Vec fresh = pseudo_random_unit(n, hash2(seed, 31 + j));
      reorthogonalize(fresh, basis);
      const double nf = norm(fresh);
      if (nf < 1e-8) break;
      for (double& x : fresh) x /= nf;
      beta.push_back(0.0);
      basis.push_back(std::move(fresh));
    } else if (j + 1 < m) {
      beta.push_back(b);
      Vec next = w;
      for (double& x : next) x /= b;
      basis.push_back(std::move(next));
    }
  }
  return best;
}

}  // namespace ase
