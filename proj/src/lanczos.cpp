#include "cutfem/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace cutfem {

namespace {

// count of eigenvalues of the symmetric tridiagonal (alpha, beta) below x,
// by the Sturm sequence of the LDL^T pivots
int eigenvalues_below(const std::vector<double>& alpha, const std::vector<double>& beta,
                      double x) {
  int count = 0;
  double d = 1.0;
  for (size_t k = 0; k < alpha.size(); ++k) {
    double off = k == 0 ? 0.0 : beta[k - 1];
    d = alpha[k] - x - (k == 0 ? 0.0 : off * off / d);
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++count;
  }
  return count;
}

std::pair<double, double> extreme_eigenvalues(const std::vector<double>& alpha,
                                              const std::vector<double>& beta) {
  const int m = static_cast<int>(alpha.size());
  double lo = alpha[0], hi = alpha[0];
  for (int k = 0; k < m; ++k) {
    double radius = (k > 0 ? std::fabs(beta[k - 1]) : 0.0) +
                    (k + 1 < m ? std::fabs(beta[k]) : 0.0);
    lo = std::min(lo, alpha[k] - radius);
    hi = std::max(hi, alpha[k] + radius);
  }
  auto bisect = [&](int target_below) {
    // smallest x with eigenvalues_below(x) >= target_below
    double a = lo, b = hi + 1e-30;
    for (int it = 0; it < 120; ++it) {
      double mid = 0.5 * (a + b);
      if (eigenvalues_below(alpha, beta, mid) >= target_below)
        b = mid;
      else
        a = mid;
    }
    return 0.5 * (a + b);
  };
  return {bisect(1), bisect(m)};
}

} // namespace

ConditionEstimate estimate_condition(const SparseMatrix& a,
                                     const Preconditioner& precond, int steps,
                                     std::uint64_t seed) {
  const int n = a.rows;
  ConditionEstimate est;
  if (n == 0) return est;
  if (n == 1) {
    est.lambda_min = est.lambda_max = est.kappa = 1.0;
    est.steps = 1;
    return est;
  }

  const int m = std::min(steps, n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  std::vector<std::vector<double>> basis; // A-orthonormal Lanczos vectors
  std::vector<double> alpha, beta;
  std::vector<double> v(n), w(n), av(n), aw(n);

  auto a_norm = [&](const std::vector<double>& u, std::vector<double>& au) {
    a.multiply(u, au);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += u[i] * au[i];
    return std::sqrt(std::max(s, 0.0));
  };

  // A-orthogonalize u against the basis, then normalize; false on breakdown
  auto insert_normalized = [&](std::vector<double>& u) {
    a.multiply(u, aw);
    for (const auto& vb : basis) {
      double c = 0.0;
      for (int i = 0; i < n; ++i) c += aw[i] * vb[i];
      for (int i = 0; i < n; ++i) u[i] -= c * vb[i];
    }
    double nrm = a_norm(u, aw);
    if (!(nrm > 1e-140)) return false;
    for (int i = 0; i < n; ++i) u[i] /= nrm;
    return true;
  };

  for (int i = 0; i < n; ++i) v[i] = unit(rng);
  if (!insert_normalized(v)) throw Error("estimate_condition: degenerate start");
  basis.push_back(v);

  double lambda_min_prev = 0.0, lambda_max_prev = 0.0;
  int stagnant_run = 0;

  for (int j = 0; j < m; ++j) {
    const std::vector<double>& vj = basis.back();
    a.multiply(vj, av);
    precond.apply(av, w); // w = P^-1 A v_j
    double aj = 0.0;
    for (int i = 0; i < n; ++i) aj += w[i] * av[i]; // <w, v_j>_A
    alpha.push_back(aj);
    est.steps = j + 1;

    auto [lmin, lmax] = extreme_eigenvalues(alpha, beta);
    est.lambda_min = lmin;
    est.lambda_max = lmax;
    if (j > 0) {
      bool small_move = std::fabs(lmin - lambda_min_prev) <= 1e-3 * std::fabs(lmin) &&
                        std::fabs(lmax - lambda_max_prev) <= 1e-3 * std::fabs(lmax);
      stagnant_run = small_move ? stagnant_run + 1 : 0;
    }
    lambda_min_prev = lmin;
    lambda_max_prev = lmax;

    if (j + 1 == m || static_cast<int>(basis.size()) == n) break;

    // three-term recurrence plus full reorthogonalization in the A product
    for (int i = 0; i < n; ++i) w[i] -= aj * vj[i];
    if (basis.size() > 1) {
      double bj = beta.back();
      const auto& vprev = basis[basis.size() - 2];
      for (int i = 0; i < n; ++i) w[i] -= bj * vprev[i];
    }
    a.multiply(w, aw);
    for (const auto& vb : basis) {
      double c = 0.0;
      for (int i = 0; i < n; ++i) c += aw[i] * vb[i];
      for (int i = 0; i < n; ++i) w[i] -= c * vb[i];
    }
    double bnext = a_norm(w, aw);
    if (bnext > 1e-12 * std::fabs(aj)) {
      for (int i = 0; i < n; ++i) w[i] /= bnext;
      beta.push_back(bnext);
      basis.push_back(w);
    } else {
      // invariant subspace found: restart with a fresh direction
      std::vector<double> fresh(n);
      for (int i = 0; i < n; ++i) fresh[i] = unit(rng);
      if (!insert_normalized(fresh)) break;
      beta.push_back(0.0);
      basis.push_back(fresh);
    }
  }

  est.stagnated = stagnant_run >= 20;
  est.kappa = est.lambda_max / est.lambda_min;
  return est;
}

} // namespace cutfem
