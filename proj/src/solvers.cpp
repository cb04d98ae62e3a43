#include "cutfem/solvers.hpp"

#include <cassert>
#include <cmath>

namespace cutfem {

namespace {

double dot_product(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

class IdentityPreconditioner final : public Preconditioner {
public:
  void apply(std::span<const double> r, std::span<double> z) const override {
    std::copy(r.begin(), r.end(), z.begin());
  }
  std::string name() const override { return "identity"; }
};

class JacobiPreconditioner final : public Preconditioner {
public:
  explicit JacobiPreconditioner(const SparseMatrix& a) : inv_diag_(a.diagonal()) {
    for (double& d : inv_diag_) {
      if (d == 0.0) throw Error("jacobi: zero diagonal entry");
      d = 1.0 / d;
    }
  }
  void apply(std::span<const double> r, std::span<double> z) const override {
    for (size_t i = 0; i < r.size(); ++i) z[i] = inv_diag_[i] * r[i];
  }
  std::string name() const override { return "jacobi"; }

private:
  std::vector<double> inv_diag_;
};

class SgsPreconditioner final : public Preconditioner {
public:
  explicit SgsPreconditioner(const SparseMatrix& a) : a_(a) {
    if (a.rows != a.cols) throw Error("sgs: matrix not square");
    diag_ = a.diagonal();
    for (double d : diag_)
      if (d == 0.0) throw Error("sgs: zero diagonal entry");
  }

  // z = (D+L^T)^-1 D (D+L)^-1 r via two triangular sweeps
  void apply(std::span<const double> r, std::span<double> z) const override {
    const int n = a_.rows;
    for (int i = 0; i < n; ++i) {
      double s = r[i];
      for (int k = a_.row_offsets[i]; k < a_.row_offsets[i + 1]; ++k) {
        int j = a_.col_indices[k];
        if (j < i) s -= a_.values[k] * z[j];
      }
      z[i] = s / diag_[i];
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = diag_[i] * z[i];
      for (int k = a_.row_offsets[i]; k < a_.row_offsets[i + 1]; ++k) {
        int j = a_.col_indices[k];
        if (j > i) s -= a_.values[k] * z[j];
      }
      z[i] = s / diag_[i];
    }
  }
  std::string name() const override { return "sgs"; }

private:
  SparseMatrix a_;
  std::vector<double> diag_;
};

} // namespace

std::unique_ptr<Preconditioner> make_identity() {
  return std::make_unique<IdentityPreconditioner>();
}
std::unique_ptr<Preconditioner> make_jacobi(const SparseMatrix& a) {
  return std::make_unique<JacobiPreconditioner>(a);
}
std::unique_ptr<Preconditioner> make_sgs(const SparseMatrix& a) {
  return std::make_unique<SgsPreconditioner>(a);
}

SolveReport cg_solve(const SparseMatrix& a, std::span<const double> b,
                     std::span<double> x, const Preconditioner& precond, double tol,
                     int max_iterations, const IterationObserver& observer) {
  const int n = a.rows;
  assert(a.cols == n);
  assert(static_cast<int>(b.size()) == n && static_cast<int>(x.size()) == n);

  SolveReport report;
  double bnorm = std::sqrt(dot_product(b, b));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    report.converged = true;
    return report;
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  a.multiply(x, r);
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  precond.apply(r, z);
  p = z;
  double rz = dot_product(r, z);

  for (int it = 0; it < max_iterations; ++it) {
    double rnorm = std::sqrt(dot_product(r, r));
    report.residual = rnorm / bnorm;
    if (!std::isfinite(rnorm)) throw Error("cg: residual is not finite");
    if (report.residual <= tol) {
      report.converged = true;
      return report;
    }
    a.multiply(p, q);
    double pq = dot_product(p, q);
    if (!std::isfinite(pq)) throw Error("cg: direction curvature is not finite");
    if (pq <= 0.0) throw Error("cg: matrix is not positive definite");
    double alpha = rz / pq;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    report.iterations = it + 1;
    if (observer) observer(report.iterations, x);
    precond.apply(r, z);
    double rz_next = dot_product(r, z);
    double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  report.residual = std::sqrt(dot_product(r, r)) / bnorm;
  report.converged = report.residual <= tol;
  return report;
}

} // namespace cutfem
