#include "acdg/linear_solver.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "acdg/error.hpp"

namespace acdg {

namespace {

/// Applies z = P^{-1} r for the chosen preconditioner.
class PreconditionerOp {
public:
  PreconditionerOp(const CsrMatrix& a, const LinearSolveSpec& spec)
      : kind_(spec.preconditioner), nb_(spec.block_size) {
    const std::size_t n = a.rows();
    if (kind_ == Preconditioner::Jacobi) {
      inv_diag_ = a.diagonal();
      for (auto& d : inv_diag_) d = d != 0.0 ? 1.0 / d : 1.0;
    } else if (kind_ == Preconditioner::BlockJacobi) {
      if (nb_ == 0 || n % nb_ != 0) throw InvalidArgument("block size does not divide system size");
      blocks_.resize(n * nb_);
      Eigen::MatrixXd blk(nb_, nb_);
      for (std::size_t b = 0; b < n / nb_; ++b) {
        for (std::size_t i = 0; i < nb_; ++i) {
          for (std::size_t j = 0; j < nb_; ++j) blk(i, j) = a.at(b * nb_ + i, b * nb_ + j);
        }
        const Eigen::MatrixXd inv = blk.inverse();
        for (std::size_t i = 0; i < nb_; ++i) {
          for (std::size_t j = 0; j < nb_; ++j) blocks_[(b * nb_ + i) * nb_ + j] = inv(i, j);
        }
      }
    }
  }

  void apply(std::span<const double> r, std::span<double> z) const {
    switch (kind_) {
      case Preconditioner::None:
        for (std::size_t i = 0; i < r.size(); ++i) z[i] = r[i];
        break;
      case Preconditioner::Jacobi:
        for (std::size_t i = 0; i < r.size(); ++i) z[i] = inv_diag_[i] * r[i];
        break;
      case Preconditioner::BlockJacobi:
        for (std::size_t b = 0; b < r.size() / nb_; ++b) {
          for (std::size_t i = 0; i < nb_; ++i) {
            double s = 0.0;
            const double* row = &blocks_[(b * nb_ + i) * nb_];
            for (std::size_t j = 0; j < nb_; ++j) s += row[j] * r[b * nb_ + j];
            z[b * nb_ + i] = s;
          }
        }
        break;
    }
  }

private:
  Preconditioner kind_;
  std::size_t nb_;
  DenseVector inv_diag_;
  std::vector<double> blocks_;
};

struct IterativeOutcome {
  bool converged = false;
  bool breakdown = false;
  int iterations = 0;
  double relative_residual = 0.0;
};

IterativeOutcome conjugate_gradient(const CsrMatrix& a, std::span<const double> b,
                                    const PreconditionerOp& pc, const LinearSolveSpec& spec,
                                    DenseVector& x) {
  const std::size_t n = b.size();
  const double bnorm = norm2(b);
  DenseVector r(n), z(n), p(n), ap(n);
  a.multiply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  IterativeOutcome out;
  double rnorm = norm2(r);
  if (rnorm <= spec.tol * bnorm) {
    out.converged = true;
    out.relative_residual = rnorm / bnorm;
    return out;
  }
  pc.apply(r, z);
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= spec.max_iter; ++it) {
    a.multiply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0) || !(rz > 0.0)) {
      out.breakdown = true;
      out.iterations = it;
      return out;
    }
    const double alpha = rz / pap;
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    rnorm = norm2(r);
    out.iterations = it;
    out.relative_residual = rnorm / bnorm;
    if (rnorm <= spec.tol * bnorm) {
      out.converged = true;
      return out;
    }
    pc.apply(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return out;
}

IterativeOutcome gmres(const CsrMatrix& a, std::span<const double> b, const PreconditionerOp& pc,
                       const LinearSolveSpec& spec, DenseVector& x) {
  const std::size_t n = b.size();
  const int m = std::max(1, spec.gmres_restart);
  const double bnorm = norm2(b);
  IterativeOutcome out;
  std::vector<DenseVector> v(m + 1, DenseVector(n));
  std::vector<DenseVector> zv(m, DenseVector(n));
  std::vector<double> h((m + 1) * m), cs(m), sn(m), g(m + 1);
  DenseVector r(n), w(n);
  int total = 0;
  while (total < spec.max_iter) {
    a.multiply(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double beta = norm2(r);
    out.relative_residual = beta / bnorm;
    if (beta <= spec.tol * bnorm) {
      out.converged = true;
      out.iterations = total;
      return out;
    }
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    int k = 0;
    for (; k < m && total < spec.max_iter; ++k, ++total) {
      pc.apply(v[k], zv[k]);
      a.multiply(zv[k], w);
      for (int j = 0; j <= k; ++j) {
        h[j * m + k] = dot(w, v[j]);
        axpy(-h[j * m + k], v[j], w);
      }
      const double hn = norm2(w);
      h[(k + 1) * m + k] = hn;
      if (hn > 0.0) {
        for (std::size_t i = 0; i < n; ++i) v[k + 1][i] = w[i] / hn;
      }
      for (int j = 0; j < k; ++j) {
        const double t = cs[j] * h[j * m + k] + sn[j] * h[(j + 1) * m + k];
        h[(j + 1) * m + k] = -sn[j] * h[j * m + k] + cs[j] * h[(j + 1) * m + k];
        h[j * m + k] = t;
      }
      const double d = std::hypot(h[k * m + k], h[(k + 1) * m + k]);
      if (d == 0.0) {
        out.breakdown = true;
        break;
      }
      cs[k] = h[k * m + k] / d;
      sn[k] = h[(k + 1) * m + k] / d;
      h[k * m + k] = d;
      h[(k + 1) * m + k] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      out.relative_residual = std::abs(g[k + 1]) / bnorm;
      if (std::abs(g[k + 1]) <= spec.tol * bnorm || hn == 0.0) {
        ++k;
        ++total;
        break;
      }
    }
    // Back substitution for the Krylov coefficients.
    std::vector<double> y(k);
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= h[i * m + j] * y[j];
      y[i] = s / h[i * m + i];
    }
    for (int j = 0; j < k; ++j) axpy(y[j], zv[j], x);
    if (out.breakdown) break;
  }
  a.multiply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  out.relative_residual = norm2(r) / bnorm;
  out.converged = out.relative_residual <= spec.tol;
  out.iterations = total;
  return out;
}

DenseVector dense_direct(const CsrMatrix& a, std::span<const double> b) {
  const auto n = static_cast<Eigen::Index>(a.rows());
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a.col_idx()[k])) = a.values()[k];
    }
  }
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
  const Eigen::VectorXd sol = dense.partialPivLu().solve(rhs);
  return DenseVector(sol.data(), sol.data() + n);
}

}  // namespace

LinearSolveResult linear_solve(const CsrMatrix& a, std::span<const double> b,
                               const LinearSolveSpec& spec, std::span<const double> guess) {
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw InvalidArgument("linear_solve: dimension mismatch");
  }
  if (!(spec.tol > 0.0)) throw InvalidArgument("linear_solve: tolerance must be positive");
  const std::size_t n = b.size();
  LinearSolveResult res;
  if (norm2(b) == 0.0) {
    res.x.assign(n, 0.0);
    res.method_used = spec.method;
    return res;
  }

  auto finish_dense = [&]() {
    res.x = dense_direct(a, b);
    DenseVector r = a * res.x;
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    res.relative_residual = norm2(r) / norm2(b);
    res.method_used = LinearMethod::DenseDirect;
    if (!std::isfinite(res.relative_residual) || res.relative_residual > std::max(spec.tol, 1e-8)) {
      throw LinearSolverFailure("dense direct solve is inaccurate (singular matrix?)", 0);
    }
    return res;
  };

  if (spec.method == LinearMethod::DenseDirect) return finish_dense();

  const PreconditionerOp pc(a, spec);
  auto seed = [&]() {
    return guess.empty() ? DenseVector(n, 0.0) : DenseVector(guess.begin(), guess.end());
  };

  int used = 0;
  if (spec.method == LinearMethod::ConjugateGradient ||
      (spec.method == LinearMethod::Auto && spec.symmetric)) {
    res.x = seed();
    const auto o = conjugate_gradient(a, b, pc, spec, res.x);
    used += o.iterations;
    res.iterations = used;
    res.relative_residual = o.relative_residual;
    res.method_used = LinearMethod::ConjugateGradient;
    if (o.converged) return res;
    if (spec.method == LinearMethod::ConjugateGradient) {
      throw LinearSolverFailure(std::string("conjugate gradient ") +
                                    (o.breakdown ? "broke down (matrix not SPD)" : "did not converge"),
                                used);
    }
  }
  res.x = seed();
  const auto o = gmres(a, b, pc, spec, res.x);
  used += o.iterations;
  res.iterations = used;
  res.relative_residual = o.relative_residual;
  res.method_used = LinearMethod::Gmres;
  if (o.converged) return res;
  if (spec.method == LinearMethod::Auto && n <= spec.dense_limit) return finish_dense();
  throw LinearSolverFailure("GMRES did not converge (relative residual " +
                                std::to_string(o.relative_residual) + ")",
                            used);
}

}  // namespace acdg
