#include "acdg/diagnostics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "acdg/error.hpp"
#include "acdg/linear_solver.hpp"

namespace acdg {

namespace {

struct FaceSums {
  double flux_jump = 0.0;  // sum <{d_n v}, [v]>
  double penalty = 0.0;    // sum sigma/h_e ||[v]||^2
  double weighted = 0.0;   // sum h_e^power ||[v]||^2
};

FaceSums face_sums(const DgFunction& v, double sigma, double power) {
  const DgSpace& space = v.space();
  const Mesh& mesh = space.mesh();
  const QuadratureRule rule = face_quadrature(face_degree(space.degree()));
  FaceSums out;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.faces()[f];
    if (!face.interior()) continue;
    double fj = 0.0;
    double jj = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const TracePair t = trace_pair(space, v, f, rule.points[q][0]);
      const double w = rule.weights[q] * face.length;
      const double avg_flux = 0.5 * dot(t.grad_left + t.grad_right, face.normal);
      fj += w * avg_flux * t.jump();
      jj += w * t.jump() * t.jump();
    }
    out.flux_jump += fj;
    out.penalty += sigma / face.length * jj;
    out.weighted += std::pow(face.length, power) * jj;
  }
  return out;
}

/// Volume integrals of v^2, |grad v|^2 and an arbitrary pointwise function of v.
template <typename Fn>
void volume_sums(const DgFunction& v, int degree, Fn&& fn) {
  const DgSpace& space = v.space();
  const Tabulation tab = tabulate(space, volume_quadrature(degree));
  for (std::size_t e = 0; e < space.mesh().num_elements(); ++e) {
    const double jac = 2.0 * space.geometry(e).area;
    const auto c = v.block(e);
    for (std::size_t q = 0; q < tab.rule.size(); ++q) {
      double val = 0.0;
      std::array<double, 2> rg{0.0, 0.0};
      for (std::size_t i = 0; i < tab.ndof; ++i) {
        val += c[i] * tab.value(q, i);
        rg[0] += c[i] * tab.grad(q, i)[0];
        rg[1] += c[i] * tab.grad(q, i)[1];
      }
      fn(e, q, tab.rule.points[q], tab.rule.weights[q] * jac, val, space.physical_gradient(e, rg));
    }
  }
}

}  // namespace

EnergyBreakdown energies(const SchemeConfig& cfg, const DgFunction& v) {
  const double inv_eps2 = 1.0 / (cfg.epsilon * cfg.epsilon);
  EnergyBreakdown b;
  double grad2 = 0.0, fpot = 0.0, fconv = 0.0;
  volume_sums(v, nonlinear_degree(v.space().degree()),
              [&](std::size_t, std::size_t, RefPoint, double w, double val, Point2 g) {
                const double v2 = val * val;
                grad2 += w * dot(g, g);
                fpot += w * 0.25 * (v2 - 1.0) * (v2 - 1.0);
                fconv += w * 0.25 * (v2 * v2 + 1.0);
              });
  const FaceSums fs = face_sums(v, cfg.sigma, 1.0);
  b.grad_part = 0.5 * grad2;
  b.consistency_part = -fs.flux_jump;
  b.penalty_part = 0.5 * fs.penalty;
  b.potential_part = inv_eps2 * fpot;
  b.convex_potential_part = inv_eps2 * fconv;
  b.phi = b.grad_part + b.consistency_part + b.penalty_part;
  b.J = b.phi + b.potential_part;
  b.I = b.phi + b.convex_potential_part;
  return b;
}

bool energy_law_flagged(const SchemeConfig& cfg) {
  // Relative slack so that dt = 2 eps^2 entered in decimal is flagged.
  return cfg.variant == Variant::FullyImplicit && cfg.dt >= 2.0 * cfg.epsilon * cfg.epsilon * (1.0 - 1e-12);
}

double energy_law_residual(const SchemeConfig& cfg, const DgFunction& u_new, const DgFunction& u_old) {
  if (u_new.space().total_dofs() != u_old.space().total_dofs()) {
    throw InvalidArgument("energy_law_residual: functions live in different spaces");
  }
  const double k = cfg.dt;
  const double eps2 = cfg.epsilon * cfg.epsilon;
  const std::size_t n = u_new.coefficients().size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = (u_new.coefficients()[i] - u_old.coefficients()[i]) / k;
  const DgFunction dt_u(u_new.space_ptr(), std::move(d));

  double l2 = 0.0, grad2 = 0.0, quart = 0.0;
  const int deg = nonlinear_degree(u_new.space().degree());
  const Tabulation tab = tabulate(u_new.space(), volume_quadrature(deg));
  volume_sums(dt_u, deg, [&](std::size_t e, std::size_t q, RefPoint, double w, double val, Point2 g) {
    l2 += w * val * val;
    grad2 += w * dot(g, g);
    double a = 0.0, b = 0.0;
    const auto cn = u_new.block(e);
    const auto co = u_old.block(e);
    for (std::size_t i = 0; i < tab.ndof; ++i) {
      a += cn[i] * tab.value(q, i);
      b += co[i] * tab.value(q, i);
    }
    const double dq = (a * a - b * b) / k;
    quart += w * dq * dq;
  });
  const double jump = face_sums(dt_u, cfg.sigma, 1.0).penalty;
  const double sign = cfg.variant == Variant::ConvexSplitting ? 1.0 : -1.0;
  return (1.0 + sign * k / (2.0 * eps2)) * l2 + 0.25 * k * grad2 + 0.25 * k * jump +
         0.25 * k / eps2 * quart;
}

double jump_penalty(const SchemeConfig& cfg, const DgFunction& v) {
  return face_sums(v, cfg.sigma, 1.0).penalty;
}

double weighted_jump_sum(const DgFunction& v, double power) {
  return face_sums(v, 1.0, power).weighted;
}

namespace {

BrokenNorms norms_impl(const SchemeConfig& cfg, const DgFunction& v, const SmoothField* ref) {
  const DgSpace& space = v.space();
  BrokenNorms n;
  double l2 = 0.0, g2 = 0.0, linf = 0.0;
  volume_sums(v, load_degree(space.degree()),
              [&](std::size_t e, std::size_t, RefPoint xi, double w, double val, Point2 g) {
                if (ref) {
                  const Point2 x = space.to_physical(e, xi);
                  val -= ref->value(x);
                  if (ref->gradient) g = g - ref->gradient(x);
                }
                l2 += w * val * val;
                g2 += w * dot(g, g);
                linf = std::max(linf, std::abs(val));
              });
  for (std::size_t e = 0; e < space.mesh().num_elements(); ++e) {
    for (std::size_t i = 0; i < space.dofs_per_elem(); ++i) {
      double val = v.coefficients()[space.dof(e, i)];
      if (ref) val -= ref->value(lattice_point(space, e, i));
      linf = std::max(linf, std::abs(val));
    }
  }
  const double j = jump_penalty(cfg, v);  // reference is continuous: jumps of the error are those of v
  n.l2 = std::sqrt(l2);
  n.grad = std::sqrt(g2);
  n.h1_broken = std::sqrt(l2 + g2);
  n.dg_seminorm = std::sqrt(g2 + j);
  n.linf = linf;
  return n;
}

}  // namespace

BrokenNorms broken_norms(const SchemeConfig& cfg, const DgFunction& v) {
  return norms_impl(cfg, v, nullptr);
}

BrokenNorms broken_norms(const SchemeConfig& cfg, const DgFunction& v, const SmoothField& reference) {
  return norms_impl(cfg, v, &reference);
}

EigenResult principal_eigenvalue(const SchemeConfig& cfg, const DgFunction& u_ref,
                                 const EigenOptions& opts) {
  const DgSpace& space = u_ref.space();
  const std::size_t n = space.total_dofs();
  const double inv_eps2 = 1.0 / (cfg.epsilon * cfg.epsilon);

  const CsrMatrix a = assemble_dg_laplacian(space, cfg);
  const CsrMatrix mass = embed_in_pattern(a, assemble_mass(space));
  const CsrMatrix w = embed_in_pattern(a, assemble_weighted_mass(u_ref, 3.0, -1.0));
  // Rayleigh quotient only sees the symmetric part of a_h.
  CsrMatrix k = a.plus_scaled(inv_eps2, w);
  if (cfg.lambda != -1) {
    CsrMatrix sym = k;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t p = k.row_ptr()[i]; p < k.row_ptr()[i + 1]; ++p) {
        sym.values()[p] = 0.5 * (k.values()[p] + k.at(k.col_idx()[p], i));
      }
    }
    k = std::move(sym);
  }

  // (W psi, psi) >= min f'(u_q) (M psi, psi) because both use exact positive-weight rules,
  // and A is positive semidefinite above the coercivity threshold.
  double fmin = 0.0;
  {
    const Tabulation tab = tabulate(space, volume_quadrature(nonlinear_degree(space.degree())));
    fmin = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < space.mesh().num_elements(); ++e) {
      const auto c = u_ref.block(e);
      for (std::size_t q = 0; q < tab.rule.size(); ++q) {
        double v = 0.0;
        for (std::size_t i = 0; i < tab.ndof; ++i) v += c[i] * tab.value(q, i);
        fmin = std::min(fmin, 3.0 * v * v - 1.0);
      }
    }
  }
  const double shift = inv_eps2 * fmin - std::max(1.0, 1e-3 * inv_eps2);
  const CsrMatrix shifted = k.plus_scaled(-shift, mass);

  LinearSolveSpec ls;
  ls.method = LinearMethod::ConjugateGradient;
  ls.preconditioner = Preconditioner::BlockJacobi;
  ls.block_size = space.dofs_per_elem();
  ls.tol = opts.inner_tol;
  ls.max_iter = 20000;

  // The shifted operator is fixed, so one sparse LDL^T factorization serves every
  // Lanczos step; CG remains as the fallback.
  Eigen::SparseMatrix<double> es(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(shifted.values().size());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t p = shifted.row_ptr()[i]; p < shifted.row_ptr()[i + 1]; ++p) {
        trips.emplace_back(static_cast<int>(i), static_cast<int>(shifted.col_idx()[p]), shifted.values()[p]);
      }
    }
    es.setFromTriplets(trips.begin(), trips.end());
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(es);
  const bool direct = ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all();
  auto inner_solve = [&](const std::vector<double>& rhs) {
    if (direct) {
      const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(n));
      const Eigen::VectorXd x = ldlt.solve(b);
      return std::vector<double>(x.data(), x.data() + x.size());
    }
    try {
      return linear_solve(shifted, rhs, ls).x;
    } catch (const LinearSolverFailure& e) {
      throw DiagnosticsFailure(std::string("eigenvalue inner solve failed: ") + e.what());
    }
  };

  auto m_dot = [&](const std::vector<double>& x, const std::vector<double>& y) {
    return dot(x, mass * y);
  };

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> start(n);
  for (auto& s : start) s = uni(rng);

  EigenResult res;
  res.shift = shift;
  const int m = std::max(2, opts.krylov_dim);
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;
    const double s0 = std::sqrt(m_dot(start, start));
    for (auto& s : start) s /= s0;
    basis.push_back(start);
    double theta = 0.0;
    double bound = 0.0;
    Eigen::VectorXd ritz;
    for (int j = 0; j < m; ++j) {
      std::vector<double> rhs = mass * basis[j];
      std::vector<double> wv = inner_solve(rhs);
      ++res.iterations;
      const std::vector<double> mw = mass * wv;
      alpha.push_back(dot(basis[j], mw));
      // Full reorthogonalization in the M inner product, twice.
      for (int pass = 0; pass < 2; ++pass) {
        const std::vector<double> mwv = mass * wv;
        for (const auto& q : basis) axpy(-dot(q, mwv), q, wv);
      }
      const double b = std::sqrt(std::max(0.0, m_dot(wv, wv)));

      const auto dim = static_cast<Eigen::Index>(alpha.size());
      Eigen::VectorXd diag(dim), sub(std::max<Eigen::Index>(dim - 1, 0));
      for (Eigen::Index i = 0; i < dim; ++i) diag(i) = alpha[i];
      for (Eigen::Index i = 0; i + 1 < dim; ++i) sub(i) = beta[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      theta = tri.eigenvalues()(dim - 1);
      ritz = tri.eigenvectors().col(dim - 1);
      bound = std::abs(b * ritz(dim - 1));
      res.lambda = shift + 1.0 / theta;
      res.residual_bound = bound / (theta * theta);
      const bool converged = res.residual_bound <= opts.tol * std::max(1.0, std::abs(res.lambda));
      if (converged || b <= 1e-14 || j == m - 1) break;
      beta.push_back(b);
      for (auto& x : wv) x /= b;
      basis.push_back(std::move(wv));
    }
    // Ritz vector from the current basis.
    std::vector<double> vec(n, 0.0);
    for (Eigen::Index i = 0; i < ritz.size(); ++i) axpy(ritz(i), basis[static_cast<std::size_t>(i)], vec);
    res.eigenvector = vec;
    if (res.residual_bound <= opts.tol * std::max(1.0, std::abs(res.lambda))) return res;
    start = std::move(vec);
  }
  throw DiagnosticsFailure("principal eigenvalue did not converge (residual bound " +
                           std::to_string(res.residual_bound) + ")");
}

}  // namespace acdg
