#include "acdg/assembly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>

#include "acdg/error.hpp"
#include "acdg/linear_solver.hpp"

namespace acdg {

std::string to_string(Variant v) {
  return v == Variant::ConvexSplitting ? "convex-splitting" : "fully-implicit";
}

Variant parse_variant(const std::string& s) {
  if (s == "convex-splitting") return Variant::ConvexSplitting;
  if (s == "fully-implicit") return Variant::FullyImplicit;
  throw InvalidArgument("unknown variant '" + s + "' (expected convex-splitting or fully-implicit)");
}

double default_penalty(int degree) { return 8.0 * degree * (degree + 1); }

void SchemeConfig::validate() const {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (lambda < -1 || lambda > 1) throw InvalidArgument("lambda must be one of {-1, 0, 1}");
  if (!(newton_tol > 0.0) || newton_max_iter < 1) throw InvalidArgument("invalid Newton settings");
  if (!(linear_tol > 0.0)) throw InvalidArgument("linear_tol must be positive");
  if (t_final < 0.0) throw InvalidArgument("t_final must be non-negative");
}

int mass_degree(int r) { return 2 * r; }
int nonlinear_degree(int r) { return 4 * r; }
int load_degree(int r) { return 4 * r + 2; }
int face_degree(int r) { return 2 * r + 1; }

namespace {

constexpr std::size_t kMaxDof = 6;

/// Physical gradients of all local basis functions at one tabulated point.
void physical_grads(const DgSpace& space, const Tabulation& tab, std::size_t e, std::size_t q,
                    std::array<Point2, kMaxDof>& out) {
  for (std::size_t i = 0; i < tab.ndof; ++i) out[i] = space.physical_gradient(e, tab.grad(q, i));
}

double eval_at(const Tabulation& tab, std::size_t q, std::span<const double> c) {
  double v = 0.0;
  for (std::size_t i = 0; i < tab.ndof; ++i) v += c[i] * tab.value(q, i);
  return v;
}

/// Adds elementwise (w(q) phi_j, phi_i) blocks through `sink(e, i, j, value)`.
template <typename Weight, typename Sink>
void weighted_mass_blocks(const DgSpace& space, const Tabulation& tab, Weight&& weight, Sink&& sink) {
  const std::size_t nd = space.dofs_per_elem();
  std::array<double, kMaxDof * kMaxDof> blk{};
  for (std::size_t e = 0; e < space.mesh().num_elements(); ++e) {
    blk.fill(0.0);
    const double jac = 2.0 * space.geometry(e).area;
    for (std::size_t q = 0; q < tab.rule.size(); ++q) {
      const double w = tab.rule.weights[q] * jac * weight(e, q);
      for (std::size_t i = 0; i < nd; ++i) {
        const double wi = w * tab.value(q, i);
        for (std::size_t j = 0; j < nd; ++j) blk[i * nd + j] += wi * tab.value(q, j);
      }
    }
    for (std::size_t i = 0; i < nd; ++i) {
      for (std::size_t j = 0; j < nd; ++j) sink(e, i, j, blk[i * nd + j]);
    }
  }
}

CsrMatrix block_diagonal(const DgSpace& space, const Tabulation& tab,
                         const std::function<double(std::size_t, std::size_t)>& weight) {
  const std::size_t nd = space.dofs_per_elem();
  TripletBuilder b(space.total_dofs(), space.total_dofs());
  b.reserve(space.total_dofs() * nd);
  weighted_mass_blocks(space, tab, weight, [&](std::size_t e, std::size_t i, std::size_t j, double v) {
    b.add(space.dof(e, i), space.dof(e, j), v);
  });
  return b.build();
}

void check_same_space(const DgSpace& space, const DgFunction& f) {
  if (f.space().total_dofs() != space.total_dofs() || &f.space().mesh() != &space.mesh() ||
      f.space().degree() != space.degree()) {
    throw InvalidArgument("function belongs to a different space");
  }
}

}  // namespace

CsrMatrix assemble_mass(const DgSpace& space) {
  const Tabulation tab = tabulate(space, volume_quadrature(mass_degree(space.degree())));
  return block_diagonal(space, tab, [](std::size_t, std::size_t) { return 1.0; });
}

CsrMatrix assemble_dg_laplacian(const DgSpace& space, const SchemeConfig& cfg) {
  const Mesh& mesh = space.mesh();
  const std::size_t nd = space.dofs_per_elem();
  const Tabulation vol = tabulate(space, volume_quadrature(mass_degree(space.degree())));
  const QuadratureRule frule = face_quadrature(face_degree(space.degree()));
  TripletBuilder b(space.total_dofs(), space.total_dofs());
  b.reserve(space.total_dofs() * nd * 4);

  std::array<Point2, kMaxDof> g{};
  std::array<double, kMaxDof * kMaxDof> blk{};
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    blk.fill(0.0);
    const double jac = 2.0 * space.geometry(e).area;
    for (std::size_t q = 0; q < vol.rule.size(); ++q) {
      physical_grads(space, vol, e, q, g);
      const double w = vol.rule.weights[q] * jac;
      for (std::size_t i = 0; i < nd; ++i) {
        for (std::size_t j = 0; j < nd; ++j) blk[i * nd + j] += w * dot(g[i], g[j]);
      }
    }
    for (std::size_t i = 0; i < nd; ++i) {
      for (std::size_t j = 0; j < nd; ++j) b.add(space.dof(e, i), space.dof(e, j), blk[i * nd + j]);
    }
  }

  // Per side: jump weight [phi] (phi_L or -phi_R) and flux average {d_n phi} = 0.5 grad phi . n.
  std::array<double, 2 * kMaxDof> jump{}, flux{};
  std::array<double, kMaxDof> phi{};
  std::array<std::array<double, 2>, kMaxDof> rg{};
  std::array<double, 4 * kMaxDof * kMaxDof> fblk{};
  const double lam = cfg.lambda;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.faces()[f];
    if (!face.interior()) continue;
    const std::array<std::size_t, 2> elems{face.left, face.right};
    const double pen = cfg.sigma / face.length;
    fblk.fill(0.0);
    const std::size_t n2 = 2 * nd;
    for (std::size_t q = 0; q < frule.size(); ++q) {
      const double s = frule.points[q][0];
      const double w = frule.weights[q] * face.length;
      for (int side = 0; side < 2; ++side) {
        const RefPoint xi = space.face_point(elems[side], f, s);
        space.reference_values(xi, std::span(phi).first(nd));
        space.reference_gradients(xi, std::span(rg).first(nd));
        const double sign = side == 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < nd; ++i) {
          jump[side * nd + i] = sign * phi[i];
          flux[side * nd + i] = 0.5 * dot(space.physical_gradient(elems[side], rg[i]), face.normal);
        }
      }
      for (std::size_t i = 0; i < n2; ++i) {      // test
        for (std::size_t j = 0; j < n2; ++j) {    // trial
          fblk[i * n2 + j] += w * (-flux[j] * jump[i] + lam * jump[j] * flux[i] + pen * jump[j] * jump[i]);
        }
      }
    }
    for (std::size_t i = 0; i < n2; ++i) {
      const std::size_t gi = space.dof(elems[i / nd], i % nd);
      for (std::size_t j = 0; j < n2; ++j) {
        b.add(gi, space.dof(elems[j / nd], j % nd), fblk[i * n2 + j]);
      }
    }
  }
  return b.build();
}

DenseVector assemble_load(const DgSpace& space, const ScalarField& g) {
  const Tabulation tab = tabulate(space, volume_quadrature(load_degree(space.degree())));
  const std::size_t nd = space.dofs_per_elem();
  DenseVector out(space.total_dofs(), 0.0);
  for (std::size_t e = 0; e < space.mesh().num_elements(); ++e) {
    const double jac = 2.0 * space.geometry(e).area;
    for (std::size_t q = 0; q < tab.rule.size(); ++q) {
      const double w = tab.rule.weights[q] * jac * g(space.to_physical(e, tab.rule.points[q]));
      for (std::size_t i = 0; i < nd; ++i) out[space.dof(e, i)] += w * tab.value(q, i);
    }
  }
  return out;
}

DenseVector assemble_cubic(const DgFunction& u) {
  const DgSpace& space = u.space();
  const Tabulation tab = tabulate(space, volume_quadrature(nonlinear_degree(space.degree())));
  const std::size_t nd = space.dofs_per_elem();
  DenseVector out(space.total_dofs(), 0.0);
  for (std::size_t e = 0; e < space.mesh().num_elements(); ++e) {
    const double jac = 2.0 * space.geometry(e).area;
    const auto c = u.block(e);
    for (std::size_t q = 0; q < tab.rule.size(); ++q) {
      const double v = eval_at(tab, q, c);
      const double w = tab.rule.weights[q] * jac * v * v * v;
      for (std::size_t i = 0; i < nd; ++i) out[space.dof(e, i)] += w * tab.value(q, i);
    }
  }
  return out;
}

double integrate_quartic(const DgFunction& u, double c4, double c2, double c0) {
  const DgSpace& space = u.space();
  const Tabulation tab = tabulate(space, volume_quadrature(nonlinear_degree(space.degree())));
  double total = 0.0;
  for (std::size_t e = 0; e < space.mesh().num_elements(); ++e) {
    const double jac = 2.0 * space.geometry(e).area;
    const auto c = u.block(e);
    double s = 0.0;
    for (std::size_t q = 0; q < tab.rule.size(); ++q) {
      const double v = eval_at(tab, q, c);
      const double v2 = v * v;
      s += tab.rule.weights[q] * (c4 * v2 * v2 + c2 * v2 + c0);
    }
    total += jac * s;
  }
  return total;
}

CsrMatrix assemble_weighted_mass(const DgFunction& u, double coef, double shift) {
  const DgSpace& space = u.space();
  const Tabulation tab = tabulate(space, volume_quadrature(nonlinear_degree(space.degree())));
  return block_diagonal(space, tab, [&](std::size_t e, std::size_t q) {
    const double v = eval_at(tab, q, u.block(e));
    return coef * v * v + shift;
  });
}

DenseVector assemble_nonlinear_residual(const DgSpace& space, const SchemeConfig& cfg,
                                        const DgFunction& u_new, const DgFunction& u_old,
                                        const CsrMatrix& mass, const CsrMatrix& laplacian,
                                        const ScalarField& forcing) {
  check_same_space(space, u_new);
  check_same_space(space, u_old);
  const std::size_t n = space.total_dofs();
  const auto& un = u_new.coefficients();
  const auto& uo = u_old.coefficients();
  const double inv_k = 1.0 / cfg.dt;
  const double inv_eps2 = 1.0 / (cfg.epsilon * cfg.epsilon);

  DenseVector diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = un[i] - uo[i];
  const DenseVector m_diff = mass * diff;
  const DenseVector au = laplacian * un;
  const DenseVector cubic = assemble_cubic(u_new);
  const DenseVector m_lin = mass * (cfg.variant == Variant::ConvexSplitting ? uo : un);

  DenseVector r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = inv_k * m_diff[i] + au[i] + inv_eps2 * (cubic[i] - m_lin[i]);
  }
  if (forcing) axpy(-1.0, assemble_load(space, forcing), r);
  return r;
}

CsrMatrix assemble_jacobian(const DgSpace& space, const SchemeConfig& cfg, const DgFunction& u_new,
                            const CsrMatrix& mass, const CsrMatrix& laplacian) {
  check_same_space(space, u_new);
  const double inv_k = 1.0 / cfg.dt;
  const double inv_eps2 = 1.0 / (cfg.epsilon * cfg.epsilon);
  CsrMatrix j = laplacian;
  for (std::size_t i = 0; i < mass.rows(); ++i) {
    for (std::size_t k = mass.row_ptr()[i]; k < mass.row_ptr()[i + 1]; ++k) {
      const std::size_t c = mass.col_idx()[k];
      double v = inv_k * mass.values()[k];
      if (cfg.variant == Variant::FullyImplicit) v -= inv_eps2 * mass.values()[k];
      j.add(i, c, v);
    }
  }
  const Tabulation tab = tabulate(space, volume_quadrature(nonlinear_degree(space.degree())));
  weighted_mass_blocks(
      space, tab,
      [&](std::size_t e, std::size_t q) {
        const double v = eval_at(tab, q, u_new.block(e));
        return 3.0 * inv_eps2 * v * v;
      },
      [&](std::size_t e, std::size_t a, std::size_t b, double v) {
        j.add(space.dof(e, a), space.dof(e, b), v);
      });
  return j;
}

DgFunction l2_project(const std::shared_ptr<const DgSpace>& space, const ScalarField& g) {
  const Tabulation mt = tabulate(*space, volume_quadrature(mass_degree(space->degree())));
  const DenseVector rhs = assemble_load(*space, g);
  const std::size_t nd = space->dofs_per_elem();
  DgFunction p(space);
  Eigen::MatrixXd blk(nd, nd);
  Eigen::VectorXd b(nd);
  for (std::size_t e = 0; e < space->mesh().num_elements(); ++e) {
    blk.setZero();
    const double jac = 2.0 * space->geometry(e).area;
    for (std::size_t q = 0; q < mt.rule.size(); ++q) {
      for (std::size_t i = 0; i < nd; ++i) {
        for (std::size_t j = 0; j < nd; ++j) {
          blk(i, j) += mt.rule.weights[q] * jac * mt.value(q, i) * mt.value(q, j);
        }
      }
    }
    for (std::size_t i = 0; i < nd; ++i) b(i) = rhs[space->dof(e, i)];
    const Eigen::VectorXd x = blk.llt().solve(b);
    for (std::size_t i = 0; i < nd; ++i) p.coefficients()[space->dof(e, i)] = x(i);
  }
  return p;
}

namespace {

DgFunction solve_projection(const std::shared_ptr<const DgSpace>& space, const SchemeConfig& cfg,
                            const CsrMatrix& system, const DenseVector& rhs) {
  LinearSolveSpec spec;
  spec.preconditioner = Preconditioner::BlockJacobi;
  spec.block_size = space->dofs_per_elem();
  spec.symmetric = cfg.lambda == -1;
  spec.tol = std::min(cfg.linear_tol, 1e-13);
  spec.max_iter = 20000;
  try {
    return DgFunction(space, linear_solve(system, rhs, spec).x);
  } catch (const LinearSolverFailure& e) {
    throw SolverFailure(std::string("elliptic projection: ") + e.what());
  }
}

}  // namespace

CsrMatrix embed_in_pattern(const CsrMatrix& pattern, const CsrMatrix& m) {
  CsrMatrix s = pattern;
  std::fill(s.values().begin(), s.values().end(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
      s.add(i, m.col_idx()[k], m.values()[k]);
    }
  }
  return s;
}

namespace {

CsrMatrix projection_system(const DgSpace& space, const SchemeConfig& cfg) {
  const CsrMatrix a = assemble_dg_laplacian(space, cfg);
  return a.plus_scaled(1.0, embed_in_pattern(a, assemble_mass(space)));
}

}  // namespace

DgFunction elliptic_project(const std::shared_ptr<const DgSpace>& space, const SchemeConfig& cfg,
                            const DgFunction& v) {
  check_same_space(*space, v);
  const CsrMatrix system = projection_system(*space, cfg);
  return solve_projection(space, cfg, system, system * v.coefficients());
}

DgFunction elliptic_project(const std::shared_ptr<const DgSpace>& space, const SchemeConfig& cfg,
                            const SmoothField& v) {
  // For a smooth v the jump terms vanish and {d_n v} = d_n v, so
  // a_h(v, w) + (v, w) = (grad v, grad w) + (v, w) - <d_n v, [w]>.
  const Mesh& mesh = space->mesh();
  const std::size_t nd = space->dofs_per_elem();
  const Tabulation tab = tabulate(*space, volume_quadrature(load_degree(space->degree())));
  DenseVector rhs(space->total_dofs(), 0.0);
  std::array<Point2, kMaxDof> g{};
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const double jac = 2.0 * space->geometry(e).area;
    for (std::size_t q = 0; q < tab.rule.size(); ++q) {
      const Point2 x = space->to_physical(e, tab.rule.points[q]);
      const double w = tab.rule.weights[q] * jac;
      const double val = v.value(x);
      const Point2 grad = v.gradient(x);
      physical_grads(*space, tab, e, q, g);
      for (std::size_t i = 0; i < nd; ++i) {
        rhs[space->dof(e, i)] += w * (dot(grad, g[i]) + val * tab.value(q, i));
      }
    }
  }
  const QuadratureRule frule = face_quadrature(load_degree(space->degree()) + 1);
  std::array<double, kMaxDof> phi{};
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.faces()[f];
    if (!face.interior()) continue;
    const Point2 a = mesh.vertices()[face.vertices[0]];
    const Point2 b = mesh.vertices()[face.vertices[1]];
    for (std::size_t q = 0; q < frule.size(); ++q) {
      const double s = frule.points[q][0];
      const Point2 x = a + s * (b - a);
      const double w = frule.weights[q] * face.length * dot(v.gradient(x), face.normal);
      for (int side = 0; side < 2; ++side) {
        const std::size_t e = side == 0 ? face.left : face.right;
        const double sign = side == 0 ? 1.0 : -1.0;
        space->reference_values(space->face_point(e, f, s), std::span(phi).first(nd));
        for (std::size_t i = 0; i < nd; ++i) rhs[space->dof(e, i)] -= w * sign * phi[i];
      }
    }
  }
  return solve_projection(space, cfg, projection_system(*space, cfg), rhs);
}

DgFunction initial_datum(const std::shared_ptr<const DgSpace>& space, const ScalarField& u0) {
  return interpolate(space, u0);
}

}  // namespace acdg
