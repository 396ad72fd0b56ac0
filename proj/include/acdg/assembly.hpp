#pragma once

#include <functional>
#include <memory>
#include <string>

#include "acdg/dg_space.hpp"
#include "acdg/sparse.hpp"

namespace acdg {

/// Treatment of the cubic nonlinearity at t_{m+1}.
enum class Variant {
  ConvexSplitting,  // f = (u^{m+1})^3 - u^m
  FullyImplicit,    // f = (u^{m+1})^3 - u^{m+1}
};

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

/// Standard SIPG sizing 8 r (r + 1): 16 for P1, 48 for P2.
double default_penalty(int degree);

struct SchemeConfig {
  double epsilon = 0.1;
  double dt = 1e-3;
  int lambda = -1;       // -1 symmetric, 0 incomplete, +1 non-symmetric
  double sigma = 16.0;   // uniform penalty sigma_e
  Variant variant = Variant::ConvexSplitting;
  double newton_tol = 1e-10;  // on the residual max-norm
  int newton_max_iter = 30;
  double linear_tol = 1e-10;
  double t_final = 0.0;

  /// Throws InvalidArgument on non-positive epsilon/dt/sigma or lambda outside {-1,0,1}.
  void validate() const;
};

/// A smooth field with its gradient, for projections and error norms.
struct SmoothField {
  ScalarField value;
  VectorField gradient;
};

/// Block-diagonal mass matrix (phi_j, phi_i).
CsrMatrix assemble_mass(const DgSpace& space);

/// Matrix of a_h(phi_j, phi_i): broken gradient term, consistency and (lambda-weighted)
/// symmetry terms and the sigma/h_e jump penalty, all face sums over interior faces only.
CsrMatrix assemble_dg_laplacian(const DgSpace& space, const SchemeConfig& cfg);

/// (g, phi_i) by quadrature.
DenseVector assemble_load(const DgSpace& space, const ScalarField& g);

/// (u^3, phi_i), exact for u in V_h.
DenseVector assemble_cubic(const DgFunction& u);

/// Integral of c4 u^4 + c2 u^2 + c0 over the domain, exact for u in V_h.
double integrate_quartic(const DgFunction& u, double c4, double c2, double c0);

/// Block-diagonal matrix of (w(u) phi_j, phi_i) with w = coef * u^2 + shift.
CsrMatrix assemble_weighted_mass(const DgFunction& u, double coef, double shift);

/// R(u_new) of the one-step scheme; `forcing` (may be empty) is the source at t_{m+1}.
DenseVector assemble_nonlinear_residual(const DgSpace& space, const SchemeConfig& cfg,
                                        const DgFunction& u_new, const DgFunction& u_old,
                                        const CsrMatrix& mass, const CsrMatrix& laplacian,
                                        const ScalarField& forcing = {});

/// dR/du_new = M/k + A + eps^-2 N(u_new); shares the sparsity pattern of A.
CsrMatrix assemble_jacobian(const DgSpace& space, const SchemeConfig& cfg,
                            const DgFunction& u_new, const CsrMatrix& mass,
                            const CsrMatrix& laplacian);

/// Best L2 approximation, solved element by element.
DgFunction l2_project(const std::shared_ptr<const DgSpace>& space, const ScalarField& g);

/// P with a_h(P, w) + (P, w) = a_h(v, w) + (v, w) for all w in V_h.
DgFunction elliptic_project(const std::shared_ptr<const DgSpace>& space, const SchemeConfig& cfg,
                            const DgFunction& v);
DgFunction elliptic_project(const std::shared_ptr<const DgSpace>& space, const SchemeConfig& cfg,
                            const SmoothField& v);

/// Nodal interpolant of u0 in the continuous subspace V_h ∩ C^0.
DgFunction initial_datum(const std::shared_ptr<const DgSpace>& space, const ScalarField& u0);

/// Copy of `m` stored in the (larger) pattern of `pattern`.
CsrMatrix embed_in_pattern(const CsrMatrix& pattern, const CsrMatrix& m);

/// Quadrature degrees used throughout.
int mass_degree(int r);
int nonlinear_degree(int r);  // 4r: exact for u^3 phi and u^4
int load_degree(int r);
int face_degree(int r);

}  // namespace acdg
