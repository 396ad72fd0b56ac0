#pragma once

#include <cstdint>
#include <vector>

#include "acdg/assembly.hpp"
#include "acdg/dg_space.hpp"

namespace acdg {

/// Parts of the discrete energies. phi = grad + consistency + penalty,
/// J = phi + potential, I = phi + convex_potential.
struct EnergyBreakdown {
  double grad_part = 0.0;              // 1/2 ||grad v||^2 (broken)
  double consistency_part = 0.0;       // -<{d_n v}, [v]> over interior faces
  double penalty_part = 0.0;           // 1/2 j_h(v, v)
  double potential_part = 0.0;         // eps^-2 (F(v), 1),  F = (v^2 - 1)^2 / 4
  double convex_potential_part = 0.0;  // eps^-2 (F_c^+(v), 1),  F_c^+ = (v^4 + 1) / 4
  double phi = 0.0;
  double J = 0.0;
  double I = 0.0;
};

/// Evaluated directly by volume and face quadrature (independent of the assembled matrices).
EnergyBreakdown energies(const SchemeConfig& cfg, const DgFunction& v);

/// Dissipation term of the discrete energy law for one step:
/// (1 ± k/2eps^2)||d_t u||^2 + k/4 ||grad d_t u||^2 + k/4 j_h(d_t u, d_t u)
///   + k/(4 eps^2) ||d_t(u^2 - 1)||^2,
/// with "+" for convex splitting and "-" for the fully implicit variant.
double energy_law_residual(const SchemeConfig& cfg, const DgFunction& u_new, const DgFunction& u_old);

/// True when the fully implicit variant runs with k >= 2 eps^2, where the
/// (1 - k/2eps^2) factor is no longer positive definite.
bool energy_law_flagged(const SchemeConfig& cfg);

/// j_h(v, v) = sum over interior faces of sigma/h_e ||[v]||^2.
double jump_penalty(const SchemeConfig& cfg, const DgFunction& v);

/// sum over interior faces of h_e^power ||[v]||^2_{L2(e)}.
double weighted_jump_sum(const DgFunction& v, double power);

struct BrokenNorms {
  double l2 = 0.0;
  double h1_broken = 0.0;    // (||v||^2 + ||grad_h v||^2)^{1/2}
  double grad = 0.0;         // ||grad_h v||
  double dg_seminorm = 0.0;  // (||grad_h v||^2 + j_h(v, v))^{1/2}
  double linf = 0.0;         // sampled at lattice nodes and quadrature points
};

BrokenNorms broken_norms(const SchemeConfig& cfg, const DgFunction& v);
/// Norms of the error v - reference.
BrokenNorms broken_norms(const SchemeConfig& cfg, const DgFunction& v, const SmoothField& reference);

struct EigenOptions {
  double tol = 1e-8;
  int krylov_dim = 60;
  int max_restarts = 60;
  double inner_tol = 1e-12;
  std::uint64_t seed = 20161016;
};

struct EigenResult {
  double lambda = 0.0;
  double residual_bound = 0.0;
  double shift = 0.0;
  int iterations = 0;  // Lanczos steps across restarts
  std::vector<double> eigenvector;
};

/// Smallest lambda with (A + eps^-2 W) x = lambda M x, W = (f'(u_ref) phi_j, phi_i),
/// f'(s) = 3 s^2 - 1. Shift-and-invert Lanczos in the M inner product with CG inner solves.
EigenResult principal_eigenvalue(const SchemeConfig& cfg, const DgFunction& u_ref,
                                 const EigenOptions& opts = {});

}  // namespace acdg
