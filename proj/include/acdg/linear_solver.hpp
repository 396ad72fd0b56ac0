#pragma once

#include <span>

#include "acdg/sparse.hpp"

namespace acdg {

enum class LinearMethod {
  Auto,               // CG, then GMRES on breakdown, then dense LU for small systems
  ConjugateGradient,  // symmetric positive definite only
  Gmres,              // restarted, right preconditioned
  DenseDirect,        // LU with partial pivoting
};

enum class Preconditioner { None, Jacobi, BlockJacobi };

struct LinearSolveSpec {
  LinearMethod method = LinearMethod::Auto;
  Preconditioner preconditioner = Preconditioner::Jacobi;
  std::size_t block_size = 1;  // BlockJacobi: contiguous diagonal blocks of this size
  bool symmetric = true;       // Auto skips CG when false
  double tol = 1e-10;          // on ||b - A x||_2 / ||b||_2
  int max_iter = 5000;
  int gmres_restart = 60;
  std::size_t dense_limit = 4000;  // largest system Auto hands to the dense fallback
};

struct LinearSolveResult {
  DenseVector x;
  int iterations = 0;
  double relative_residual = 0.0;
  LinearMethod method_used = LinearMethod::Auto;
};

/// Solves A x = b. `guess`, if non-empty, seeds the iterative methods.
/// Throws LinearSolverFailure when the tolerance is not reached.
LinearSolveResult linear_solve(const CsrMatrix& a, std::span<const double> b,
                               const LinearSolveSpec& spec, std::span<const double> guess = {});

}  // namespace acdg
