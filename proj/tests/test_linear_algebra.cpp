#include <doctest.h>

#include <Eigen/Dense>
#include <random>
#include <sstream>

#include "acdg/error.hpp"
#include "acdg/linear_solver.hpp"
#include "acdg/sparse.hpp"

using namespace acdg;

namespace {

CsrMatrix from_dense(const Eigen::MatrixXd& a) {
  TripletBuilder t(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) t.add(i, j, a(i, j));
  return t.build();
}

// Sparse-ish SPD: 1D Laplacian plus a random symmetric perturbation on a band.
Eigen::MatrixXd spd(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 4.0;
    if (i + 1 < n) a(i, i + 1) = a(i + 1, i) = -1.0 + u(rng);
    if (i + 3 < n) a(i, i + 3) = a(i + 3, i) = u(rng);
  }
  return a;
}

Eigen::MatrixXd nonsymmetric(int n, unsigned seed) {
  Eigen::MatrixXd a = spd(n, seed);
  std::mt19937 rng(seed + 1);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i + 2 < n; ++i) a(i, i + 2) += u(rng);
  return a;
}

DenseVector random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseVector v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

double error_vs_eigen(const Eigen::MatrixXd& a, const DenseVector& b, const DenseVector& x) {
  const Eigen::VectorXd eb = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
  const Eigen::VectorXd ref = a.partialPivLu().solve(eb);
  const Eigen::VectorXd ex = Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
  return (ex - ref).norm() / ref.norm();
}

}  // namespace

TEST_CASE("triplets sum duplicates and sort columns") {
  TripletBuilder t(3, 3);
  t.add(0, 2, 1.0);
  t.add(0, 0, 2.0);
  t.add(0, 2, 0.5);
  t.add(2, 1, -1.0);
  const CsrMatrix a = t.build();
  CHECK(a.nnz() == 3);
  CHECK(a.at(0, 2) == 1.5);
  CHECK(a.at(0, 0) == 2.0);
  CHECK(a.at(1, 1) == 0.0);
  CHECK(a.col_idx()[0] == 0);
  CHECK(a.col_idx()[1] == 2);
  CHECK(a.find(1, 0) == CsrMatrix::npos);
  CHECK_THROWS_AS(a.at(3, 0), InvalidArgument);
}

TEST_CASE("multiply, asymmetry and diagonal match a dense reference") {
  const Eigen::MatrixXd d = nonsymmetric(12, 5);
  const CsrMatrix a = from_dense(d);
  const DenseVector x = random_vector(12, 9);
  const DenseVector y = a * x;
  const Eigen::VectorXd ref = d * Eigen::Map<const Eigen::VectorXd>(x.data(), 12);
  for (int i = 0; i < 12; ++i) CHECK(y[i] == doctest::Approx(ref[i]).epsilon(1e-14));
  CHECK(a.asymmetry() == doctest::Approx((d - d.transpose()).cwiseAbs().maxCoeff()));
  CHECK(from_dense(spd(12, 5)).asymmetry() == 0.0);
  const DenseVector diag = a.diagonal();
  for (int i = 0; i < 12; ++i) CHECK(diag[i] == d(i, i));
}

TEST_CASE("add respects the pattern") {
  CsrMatrix a = from_dense(Eigen::MatrixXd::Identity(3, 3));
  a.add(1, 1, 2.0);
  CHECK(a.at(1, 1) == 3.0);
  CHECK_THROWS_AS(a.add(0, 1, 1.0), InvalidArgument);
}

TEST_CASE("matrix market output") {
  TripletBuilder t(2, 2);
  t.add(0, 0, 1.0);
  t.add(1, 0, -2.5);
  std::ostringstream os;
  write_matrix_market(t.build(), os);
  const std::string s = os.str();
  CHECK(s.rfind("%%MatrixMarket matrix coordinate real general", 0) == 0);
  CHECK(s.find("2 2 2") != std::string::npos);
  CHECK(s.find("2 1 ") != std::string::npos);
}

TEST_CASE("vector helpers") {
  const DenseVector a = {3.0, -4.0}, b = {1.0, 2.0};
  CHECK(dot(a, b) == -5.0);
  CHECK(norm2(a) == 5.0);
  CHECK(norm_inf(a) == 4.0);
  DenseVector y = b;
  axpy(2.0, a, y);
  CHECK(y[0] == 7.0);
  CHECK(y[1] == -6.0);
}

TEST_CASE("each method agrees with a dense LU") {
  const int n = 40;
  const DenseVector b = random_vector(n, 21);
  SUBCASE("conjugate gradient") {
    const auto d = spd(n, 1);
    for (auto p : {Preconditioner::None, Preconditioner::Jacobi, Preconditioner::BlockJacobi}) {
      LinearSolveSpec s;
      s.method = LinearMethod::ConjugateGradient;
      s.preconditioner = p;
      s.block_size = 4;
      s.tol = 1e-12;
      const auto r = linear_solve(from_dense(d), b, s);
      CHECK(r.relative_residual <= 1e-12);
      CHECK(error_vs_eigen(d, b, r.x) < 1e-10);
    }
  }
  SUBCASE("gmres on a nonsymmetric system") {
    const auto d = nonsymmetric(n, 2);
    LinearSolveSpec s;
    s.method = LinearMethod::Gmres;
    s.symmetric = false;
    s.gmres_restart = 10;
    s.tol = 1e-12;
    const auto r = linear_solve(from_dense(d), b, s);
    CHECK(r.method_used == LinearMethod::Gmres);
    CHECK(error_vs_eigen(d, b, r.x) < 1e-10);
  }
  SUBCASE("dense direct") {
    const auto d = nonsymmetric(n, 3);
    LinearSolveSpec s;
    s.method = LinearMethod::DenseDirect;
    const auto r = linear_solve(from_dense(d), b, s);
    CHECK(error_vs_eigen(d, b, r.x) < 1e-12);
  }
  SUBCASE("auto on a nonsymmetric system skips cg") {
    const auto d = nonsymmetric(n, 4);
    LinearSolveSpec s;
    s.symmetric = false;
    const auto r = linear_solve(from_dense(d), b, s);
    CHECK(r.method_used != LinearMethod::ConjugateGradient);
    CHECK(error_vs_eigen(d, b, r.x) < 1e-8);
  }
}

TEST_CASE("zero right-hand side gives zero without iterating") {
  const auto a = from_dense(spd(10, 1));
  const auto r = linear_solve(a, DenseVector(10, 0.0), LinearSolveSpec{});
  CHECK(r.iterations == 0);
  for (double v : r.x) CHECK(v == 0.0);
}

TEST_CASE("initial guess that is already the solution") {
  const auto d = spd(20, 8);
  const DenseVector b = random_vector(20, 3);
  LinearSolveSpec s;
  s.method = LinearMethod::ConjugateGradient;
  s.tol = 1e-13;
  const auto first = linear_solve(from_dense(d), b, s);
  s.tol = 1e-8;
  const auto second = linear_solve(from_dense(d), b, s, first.x);
  CHECK(second.iterations == 0);
}

TEST_CASE("failures") {
  SUBCASE("iteration limit") {
    LinearSolveSpec s;
    s.method = LinearMethod::ConjugateGradient;
    s.preconditioner = Preconditioner::None;
    s.max_iter = 2;
    s.tol = 1e-14;
    CHECK_THROWS_AS(linear_solve(from_dense(spd(50, 1)), random_vector(50, 1), s), LinearSolverFailure);
  }
  SUBCASE("singular dense system") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 1.0;
    d(2, 0) = 1.0;
    LinearSolveSpec s;
    s.method = LinearMethod::DenseDirect;
    CHECK_THROWS_AS(linear_solve(from_dense(d), DenseVector{1.0, 1.0, 2.0}, s), LinearSolverFailure);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(linear_solve(from_dense(spd(4, 1)), DenseVector(3, 1.0), LinearSolveSpec{}), InvalidArgument);
  }
}
