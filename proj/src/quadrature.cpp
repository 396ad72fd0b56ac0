#include "acdg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "acdg/error.hpp"

namespace acdg {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

QuadratureRule volume_quadrature(int degree) {
  if (degree < 0 || degree > kMaxVolumeDegree) {
    throw UnsupportedDegree("no triangle rule of degree " + std::to_string(degree));
  }
  // x = u, y = (1-u) v, dx dy = (1-u) du dv: degree p in (x,y) becomes p+1 in u.
  const int n = (degree + 3) / 2;
  std::vector<double> gx, gw;
  gauss_legendre(n, gx, gw);
  QuadratureRule rule;
  rule.degree = 2 * n - 2;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (gx[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (gx[j] + 1.0);
      rule.points.push_back({u, (1.0 - u) * v});
      rule.weights.push_back(0.25 * gw[i] * gw[j] * (1.0 - u));
    }
  }
  return rule;
}

QuadratureRule face_quadrature(int degree) {
  if (degree < 0 || degree > kMaxFaceDegree) {
    throw UnsupportedDegree("no interval rule of degree " + std::to_string(degree));
  }
  const int n = degree / 2 + 1;
  std::vector<double> gx, gw;
  gauss_legendre(n, gx, gw);
  QuadratureRule rule;
  rule.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    rule.points.push_back({0.5 * (gx[i] + 1.0), 0.0});
    rule.weights.push_back(0.5 * gw[i]);
  }
  return rule;
}

}  // namespace acdg
