#pragma once

#include <array>
#include <vector>

namespace acdg {

/// Points and positive weights. Volume rules live on the reference triangle
/// {(0,0),(1,0),(0,1)} (weights sum to 1/2); face rules on [0,1] (weights sum to 1),
/// with the point stored in the first coordinate.
struct QuadratureRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  int degree = 0;  // exact for all polynomials up to this total degree

  std::size_t size() const { return weights.size(); }
};

inline constexpr int kMaxVolumeDegree = 20;
inline constexpr int kMaxFaceDegree = 21;

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Collapsed (Duffy) tensor Gauss rule on the reference triangle.
QuadratureRule volume_quadrature(int degree);

/// Gauss-Legendre rule on the unit interval.
QuadratureRule face_quadrature(int degree);

}  // namespace acdg
