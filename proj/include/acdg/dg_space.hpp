#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "acdg/mesh.hpp"
#include "acdg/quadrature.hpp"

namespace acdg {

using RefPoint = std::array<double, 2>;
using ScalarField = std::function<double(Point2)>;
using VectorField = std::function<Point2(Point2)>;

/// Affine map x = origin + B * xi from the reference triangle.
struct ElementGeometry {
  Point2 origin;
  std::array<double, 4> jacobian{};      // B, row-major
  std::array<double, 4> inv_jacobian{};  // B^{-1}, row-major
  double area = 0.0;
};

/// Broken P_r space (r = 1, 2) with a Lagrange basis on the principal lattice.
///
/// Local node order: the three vertices, then (r = 2) the midpoints of local
/// edges 0, 1, 2. Degrees of freedom are contiguous per element.
class DgSpace {
public:
  DgSpace(std::shared_ptr<const Mesh> mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  std::size_t dofs_per_elem() const { return ndof_; }
  std::size_t total_dofs() const { return ndof_ * mesh_->num_elements(); }
  std::size_t dof(std::size_t elem, std::size_t local) const { return elem * ndof_ + local; }

  const ElementGeometry& geometry(std::size_t elem) const { return geometry_[elem]; }
  Point2 to_physical(std::size_t elem, RefPoint xi) const;
  RefPoint to_reference(std::size_t elem, Point2 x) const;
  /// B^{-T} applied to a reference gradient.
  Point2 physical_gradient(std::size_t elem, const std::array<double, 2>& ref_grad) const;

  /// Reference coordinates of the point at parameter s along `face`, as seen
  /// from `elem` (which must be adjacent). s runs from face.vertices[0] to [1].
  RefPoint face_point(std::size_t elem, std::size_t face, double s) const;

  void reference_values(RefPoint xi, std::span<double> out) const;
  void reference_gradients(RefPoint xi, std::span<std::array<double, 2>> out) const;
  const std::vector<RefPoint>& lattice() const { return lattice_; }

private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  std::size_t ndof_;
  std::vector<ElementGeometry> geometry_;
  std::vector<RefPoint> lattice_;
};

struct BasisValues {
  std::vector<double> values;
  std::vector<Point2> gradients;  // physical coordinates
};

/// All local shape functions of `elem` at a reference point.
BasisValues eval_basis(const DgSpace& space, std::size_t elem, RefPoint xi);

/// Reference basis values and gradients tabulated at the points of a rule.
/// Index q * dofs_per_elem + i.
struct Tabulation {
  QuadratureRule rule;
  std::size_t ndof = 0;
  std::vector<double> values;
  std::vector<std::array<double, 2>> ref_grads;

  double value(std::size_t q, std::size_t i) const { return values[q * ndof + i]; }
  const std::array<double, 2>& grad(std::size_t q, std::size_t i) const { return ref_grads[q * ndof + i]; }
};

Tabulation tabulate(const DgSpace& space, QuadratureRule rule);

/// Coefficient vector over a DgSpace.
class DgFunction {
public:
  explicit DgFunction(std::shared_ptr<const DgSpace> space);
  DgFunction(std::shared_ptr<const DgSpace> space, std::vector<double> coefficients);

  const DgSpace& space() const { return *space_; }
  const std::shared_ptr<const DgSpace>& space_ptr() const { return space_; }
  std::vector<double>& coefficients() { return coeffs_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  std::span<const double> block(std::size_t elem) const;

  double value(std::size_t elem, RefPoint xi) const;
  Point2 gradient(std::size_t elem, RefPoint xi) const;

private:
  std::shared_ptr<const DgSpace> space_;
  std::vector<double> coeffs_;
};

/// Element traces on both sides of a face at parameter s. Boundary faces only
/// have the left trace; jump and average then reduce to that trace.
struct TracePair {
  double left = 0.0;
  double right = 0.0;
  Point2 grad_left;
  Point2 grad_right;
  bool has_right = false;

  double jump() const { return has_right ? left - right : left; }
  double average() const { return has_right ? 0.5 * (left + right) : left; }
};

TracePair trace_pair(const DgSpace& space, const DgFunction& f, std::size_t face, double s);

/// Elementwise Lagrange interpolation. Shared lattice nodes receive identical
/// values, so the result lies in the continuous subspace.
DgFunction interpolate(std::shared_ptr<const DgSpace> space, const ScalarField& g);

/// Physical location of the global lattice node behind (elem, local).
Point2 lattice_point(const DgSpace& space, std::size_t elem, std::size_t local);

}  // namespace acdg
