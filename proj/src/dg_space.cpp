#include "acdg/dg_space.hpp"

#include <string>
#include <utility>

#include "acdg/error.hpp"

namespace acdg {

namespace {

constexpr double kRefTol = 1e-12;

bool inside_reference(RefPoint xi) {
  return xi[0] >= -kRefTol && xi[1] >= -kRefTol && xi[0] + xi[1] <= 1.0 + kRefTol;
}

}  // namespace

DgSpace::DgSpace(std::shared_ptr<const Mesh> mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree) {
  if (!mesh_) throw InvalidArgument("DgSpace requires a mesh");
  if (degree_ != 1 && degree_ != 2) {
    throw InvalidArgument("only P1 and P2 spaces are supported, got r = " + std::to_string(degree));
  }
  ndof_ = static_cast<std::size_t>((degree_ + 1) * (degree_ + 2) / 2);
  lattice_ = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  if (degree_ == 2) {
    lattice_.push_back({0.5, 0.0});
    lattice_.push_back({0.5, 0.5});
    lattice_.push_back({0.0, 0.5});
  }
  geometry_.resize(mesh_->num_elements());
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const Point2 a = mesh_->vertex(e, 0);
    const Point2 b = mesh_->vertex(e, 1);
    const Point2 c = mesh_->vertex(e, 2);
    ElementGeometry& g = geometry_[e];
    g.origin = a;
    g.jacobian = {b.x - a.x, c.x - a.x, b.y - a.y, c.y - a.y};
    const double det = g.jacobian[0] * g.jacobian[3] - g.jacobian[1] * g.jacobian[2];
    g.inv_jacobian = {g.jacobian[3] / det, -g.jacobian[1] / det, -g.jacobian[2] / det,
                      g.jacobian[0] / det};
    g.area = 0.5 * det;
  }
}

Point2 DgSpace::to_physical(std::size_t elem, RefPoint xi) const {
  const auto& g = geometry_[elem];
  return {g.origin.x + g.jacobian[0] * xi[0] + g.jacobian[1] * xi[1],
          g.origin.y + g.jacobian[2] * xi[0] + g.jacobian[3] * xi[1]};
}

RefPoint DgSpace::to_reference(std::size_t elem, Point2 x) const {
  const auto& g = geometry_[elem];
  const Point2 d = x - g.origin;
  return {g.inv_jacobian[0] * d.x + g.inv_jacobian[1] * d.y,
          g.inv_jacobian[2] * d.x + g.inv_jacobian[3] * d.y};
}

Point2 DgSpace::physical_gradient(std::size_t elem, const std::array<double, 2>& r) const {
  const auto& inv = geometry_[elem].inv_jacobian;
  return {inv[0] * r[0] + inv[2] * r[1], inv[1] * r[0] + inv[3] * r[1]};
}

RefPoint DgSpace::face_point(std::size_t elem, std::size_t face, double s) const {
  const auto& local_faces = mesh_->elem_faces()[elem];
  const Face& f = mesh_->faces()[face];
  for (int k = 0; k < 3; ++k) {
    if (local_faces[k] != face) continue;
    // Local edge k runs v_k -> v_{k+1}; flip the parameter when the face is stored reversed.
    const double t = mesh_->triangles()[elem][k] == f.vertices[0] ? s : 1.0 - s;
    switch (k) {
      case 0: return {t, 0.0};
      case 1: return {1.0 - t, t};
      default: return {0.0, 1.0 - t};
    }
  }
  throw InvalidArgument("element " + std::to_string(elem) + " is not adjacent to face " +
                        std::to_string(face));
}

void DgSpace::reference_values(RefPoint xi, std::span<double> out) const {
  const double l1 = xi[0];
  const double l2 = xi[1];
  const double l0 = 1.0 - l1 - l2;
  if (degree_ == 1) {
    out[0] = l0;
    out[1] = l1;
    out[2] = l2;
    return;
  }
  out[0] = l0 * (2.0 * l0 - 1.0);
  out[1] = l1 * (2.0 * l1 - 1.0);
  out[2] = l2 * (2.0 * l2 - 1.0);
  out[3] = 4.0 * l0 * l1;
  out[4] = 4.0 * l1 * l2;
  out[5] = 4.0 * l2 * l0;
}

void DgSpace::reference_gradients(RefPoint xi, std::span<std::array<double, 2>> out) const {
  if (degree_ == 1) {
    out[0] = {-1.0, -1.0};
    out[1] = {1.0, 0.0};
    out[2] = {0.0, 1.0};
    return;
  }
  const double l1 = xi[0];
  const double l2 = xi[1];
  const double l0 = 1.0 - l1 - l2;
  const double a0 = 4.0 * l0 - 1.0;
  out[0] = {-a0, -a0};
  out[1] = {4.0 * l1 - 1.0, 0.0};
  out[2] = {0.0, 4.0 * l2 - 1.0};
  out[3] = {4.0 * (l0 - l1), -4.0 * l1};
  out[4] = {4.0 * l2, 4.0 * l1};
  out[5] = {-4.0 * l2, 4.0 * (l0 - l2)};
}

BasisValues eval_basis(const DgSpace& space, std::size_t elem, RefPoint xi) {
  if (elem >= space.mesh().num_elements()) throw InvalidArgument("element id out of range");
  if (!inside_reference(xi)) throw InvalidArgument("point outside the reference triangle");
  const std::size_t n = space.dofs_per_elem();
  BasisValues b;
  b.values.resize(n);
  std::vector<std::array<double, 2>> rg(n);
  space.reference_values(xi, b.values);
  space.reference_gradients(xi, rg);
  b.gradients.resize(n);
  for (std::size_t i = 0; i < n; ++i) b.gradients[i] = space.physical_gradient(elem, rg[i]);
  return b;
}

Tabulation tabulate(const DgSpace& space, QuadratureRule rule) {
  Tabulation t;
  t.ndof = space.dofs_per_elem();
  t.values.resize(rule.size() * t.ndof);
  t.ref_grads.resize(rule.size() * t.ndof);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    space.reference_values(rule.points[q], std::span(t.values).subspan(q * t.ndof, t.ndof));
    space.reference_gradients(rule.points[q], std::span(t.ref_grads).subspan(q * t.ndof, t.ndof));
  }
  t.rule = std::move(rule);
  return t;
}

DgFunction::DgFunction(std::shared_ptr<const DgSpace> space)
    : space_(std::move(space)), coeffs_(space_->total_dofs(), 0.0) {}

DgFunction::DgFunction(std::shared_ptr<const DgSpace> space, std::vector<double> coefficients)
    : space_(std::move(space)), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != space_->total_dofs()) {
    throw InvalidArgument("coefficient vector length does not match the space");
  }
}

std::span<const double> DgFunction::block(std::size_t elem) const {
  const std::size_t n = space_->dofs_per_elem();
  return std::span(coeffs_).subspan(elem * n, n);
}

double DgFunction::value(std::size_t elem, RefPoint xi) const {
  std::array<double, 6> phi{};
  const std::size_t n = space_->dofs_per_elem();
  space_->reference_values(xi, std::span(phi).first(n));
  const auto c = block(elem);
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i) v += c[i] * phi[i];
  return v;
}

Point2 DgFunction::gradient(std::size_t elem, RefPoint xi) const {
  std::array<std::array<double, 2>, 6> g{};
  const std::size_t n = space_->dofs_per_elem();
  space_->reference_gradients(xi, std::span(g).first(n));
  const auto c = block(elem);
  std::array<double, 2> r{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    r[0] += c[i] * g[i][0];
    r[1] += c[i] * g[i][1];
  }
  return space_->physical_gradient(elem, r);
}

TracePair trace_pair(const DgSpace& space, const DgFunction& f, std::size_t face, double s) {
  if (face >= space.mesh().num_faces()) throw InvalidArgument("face id out of range");
  if (&f.space() != &space && f.space().total_dofs() != space.total_dofs()) {
    throw InvalidArgument("function does not belong to the space");
  }
  const Face& fc = space.mesh().faces()[face];
  TracePair t;
  const RefPoint xl = space.face_point(fc.left, face, s);
  t.left = f.value(fc.left, xl);
  t.grad_left = f.gradient(fc.left, xl);
  if (fc.interior()) {
    const RefPoint xr = space.face_point(fc.right, face, s);
    t.right = f.value(fc.right, xr);
    t.grad_right = f.gradient(fc.right, xr);
    t.has_right = true;
  }
  return t;
}

Point2 lattice_point(const DgSpace& space, std::size_t elem, std::size_t local) {
  const Mesh& m = space.mesh();
  if (local < 3) return m.vertex(elem, static_cast<int>(local));
  const int k = static_cast<int>(local - 3);
  return 0.5 * (m.vertex(elem, k) + m.vertex(elem, (k + 1) % 3));
}

DgFunction interpolate(std::shared_ptr<const DgSpace> space, const ScalarField& g) {
  DgFunction f(space);
  auto& c = f.coefficients();
  for (std::size_t e = 0; e < space->mesh().num_elements(); ++e) {
    for (std::size_t i = 0; i < space->dofs_per_elem(); ++i) {
      c[space->dof(e, i)] = g(lattice_point(*space, e, i));
    }
  }
  return f;
}

}  // namespace acdg
