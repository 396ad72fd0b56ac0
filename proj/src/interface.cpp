#include "acdg/interface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "acdg/error.hpp"

namespace acdg {

std::size_t num_global_nodes(const DgSpace& space) {
  const Mesh& m = space.mesh();
  return m.num_vertices() + (space.degree() == 2 ? m.num_faces() : 0);
}

std::size_t global_node(const DgSpace& space, std::size_t elem, std::size_t local) {
  const Mesh& m = space.mesh();
  if (local < 3) return m.triangles()[elem][local];
  return m.num_vertices() + m.elem_faces()[elem][local - 3];
}

std::size_t ContinuousField::node(std::size_t elem, std::size_t local) const {
  return global_node(*space, elem, local);
}

DgFunction ContinuousField::to_dg() const {
  DgFunction f(space);
  auto& c = f.coefficients();
  for (std::size_t e = 0; e < space->mesh().num_elements(); ++e) {
    for (std::size_t i = 0; i < space->dofs_per_elem(); ++i) c[space->dof(e, i)] = values[node(e, i)];
  }
  return f;
}

ContinuousField average_to_continuous(const DgFunction& v) {
  const auto& space = v.space_ptr();
  const std::size_t n = num_global_nodes(*space);
  std::vector<double> sum(n, 0.0);
  std::vector<int> count(n, 0);
  for (std::size_t e = 0; e < space->mesh().num_elements(); ++e) {
    for (std::size_t i = 0; i < space->dofs_per_elem(); ++i) {
      const std::size_t g = global_node(*space, e, i);
      sum[g] += v.coefficients()[space->dof(e, i)];
      ++count[g];
    }
  }
  for (std::size_t g = 0; g < n; ++g) sum[g] /= count[g];
  return {space, std::move(sum)};
}

DgFunction time_interpolant(const DgFunction& u_m, double t_m, const DgFunction& u_p, double t_p,
                            double t) {
  if (!(t_p > t_m)) throw InvalidArgument("time_interpolant: t_p must exceed t_m");
  if (t < t_m || t > t_p) {
    throw InvalidArgument("time_interpolant: t = " + std::to_string(t) + " outside [" +
                          std::to_string(t_m) + ", " + std::to_string(t_p) + "]");
  }
  if (u_m.space_ptr() != u_p.space_ptr()) throw InvalidArgument("time_interpolant: space mismatch");
  const double k = t_p - t_m;
  const double a = (t - t_m) / k;
  const double b = (t_p - t) / k;
  DgFunction out(u_m.space_ptr());
  auto& c = out.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a * u_p.coefficients()[i] + b * u_m.coefficients()[i];
  return out;
}

std::size_t InterfaceCurve::degenerate_count() const {
  return static_cast<std::size_t>(
      std::count_if(segments.begin(), segments.end(), [](const Segment& s) { return s.degenerate; }));
}

namespace {

struct Node {
  std::size_t id;
  Point2 x;
  double value;  // raw value
};

// Zero crossing on the edge between p and q, always computed from the node with
// the smaller id so neighbouring triangles produce identical points.
Point2 crossing(const Node& p, const Node& q, double shift) {
  const Node& a = p.id < q.id ? p : q;
  const Node& b = p.id < q.id ? q : p;
  const double va = a.value == 0.0 ? shift : a.value;
  const double vb = b.value == 0.0 ? shift : b.value;
  const double s = va / (va - vb);
  return a.x + s * (b.x - a.x);
}

void march(const std::array<Node, 3>& n, double shift, InterfaceCurve& out) {
  if (n[0].value == 0.0 && n[1].value == 0.0 && n[2].value == 0.0) {
    for (int k = 0; k < 3; ++k) out.segments.push_back({n[k].x, n[(k + 1) % 3].x, true});
    return;
  }
  Point2 pts[3];
  int found = 0;
  for (int k = 0; k < 3; ++k) {
    const Node& p = n[k];
    const Node& q = n[(k + 1) % 3];
    const bool neg_p = (p.value == 0.0 ? shift : p.value) < 0.0;
    const bool neg_q = (q.value == 0.0 ? shift : q.value) < 0.0;
    if (neg_p != neg_q) pts[found++] = crossing(p, q, shift);
  }
  if (found == 2) out.segments.push_back({pts[0], pts[1], false});
}

double field_max(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

InterfaceCurve extract_zero_levelset(const Mesh& mesh, const std::vector<double>& vertex_values,
                                     double time) {
  if (vertex_values.size() != mesh.num_vertices()) {
    throw InvalidArgument("extract_zero_levelset: expected one value per vertex");
  }
  InterfaceCurve out;
  out.time = time;
  const double shift = 1e-14 * field_max(vertex_values);
  for (const auto& tri : mesh.triangles()) {
    std::array<Node, 3> n;
    for (int k = 0; k < 3; ++k) n[k] = {tri[k], mesh.vertices()[tri[k]], vertex_values[tri[k]]};
    march(n, shift, out);
  }
  return out;
}

InterfaceCurve extract_zero_levelset(const ContinuousField& field, double time) {
  const DgSpace& space = *field.space;
  const Mesh& mesh = space.mesh();
  if (space.degree() == 1) {
    return extract_zero_levelset(mesh, field.values, time);
  }
  InterfaceCurve out;
  out.time = time;
  const double shift = 1e-14 * field_max(field.values);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    std::array<Node, 6> n;
    for (std::size_t i = 0; i < 6; ++i) {
      const std::size_t g = field.node(e, i);
      n[i] = {g, lattice_point(space, e, i), field.values[g]};
    }
    // Local nodes 3, 4, 5 sit on edges (0,1), (1,2), (2,0).
    march({n[0], n[3], n[5]}, shift, out);
    march({n[3], n[1], n[4]}, shift, out);
    march({n[5], n[4], n[2]}, shift, out);
    march({n[3], n[4], n[5]}, shift, out);
  }
  return out;
}

CircleFlow::CircleFlow(Point2 center, double r0) : center_(center), r0_(r0) {
  if (!(r0 > 0.0)) throw InvalidArgument("CircleFlow: r0 must be positive");
}

double CircleFlow::radius(double t) const {
  if (t < 0.0 || t >= extinction_time()) {
    throw InvalidArgument("CircleFlow: t = " + std::to_string(t) + " outside [0, " +
                          std::to_string(extinction_time()) + ")");
  }
  return std::sqrt(r0_ * r0_ - 2.0 * t);
}

namespace {

template <class F>
double sup_over_samples(const InterfaceCurve& curve, F dist) {
  if (curve.empty()) throw EmptyInterface("interface curve is empty");
  double d = 0.0;
  for (const auto& s : curve.segments) {
    d = std::max({d, dist(s.a), dist(s.b), dist(0.5 * (s.a + s.b))});
  }
  return d;
}

double point_segment_distance(Point2 p, const Segment& s) {
  const Point2 d = s.b - s.a;
  const double len2 = dot(d, d);
  double t = len2 > 0.0 ? dot(p - s.a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (s.a + t * d));
}

}  // namespace

double one_sided_hausdorff(const InterfaceCurve& curve, const CircleFlow& flow, double t) {
  const double r = flow.radius(t);
  return sup_over_samples(curve, [&](Point2 x) { return std::abs(norm(x - flow.center()) - r); });
}

double one_sided_hausdorff(const InterfaceCurve& curve, const InterfaceCurve& reference) {
  if (reference.empty()) throw EmptyInterface("reference interface curve is empty");
  return sup_over_samples(curve, [&](Point2 x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : reference.segments) best = std::min(best, point_segment_distance(x, s));
    return best;
  });
}

double symmetric_hausdorff(const InterfaceCurve& a, const InterfaceCurve& b) {
  return std::max(one_sided_hausdorff(a, b), one_sided_hausdorff(b, a));
}

void write_curve_csv(const std::string& path, const InterfaceCurve& curve) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path);
  out << "t,x0,y0,x1,y1\n" << std::setprecision(17);
  for (const auto& s : curve.segments) {
    out << curve.time << ',' << s.a.x << ',' << s.a.y << ',' << s.b.x << ',' << s.b.y << '\n';
  }
}

void write_curve_vtk(const std::string& path, const InterfaceCurve& curve) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path);
  const std::size_t n = curve.segments.size();
  out << "# vtk DataFile Version 3.0\nzero level set t=" << curve.time << "\nASCII\nDATASET POLYDATA\n";
  out << "POINTS " << 2 * n << " double\n" << std::setprecision(17);
  for (const auto& s : curve.segments) out << s.a.x << ' ' << s.a.y << " 0\n" << s.b.x << ' ' << s.b.y << " 0\n";
  out << "LINES " << n << ' ' << 3 * n << '\n';
  for (std::size_t i = 0; i < n; ++i) out << "2 " << 2 * i << ' ' << 2 * i + 1 << '\n';
  out << "CELL_DATA " << n << "\nSCALARS degenerate int 1\nLOOKUP_TABLE default\n";
  for (const auto& s : curve.segments) out << (s.degenerate ? 1 : 0) << '\n';
}

}  // namespace acdg
