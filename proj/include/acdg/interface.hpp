#pragma once

#include <memory>
#include <string>
#include <vector>

#include "acdg/dg_space.hpp"
#include "acdg/mesh.hpp"

namespace acdg {

/// Continuous piecewise-P_r field stored at global Lagrange nodes.
/// Node numbering: mesh vertices first, then (r = 2) one node per face.
struct ContinuousField {
  std::shared_ptr<const DgSpace> space;
  std::vector<double> values;

  std::size_t node(std::size_t elem, std::size_t local) const;
  DgFunction to_dg() const;
};

std::size_t num_global_nodes(const DgSpace& space);
/// Global node behind (elem, local) in the numbering above.
std::size_t global_node(const DgSpace& space, std::size_t elem, std::size_t local);

/// Arithmetic mean of all element limits at each global node.
ContinuousField average_to_continuous(const DgFunction& v);

/// Linear interpolation in time between u_m at t_m and u_p at t_p.
DgFunction time_interpolant(const DgFunction& u_m, double t_m, const DgFunction& u_p, double t_p,
                            double t);

struct Segment {
  Point2 a;
  Point2 b;
  bool degenerate = false;  // edge of an identically-zero triangle
};

struct InterfaceCurve {
  std::vector<Segment> segments;
  double time = 0.0;

  bool empty() const { return segments.empty(); }
  std::size_t degenerate_count() const;
};

/// Marching triangles on a P1 vertex field.
InterfaceCurve extract_zero_levelset(const Mesh& mesh, const std::vector<double>& vertex_values,
                                     double time = 0.0);
/// r = 2 fields are contoured on the P1 sub-lattice (4 sub-triangles per element).
InterfaceCurve extract_zero_levelset(const ContinuousField& field, double time = 0.0);

/// Circle shrinking under V_n = curvature: r(t) = sqrt(r0^2 - 2t).
class CircleFlow {
public:
  CircleFlow(Point2 center, double r0);

  Point2 center() const { return center_; }
  double r0() const { return r0_; }
  double extinction_time() const { return 0.5 * r0_ * r0_; }
  double radius(double t) const;

private:
  Point2 center_;
  double r0_;
};

/// sup over segment endpoints and midpoints of the distance to the circle at time t.
double one_sided_hausdorff(const InterfaceCurve& curve, const CircleFlow& flow, double t);
/// sup over sample points of `curve` of the distance to the segments of `reference`.
double one_sided_hausdorff(const InterfaceCurve& curve, const InterfaceCurve& reference);
double symmetric_hausdorff(const InterfaceCurve& a, const InterfaceCurve& b);

/// Columns t, x0, y0, x1, y1.
void write_curve_csv(const std::string& path, const InterfaceCurve& curve);
void write_curve_vtk(const std::string& path, const InterfaceCurve& curve);

}  // namespace acdg
