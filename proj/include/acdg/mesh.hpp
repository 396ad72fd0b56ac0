#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

namespace acdg {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

/// Axis-aligned rectangle [xmin, xmax] x [ymin, ymax].
struct Rectangle {
  double xmin = -1.0;
  double xmax = 1.0;
  double ymin = -1.0;
  double ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
};

enum class FaceKind { Interior, Boundary };

inline constexpr std::size_t kNoElement = static_cast<std::size_t>(-1);

/// A mesh edge. On interior faces `left` has the smaller element index and
/// `normal` points from `left` into `right`; on boundary faces `normal` is outward.
struct Face {
  std::array<std::size_t, 2> vertices{};  // ordered counterclockwise w.r.t. `left`
  FaceKind kind = FaceKind::Boundary;
  std::size_t left = kNoElement;
  std::size_t right = kNoElement;
  Point2 normal;
  double length = 0.0;  // h_e

  bool interior() const { return kind == FaceKind::Interior; }
};

/// Conforming triangulation of a rectangle. Immutable after construction.
///
/// Local edge k of triangle (v0, v1, v2) joins v_k and v_{k+1 mod 3}.
class Mesh {
public:
  Mesh(Rectangle domain, std::vector<Point2> vertices,
       std::vector<std::array<std::size_t, 3>> triangles);

  const Rectangle& domain() const { return domain_; }
  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<std::array<std::size_t, 3>>& triangles() const { return triangles_; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<std::array<std::size_t, 3>>& elem_faces() const { return elem_faces_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_elements() const { return triangles_.size(); }
  std::size_t num_faces() const { return faces_.size(); }

  /// Largest element diameter.
  double h_max() const { return h_max_; }

  Point2 vertex(std::size_t elem, int local) const { return vertices_[triangles_[elem][local]]; }
  double signed_area(std::size_t elem) const;
  double diameter(std::size_t elem) const;

private:
  void build_faces();

  Rectangle domain_;
  std::vector<Point2> vertices_;
  std::vector<std::array<std::size_t, 3>> triangles_;
  std::vector<Face> faces_;
  std::vector<std::array<std::size_t, 3>> elem_faces_;
  double h_max_ = 0.0;
};

/// nx x ny squares, each cut along its lower-left to upper-right diagonal.
/// Element numbering is row-major over squares, lower triangle first.
std::shared_ptr<const Mesh> build_uniform_mesh(int nx, int ny, Rectangle domain);

struct FacePartition {
  std::vector<std::size_t> interior;
  std::vector<std::size_t> boundary;
};

FacePartition classify_faces(const Mesh& mesh);

/// Legacy-VTK ASCII unstructured grid of the triangulation.
void write_mesh_vtk(const Mesh& mesh, std::ostream& out);

}  // namespace acdg
