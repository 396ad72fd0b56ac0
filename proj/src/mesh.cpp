#include "acdg/mesh.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <string>
#include <utility>

#include "acdg/error.hpp"

namespace acdg {

Mesh::Mesh(Rectangle domain, std::vector<Point2> vertices,
           std::vector<std::array<std::size_t, 3>> triangles)
    : domain_(domain), vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  for (std::size_t e = 0; e < triangles_.size(); ++e) {
    for (auto v : triangles_[e]) {
      if (v >= vertices_.size()) throw InvalidArgument("triangle references missing vertex");
    }
    if (!(signed_area(e) > 0.0)) {
      throw InvalidArgument("triangle " + std::to_string(e) + " is not counterclockwise");
    }
    h_max_ = std::max(h_max_, diameter(e));
  }
  build_faces();
}

double Mesh::signed_area(std::size_t elem) const {
  const Point2 a = vertex(elem, 0);
  const Point2 b = vertex(elem, 1);
  const Point2 c = vertex(elem, 2);
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double Mesh::diameter(std::size_t elem) const {
  double d = 0.0;
  for (int k = 0; k < 3; ++k) d = std::max(d, norm(vertex(elem, (k + 1) % 3) - vertex(elem, k)));
  return d;
}

void Mesh::build_faces() {
  // Elements are visited in increasing order, so the first owner of an edge
  // is always the smaller index and becomes `left`.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> lookup;
  elem_faces_.assign(triangles_.size(), {});
  for (std::size_t e = 0; e < triangles_.size(); ++e) {
    for (int k = 0; k < 3; ++k) {
      const std::size_t a = triangles_[e][k];
      const std::size_t b = triangles_[e][(k + 1) % 3];
      const auto key = std::minmax(a, b);
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        Face f;
        f.vertices = {a, b};
        f.left = e;
        const Point2 d = vertices_[b] - vertices_[a];
        f.length = norm(d);
        f.normal = {d.y / f.length, -d.x / f.length};
        lookup.emplace(key, faces_.size());
        elem_faces_[e][k] = faces_.size();
        faces_.push_back(f);
      } else {
        Face& f = faces_[it->second];
        if (f.right != kNoElement) throw InvalidArgument("edge shared by more than two triangles");
        f.right = e;
        f.kind = FaceKind::Interior;
        elem_faces_[e][k] = it->second;
      }
    }
  }
}

std::shared_ptr<const Mesh> build_uniform_mesh(int nx, int ny, Rectangle domain) {
  if (nx < 1 || ny < 1) throw InvalidArgument("nx and ny must be positive");
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    throw InvalidArgument("degenerate rectangle");
  }
  const auto nxs = static_cast<std::size_t>(nx);
  const auto nys = static_cast<std::size_t>(ny);
  std::vector<Point2> vertices;
  vertices.reserve((nxs + 1) * (nys + 1));
  for (std::size_t j = 0; j <= nys; ++j) {
    // Pin the last row/column to the exact boundary value.
    const double y = j == nys ? domain.ymax : domain.ymin + domain.height() * double(j) / double(ny);
    for (std::size_t i = 0; i <= nxs; ++i) {
      const double x = i == nxs ? domain.xmax : domain.xmin + domain.width() * double(i) / double(nx);
      vertices.push_back({x, y});
    }
  }
  std::vector<std::array<std::size_t, 3>> triangles;
  triangles.reserve(2 * nxs * nys);
  for (std::size_t j = 0; j < nys; ++j) {
    for (std::size_t i = 0; i < nxs; ++i) {
      const std::size_t v00 = j * (nxs + 1) + i;
      const std::size_t v10 = v00 + 1;
      const std::size_t v01 = v00 + nxs + 1;
      const std::size_t v11 = v01 + 1;
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }
  return std::make_shared<const Mesh>(domain, std::move(vertices), std::move(triangles));
}

FacePartition classify_faces(const Mesh& mesh) {
  FacePartition p;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    (mesh.faces()[f].interior() ? p.interior : p.boundary).push_back(f);
  }
  return p;
}

void write_mesh_vtk(const Mesh& mesh, std::ostream& out) {
  out << "# vtk DataFile Version 3.0\nmesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& p : mesh.vertices()) out << p.x << ' ' << p.y << " 0\n";
  out << "CELLS " << mesh.num_elements() << ' ' << 4 * mesh.num_elements() << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.num_elements() << '\n';
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) out << "5\n";
}

}  // namespace acdg
