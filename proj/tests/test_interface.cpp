#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "acdg/assembly.hpp"
#include "acdg/error.hpp"
#include "acdg/interface.hpp"

using namespace acdg;

namespace {

std::shared_ptr<const DgSpace> space_on(int n, int r = 1, Rectangle dom = {}) {
  return std::make_shared<const DgSpace>(build_uniform_mesh(n, n, dom), r);
}

DgFunction random_function(const std::shared_ptr<const DgSpace>& s, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DgFunction f(s);
  for (auto& c : f.coefficients()) c = u(rng);
  return f;
}

std::vector<double> vertex_values(const Mesh& m, double (*f)(Point2)) {
  std::vector<double> v;
  for (const auto& p : m.vertices()) v.push_back(f(p));
  return v;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Endpoint multiplicity: every endpoint of a closed curve is shared by exactly two segments.
bool closed(const InterfaceCurve& c) {
  std::map<std::pair<double, double>, int> count;
  for (const auto& s : c.segments) {
    ++count[{s.a.x, s.a.y}];
    ++count[{s.b.x, s.b.y}];
  }
  for (const auto& [p, n] : count)
    if (n != 2) return false;
  return true;
}

}  // namespace

TEST_CASE("averaging a continuous field is exact") {
  for (int r : {1, 2}) {
    const auto s = space_on(5, r);
    const DgFunction u = initial_datum(s, [](Point2 p) { return std::sin(2.0 * p.x) + p.y * p.y; });
    const DgFunction back = average_to_continuous(u).to_dg();
    for (std::size_t i = 0; i < u.coefficients().size(); ++i)
      CHECK(back.coefficients()[i] == doctest::Approx(u.coefficients()[i]).epsilon(1e-15));
  }
}

TEST_CASE("two-element average") {
  const auto s = space_on(1);
  DgFunction v(s);
  for (std::size_t i = 0; i < 3; ++i) v.coefficients()[s->dof(0, i)] = 1.0;
  const ContinuousField c = average_to_continuous(v);
  CHECK(c.values.size() == 4);
  // The diagonal is shared; its two vertices are owned by both elements.
  const auto& f = s->mesh().triangles()[0];
  const auto& g = s->mesh().triangles()[1];
  for (std::size_t a : f)
    for (std::size_t b : g)
      if (a == b) CHECK(c.values[a] == doctest::Approx(0.5));
  int ones = 0, zeros = 0;
  for (double x : c.values) {
    ones += x == 1.0;
    zeros += x == 0.0;
  }
  CHECK(ones == 1);
  CHECK(zeros == 1);
}

TEST_CASE("averaging preserves constants and commutes with affine maps") {
  const auto s = space_on(4, 2);
  const DgFunction v = random_function(s, 5);
  DgFunction w = v;
  for (auto& x : w.coefficients()) x = 3.0 * x - 0.5;
  const auto a = average_to_continuous(v), b = average_to_continuous(w);
  CHECK(a.values.size() == num_global_nodes(*s));
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(b.values[i] == doctest::Approx(3.0 * a.values[i] - 0.5));
  DgFunction k(s);
  std::fill(k.coefficients().begin(), k.coefficients().end(), 0.7);
  for (double x : average_to_continuous(k).values) CHECK(x == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("global node numbering") {
  const auto s = space_on(3, 2);
  CHECK(num_global_nodes(*s) == s->mesh().num_vertices() + s->mesh().num_faces());
  for (std::size_t e = 0; e < s->mesh().num_elements(); ++e)
    for (std::size_t k = 0; k < 3; ++k) CHECK(global_node(*s, e, k) == s->mesh().triangles()[e][k]);
}

TEST_CASE("time interpolant") {
  const auto s = space_on(3);
  const DgFunction u = random_function(s, 1), v = random_function(s, 2);
  CHECK(time_interpolant(u, 0.1, v, 0.2, 0.1).coefficients() == u.coefficients());
  const DgFunction mid = time_interpolant(u, 0.1, v, 0.2, 0.15);
  for (std::size_t i = 0; i < mid.coefficients().size(); ++i)
    CHECK(mid.coefficients()[i] == doctest::Approx(0.5 * (u.coefficients()[i] + v.coefficients()[i])));
  DgFunction u2 = u, v2 = v;
  for (auto& x : u2.coefficients()) x *= 3.0;
  for (auto& x : v2.coefficients()) x *= 3.0;
  const DgFunction scaled = time_interpolant(u2, 0.1, v2, 0.2, 0.13);
  const DgFunction plain = time_interpolant(u, 0.1, v, 0.2, 0.13);
  for (std::size_t i = 0; i < plain.coefficients().size(); ++i)
    CHECK(scaled.coefficients()[i] == doctest::Approx(3.0 * plain.coefficients()[i]));
  CHECK_THROWS_AS(time_interpolant(u, 0.1, v, 0.2, 0.25), InvalidArgument);
  CHECK_THROWS_AS(time_interpolant(u, 0.1, v, 0.2, 0.05), InvalidArgument);
}

TEST_CASE("zero set of x is the line x = 0") {
  const auto mesh = build_uniform_mesh(8, 8, Rectangle{});
  const auto c = extract_zero_levelset(*mesh, vertex_values(*mesh, [](Point2 p) { return p.x; }));
  CHECK_FALSE(c.empty());
  double length = 0.0;
  for (const auto& s : c.segments) {
    CHECK(std::abs(s.a.x) <= 1e-12);
    CHECK(std::abs(s.b.x) <= 1e-12);
    length += norm(s.b - s.a);
  }
  CHECK(length == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(c.degenerate_count() == 0);
}

TEST_CASE("circle zero set converges at second order and closes") {
  std::vector<double> dev;
  for (int n : {8, 16, 32, 64}) {
    const auto mesh = build_uniform_mesh(n, n, Rectangle{});
    const auto c = extract_zero_levelset(*mesh, vertex_values(*mesh, [](Point2 p) { return p.x * p.x + p.y * p.y - 0.25; }));
    CHECK(closed(c));
    double d = 0.0;
    for (const auto& s : c.segments) {
      d = std::max({d, std::abs(norm(s.a) - 0.5), std::abs(norm(s.b) - 0.5), std::abs(norm(0.5 * (s.a + s.b)) - 0.5)});
    }
    dev.push_back(d);
  }
  for (std::size_t i = 1; i < dev.size(); ++i) CHECK(std::log2(dev[i - 1] / dev[i]) > 1.7);
}

TEST_CASE("positive field has no zero set") {
  const auto mesh = build_uniform_mesh(4, 4, Rectangle{});
  const auto c = extract_zero_levelset(*mesh, std::vector<double>(mesh->num_vertices(), 1.0), 0.3);
  CHECK(c.empty());
  CHECK(c.time == 0.3);
  CHECK_THROWS_AS(one_sided_hausdorff(c, CircleFlow({0, 0}, 0.5), 0.0), EmptyInterface);
}

TEST_CASE("identically zero triangles are reported as degenerate") {
  const auto mesh = build_uniform_mesh(2, 2, Rectangle{});
  std::vector<double> v(mesh->num_vertices(), 0.0);
  const auto c = extract_zero_levelset(*mesh, v);
  CHECK(c.degenerate_count() == 3 * mesh->num_elements());
}

TEST_CASE("vertex exactly on zero") {
  const auto mesh = build_uniform_mesh(2, 2, Rectangle{});
  // Centre vertex is zero, all others positive: the shift makes it positive, no curve.
  std::vector<double> v;
  for (const auto& p : mesh->vertices()) v.push_back(norm(p) < 1e-12 ? 0.0 : 1.0);
  CHECK(extract_zero_levelset(*mesh, v).empty());
}

TEST_CASE("P2 field is contoured on the sub-lattice") {
  const auto s = space_on(8, 2);
  const DgFunction u = initial_datum(s, [](Point2 p) { return 0.25 - p.x * p.x - p.y * p.y; });
  const auto c = extract_zero_levelset(average_to_continuous(u), 0.0);
  CHECK(closed(c));
  // Same node lattice as P1 on a mesh twice as fine.
  const auto fine = build_uniform_mesh(16, 16, Rectangle{});
  const auto p1 = extract_zero_levelset(*fine, vertex_values(*fine, [](Point2 p) { return 0.25 - p.x * p.x - p.y * p.y; }));
  const CircleFlow f({0, 0}, 0.5);
  CHECK(c.segments.size() == p1.segments.size());
  CHECK(one_sided_hausdorff(c, f, 0.0) == doctest::Approx(one_sided_hausdorff(p1, f, 0.0)).epsilon(1e-10));
}

TEST_CASE("circle flow") {
  const CircleFlow f({0.1, -0.2}, 0.5);
  CHECK(f.extinction_time() == doctest::Approx(0.125));
  CHECK(f.radius(0.05) == doctest::Approx(std::sqrt(0.15)).epsilon(1e-15));
  CHECK(f.radius(0.05) == doctest::Approx(0.387298).epsilon(1e-6));
  for (double t : {0.0, 0.01, 0.07, 0.12}) CHECK(f.radius(t) * f.radius(t) + 2.0 * t == doctest::Approx(0.25));
  CHECK_THROWS_AS(f.radius(0.125), InvalidArgument);
  CHECK_THROWS_AS(f.radius(-0.1), InvalidArgument);
  CHECK_THROWS_AS(CircleFlow({0, 0}, 0.0), InvalidArgument);
}

TEST_CASE("hausdorff distances") {
  const double pi = std::acos(-1.0);
  auto polygon = [pi](double r, Point2 c, int n) {
    InterfaceCurve curve;
    for (int i = 0; i < n; ++i) {
      const double a = 2 * pi * i / n, b = 2 * pi * (i + 1) / n;
      curve.segments.push_back({c + r * Point2{std::cos(a), std::sin(a)}, c + r * Point2{std::cos(b), std::sin(b)}});
    }
    return curve;
  };
  const CircleFlow f({0, 0}, 0.5);
  const auto fine = polygon(0.5, {0, 0}, 4000);
  CHECK(one_sided_hausdorff(fine, f, 0.0) < 1e-6);
  const auto far = polygon(0.5 + 0.03, {0, 0}, 4000);
  CHECK(one_sided_hausdorff(far, f, 0.0) == doctest::Approx(0.03).epsilon(1e-4));
  const auto at = polygon(std::sqrt(0.15), {0, 0}, 4000);
  CHECK(one_sided_hausdorff(at, f, 0.05) < 1e-6);

  // Curve-to-curve: translate a short segment.
  InterfaceCurve a, b;
  a.segments.push_back({{0, 0}, {1, 0}});
  b.segments.push_back({{0, 0.2}, {1, 0.2}});
  CHECK(one_sided_hausdorff(a, b) == doctest::Approx(0.2));
  InterfaceCurve c;
  c.segments.push_back({{0, 0}, {2, 0}});
  CHECK(one_sided_hausdorff(a, c) == doctest::Approx(0.0).scale(1.0));
  CHECK(one_sided_hausdorff(c, a) == doctest::Approx(1.0));
  CHECK(symmetric_hausdorff(a, c) == doctest::Approx(1.0));
}

TEST_CASE("curve export") {
  const auto dir = std::filesystem::temp_directory_path() / "acdg_test_interface";
  std::filesystem::create_directories(dir);
  InterfaceCurve c;
  c.time = 0.05;
  c.segments.push_back({{0, 0}, {1, 0.5}});
  c.segments.push_back({{1, 0.5}, {1, 1}, true});
  write_curve_csv((dir / "c.csv").string(), c);
  write_curve_vtk((dir / "c.vtk").string(), c);
  const std::string csv = slurp((dir / "c.csv").string());
  CHECK(csv.rfind("t,x0,y0,x1,y1\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  const std::string vtk = slurp((dir / "c.vtk").string());
  CHECK(vtk.find("POLYDATA") != std::string::npos);
  CHECK(vtk.find("LINES 2 6") != std::string::npos);
  CHECK(vtk.find("degenerate") != std::string::npos);
  std::filesystem::remove_all(dir);
}
