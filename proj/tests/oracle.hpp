// Brute-force reference evaluations for the tests. Nothing here touches the
// library's quadrature, basis tables or assembled matrices; only the mesh
// connectivity is shared.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "acdg/assembly.hpp"
#include "acdg/mesh.hpp"

namespace oracle {

using acdg::Point2;

// 5-point Gauss-Legendre on [0, 1].
inline constexpr std::array<double, 5> kNodes = {
    0.5 * (1.0 - 0.9061798459386640), 0.5 * (1.0 - 0.5384693101056831), 0.5,
    0.5 * (1.0 + 0.5384693101056831), 0.5 * (1.0 + 0.9061798459386640)};
inline constexpr std::array<double, 5> kWeights = {0.5 * 0.2369268850561891, 0.5 * 0.4786286704993665,
                                                   0.5 * 0.5688888888888889, 0.5 * 0.4786286704993665,
                                                   0.5 * 0.2369268850561891};

struct Tri {
  Point2 a, b, c;
};

inline double cross(Point2 u, Point2 w) { return u.x * w.y - u.y * w.x; }
inline double area(const Tri& t) { return 0.5 * cross(t.b - t.a, t.c - t.a); }

inline Tri element(const acdg::Mesh& m, std::size_t e) { return {m.vertex(e, 0), m.vertex(e, 1), m.vertex(e, 2)}; }

/// Collapsed 5x5 Gauss rule: exact for total degree <= 8.
template <class F>
double integrate(const Tri& t, F f) {
  const double jac = 2.0 * area(t);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double xi = kNodes[i];
      const double eta = kNodes[j] * (1.0 - xi);
      const Point2 x = t.a + xi * (t.b - t.a) + eta * (t.c - t.a);
      s += kWeights[i] * kWeights[j] * (1.0 - xi) * jac * f(x);
    }
  }
  return s;
}

/// 5-point Gauss rule on a segment: exact for degree <= 9.
template <class F>
double integrate(Point2 p, Point2 q, F f) {
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += kWeights[i] * f(p + kNodes[i] * (q - p));
  return s * acdg::norm(q - p);
}

inline std::array<double, 3> barycentric(const Tri& t, Point2 x) {
  const std::array<Point2, 3> v = {t.a, t.b, t.c};
  std::array<double, 3> l{};
  for (int i = 0; i < 3; ++i) {
    const Point2 p = v[(i + 1) % 3];
    const Point2 q = v[(i + 2) % 3];
    l[i] = cross(q - p, x - p) / cross(q - p, v[i] - p);
  }
  return l;
}

inline std::array<Point2, 3> barycentric_gradients(const Tri& t) {
  const std::array<Point2, 3> v = {t.a, t.b, t.c};
  std::array<Point2, 3> g{};
  for (int i = 0; i < 3; ++i) {
    const Point2 p = v[(i + 1) % 3];
    const Point2 u = v[(i + 2) % 3] - p;
    const double d = cross(u, v[i] - p);
    g[i] = {-u.y / d, u.x / d};
  }
  return g;
}

struct Eval {
  double value = 0.0;
  Point2 grad;
};

/// Lagrange shape function i (vertices, then midpoints of edges 01, 12, 20).
inline Eval shape(int degree, const Tri& t, int i, Point2 x) {
  const auto l = barycentric(t, x);
  const auto g = barycentric_gradients(t);
  if (degree == 1) return {l[i], g[i]};
  if (i < 3) return {l[i] * (2.0 * l[i] - 1.0), (4.0 * l[i] - 1.0) * g[i]};
  const int k = i - 3;
  const int k1 = (k + 1) % 3;
  return {4.0 * l[k] * l[k1], 4.0 * l[k] * g[k1] + 4.0 * l[k1] * g[k]};
}

inline int ndof(int degree) { return degree == 1 ? 3 : 6; }

inline Eval evaluate(const acdg::Mesh& m, int degree, const std::vector<double>& c, std::size_t e, Point2 x) {
  const Tri t = element(m, e);
  Eval out;
  for (int i = 0; i < ndof(degree); ++i) {
    const Eval s = shape(degree, t, i, x);
    const double ci = c[e * ndof(degree) + i];
    out.value += ci * s.value;
    out.grad = out.grad + ci * s.grad;
  }
  return out;
}

/// a_h(w, v) term by term.
inline double bilinear(const acdg::Mesh& m, int degree, double sigma, int lambda, const std::vector<double>& w,
                       const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t e = 0; e < m.num_elements(); ++e) {
    s += integrate(element(m, e), [&](Point2 x) {
      return acdg::dot(evaluate(m, degree, w, e, x).grad, evaluate(m, degree, v, e, x).grad);
    });
  }
  for (const auto& f : m.faces()) {
    if (!f.interior()) continue;
    const Point2 p = m.vertices()[f.vertices[0]];
    const Point2 q = m.vertices()[f.vertices[1]];
    s += integrate(p, q, [&](Point2 x) {
      const Eval wl = evaluate(m, degree, w, f.left, x), wr = evaluate(m, degree, w, f.right, x);
      const Eval vl = evaluate(m, degree, v, f.left, x), vr = evaluate(m, degree, v, f.right, x);
      const double jw = wl.value - wr.value;
      const double jv = vl.value - vr.value;
      const double dnw = 0.5 * acdg::dot(wl.grad + wr.grad, f.normal);
      const double dnv = 0.5 * acdg::dot(vl.grad + vr.grad, f.normal);
      return -dnw * jv + lambda * jw * dnv + sigma / f.length * jw * jv;
    });
  }
  return s;
}

/// Entry i of the one-step residual with forcing g at t_{m+1}.
inline double residual_entry(const acdg::Mesh& m, int degree, const acdg::SchemeConfig& cfg,
                             const std::vector<double>& un, const std::vector<double>& uo, std::size_t i,
                             const std::function<double(Point2)>& g) {
  std::vector<double> unit(un.size(), 0.0);
  unit[i] = 1.0;
  const std::size_t e = i / ndof(degree);
  const int local = static_cast<int>(i % ndof(degree));
  const Tri t = element(m, e);
  const bool split = cfg.variant == acdg::Variant::ConvexSplitting;
  const double vol = integrate(t, [&](Point2 x) {
    const double a = evaluate(m, degree, un, e, x).value;
    const double b = evaluate(m, degree, uo, e, x).value;
    const double phi = shape(degree, t, local, x).value;
    const double f = a * a * a - (split ? b : a);
    const double src = g ? g(x) : 0.0;
    return ((a - b) / cfg.dt + f / (cfg.epsilon * cfg.epsilon) - src) * phi;
  });
  return vol + bilinear(m, degree, cfg.sigma, cfg.lambda, un, unit);
}

/// Integral of a callable over the whole mesh.
template <class F>
double integrate_mesh(const acdg::Mesh& m, F f) {
  double s = 0.0;
  for (std::size_t e = 0; e < m.num_elements(); ++e) s += integrate(element(m, e), [&](Point2 x) { return f(e, x); });
  return s;
}

}  // namespace oracle
