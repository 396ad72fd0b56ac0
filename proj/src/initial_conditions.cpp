#include "acdg/initial_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "acdg/error.hpp"

namespace acdg {

namespace {

using std::numbers::pi;

double tanh_profile(double d, double eps) { return std::tanh(d / (std::sqrt(2.0) * eps)); }

double test1(Point2 p, double eps) {
  const double x = p.x;
  const double y = p.y;
  const auto r = [](double dx, double dy) { return std::sqrt(dx * dx + dy * dy); };
  if (x > 0.14 && 0.0 <= y && y < -5.0 / 12.0 * (x - 0.5)) return tanh_profile(-r(x - 0.14, y - 0.15), eps);
  if (x > 0.14 && 5.0 / 12.0 * (x - 0.5) < y && y < 0.0) return tanh_profile(-r(x - 0.14, y + 0.15), eps);
  if (x < -0.3 && 0.0 <= y && y < 0.75 * (x + 0.5)) return tanh_profile(-r(x + 0.3, y - 0.15), eps);
  if (x < -0.3 && -0.75 * (x + 0.5) < y && y < 0.0) return tanh_profile(-r(x + 0.3, y + 0.15), eps);
  if (-0.3 <= x && x <= 0.14) return tanh_profile(std::abs(y) - 0.15, eps);
  // Remaining points of the two outer regions.
  if (x > 0.14) return tanh_profile(r(x - 0.5, y) - 0.39, eps);
  return tanh_profile(r(x + 0.5, y) - 0.25, eps);
}

double test2(Point2 p, double eps) {
  const double q1 = p.x * p.x / 0.04 + p.y * p.y / 0.36;
  const double q2 = p.x * p.x / 0.36 + p.y * p.y / 0.04;
  const double d = std::min(ellipse_distance(p, 0.2, 0.6), ellipse_distance(p, 0.6, 0.2));
  const bool mixed = (q1 < 1.0 && q2 > 1.0) || (q1 > 1.0 && q2 < 1.0);
  return tanh_profile(mixed ? -d : d, eps);
}

// Root of (r0 z0 / (s + r0))^2 + (z1 / (s + 1))^2 = 1 by bisection.
double ellipse_root(double r0, double z0, double z1, double g) {
  const double n0 = r0 * z0;
  double s0 = z1 - 1.0;
  double s1 = g < 0.0 ? 0.0 : std::hypot(n0, z1) - 1.0;
  double s = 0.0;
  for (int i = 0; i < 1100; ++i) {
    s = 0.5 * (s0 + s1);
    if (s == s0 || s == s1) break;
    const double a = n0 / (s + r0);
    const double b = z1 / (s + 1.0);
    const double gs = a * a + b * b - 1.0;
    if (gs > 0.0) s0 = s;
    else if (gs < 0.0) s1 = s;
    else break;
  }
  return s;
}

}  // namespace

double ellipse_distance(Point2 p, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("ellipse_distance: semi-axes must be positive");
  // Reduce to the first quadrant with e0 >= e1.
  double y0 = std::abs(p.x);
  double y1 = std::abs(p.y);
  double e0 = a;
  double e1 = b;
  if (e0 < e1) {
    std::swap(e0, e1);
    std::swap(y0, y1);
  }
  if (y1 > 0.0) {
    if (y0 > 0.0) {
      const double z0 = y0 / e0;
      const double z1 = y1 / e1;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g == 0.0) return 0.0;
      const double r0 = (e0 / e1) * (e0 / e1);
      const double s = ellipse_root(r0, z0, z1, g);
      const double x0 = r0 * y0 / (s + r0);
      const double x1 = y1 / (s + 1.0);
      return std::hypot(x0 - y0, x1 - y1);
    }
    return std::abs(y1 - e1);
  }
  const double numer0 = e0 * y0;
  const double denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0) {
    const double xde0 = numer0 / denom0;
    const double x0 = e0 * xde0;
    const double x1 = e1 * std::sqrt(1.0 - xde0 * xde0);
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - e0);
}

SmoothField circle_profile(Point2 center, double radius, double epsilon) {
  const double w = std::sqrt(2.0) * epsilon;
  SmoothField f;
  f.value = [=](Point2 x) { return std::tanh((radius - norm(x - center)) / w); };
  f.gradient = [=](Point2 x) {
    const Point2 d = x - center;
    const double r = norm(d);
    if (r == 0.0) return Point2{0.0, 0.0};
    const double t = std::tanh((radius - r) / w);
    const double scale = -(1.0 - t * t) / (w * r);
    return scale * d;
  };
  return f;
}

ScalarField initial_condition(const InitialConditionParams& p) {
  if (!(p.epsilon > 0.0)) throw ConfigError("initial condition needs epsilon > 0");
  const double eps = p.epsilon;
  if (p.name == "circle") return circle_profile(p.center, p.radius, eps).value;
  if (p.name == "test1") return [eps](Point2 x) { return test1(x, eps); };
  if (p.name == "test2") return [eps](Point2 x) { return test2(x, eps); };
  if (p.name == "constant") return [v = p.value](Point2) { return v; };
  if (p.name == "mms") return [](Point2 x) { return mms_solution(x, 0.0); };
  throw ConfigError("unknown initial condition '" + p.name +
                    "' (expected circle, test1, test2, constant or mms)");
}

double mms_solution(Point2 x, double t) {
  return std::exp(-t) * std::cos(pi * x.x) * std::cos(pi * x.y);
}

Point2 mms_gradient(Point2 x, double t) {
  const double e = std::exp(-t);
  return {-pi * e * std::sin(pi * x.x) * std::cos(pi * x.y), -pi * e * std::cos(pi * x.x) * std::sin(pi * x.y)};
}

double mms_forcing(Point2 x, double t, double epsilon) {
  const double u = mms_solution(x, t);
  return (2.0 * pi * pi - 1.0) * u + (u * u * u - u) / (epsilon * epsilon);
}

SmoothField mms_field(double t) {
  return {[t](Point2 x) { return mms_solution(x, t); }, [t](Point2 x) { return mms_gradient(x, t); }};
}

}  // namespace acdg
