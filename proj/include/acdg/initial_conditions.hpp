#pragma once

#include <string>

#include "acdg/assembly.hpp"
#include "acdg/dg_space.hpp"

namespace acdg {

struct InitialConditionParams {
  std::string name = "circle";  // circle | test1 | test2 | constant | mms
  double epsilon = 0.1;
  Point2 center{0.0, 0.0};
  double radius = 0.5;
  double value = 1.0;  // constant
};

/// u0(x) for the selector; ConfigError for an unknown name.
ScalarField initial_condition(const InitialConditionParams& p);

/// tanh((r - |x - c|) / (sqrt(2) eps)) with its gradient.
SmoothField circle_profile(Point2 center, double radius, double epsilon);

/// Distance from p to the ellipse x^2/a^2 + y^2/b^2 = 1.
double ellipse_distance(Point2 p, double a, double b);

/// u_e = exp(-t) cos(pi x) cos(pi y) and the matching source term.
double mms_solution(Point2 x, double t);
Point2 mms_gradient(Point2 x, double t);
double mms_forcing(Point2 x, double t, double epsilon);
SmoothField mms_field(double t);

}  // namespace acdg
