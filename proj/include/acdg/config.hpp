#pragma once

#include <map>
#include <string>
#include <vector>

#include "acdg/assembly.hpp"
#include "acdg/mesh.hpp"

namespace acdg {

/// Everything one experiment needs, read from a flat `key = value` file.
///
/// Lines are `key = value`; `#` starts a comment; lists are separated by commas
/// or whitespace. Required keys: epsilon, nx. See README for the schema.
struct RunConfig {
  SchemeConfig scheme;  // dt = 0 means "h^2 / 2"
  int nx = 0;
  int ny = 0;  // 0 means nx
  Rectangle domain;
  int degree = 1;

  std::string initial = "circle";
  Point2 ic_center{0.0, 0.0};
  double ic_radius = 0.5;
  double ic_value = 1.0;

  std::string experiment = "run";
  std::vector<double> snapshot_times;
  std::string output_dir;
  unsigned seed = 20161016;

  std::vector<int> mms_levels;       // mms: nx ladder (empty: nx, 2nx, 4nx, 8nx)
  std::vector<double> epsilons;      // spectrum / interface ladders
  std::vector<double> k_values;      // stability sweep
  double h_over_epsilon = 0.5;       // h_max = h_over_epsilon * epsilon
  double probe_time = 0.02;          // spectrum: linearization time
  std::vector<double> observe_times; // interface: distance times
  bool interface_tests = false;      // interface: also dump test1 / test2 curves
  double energy_slack = 1e-8;        // energy: allowed per-step increase of J
};

using ConfigOverrides = std::map<std::string, std::string>;

/// Parses, applies `overrides` on top, validates. Every problem found is
/// reported in one ConfigError.
RunConfig parse_config(const std::string& text, const ConfigOverrides& overrides = {});
RunConfig load_config(const std::string& path, const ConfigOverrides& overrides = {});

/// Canonical text form; parse_config(echo_config(c)) reproduces c.
std::string echo_config(const RunConfig& cfg);

/// Resolved scheme settings for a mesh: dt = 0 becomes h^2/2, shrunk so that
/// t_final is an integer number of steps.
SchemeConfig resolve_scheme(const RunConfig& cfg, double h_max);

/// nx giving h_max <= h on the rectangle's x extent (square cells assumed).
int cells_for_h(double length, double h);

}  // namespace acdg
