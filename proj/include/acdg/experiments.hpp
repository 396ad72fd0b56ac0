#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "acdg/config.hpp"
#include "acdg/diagnostics.hpp"
#include "acdg/timestepper.hpp"

namespace acdg {

/// Allowed excess in J(u^l) + k sum R^m <= J(u^0).
inline constexpr double kEnergyLawTol = 1e-6;

std::shared_ptr<const DgSpace> make_space(const RunConfig& cfg, int nx, int ny);
/// Continuous nodal interpolant of the configured initial condition.
DgFunction make_initial(const RunConfig& cfg, const std::shared_ptr<const DgSpace>& space,
                        const SchemeConfig& scheme);

struct SimulationResult {
  std::shared_ptr<const DgSpace> space;
  SchemeConfig scheme;
  EvolveResult evolution;
};

/// Plain evolution: energy.csv, fields/u_<t>.vtk and config.echo in output_dir.
SimulationResult run_simulation(const RunConfig& cfg);

struct ConvergenceRow {
  double h = 0.0;
  int nx = 0;
  double dt = 0.0;
  std::size_t steps = 0;
  double e_l2 = 0.0;  // max over t_m of ||u_e - u_h||
  std::optional<double> order_l2;
  double e_h1 = 0.0;  // (k sum_m ||u_e - u_h||_{H^1(T_h)}^2)^{1/2}
  std::optional<double> order_h1;
};

/// Manufactured-solution ladder; t_final = 0 selects T = 0.1. Writes convergence.csv.
std::vector<ConvergenceRow> mms_run(const RunConfig& cfg);

struct EnergyRunResult {
  SchemeConfig scheme;
  std::vector<EnergyRecord> series;
  std::vector<StepReport> reports;
  bool completed = false;
  std::string failure;
  bool flagged = false;       // fully implicit with dt >= 2 eps^2
  double max_increase = 0.0;  // max_m J^{m+1} - J^m
  double law_excess = 0.0;    // max_l J^l + k sum R^m - J^0
  bool monotone = false;      // max_increase <= energy_slack
  bool law_holds = false;     // law_excess <= kEnergyLawTol
};

/// Writes energy.csv (t, phi, potential, J, Rm).
EnergyRunResult energy_decay_run(const RunConfig& cfg);

struct StabilityRow {
  Variant variant = Variant::ConvexSplitting;
  double dt = 0.0;
  std::size_t steps = 0;
  bool flagged = false;
  bool completed = false;
  bool monotone = false;
  int newton_total = 0;
  int newton_max = 0;
  double max_increase = 0.0;
  std::string failure;
};

/// Both variants over k_values (default eps^2 * {1/2, 1, 2, 4, 8}); each run
/// takes round(t_final / k) steps (10 when t_final = 0). Writes stability.csv.
std::vector<StabilityRow> stability_sweep(const RunConfig& cfg);
/// Convex splitting always, fully implicit only below 2 eps^2, must be monotone.
bool stability_passed(const std::vector<StabilityRow>& rows, double epsilon);

struct SpectrumRow {
  double epsilon = 0.0;
  std::string state;  // projected | evolved | one | zero
  int nx = 0;
  double lambda = 0.0;
  double residual_bound = 0.0;
};

struct SpectrumSweep {
  std::vector<SpectrumRow> rows;
  double c = 0.0;  // max(0, -min over projected rows)
};

/// Eigenvalue probe per epsilon (default {0.2, 0.1, 0.05}). Writes spectrum.csv.
SpectrumSweep spectrum_sweep(const RunConfig& cfg);

struct InterfaceRow {
  double epsilon = 0.0;
  double t = 0.0;
  int nx = 0;
  double h = 0.0;
  double dt = 0.0;
  double radius = 0.0;
  double distance = 0.0;  // NaN when the curve is empty
  std::size_t segments = 0;
  std::size_t degenerate = 0;
};

/// Shrinking-circle study per epsilon (default {0.1, 0.05, 0.025}) at
/// observe_times (default {0.05}). Writes interface.csv, interface_<eps>_<t>.csv
/// and, with interface_tests, test1 / test2 snapshot curves.
std::vector<InterfaceRow> interface_run(const RunConfig& cfg);

}  // namespace acdg
