#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "acdg/assembly.hpp"
#include "acdg/linear_solver.hpp"

namespace acdg {

/// Source term g(x, t) for manufactured-solution runs.
using TimeForcing = std::function<double(Point2, double)>;

struct StepReport {
  std::size_t step = 0;  // m + 1
  int newton_iterations = 0;
  int linear_iterations = 0;
  double residual_norm = 0.0;  // max-norm of R(u_new)
  double energy = 0.0;         // J_eps^h(u_new)
  double wall_time = 0.0;      // seconds; excluded from determinism checks
  bool outside_stability_region = false;
};

/// Newton failed to converge or stopped producing descent directions.
class StepFailure : public std::runtime_error {
public:
  StepFailure(const std::string& what, DgFunction last_iterate, StepReport report)
      : std::runtime_error(what), last_(std::move(last_iterate)), report_(report) {}
  const DgFunction& last_iterate() const { return last_; }
  const StepReport& report() const { return report_; }

private:
  DgFunction last_;
  StepReport report_;
};

/// Owns the time-independent operators of one scheme configuration.
///
/// Each step minimizes H (convex splitting) or G (fully implicit) with Newton's
/// method and Armijo backtracking; for lambda != -1 there is no variational
/// structure and the merit function is 1/2 ||R||^2.
class TimeStepper {
public:
  TimeStepper(std::shared_ptr<const DgSpace> space, SchemeConfig cfg, TimeForcing forcing = {});

  const DgSpace& space() const { return *space_; }
  const SchemeConfig& config() const { return cfg_; }
  const CsrMatrix& mass() const { return mass_; }
  const CsrMatrix& laplacian() const { return laplacian_; }
  LinearSolveSpec& linear_spec() { return linear_; }

  /// Advances from u_old at time t_old to t_old + dt.
  std::pair<DgFunction, StepReport> step(const DgFunction& u_old, double t_old,
                                         std::size_t index = 1) const;

  DenseVector residual(const DgFunction& u_new, const DgFunction& u_old, double t_new) const;
  /// G or H (including the source term), whose gradient is dt * R.
  double merit(const DgFunction& v, const DgFunction& u_old, const DenseVector& load) const;

private:
  std::shared_ptr<const DgSpace> space_;
  SchemeConfig cfg_;
  TimeForcing forcing_;
  CsrMatrix mass_;       // stored in the pattern of the Laplacian
  CsrMatrix laplacian_;
  LinearSolveSpec linear_;
};

std::pair<DgFunction, StepReport> step(const std::shared_ptr<const DgSpace>& space,
                                       const SchemeConfig& cfg, const DgFunction& u_old,
                                       const TimeForcing& forcing = {}, double t_old = 0.0);

struct EnergyRecord {
  double t = 0.0;
  double phi = 0.0;
  double potential = 0.0;
  double J = 0.0;
  double Rm = 0.0;  // dissipation term of the step ending at t (0 at t = 0)
};

struct EvolveResult {
  std::vector<DgFunction> snapshots;
  std::vector<double> snapshot_times;  // actual step times captured
  std::vector<StepReport> reports;
  std::vector<EnergyRecord> energy;
  DgFunction final_state;
};

/// Called after every step with (m + 1, t_{m+1}, u^m, u^{m+1}).
using StepObserver =
    std::function<void(std::size_t, double, const DgFunction&, const DgFunction&)>;

/// M = t_final / dt uniform steps (M must be an integer up to round-off).
/// Snapshots are taken at the step nearest to each requested time.
EvolveResult evolve(const std::shared_ptr<const DgSpace>& space, const SchemeConfig& cfg,
                    const DgFunction& u0, const std::vector<double>& snapshot_times,
                    const TimeForcing& forcing = {}, const StepObserver& observer = {});

/// Number of uniform steps, or InvalidArgument when t_final is not a multiple of dt.
std::size_t step_count(const SchemeConfig& cfg);

}  // namespace acdg
