#include "acdg/timestepper.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <string>

#include "acdg/diagnostics.hpp"
#include "acdg/error.hpp"

namespace acdg {

TimeStepper::TimeStepper(std::shared_ptr<const DgSpace> space, SchemeConfig cfg, TimeForcing forcing)
    : space_(std::move(space)), cfg_(cfg), forcing_(std::move(forcing)) {
  cfg_.validate();
  laplacian_ = assemble_dg_laplacian(*space_, cfg_);
  mass_ = embed_in_pattern(laplacian_, assemble_mass(*space_));
  linear_.preconditioner = Preconditioner::BlockJacobi;
  linear_.block_size = space_->dofs_per_elem();
  linear_.symmetric = cfg_.lambda == -1;
  linear_.tol = cfg_.linear_tol;
  linear_.max_iter = 10000;
}

namespace {

DenseVector residual_with_load(const SchemeConfig& cfg, const CsrMatrix& mass, const CsrMatrix& lap,
                               const DgFunction& u_new, const DgFunction& u_old,
                               const DenseVector& load) {
  const std::size_t n = u_new.coefficients().size();
  const auto& un = u_new.coefficients();
  const auto& uo = u_old.coefficients();
  const double inv_k = 1.0 / cfg.dt;
  const double inv_eps2 = 1.0 / (cfg.epsilon * cfg.epsilon);
  DenseVector diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = un[i] - uo[i];
  const DenseVector md = mass * diff;
  const DenseVector au = lap * un;
  const DenseVector cubic = assemble_cubic(u_new);
  const DenseVector ml = mass * (cfg.variant == Variant::ConvexSplitting ? uo : un);
  DenseVector r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = inv_k * md[i] + au[i] + inv_eps2 * (cubic[i] - ml[i]) - load[i];
  }
  return r;
}

}  // namespace

DenseVector TimeStepper::residual(const DgFunction& u_new, const DgFunction& u_old, double t_new) const {
  DenseVector load(space_->total_dofs(), 0.0);
  if (forcing_) load = assemble_load(*space_, [&](Point2 x) { return forcing_(x, t_new); });
  return residual_with_load(cfg_, mass_, laplacian_, u_new, u_old, load);
}

double TimeStepper::merit(const DgFunction& v, const DgFunction& u_old, const DenseVector& load) const {
  const double k = cfg_.dt;
  const double inv_eps2 = 1.0 / (cfg_.epsilon * cfg_.epsilon);
  const auto& x = v.coefficients();
  const DenseVector ax = laplacian_ * x;
  const DenseVector mx = mass_ * x;
  const DenseVector mo = mass_ * u_old.coefficients();
  double value = 0.5 * k * dot(x, ax) + 0.5 * dot(x, mx) - k * dot(load, x);
  if (cfg_.variant == Variant::ConvexSplitting) {
    value += k * inv_eps2 * integrate_quartic(v, 0.25, 0.0, 0.25);
    value -= (k * inv_eps2 + 1.0) * dot(mo, x);
  } else {
    value += k * inv_eps2 * integrate_quartic(v, 0.25, -0.5, 0.25);
    value -= dot(mo, x);
  }
  return value;
}

std::pair<DgFunction, StepReport> TimeStepper::step(const DgFunction& u_old, double t_old,
                                                    std::size_t index) const {
  const auto start = std::chrono::steady_clock::now();
  const double t_new = t_old + cfg_.dt;
  const bool variational = cfg_.lambda == -1;
  StepReport rep;
  rep.step = index;
  rep.outside_stability_region = energy_law_flagged(cfg_);

  DenseVector load(space_->total_dofs(), 0.0);
  if (forcing_) load = assemble_load(*space_, [&](Point2 x) { return forcing_(x, t_new); });

  DgFunction u = u_old;
  DenseVector r = residual_with_load(cfg_, mass_, laplacian_, u, u_old, load);
  double rnorm = norm_inf(r);
  double phi = variational ? merit(u, u_old, load) : 0.5 * dot(r, r);

  auto fail = [&](const std::string& why) {
    rep.residual_norm = rnorm;
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    throw StepFailure("step " + std::to_string(index) + ": " + why, u, rep);
  };

  while (!(rnorm <= cfg_.newton_tol)) {
    if (!std::isfinite(rnorm)) fail("residual is not finite");
    if (rep.newton_iterations >= cfg_.newton_max_iter) {
      fail("Newton did not converge in " + std::to_string(cfg_.newton_max_iter) +
           " iterations (residual " + std::to_string(rnorm) + ")");
    }
    const CsrMatrix jac = assemble_jacobian(*space_, cfg_, u, mass_, laplacian_);
    DenseVector neg_r(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) neg_r[i] = -r[i];
    LinearSolveResult sol;
    try {
      // Inexact Newton: the inner tolerance tracks the nonlinear residual,
      // floored at linear_tol.
      LinearSolveSpec spec = linear_;
      spec.tol = std::max(linear_.tol, std::min(1e-4, rnorm));
      sol = linear_solve(jac, neg_r, spec);
    } catch (const LinearSolverFailure& e) {
      rep.linear_iterations += e.iterations();
      fail(std::string("linear solve failed: ") + e.what());
    }
    rep.linear_iterations += sol.iterations;
    const DenseVector& delta = sol.x;
    // Directional derivative of the merit function along delta.
    const double slope = variational ? cfg_.dt * dot(r, delta) : -dot(r, r);
    if (!(slope < 0.0)) fail("Newton direction is not a descent direction");

    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      DgFunction trial = u;
      axpy(t, delta, trial.coefficients());
      DenseVector r_trial = residual_with_load(cfg_, mass_, laplacian_, trial, u_old, load);
      const double rn_trial = norm_inf(r_trial);
      const double phi_trial = variational ? merit(trial, u_old, load) : 0.5 * dot(r_trial, r_trial);
      // The residual test covers the regime where merit differences drown in round-off.
      if ((std::isfinite(phi_trial) && phi_trial <= phi + 1e-4 * t * slope) ||
          (std::isfinite(rn_trial) && rn_trial <= 0.5 * rnorm)) {
        u = std::move(trial);
        r = std::move(r_trial);
        rnorm = rn_trial;
        phi = phi_trial;
        accepted = true;
        break;
      }
    }
    ++rep.newton_iterations;
    if (!accepted) fail("line search failed to reduce the merit function");
  }
  rep.residual_norm = rnorm;
  rep.energy = energies(cfg_, u).J;
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(u), rep};
}

std::pair<DgFunction, StepReport> step(const std::shared_ptr<const DgSpace>& space,
                                       const SchemeConfig& cfg, const DgFunction& u_old,
                                       const TimeForcing& forcing, double t_old) {
  const TimeStepper stepper(space, cfg, forcing);
  return stepper.step(u_old, t_old, 1);
}

std::size_t step_count(const SchemeConfig& cfg) {
  if (cfg.t_final == 0.0) return 0;
  const double ratio = cfg.t_final / cfg.dt;
  const double m = std::round(ratio);
  if (std::abs(ratio - m) > 1e-9 * std::max(1.0, ratio)) {
    throw InvalidArgument("t_final = " + std::to_string(cfg.t_final) +
                          " is not an integer multiple of dt = " + std::to_string(cfg.dt));
  }
  return static_cast<std::size_t>(m);
}

EvolveResult evolve(const std::shared_ptr<const DgSpace>& space, const SchemeConfig& cfg,
                    const DgFunction& u0, const std::vector<double>& snapshot_times,
                    const TimeForcing& forcing, const StepObserver& observer) {
  const std::size_t steps = step_count(cfg);
  const TimeStepper stepper(space, cfg, forcing);

  std::vector<std::size_t> wanted;
  for (double t : snapshot_times) {
    const double idx = std::round(t / cfg.dt);
    wanted.push_back(static_cast<std::size_t>(std::clamp(idx, 0.0, double(steps))));
  }
  EvolveResult out{.snapshots = {}, .snapshot_times = {}, .reports = {}, .energy = {}, .final_state = u0};
  auto capture = [&](std::size_t m, const DgFunction& u) {
    for (std::size_t w : wanted) {
      if (w == m) {
        out.snapshots.push_back(u);
        out.snapshot_times.push_back(double(m) * cfg.dt);
      }
    }
  };
  const EnergyBreakdown e0 = energies(cfg, u0);
  out.energy.push_back({0.0, e0.phi, e0.potential_part, e0.J, 0.0});
  capture(0, u0);
  if (steps > 0 && energy_law_flagged(cfg)) {
    std::clog << "warning: fully-implicit scheme with dt = " << cfg.dt << " >= 2 eps^2 = "
              << 2.0 * cfg.epsilon * cfg.epsilon << " is outside its energy-stable range\n";
  }

  DgFunction u = u0;
  for (std::size_t m = 0; m < steps; ++m) {
    const double t_old = double(m) * cfg.dt;
    const double t_new = double(m + 1) * cfg.dt;
    auto [next, rep] = stepper.step(u, t_old, m + 1);
    const EnergyBreakdown e = energies(cfg, next);
    out.energy.push_back({t_new, e.phi, e.potential_part, e.J, energy_law_residual(cfg, next, u)});
    out.reports.push_back(rep);
    if (observer) observer(m + 1, t_new, u, next);
    u = std::move(next);
    capture(m + 1, u);
  }
  out.final_state = std::move(u);
  return out;
}

}  // namespace acdg
