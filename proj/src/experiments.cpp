#include "acdg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

#include "acdg/error.hpp"
#include "acdg/initial_conditions.hpp"
#include "acdg/interface.hpp"
#include "acdg/io.hpp"

namespace acdg {

namespace {

std::string tag(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

void write_echo(const RunConfig& cfg) {
  if (cfg.output_dir.empty()) return;
  ensure_directory(cfg.output_dir);
  std::ofstream(join_path(cfg.output_dir, "config.echo")) << echo_config(cfg);
}

void write_energy_csv(const std::string& path, const std::vector<EnergyRecord>& series) {
  CsvWriter csv(path, {"t", "phi", "potential", "J", "Rm"});
  for (const auto& e : series) csv.row(std::vector<double>{e.t, e.phi, e.potential, e.J, e.Rm});
}

TimeForcing forcing_for(const RunConfig& cfg, double epsilon) {
  if (cfg.initial != "mms") return {};
  return [epsilon](Point2 x, double t) { return mms_forcing(x, t, epsilon); };
}

double max_increase(const std::vector<EnergyRecord>& s) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m < s.size(); ++m) worst = std::max(worst, s[m].J - s[m - 1].J);
  return s.size() > 1 ? worst : 0.0;
}

double law_excess(const std::vector<EnergyRecord>& s, double dt) {
  double sum = 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t l = 1; l < s.size(); ++l) {
    sum += dt * s[l].Rm;
    worst = std::max(worst, s[l].J + sum - s[0].J);
  }
  return s.size() > 1 ? worst : 0.0;
}

std::vector<double> or_default(const std::vector<double>& v, std::vector<double> fallback) {
  return v.empty() ? fallback : v;
}

}  // namespace

std::shared_ptr<const DgSpace> make_space(const RunConfig& cfg, int nx, int ny) {
  return std::make_shared<const DgSpace>(build_uniform_mesh(nx, ny, cfg.domain), cfg.degree);
}

DgFunction make_initial(const RunConfig& cfg, const std::shared_ptr<const DgSpace>& space,
                        const SchemeConfig& scheme) {
  InitialConditionParams p;
  p.name = cfg.initial;
  p.epsilon = scheme.epsilon;
  p.center = cfg.ic_center;
  p.radius = cfg.ic_radius;
  p.value = cfg.ic_value;
  return initial_datum(space, initial_condition(p));
}

SimulationResult run_simulation(const RunConfig& cfg) {
  auto space = make_space(cfg, cfg.nx, cfg.ny);
  const SchemeConfig scheme = resolve_scheme(cfg, space->mesh().h_max());
  const DgFunction u0 = make_initial(cfg, space, scheme);
  SimulationResult out{space, scheme,
                       evolve(space, scheme, u0, cfg.snapshot_times, forcing_for(cfg, scheme.epsilon))};
  if (!cfg.output_dir.empty()) {
    write_echo(cfg);
    write_energy_csv(join_path(cfg.output_dir, "energy.csv"), out.evolution.energy);
    const std::string fields = join_path(cfg.output_dir, "fields");
    ensure_directory(fields);
    const auto& ev = out.evolution;
    for (std::size_t i = 0; i < ev.snapshots.size(); ++i) {
      write_field_vtk(join_path(fields, "u_" + tag(ev.snapshot_times[i]) + ".vtk"), ev.snapshots[i]);
    }
    write_field_vtk(join_path(fields, "u_final.vtk"), ev.final_state);
  }
  return out;
}

std::vector<ConvergenceRow> mms_run(const RunConfig& cfg) {
  std::vector<int> levels = cfg.mms_levels;
  if (levels.empty()) levels = {cfg.nx, 2 * cfg.nx, 4 * cfg.nx, 8 * cfg.nx};
  RunConfig base = cfg;
  base.initial = "mms";
  if (base.scheme.t_final == 0.0) base.scheme.t_final = 0.1;

  std::vector<ConvergenceRow> rows;
  for (int n : levels) {
    auto space = make_space(base, n, n);
    const SchemeConfig scheme = resolve_scheme(base, space->mesh().h_max());
    const DgFunction u0 = make_initial(base, space, scheme);
    ConvergenceRow row;
    row.h = space->mesh().h_max();
    row.nx = n;
    row.dt = scheme.dt;
    double h1_sum = 0.0;
    row.e_l2 = broken_norms(scheme, u0, mms_field(0.0)).l2;
    auto observer = [&](std::size_t, double t, const DgFunction&, const DgFunction& u) {
      const BrokenNorms e = broken_norms(scheme, u, mms_field(t));
      row.e_l2 = std::max(row.e_l2, e.l2);
      h1_sum += scheme.dt * e.h1_broken * e.h1_broken;
    };
    const EvolveResult ev = evolve(space, scheme, u0, {}, forcing_for(base, scheme.epsilon), observer);
    row.steps = ev.reports.size();
    row.e_h1 = std::sqrt(h1_sum);
    if (!rows.empty()) {
      const auto& prev = rows.back();
      const double ratio = std::log(prev.h / row.h);
      row.order_l2 = std::log(prev.e_l2 / row.e_l2) / ratio;
      row.order_h1 = std::log(prev.e_h1 / row.e_h1) / ratio;
    }
    rows.push_back(row);
  }
  if (!cfg.output_dir.empty()) {
    write_echo(cfg);
    CsvWriter csv(join_path(cfg.output_dir, "convergence.csv"), {"h", "e_L2", "order_L2", "e_H1", "order_H1"});
    for (const auto& r : rows) {
      csv.row({format_number(r.h), format_number(r.e_l2), format_cell(r.order_l2), format_number(r.e_h1),
               format_cell(r.order_h1)});
    }
  }
  return rows;
}

EnergyRunResult energy_decay_run(const RunConfig& cfg) {
  EnergyRunResult out;
  auto space = make_space(cfg, cfg.nx, cfg.ny);
  out.scheme = resolve_scheme(cfg, space->mesh().h_max());
  out.flagged = energy_law_flagged(out.scheme);
  const DgFunction u0 = make_initial(cfg, space, out.scheme);
  try {
    EvolveResult ev = evolve(space, out.scheme, u0, {}, forcing_for(cfg, out.scheme.epsilon));
    out.series = std::move(ev.energy);
    out.reports = std::move(ev.reports);
    out.completed = true;
  } catch (const StepFailure& e) {
    out.failure = e.what();
  }
  out.max_increase = max_increase(out.series);
  out.law_excess = law_excess(out.series, out.scheme.dt);
  out.monotone = out.completed && out.max_increase <= cfg.energy_slack;
  out.law_holds = out.completed && out.law_excess <= kEnergyLawTol;
  if (!cfg.output_dir.empty()) {
    write_echo(cfg);
    write_energy_csv(join_path(cfg.output_dir, "energy.csv"), out.series);
  }
  return out;
}

std::vector<StabilityRow> stability_sweep(const RunConfig& cfg) {
  const double eps2 = cfg.scheme.epsilon * cfg.scheme.epsilon;
  const auto ks = or_default(cfg.k_values, {0.5 * eps2, eps2, 2.0 * eps2, 4.0 * eps2, 8.0 * eps2});
  auto space = make_space(cfg, cfg.nx, cfg.ny);
  std::vector<StabilityRow> rows;
  for (Variant v : {Variant::ConvexSplitting, Variant::FullyImplicit}) {
    for (double k : ks) {
      StabilityRow row;
      row.variant = v;
      row.dt = k;
      row.steps = cfg.scheme.t_final > 0.0
                      ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.scheme.t_final / k)))
                      : 10;
      SchemeConfig scheme = cfg.scheme;
      scheme.variant = v;
      scheme.dt = k;
      scheme.t_final = double(row.steps) * k;
      row.flagged = energy_law_flagged(scheme);
      const DgFunction u0 = make_initial(cfg, space, scheme);
      std::vector<EnergyRecord> series;
      try {
        const EvolveResult ev = evolve(space, scheme, u0, {});
        series = ev.energy;
        for (const auto& r : ev.reports) {
          row.newton_total += r.newton_iterations;
          row.newton_max = std::max(row.newton_max, r.newton_iterations);
        }
        row.completed = true;
      } catch (const StepFailure& e) {
        row.failure = e.what();
      }
      row.max_increase = max_increase(series);
      row.monotone = row.completed && row.max_increase <= cfg.energy_slack;
      rows.push_back(row);
    }
  }
  if (!cfg.output_dir.empty()) {
    write_echo(cfg);
    CsvWriter csv(join_path(cfg.output_dir, "stability.csv"),
                  {"variant", "dt", "steps", "flagged", "completed", "monotone", "newton_total",
                   "newton_max", "max_increase"});
    for (const auto& r : rows) {
      csv.row({to_string(r.variant), format_number(r.dt), std::to_string(r.steps), r.flagged ? "1" : "0",
               r.completed ? "1" : "0", r.monotone ? "1" : "0", std::to_string(r.newton_total),
               std::to_string(r.newton_max), format_number(r.max_increase)});
    }
  }
  return rows;
}

bool stability_passed(const std::vector<StabilityRow>& rows, double epsilon) {
  for (const auto& r : rows) {
    const bool guaranteed = r.variant == Variant::ConvexSplitting || r.dt < 2.0 * epsilon * epsilon;
    if (guaranteed && !r.monotone) return false;
  }
  return true;
}

SpectrumSweep spectrum_sweep(const RunConfig& cfg) {
  const auto epsilons = or_default(cfg.epsilons, {0.2, 0.1, 0.05});
  const double lx = cfg.domain.xmax - cfg.domain.xmin;
  const double ly = cfg.domain.ymax - cfg.domain.ymin;
  const double r_probe = std::sqrt(cfg.ic_radius * cfg.ic_radius - 2.0 * cfg.probe_time);
  SpectrumSweep out;
  double lowest = std::numeric_limits<double>::infinity();
  for (double eps : epsilons) {
    const double h = cfg.h_over_epsilon * eps;
    const int nx = cells_for_h(lx, h);
    auto space = make_space(cfg, nx, cells_for_h(ly, h));
    RunConfig local = cfg;
    local.scheme.epsilon = eps;
    local.scheme.t_final = cfg.probe_time;
    local.initial = "circle";
    const SchemeConfig scheme = resolve_scheme(local, space->mesh().h_max());

    EigenOptions eig;
    eig.seed = cfg.seed;
    auto probe = [&](const std::string& state, const DgFunction& u) {
      const EigenResult r = principal_eigenvalue(scheme, u, eig);
      out.rows.push_back({eps, state, nx, r.lambda, r.residual_bound});
      return r.lambda;
    };
    const DgFunction projected =
        elliptic_project(space, scheme, circle_profile(cfg.ic_center, r_probe, eps));
    lowest = std::min(lowest, probe("projected", projected));
    const DgFunction u0 = make_initial(local, space, scheme);
    probe("evolved", evolve(space, scheme, u0, {}).final_state);
    DgFunction one(space);
    std::fill(one.coefficients().begin(), one.coefficients().end(), 1.0);
    probe("one", one);
    probe("zero", DgFunction(space));
  }
  out.c = std::max(0.0, -lowest);
  if (!cfg.output_dir.empty()) {
    write_echo(cfg);
    CsvWriter csv(join_path(cfg.output_dir, "spectrum.csv"),
                  {"epsilon", "lambda_min", "state", "nx", "residual_bound"});
    for (const auto& r : out.rows) {
      csv.row({format_number(r.epsilon), format_number(r.lambda), r.state, std::to_string(r.nx),
               format_number(r.residual_bound)});
    }
  }
  return out;
}

namespace {

void dump_curve(const RunConfig& cfg, const std::string& stem, const InterfaceCurve& curve) {
  if (cfg.output_dir.empty()) return;
  write_curve_csv(join_path(cfg.output_dir, stem + ".csv"), curve);
  write_curve_vtk(join_path(cfg.output_dir, stem + ".vtk"), curve);
}

void snapshot_curves(const RunConfig& cfg, const std::string& name, const std::vector<double>& times) {
  RunConfig local = cfg;
  local.initial = name;
  local.scheme.t_final = times.back();
  auto space = make_space(local, local.nx, local.ny);
  const SchemeConfig scheme = resolve_scheme(local, space->mesh().h_max());
  const DgFunction u0 = make_initial(local, space, scheme);
  const EvolveResult ev = evolve(space, scheme, u0, times);
  for (std::size_t i = 0; i < ev.snapshots.size(); ++i) {
    const double t = ev.snapshot_times[i];
    const InterfaceCurve curve = extract_zero_levelset(average_to_continuous(ev.snapshots[i]), t);
    dump_curve(cfg, name + "_" + tag(times[i]), curve);
  }
}

}  // namespace

std::vector<InterfaceRow> interface_run(const RunConfig& cfg) {
  const auto epsilons = or_default(cfg.epsilons, {0.1, 0.05, 0.025});
  auto times = or_default(cfg.observe_times, {0.05});
  std::sort(times.begin(), times.end());
  const CircleFlow flow(cfg.ic_center, cfg.ic_radius);
  if (times.back() >= flow.extinction_time()) {
    throw InvalidArgument("observe_times must precede the extinction time " + tag(flow.extinction_time()));
  }
  const double lx = cfg.domain.xmax - cfg.domain.xmin;
  const double ly = cfg.domain.ymax - cfg.domain.ymin;
  if (!cfg.output_dir.empty()) {
    write_echo(cfg);
  }

  std::vector<InterfaceRow> rows;
  for (double eps : epsilons) {
    const double h = cfg.h_over_epsilon * eps;
    const int nx = cells_for_h(lx, h);
    auto space = make_space(cfg, nx, cells_for_h(ly, h));
    RunConfig local = cfg;
    local.scheme.epsilon = eps;
    local.scheme.t_final = 0.0;
    local.initial = "circle";
    SchemeConfig scheme = resolve_scheme(local, space->mesh().h_max());
    scheme.t_final = std::ceil(times.back() / scheme.dt - 1e-9) * scheme.dt;

    auto record = [&](double t, const DgFunction& u) {
      const InterfaceCurve curve = extract_zero_levelset(average_to_continuous(u), t);
      InterfaceRow row{eps, t, nx, space->mesh().h_max(), scheme.dt, flow.radius(t),
                       std::numeric_limits<double>::quiet_NaN(), curve.segments.size(), curve.degenerate_count()};
      if (!curve.empty()) row.distance = one_sided_hausdorff(curve, flow, t);
      rows.push_back(row);
      dump_curve(cfg, "interface_" + tag(eps) + "_" + tag(t), curve);
    };

    const DgFunction u0 = make_initial(local, space, scheme);
    std::size_t next = 0;
    while (next < times.size() && times[next] <= 0.0) record(times[next++], u0);
    auto observer = [&](std::size_t, double t_new, const DgFunction& u_old, const DgFunction& u_new) {
      const double t_old = t_new - scheme.dt;
      while (next < times.size() && times[next] <= t_new + 1e-12 * scheme.dt) {
        const double t = std::clamp(times[next], t_old, t_new);
        record(times[next], time_interpolant(u_old, t_old, u_new, t_new, t));
        ++next;
      }
    };
    evolve(space, scheme, u0, {}, {}, observer);
  }

  if (cfg.interface_tests) {
    snapshot_curves(cfg, "test1", {0.0, 0.06, 0.09, 0.2});
    snapshot_curves(cfg, "test2", {0.0, 6e-3, 1.2e-2, 2e-2});
  }
  if (!cfg.output_dir.empty()) {
    CsvWriter csv(join_path(cfg.output_dir, "interface.csv"),
                  {"epsilon", "t", "nx", "h", "dt", "radius", "distance", "segments", "degenerate"});
    for (const auto& r : rows) {
      csv.row({format_number(r.epsilon), format_number(r.t), std::to_string(r.nx), format_number(r.h),
               format_number(r.dt), format_number(r.radius), format_number(r.distance),
               std::to_string(r.segments), std::to_string(r.degenerate)});
    }
  }
  return rows;
}

}  // namespace acdg
