// Command-line driver for the Allen-Cahn DG experiments.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "acdg/error.hpp"
#include "acdg/experiments.hpp"

using namespace acdg;

namespace {

struct Options {
  std::string config;
  std::string epsilon, dt, nx, lambda, sigma, variant, out;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--config", o.config, "Config file (key = value)");
  app->add_option("--epsilon", o.epsilon, "Override epsilon");
  app->add_option("--dt", o.dt, "Override time step (0 selects h^2/2)");
  app->add_option("--nx", o.nx, "Override cells per direction");
  app->add_option("--lambda", o.lambda, "Override lambda (-1, 0 or 1)");
  app->add_option("--sigma", o.sigma, "Override penalty");
  app->add_option("--variant", o.variant, "convex-splitting or fully-implicit");
  app->add_option("--out", o.out, "Output directory");
}

RunConfig load(const Options& o, const std::string& experiment) {
  ConfigOverrides ov;
  auto set = [&](const char* key, const std::string& v) {
    if (!v.empty()) ov[key] = v;
  };
  set("epsilon", o.epsilon);
  set("dt", o.dt);
  set("nx", o.nx);
  set("lambda", o.lambda);
  set("sigma", o.sigma);
  set("variant", o.variant);
  set("output_dir", o.out);
  if (experiment != "run") ov["experiment"] = experiment;
  if (!o.nx.empty()) ov["ny"] = o.nx;
  return o.config.empty() ? parse_config("", ov) : load_config(o.config, ov);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

int report(bool ok, const std::string& what) {
  std::cout << (ok ? "PASS " : "FAIL ") << what << '\n';
  return ok ? 0 : 1;
}

int do_run(const RunConfig& cfg) {
  const SimulationResult r = run_simulation(cfg);
  const auto& e = r.evolution.energy;
  std::cout << "steps " << r.evolution.reports.size() << "  dt " << fmt(r.scheme.dt) << "  J(0) "
            << fmt(e.front().J) << "  J(T) " << fmt(e.back().J) << '\n';
  return 0;
}

int do_mms(const RunConfig& cfg) {
  const auto rows = mms_run(cfg);
  std::cout << "h               e_L2          order_L2  e_H1          order_H1\n";
  bool ok = true;
  const bool linear = cfg.degree == 1;
  for (const auto& r : rows) {
    std::printf("%-15.6e %-13.6e %-9s %-13.6e %s\n", r.h, r.e_l2,
                r.order_l2 ? std::to_string(*r.order_l2).substr(0, 6).c_str() : "", r.e_h1,
                r.order_h1 ? std::to_string(*r.order_h1).substr(0, 6).c_str() : "");
    if (r.order_l2) {
      ok = ok && (linear ? (*r.order_l2 >= 1.7 && *r.order_l2 <= 2.3) : *r.order_l2 >= 1.7);
      ok = ok && (linear ? (*r.order_h1 >= 0.85 && *r.order_h1 <= 1.15) : *r.order_h1 >= 1.7);
    }
  }
  return report(ok, "convergence orders");
}

int do_energy(const RunConfig& cfg) {
  const EnergyRunResult r = energy_decay_run(cfg);
  if (!r.completed) std::cout << "run failed: " << r.failure << '\n';
  if (r.flagged) std::cout << "note: dt >= 2 eps^2 for the fully implicit scheme\n";
  std::cout << "steps " << r.reports.size() << "  max J increase " << fmt(r.max_increase)
            << "  energy-law excess " << fmt(r.law_excess) << '\n';
  return report(r.monotone && r.law_holds, "energy non-increasing and energy law");
}

int do_stability(const RunConfig& cfg) {
  const auto rows = stability_sweep(cfg);
  std::cout << "variant           dt            steps flagged completed monotone newton_max\n";
  for (const auto& r : rows) {
    std::printf("%-17s %-13.6e %-5zu %-7d %-9d %-8d %d\n", to_string(r.variant).c_str(), r.dt, r.steps,
                r.flagged, r.completed, r.monotone, r.newton_max);
  }
  return report(stability_passed(rows, cfg.scheme.epsilon), "stable where guaranteed");
}

int do_spectrum(const RunConfig& cfg) {
  const SpectrumSweep s = spectrum_sweep(cfg);
  double first = std::nan("");
  bool controls = true;
  for (const auto& r : s.rows) {
    std::printf("eps %-8g %-9s nx %-4d lambda %.8e\n", r.epsilon, r.state.c_str(), r.nx, r.lambda);
    const double e2 = 1.0 / (r.epsilon * r.epsilon);
    if (r.state == "projected" && std::isnan(first)) first = r.lambda;
    if (r.state == "one") controls = controls && std::abs(r.lambda - 2.0 * e2) <= 1e-4 * 2.0 * e2;
    if (r.state == "zero") controls = controls && std::abs(r.lambda + e2) <= 1e-4 * e2;
  }
  std::cout << "c = " << fmt(s.c) << '\n';
  return report(controls && s.c <= 3.0 * std::abs(first), "uniform lower bound and control states");
}

int do_interface(const RunConfig& cfg) {
  const auto rows = interface_run(cfg);
  bool ok = true;
  for (const auto& r : rows) {
    std::printf("eps %-8g t %-8g nx %-4d radius %.6f distance %.6e segments %zu\n", r.epsilon, r.t, r.nx,
                r.radius, r.distance, r.segments);
    ok = ok && !std::isnan(r.distance);
  }
  // Distance at each observed time must not grow as epsilon decreases.
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (rows[i].t == rows[j].t && rows[j].epsilon < rows[i].epsilon && rows[j].distance > rows[i].distance) {
        ok = false;
      }
    }
  }
  return report(ok, "interface distance non-increasing in epsilon");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IP-DG Allen-Cahn solver"};
  app.require_subcommand(1);
  Options o;
  struct Cmd {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&);
  };
  const Cmd cmds[] = {
      {"run", "Evolve one configuration", do_run},
      {"mms", "Manufactured-solution convergence study", do_mms},
      {"energy", "Energy decay and energy-law check", do_energy},
      {"stability", "Time-step sweep for both variants", do_stability},
      {"spectrum", "Principal eigenvalue sweep over epsilon", do_spectrum},
      {"interface", "Zero level set versus the shrinking circle", do_interface},
  };
  for (const auto& c : cmds) add_common(app.add_subcommand(c.name, c.help), o);
  CLI11_PARSE(app, argc, argv);

  for (const auto& c : cmds) {
    if (!app.got_subcommand(c.name)) continue;
    try {
      RunConfig cfg = load(o, c.name);
      // `run` dispatches on the experiment named in the config.
      const std::string kind = cfg.experiment;
      for (const auto& d : cmds) {
        if (kind == d.name) return d.fn(cfg);
      }
    } catch (const ConfigError& e) {
      std::cerr << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 3;
    }
  }
  return 2;
}
