#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "acdg/config.hpp"
#include "acdg/error.hpp"
#include "acdg/experiments.hpp"
#include "acdg/initial_conditions.hpp"
#include "acdg/io.hpp"

using namespace acdg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_text(const std::string& cfg) {
  try {
    parse_config(cfg);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("acdg_test_harness_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("minimal config gets the documented defaults") {
  const RunConfig c = parse_config("epsilon = 0.1\nnx = 8\n");
  CHECK(c.scheme.lambda == -1);
  CHECK(c.scheme.sigma == 16.0);
  CHECK(c.scheme.variant == Variant::ConvexSplitting);
  CHECK(c.scheme.newton_tol == 1e-10);
  CHECK(c.scheme.newton_max_iter == 30);
  CHECK(c.degree == 1);
  CHECK(c.ny == 8);
  CHECK(c.domain.xmin == -1.0);
  CHECK(c.domain.ymax == 1.0);
  CHECK(c.initial == "circle");
  CHECK(c.experiment == "run");
  CHECK(parse_config("epsilon = 0.1\nnx = 8\ndegree = 2\n").scheme.sigma == 48.0);
}

TEST_CASE("config syntax") {
  const RunConfig c = parse_config(R"(# comment
epsilon = 0.05   # trailing comment
nx = 10
ny = 4
dt = 2e-3
lambda = 1
variant = fully-implicit
domain = 0, 1, 0, 0.5
snapshot_times = 0 0.1, 0.2
epsilons = 0.2,0.1
mms_levels = 5, 10
interface_tests = true
)");
  CHECK(c.scheme.epsilon == 0.05);
  CHECK(c.ny == 4);
  CHECK(c.scheme.lambda == 1);
  CHECK(c.scheme.variant == Variant::FullyImplicit);
  CHECK(c.domain.xmax == 1.0);
  CHECK(c.domain.ymax == 0.5);
  CHECK(c.snapshot_times == std::vector<double>{0.0, 0.1, 0.2});
  CHECK(c.epsilons.size() == 2);
  CHECK(c.mms_levels == std::vector<int>{5, 10});
  CHECK(c.interface_tests);
}

TEST_CASE("config errors") {
  CHECK(error_text("epsilon = 0.1\nnx = 4\nlambda = 2\n").find("{-1, 0, 1}") != std::string::npos);
  CHECK_FALSE(error_text("epsilon = 0\nnx = 4\n").empty());
  CHECK_FALSE(error_text("epsilon = 0.1\nnx = 4\nfoo = 1\n").empty());
  CHECK_FALSE(error_text("epsilon = 0.1\nnx = 4\nnx = 5\n").empty());
  CHECK_FALSE(error_text("epsilon = 0.1\nnx = 4\ndegree = 3\n").empty());
  CHECK_FALSE(error_text("epsilon = 0.1\nnx = 4\nvariant = explicit\n").empty());
  CHECK_FALSE(error_text("epsilon = abc\nnx = 4\n").empty());
  CHECK_FALSE(error_text("epsilon = 0.1\nnx = 4\nthis line has no equals sign\n").empty());
  CHECK_FALSE(error_text("epsilon = 0.1\nnx = 4\ninitial = square\n").empty());
  // Every problem in one message.
  const std::string all = error_text("epsilon = -1\nlambda = 5\nbogus = 2\n");
  CHECK(all.find("epsilon") != std::string::npos);
  CHECK(all.find("lambda") != std::string::npos);
  CHECK(all.find("bogus") != std::string::npos);
  CHECK(all.find("nx") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/acdg.cfg"), ConfigError);
}

TEST_CASE("overrides take precedence") {
  const RunConfig c = parse_config("epsilon = 0.1\nnx = 8\n", {{"epsilon", "0.2"}, {"nx", "16"}, {"lambda", "0"}});
  CHECK(c.scheme.epsilon == 0.2);
  CHECK(c.nx == 16);
  CHECK(c.scheme.lambda == 0);
  CHECK_THROWS_AS(parse_config("epsilon = 0.1\nnx = 8\n", {{"lambda", "3"}}), ConfigError);
}

TEST_CASE("echo round trip") {
  const RunConfig c = parse_config(
      "epsilon = 0.07\nnx = 12\ndt = 1e-3\nt_final = 0.3\nvariant = fully-implicit\nsnapshot_times = 0.1, 0.2\n"
      "initial = test2\nepsilons = 0.1, 0.05\nobserve_times = 0, 0.05\n");
  const std::string e = echo_config(c);
  const RunConfig d = parse_config(e);
  CHECK(echo_config(d) == e);
  CHECK(d.scheme.epsilon == c.scheme.epsilon);
  CHECK(d.scheme.dt == c.scheme.dt);
  CHECK(d.snapshot_times == c.snapshot_times);
  CHECK(d.initial == "test2");
}

TEST_CASE("mesh size and step resolution") {
  CHECK(cells_for_h(2.0, 0.4 * std::sqrt(2.0)) == 5);
  CHECK(cells_for_h(2.0, 0.05 * std::sqrt(2.0)) == 40);
  CHECK(cells_for_h(1.0, 0.0125) == 114);
  RunConfig c = parse_config("epsilon = 1\nnx = 5\nt_final = 0.1\n");
  const double h = 0.4 * std::sqrt(2.0);
  const SchemeConfig s = resolve_scheme(c, h);
  CHECK(s.dt <= h * h / 2.0);
  CHECK(std::abs(0.1 / s.dt - std::round(0.1 / s.dt)) < 1e-9);
  c.scheme.dt = 0.01;
  CHECK(resolve_scheme(c, h).dt == 0.01);
}

TEST_CASE("circle initial condition") {
  InitialConditionParams p;
  p.epsilon = 0.1;
  const auto u = initial_condition(p);
  CHECK(u({0, 0}) == doctest::Approx(std::tanh(0.5 / (std::sqrt(2.0) * 0.1))));
  CHECK(u({0, 0}) > 0.0);
  CHECK(std::abs(u({0.5, 0})) < 1e-15);
  CHECK(std::abs(u({0.3, 0.4})) < 1e-15);
  const auto prof = circle_profile({0, 0}, 0.5, 0.1);
  const double d = 1e-6;
  const Point2 x{0.3, 0.2};
  CHECK(prof.gradient(x).x == doctest::Approx((prof.value({x.x + d, x.y}) - prof.value({x.x - d, x.y})) / (2 * d)).epsilon(1e-6));
}

TEST_CASE("test 1 initial condition follows the piecewise formula") {
  InitialConditionParams p;
  p.name = "test1";
  p.epsilon = 0.1;
  const auto u = initial_condition(p);
  const double s = std::sqrt(2.0) * 0.1;
  // Central band.
  CHECK(u({-0.08, 0.0}) == doctest::Approx(std::tanh(-0.15 / s)));
  CHECK(u({-0.08, 0.0}) < 0.0);
  CHECK(u({0.0, 0.4}) == doctest::Approx(std::tanh(0.25 / s)));
  // Right disc region and its inner corner.
  CHECK(u({0.5, 0.0}) == doctest::Approx(std::tanh(-0.39 / s)));
  CHECK(u({0.2, 0.05}) == doctest::Approx(std::tanh(-std::hypot(0.06, 0.1) / s)));
  CHECK(u({0.2, -0.05}) == doctest::Approx(std::tanh(-std::hypot(0.06, 0.1) / s)));
  // Left disc region and its inner corner.
  CHECK(u({-0.5, 0.0}) == doctest::Approx(std::tanh(-0.25 / s)));
  CHECK(u({-0.35, 0.05}) == doctest::Approx(std::tanh(-std::hypot(0.05, 0.1) / s)));
  CHECK(u({-0.35, -0.05}) == doctest::Approx(std::tanh(-std::hypot(0.05, 0.1) / s)));
  // Far field is the positive phase.
  CHECK(u({0.9, 0.9}) > 0.99);
  CHECK(u({-0.9, -0.9}) > 0.99);
}

TEST_CASE("ellipse distance against dense sampling") {
  const double pi = std::acos(-1.0);
  for (Point2 q : {Point2{0.0, 0.0}, Point2{0.1, 0.3}, Point2{0.7, 0.1}, Point2{-0.5, 0.9}, Point2{0.2, -0.05},
                   Point2{0.0, 0.61}, Point2{1.0, -1.0}}) {
    for (auto [a, b] : {std::pair{0.2, 0.6}, std::pair{0.6, 0.2}}) {
      auto dist = [&](double t) { return std::hypot(q.x - a * std::cos(t), q.y - b * std::sin(t)); };
      const int n = 20000;
      double best = 0.0;
      for (int i = 0; i < n; ++i)
        if (dist(2 * pi * i / n) < dist(best)) best = 2 * pi * i / n;
      // Ternary refinement around the best sample.
      double lo = best - 2 * pi / n, hi = best + 2 * pi / n;
      for (int i = 0; i < 200; ++i) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (dist(m1) < dist(m2))
          hi = m2;
        else
          lo = m1;
      }
      CHECK(std::abs(ellipse_distance(q, a, b) - dist(0.5 * (lo + hi))) <= 1e-12);
    }
  }
}

TEST_CASE("test 2 initial condition") {
  InitialConditionParams p;
  p.name = "test2";
  p.epsilon = 0.1;
  const auto u = initial_condition(p);
  CHECK(std::abs(u({0.2, 0.0})) < 1e-12);
  CHECK(std::abs(u({0.0, 0.6})) < 1e-12);
  CHECK(std::abs(u({0.6, 0.0})) < 1e-12);
  // Inside one ellipse only: negative.
  CHECK(u({0.0, 0.4}) < 0.0);
  CHECK(u({0.4, 0.0}) < 0.0);
  // Inside both, or outside both: positive.
  CHECK(u({0.0, 0.0}) > 0.0);
  CHECK(u({0.8, 0.8}) > 0.0);
  // Symmetric under swapping the axes.
  CHECK(u({0.13, 0.41}) == doctest::Approx(u({0.41, 0.13})));
}

TEST_CASE("constant and unknown selectors") {
  InitialConditionParams p;
  p.name = "constant";
  p.value = -0.4;
  CHECK(initial_condition(p)({0.3, 0.3}) == -0.4);
  p.name = "mms";
  CHECK(initial_condition(p)({0.0, 0.0}) == doctest::Approx(1.0));
  p.name = "square";
  CHECK_THROWS_AS(initial_condition(p), ConfigError);
}

TEST_CASE("manufactured solution and forcing") {
  const double pi = std::acos(-1.0);
  // Neumann condition on the square.
  for (double s : {-0.7, 0.0, 0.4}) {
    CHECK(std::abs(mms_gradient({1.0, s}, 0.2).x) < 1e-14);
    CHECK(std::abs(mms_gradient({s, -1.0}, 0.2).y) < 1e-14);
  }
  // Forcing from finite differences of the solution.
  const double h = 1e-4, eps = 0.7;
  for (Point2 x : {Point2{0.1, 0.2}, Point2{-0.6, 0.35}}) {
    const double t = 0.3;
    const double u = mms_solution(x, t);
    const double ut = (mms_solution(x, t + h) - mms_solution(x, t - h)) / (2 * h);
    const double lap = (mms_solution({x.x + h, x.y}, t) + mms_solution({x.x - h, x.y}, t) + mms_solution({x.x, x.y + h}, t) +
                        mms_solution({x.x, x.y - h}, t) - 4 * u) /
                       (h * h);
    const double g = ut - lap + (u * u * u - u) / (eps * eps);
    CHECK(mms_forcing(x, t, eps) == doctest::Approx(g).epsilon(1e-6));
    CHECK(mms_forcing(x, t, eps) ==
          doctest::Approx((2 * pi * pi - 1) * u + (u * u * u - u) / (eps * eps)).epsilon(1e-13));
  }
}

TEST_CASE("csv helpers") {
  CHECK(format_number(0.1) == "1.000000000000000e-01");
  CHECK(format_cell(std::nullopt).empty());
  const auto dir = scratch("csv");
  ensure_directory(dir.string());
  const std::string path = join_path(dir.string(), "a.csv");
  {
    CsvWriter w(path, {"a", "b"});
    w.row(std::vector<double>{1.0, 2.0});
    CHECK_THROWS(w.row(std::vector<double>{1.0}));
  }
  CHECK(slurp(path) == "a,b\n1.000000000000000e+00,2.000000000000000e+00\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("mms run writes orders consistent with its error columns") {
  const auto dir = scratch("mms");
  RunConfig c = parse_config("experiment = mms\nepsilon = 1\nnx = 4\nmms_levels = 4, 8\nt_final = 0.02\ninitial = mms\n");
  c.output_dir = dir.string();
  const auto rows = mms_run(c);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].order_l2.has_value());
  REQUIRE(rows[1].order_l2.has_value());
  CHECK(*rows[1].order_l2 == doctest::Approx(std::log(rows[0].e_l2 / rows[1].e_l2) / std::log(rows[0].h / rows[1].h)));
  CHECK(*rows[1].order_h1 == doctest::Approx(std::log2(rows[0].e_h1 / rows[1].e_h1)));
  CHECK(rows[1].dt <= rows[1].h * rows[1].h / 2.0);
  const auto csv = lines(slurp((dir / "convergence.csv").string()));
  REQUIRE(csv.size() == 3);
  CHECK(csv[0] == "h,e_L2,order_L2,e_H1,order_H1");
  CHECK(csv[1].find(",,") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("energy run on a constant state is flat") {
  const auto dir = scratch("energy");
  RunConfig c = parse_config("experiment = energy\nepsilon = 0.1\nnx = 4\ndt = 1e-3\nt_final = 0.01\ninitial = constant\n");
  c.output_dir = dir.string();
  const auto r = energy_decay_run(c);
  CHECK(r.completed);
  CHECK(r.monotone);
  CHECK(r.law_holds);
  CHECK(r.series.size() == 11);
  for (const auto& e : r.series) CHECK(e.J == doctest::Approx(0.0).scale(1.0));
  const auto csv = lines(slurp((dir / "energy.csv").string()));
  CHECK(csv[0] == "t,phi,potential,J,Rm");
  CHECK(csv.size() == 12);
  CHECK(std::filesystem::exists(dir / "config.echo"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("stability sweep reports every variant and step") {
  const auto dir = scratch("stability");
  RunConfig c = parse_config("experiment = stability\nepsilon = 0.2\nnx = 8\nk_values = 0.02, 0.32\n");
  c.output_dir = dir.string();
  const auto rows = stability_sweep(c);
  CHECK(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.steps == 10);
    CHECK(r.flagged == (r.variant == Variant::FullyImplicit && r.dt >= 0.08));
    if (r.variant == Variant::ConvexSplitting) {
      CHECK(r.completed);
      CHECK(r.monotone);
    }
  }
  CHECK(stability_passed(rows, 0.2));
  CHECK(std::filesystem::exists(dir / "stability.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("spectrum sweep control rows") {
  const auto dir = scratch("spectrum");
  RunConfig c = parse_config("experiment = spectrum\nepsilon = 0.4\nnx = 4\nepsilons = 0.4\nh_over_epsilon = 1\n");
  c.output_dir = dir.string();
  const auto sw = spectrum_sweep(c);
  bool one = false, zero = false;
  for (const auto& r : sw.rows) {
    if (r.state == "one") {
      one = true;
      CHECK(r.lambda == doctest::Approx(2.0 / 0.16).epsilon(1e-6));
    }
    if (r.state == "zero") {
      zero = true;
      CHECK(r.lambda == doctest::Approx(-1.0 / 0.16).epsilon(1e-6));
    }
  }
  CHECK(one);
  CHECK(zero);
  CHECK(sw.c >= 0.0);
  CHECK(lines(slurp((dir / "spectrum.csv").string()))[0].rfind("epsilon,lambda_min", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("interface run at t = 0 measures only the interpolation error") {
  const auto dir = scratch("interface");
  RunConfig c = parse_config(
      "experiment = interface\nepsilon = 0.2\nnx = 4\ndomain = 0, 1, 0, 1\nepsilons = 0.2\nobserve_times = 0\n");
  c.output_dir = dir.string();
  const auto rows = interface_run(c);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].t == 0.0);
  CHECK(rows[0].radius == 0.5);
  CHECK(rows[0].distance < rows[0].h * rows[0].h);
  CHECK(std::filesystem::exists(dir / "interface.csv"));
  CHECK(std::filesystem::exists(dir / "interface_0.2_0.csv"));
  std::filesystem::remove_all(dir);
}
