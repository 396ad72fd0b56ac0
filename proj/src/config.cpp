#include "acdg/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "acdg/error.hpp"

namespace acdg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bool to_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size() && std::isfinite(out);
  } catch (const std::exception&) {
    return false;
  }
}

bool to_int(const std::string& s, long& out) {
  try {
    std::size_t pos = 0;
    out = std::stol(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T>
std::string list(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_floating_point_v<T>) s += num(v[i]);
    else s += std::to_string(v[i]);
  }
  return s;
}

class Parser {
public:
  explicit Parser(std::vector<std::string>& errors) : errors_(errors) {}

  void real(const std::string& key, const std::string& v, double& out) {
    if (!to_double(v, out)) bad(key, v, "a number");
  }
  void integer(const std::string& key, const std::string& v, int& out) {
    long x = 0;
    if (!to_int(v, x)) return bad(key, v, "an integer");
    out = static_cast<int>(x);
  }
  void reals(const std::string& key, const std::string& v, std::vector<double>& out, std::size_t n = 0) {
    out.clear();
    for (const auto& item : split_list(v)) {
      double x = 0.0;
      if (!to_double(item, x)) return bad(key, v, "a list of numbers");
      out.push_back(x);
    }
    if (n && out.size() != n) bad(key, v, std::to_string(n) + " numbers");
  }
  void integers(const std::string& key, const std::string& v, std::vector<int>& out) {
    out.clear();
    for (const auto& item : split_list(v)) {
      long x = 0;
      if (!to_int(item, x)) return bad(key, v, "a list of integers");
      out.push_back(static_cast<int>(x));
    }
  }
  void boolean(const std::string& key, const std::string& v, bool& out) {
    if (v == "true" || v == "1" || v == "yes") out = true;
    else if (v == "false" || v == "0" || v == "no") out = false;
    else bad(key, v, "true or false");
  }
  void bad(const std::string& key, const std::string& v, const std::string& what) {
    errors_.push_back(key + " = '" + v + "' is not " + what);
  }

private:
  std::vector<std::string>& errors_;
};

void check(bool ok, std::vector<std::string>& errors, const std::string& msg) {
  if (!ok) errors.push_back(msg);
}

}  // namespace

RunConfig parse_config(const std::string& text, const ConfigOverrides& overrides) {
  std::vector<std::string> errors;
  std::map<std::string, std::string> entries;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (entries.count(key)) errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    entries[key] = value;
  }
  for (const auto& [k, v] : overrides) entries[k] = v;

  RunConfig c;
  Parser p(errors);
  bool sigma_set = false;
  using Handler = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Handler> handlers = {
      {"epsilon", [&](auto& k, auto& v) { p.real(k, v, c.scheme.epsilon); }},
      {"dt", [&](auto& k, auto& v) { p.real(k, v, c.scheme.dt); }},
      {"t_final", [&](auto& k, auto& v) { p.real(k, v, c.scheme.t_final); }},
      {"lambda", [&](auto& k, auto& v) { p.integer(k, v, c.scheme.lambda); }},
      {"sigma", [&](auto& k, auto& v) { p.real(k, v, c.scheme.sigma); sigma_set = true; }},
      {"variant",
       [&](auto& k, auto& v) {
         try {
           c.scheme.variant = parse_variant(v);
         } catch (const std::exception&) {
           p.bad(k, v, "one of {convex-splitting, fully-implicit}");
         }
       }},
      {"newton_tol", [&](auto& k, auto& v) { p.real(k, v, c.scheme.newton_tol); }},
      {"newton_max_iter", [&](auto& k, auto& v) { p.integer(k, v, c.scheme.newton_max_iter); }},
      {"linear_tol", [&](auto& k, auto& v) { p.real(k, v, c.scheme.linear_tol); }},
      {"nx", [&](auto& k, auto& v) { p.integer(k, v, c.nx); }},
      {"ny", [&](auto& k, auto& v) { p.integer(k, v, c.ny); }},
      {"domain",
       [&](auto& k, auto& v) {
         std::vector<double> d;
         p.reals(k, v, d, 4);
         if (d.size() == 4) c.domain = {d[0], d[1], d[2], d[3]};
       }},
      {"degree", [&](auto& k, auto& v) { p.integer(k, v, c.degree); }},
      {"initial", [&](auto&, auto& v) { c.initial = v; }},
      {"ic_center",
       [&](auto& k, auto& v) {
         std::vector<double> d;
         p.reals(k, v, d, 2);
         if (d.size() == 2) c.ic_center = {d[0], d[1]};
       }},
      {"ic_radius", [&](auto& k, auto& v) { p.real(k, v, c.ic_radius); }},
      {"ic_value", [&](auto& k, auto& v) { p.real(k, v, c.ic_value); }},
      {"experiment", [&](auto&, auto& v) { c.experiment = v; }},
      {"snapshot_times", [&](auto& k, auto& v) { p.reals(k, v, c.snapshot_times); }},
      {"output_dir", [&](auto&, auto& v) { c.output_dir = v; }},
      {"seed",
       [&](auto& k, auto& v) {
         int s = 0;
         p.integer(k, v, s);
         c.seed = static_cast<unsigned>(s);
       }},
      {"mms_levels", [&](auto& k, auto& v) { p.integers(k, v, c.mms_levels); }},
      {"epsilons", [&](auto& k, auto& v) { p.reals(k, v, c.epsilons); }},
      {"k_values", [&](auto& k, auto& v) { p.reals(k, v, c.k_values); }},
      {"h_over_epsilon", [&](auto& k, auto& v) { p.real(k, v, c.h_over_epsilon); }},
      {"probe_time", [&](auto& k, auto& v) { p.real(k, v, c.probe_time); }},
      {"observe_times", [&](auto& k, auto& v) { p.reals(k, v, c.observe_times); }},
      {"interface_tests", [&](auto& k, auto& v) { p.boolean(k, v, c.interface_tests); }},
      {"energy_slack", [&](auto& k, auto& v) { p.real(k, v, c.energy_slack); }},
  };
  c.scheme.dt = 0.0;

  for (const auto& [k, v] : entries) {
    auto it = handlers.find(k);
    if (it == handlers.end()) {
      errors.push_back("unknown key '" + k + "'");
      continue;
    }
    it->second(k, v);
  }
  for (const char* req : {"epsilon", "nx"}) {
    if (!entries.count(req)) errors.push_back(std::string("missing required key '") + req + "'");
  }
  if (c.ny == 0) c.ny = c.nx;
  if (!sigma_set) c.scheme.sigma = default_penalty(c.degree);

  const auto& s = c.scheme;
  check(s.epsilon > 0.0, errors, "epsilon must be positive");
  check(s.dt >= 0.0, errors, "dt must be non-negative (0 selects h^2/2)");
  check(s.t_final >= 0.0, errors, "t_final must be non-negative");
  check(s.lambda >= -1 && s.lambda <= 1, errors,
        "lambda = " + std::to_string(s.lambda) + " is not in the allowed set {-1, 0, 1}");
  check(s.sigma > 0.0, errors, "sigma must be positive");
  check(s.newton_tol > 0.0, errors, "newton_tol must be positive");
  check(s.newton_max_iter >= 1, errors, "newton_max_iter must be at least 1");
  check(s.linear_tol > 0.0, errors, "linear_tol must be positive");
  if (entries.count("nx")) check(c.nx >= 1, errors, "nx must be at least 1");
  check(c.ny >= 1 || !entries.count("nx"), errors, "ny must be at least 1");
  check(c.domain.xmax > c.domain.xmin && c.domain.ymax > c.domain.ymin, errors,
        "domain must be 'xmin, xmax, ymin, ymax' with xmin < xmax and ymin < ymax");
  check(c.degree == 1 || c.degree == 2, errors, "degree must be 1 or 2");
  static const std::set<std::string> initials = {"circle", "test1", "test2", "constant", "mms"};
  check(initials.count(c.initial) > 0, errors,
        "initial = '" + c.initial + "' is not one of {circle, test1, test2, constant, mms}");
  check(c.ic_radius > 0.0, errors, "ic_radius must be positive");
  static const std::set<std::string> experiments = {"run",       "mms",      "energy",
                                                    "stability", "spectrum", "interface"};
  check(experiments.count(c.experiment) > 0, errors,
        "experiment = '" + c.experiment +
            "' is not one of {run, mms, energy, stability, spectrum, interface}");
  for (double t : c.snapshot_times) check(t >= 0.0, errors, "snapshot_times must be non-negative");
  for (int n : c.mms_levels) check(n >= 1, errors, "mms_levels must be positive");
  for (double e : c.epsilons) check(e > 0.0, errors, "epsilons must be positive");
  for (double k : c.k_values) check(k > 0.0, errors, "k_values must be positive");
  for (double t : c.observe_times) check(t >= 0.0, errors, "observe_times must be non-negative");
  check(c.h_over_epsilon > 0.0, errors, "h_over_epsilon must be positive");
  check(c.probe_time >= 0.0, errors, "probe_time must be non-negative");
  check(c.energy_slack >= 0.0, errors, "energy_slack must be non-negative");

  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return c;
}

RunConfig load_config(const std::string& path, const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string echo_config(const RunConfig& c) {
  std::ostringstream o;
  const auto& s = c.scheme;
  o << "experiment = " << c.experiment << '\n'
    << "epsilon = " << num(s.epsilon) << '\n'
    << "dt = " << num(s.dt) << '\n'
    << "t_final = " << num(s.t_final) << '\n'
    << "lambda = " << s.lambda << '\n'
    << "sigma = " << num(s.sigma) << '\n'
    << "variant = " << to_string(s.variant) << '\n'
    << "newton_tol = " << num(s.newton_tol) << '\n'
    << "newton_max_iter = " << s.newton_max_iter << '\n'
    << "linear_tol = " << num(s.linear_tol) << '\n'
    << "nx = " << c.nx << '\n'
    << "ny = " << c.ny << '\n'
    << "domain = " << list(std::vector<double>{c.domain.xmin, c.domain.xmax, c.domain.ymin, c.domain.ymax}) << '\n'
    << "degree = " << c.degree << '\n'
    << "initial = " << c.initial << '\n'
    << "ic_center = " << num(c.ic_center.x) << ", " << num(c.ic_center.y) << '\n'
    << "ic_radius = " << num(c.ic_radius) << '\n'
    << "ic_value = " << num(c.ic_value) << '\n'
    << "snapshot_times = " << list(c.snapshot_times) << '\n'
    << "seed = " << c.seed << '\n'
    << "mms_levels = " << list(c.mms_levels) << '\n'
    << "epsilons = " << list(c.epsilons) << '\n'
    << "k_values = " << list(c.k_values) << '\n'
    << "h_over_epsilon = " << num(c.h_over_epsilon) << '\n'
    << "probe_time = " << num(c.probe_time) << '\n'
    << "observe_times = " << list(c.observe_times) << '\n'
    << "interface_tests = " << (c.interface_tests ? "true" : "false") << '\n'
    << "energy_slack = " << num(c.energy_slack) << '\n';
  if (!c.output_dir.empty()) o << "output_dir = " << c.output_dir << '\n';
  return o.str();
}

SchemeConfig resolve_scheme(const RunConfig& cfg, double h_max) {
  SchemeConfig s = cfg.scheme;
  if (s.dt == 0.0) {
    s.dt = 0.5 * h_max * h_max;
    if (s.t_final > 0.0) s.dt = s.t_final / std::ceil(s.t_final / s.dt - 1e-9);
  }
  return s;
}

int cells_for_h(double length, double h) {
  if (!(h > 0.0) || !(length > 0.0)) throw InvalidArgument("cells_for_h: positive arguments required");
  return static_cast<int>(std::ceil(length * std::sqrt(2.0) / h - 1e-9));
}

}  // namespace acdg
