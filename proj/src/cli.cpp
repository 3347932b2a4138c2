#include "fracture/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "fracture/experiments.hpp"
#include "fracture/geometry.hpp"
#include "fracture/potential.hpp"
#include "fracture/report_io.hpp"
#include "fracture/spectral.hpp"
#include "fracture/stochastic.hpp"

namespace fracture::cli {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item == "inf" || item == "INFINITE") {
      v.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(field + ": cannot parse '" + item + "' as a number");
    }
  }
  return v;
}

struct Domain {
  bool is_ball = false;
  double length = 0.0;
  double radius = 0.0;
};

Domain parse_domain(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("domain: expected cyl:L,R or ball:r, got '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const auto v = parse_list(text.substr(colon + 1), "domain");
  Domain d;
  if (kind == "cyl" && v.size() == 2) {
    d.length = v[0];
    d.radius = v[1];
  } else if (kind == "ball" && v.size() == 1) {
    d.is_ball = true;
    d.radius = v[0];
  } else {
    throw ConfigError("domain: expected cyl:L,R or ball:r, got '" + text + "'");
  }
  if (!(d.radius > 0.0) || !std::isfinite(d.radius)) throw ConfigError("domain: radius must be positive");
  if (!d.is_ball && !(d.length > 0.0)) throw ConfigError("domain: length must be positive (or inf)");
  return d;
}

CylinderSpec make_cylinder(const Domain& d) {
  return std::isfinite(d.length) ? CylinderSpec(d.radius, d.length) : CylinderSpec::infinite(d.radius);
}

Point3 parse_point(const std::string& text) {
  const auto v = parse_list(text, "point");
  if (v.size() != 3 || !std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2]))
    throw ConfigError("point: expected three finite comma-separated coordinates");
  return {v[0], v[1], v[2]};
}

// Reads flat key=value lines ('#' starts a comment) into --key value tokens
// for keys the command line does not already set.
std::vector<std::string> config_tokens(const std::string& path, const std::vector<std::string>& args) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not key=value");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    if (key == "csv") {
      if (value == "true" || value == "1") tokens.push_back(flag);
      continue;
    }
    tokens.push_back(flag);
    tokens.push_back(value);
  }
  return tokens;
}

json record(const RunConfig& cfg, const std::string& quantity) {
  return {{"quantity", quantity}, {"seed", cfg.seed}, {"workers", cfg.workers}, {"config", cfg.to_json()}};
}

json series_record(const RunConfig& cfg, const std::string& quantity, json inputs,
                   const spectral::SeriesValue& s) {
  json r = record(cfg, quantity);
  r["inputs"] = std::move(inputs);
  r["value"] = json_number(s.value);
  r["n_terms"] = s.n_terms;
  r["tail_bound"] = json_number(s.tail_bound);
  return r;
}

json estimate_record(const RunConfig& cfg, const std::string& quantity, const Estimate& e, json inputs,
                     const WosConfig& wos) {
  json r = record(cfg, quantity);
  r["inputs"] = std::move(inputs);
  r["mean"] = json_number(e.mean);
  r["std_error"] = json_number(e.std_error);
  r["n"] = e.n;
  r["eps_tube"] = wos.eps_tube;
  r["eps_shell"] = wos.eps_shell;
  return r;
}

Budgets resolve_budgets(const RunConfig& cfg) {
  Budgets b;
  try {
    b = Budgets::named(cfg.budget);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("budget: ") + e.what());
  }
  if (cfg.n_traces) b.n_traces = *cfg.n_traces;
  if (cfg.n_points) b.n_points = *cfg.n_points;
  if (cfg.n_walkers) b.kappa_walkers = *cfg.n_walkers;
  if (cfg.eps_tube) b.eps_tube = *cfg.eps_tube;
  if (cfg.eps_shell) b.eps_shell = *cfg.eps_shell;
  if (cfg.window) b.window = *cfg.window;
  if (cfg.l_trunc) b.l_trunc = *cfg.l_trunc;
  if (cfg.dt) b.dt = *cfg.dt;
  try {
    b.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return b;
}

WosConfig resolve_wos(const RunConfig& cfg, double default_tube, double default_shell, bool with_obstacle) {
  WosConfig w;
  w.eps_tube = cfg.eps_tube.value_or(default_tube);
  w.eps_shell = cfg.eps_shell.value_or(default_shell);
  if (cfg.rho) w.launch_radius = *cfg.rho;
  try {
    w.validate(with_obstacle);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return w;
}

void emit(const RunConfig& cfg, const std::vector<json>& records, std::ostream& out) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::binary);
    if (!file) throw ConfigError("out: cannot open '" + cfg.out + "' for writing");
    os = &file;
  }
  if (cfg.csv)
    write_csv(*os, records);
  else
    write_jsonl(*os, records);
}

}  // namespace

json RunConfig::to_json() const {
  json j = {{"command", command}, {"seed", seed}, {"workers", workers}, {"csv", csv}};
  if (!out.empty()) j["out"] = out;
  if (command == "zeros" || command == "torsion" || command == "capacity") j["n"] = n;
  if (command == "heat-content") j["t"] = t;
  if (length) j["L"] = json_number(*length);
  if (radius) j["R"] = *radius;
  if (!domain.empty()) j["domain"] = domain;
  if (!start.empty()) j["start"] = start;
  if (!point.empty()) j["point"] = point;
  if (dt) j["dt"] = *dt;
  if (command == "trace") j["max_steps"] = max_steps;
  if (!trace.empty()) j["trace"] = trace;
  if (rho) j["rho"] = *rho;
  if (!mode.empty()) j["mode"] = mode;
  if (command == "loss" || command == "constant" || command == "report") j["budget"] = budget;
  if (n_traces) j["n_traces"] = *n_traces;
  if (n_points) j["n_points"] = *n_points;
  if (n_walkers) j["n_walkers"] = *n_walkers;
  if (eps_tube) j["eps_tube"] = *eps_tube;
  if (eps_shell) j["eps_shell"] = *eps_shell;
  if (window) j["window"] = *window;
  if (l_trunc) j["l_trunc"] = *l_trunc;
  if (ball_radius) j["ball_radius"] = *ball_radius;
  return j;
}

std::optional<RunConfig> parse(int argc, const char* const* argv, std::ostream& out) {
  std::vector<std::string> args(argv + 1, argv + argc);

  // Config file values are spliced in right after the subcommand name so the
  // command line keeps precedence.
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("config: missing file name");
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (!config_path.empty()) {
    const auto extra = config_tokens(config_path, args);
    const auto pos = std::find_if(args.begin(), args.end(), [](const std::string& a) { return a.rfind('-', 0) != 0; });
    args.insert(pos == args.end() ? args.end() : pos + 1, extra.begin(), extra.end());
  }

  CLI::App app{"Brownian fracture toolkit: spectral series, walk-on-spheres estimators and bound checks"};
  app.name("fracture");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  RunConfig cfg;
  cfg.workers = std::max(1u, std::thread::hardware_concurrency());
  double length = 0, radius = 0, dt = 0, rho = 0, eps_tube = 0, eps_shell = 0, window = 0, l_trunc = 0,
         ball_radius = 0;
  std::size_t n_traces = 0, n_points = 0, n_walkers = 0;
  std::map<std::string, CLI::Option*> opts;

  auto common = [&](CLI::App* sub) {
    opts[sub->get_name() + ".seed"] = sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::Range(1u, 4096u));
    sub->add_option("--out", cfg.out, "output file (default: stdout)");
    sub->add_flag("--csv", cfg.csv, "flat CSV instead of JSON lines");
  };
  auto budget_opts = [&](CLI::App* sub) {
    sub->add_option("--budget", cfg.budget, "small, default or large")
        ->check(CLI::IsMember({"small", "default", "large"}));
    opts[sub->get_name() + ".n_traces"] = sub->add_option("--n-traces", n_traces)->check(CLI::PositiveNumber);
    opts[sub->get_name() + ".n_points"] = sub->add_option("--n-points", n_points)->check(CLI::PositiveNumber);
    opts[sub->get_name() + ".n_walkers"] = sub->add_option("--n-walkers", n_walkers)->check(CLI::PositiveNumber);
    opts[sub->get_name() + ".eps_tube"] = sub->add_option("--eps-tube", eps_tube)->check(CLI::PositiveNumber);
    opts[sub->get_name() + ".eps_shell"] = sub->add_option("--eps-shell", eps_shell)->check(CLI::PositiveNumber);
    opts[sub->get_name() + ".window"] = sub->add_option("--window", window)->check(CLI::PositiveNumber);
    opts[sub->get_name() + ".l_trunc"] = sub->add_option("--l-trunc", l_trunc)->check(CLI::PositiveNumber);
    opts[sub->get_name() + ".dt"] = sub->add_option("--dt", dt, "Euler step in units of R^2")->check(CLI::PositiveNumber);
  };

  auto* zeros = app.add_subcommand("zeros", "positive zeros of J0");
  common(zeros);
  cfg.n = 1;
  zeros->add_option("--n", cfg.n, "number of zeros")->check(CLI::Range(std::size_t{1}, std::size_t{10'000'000}));

  auto* heat = app.add_subcommand("heat-content", "heat content of an interval, disc or cylinder");
  common(heat);
  heat->add_option("--t", cfg.t, "time")->required()->check(CLI::PositiveNumber);
  opts["heat-content.L"] = heat->add_option("--L", length, "interval length")->check(CLI::PositiveNumber);
  opts["heat-content.R"] = heat->add_option("--R", radius, "disc radius")->check(CLI::PositiveNumber);

  auto* rig = app.add_subcommand("rigidity", "torsional rigidity of C_{L,R} (or D_R without --L)");
  common(rig);
  opts["rigidity.L"] = rig->add_option("--L", length, "cylinder length")->check(CLI::PositiveNumber);
  opts["rigidity.R"] = rig->add_option("--R", radius, "radius (default 1)")->check(CLI::PositiveNumber);

  auto* tr = app.add_subcommand("trace", "sample a Brownian trace");
  common(tr);
  cfg.domain = "ball:1";
  cfg.start = "center";
  tr->add_option("--domain", cfg.domain, "cyl:L,R or ball:r");
  tr->add_option("--start", cfg.start, "axis, center or uniform")->check(CLI::IsMember({"axis", "center", "uniform"}));
  opts["trace.dt"] = tr->add_option("--dt", dt, "time step (default 1e-4 R^2)")->check(CLI::PositiveNumber);
  tr->add_option("--max-steps", cfg.max_steps)->check(CLI::PositiveNumber);

  auto* tor = app.add_subcommand("torsion", "walk-on-spheres torsion function at a point");
  common(tor);
  tor->add_option("--domain", cfg.domain, "cyl:L,R (L may be inf)");
  tor->add_option("--point", cfg.point, "x,y,z");
  tor->add_option("--n", cfg.n, "number of walks")->check(CLI::PositiveNumber);
  tor->add_option("--trace", cfg.trace, "trace file used as obstacle");
  opts["torsion.eps_tube"] = tor->add_option("--eps-tube", eps_tube)->check(CLI::PositiveNumber);
  opts["torsion.eps_shell"] = tor->add_option("--eps-shell", eps_shell)->check(CLI::PositiveNumber);

  auto* cap = app.add_subcommand("capacity", "Newtonian capacity of the tube around a trace");
  common(cap);
  cap->add_option("--trace", cfg.trace, "trace file")->required();
  cap->add_option("--n", cfg.n, "number of walkers")->check(CLI::PositiveNumber);
  opts["capacity.eps_tube"] = cap->add_option("--eps-tube", eps_tube)->check(CLI::PositiveNumber);
  opts["capacity.eps_shell"] = cap->add_option("--eps-shell", eps_shell)->check(CLI::PositiveNumber);
  opts["capacity.rho"] = cap->add_option("--rho", rho, "launch radius")->check(CLI::PositiveNumber);

  auto* kap = app.add_subcommand("kappa", "expected capacity of a trace from the ball center");
  common(kap);
  opts["kappa.n_traces"] = kap->add_option("--n-traces", n_traces)->check(CLI::PositiveNumber);
  opts["kappa.n_walkers"] = kap->add_option("--n-walkers", n_walkers)->check(CLI::PositiveNumber);
  opts["kappa.eps_tube"] = kap->add_option("--eps-tube", eps_tube)->check(CLI::PositiveNumber);
  opts["kappa.eps_shell"] = kap->add_option("--eps-shell", eps_shell)->check(CLI::PositiveNumber);
  opts["kappa.ball_radius"] = kap->add_option("--radius", ball_radius, "ball radius")->check(CLI::PositiveNumber);

  auto* loss = app.add_subcommand("loss", "expected rigidity loss of C_{L,R}");
  common(loss);
  budget_opts(loss);
  opts["loss.L"] = loss->add_option("--L", length)->check(CLI::PositiveNumber);
  opts["loss.R"] = loss->add_option("--R", radius)->check(CLI::PositiveNumber);
  loss->add_option("--mode", cfg.mode, "uniform or axis")->check(CLI::IsMember({"uniform", "axis"}));

  auto* con = app.add_subcommand("constant", "large-length loss constant on the unit cylinder");
  common(con);
  budget_opts(con);
  con->add_option("--mode", cfg.mode, "c or cprime")->check(CLI::IsMember({"c", "cprime"}));

  auto* rep = app.add_subcommand("report", "run every check and write one entry per bound");
  common(rep);
  budget_opts(rep);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  auto given = [&](const std::string& key) {
    const auto it = opts.find(cfg.command + "." + key);
    return it != opts.end() && it->second->count() > 0;
  };

  if (!given("seed")) {
    if (const char* env = std::getenv(kSeedEnvVar)) {
      try {
        std::size_t used = 0;
        cfg.seed = std::stoull(env, &used, 0);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
      } catch (const std::exception&) {
        throw ConfigError(std::string(kSeedEnvVar) + ": not an unsigned integer");
      }
    }
  }
  if (given("L")) cfg.length = length;
  if (given("R")) cfg.radius = radius;
  if (given("dt")) cfg.dt = dt;
  if (given("rho")) cfg.rho = rho;
  if (given("n_traces")) cfg.n_traces = n_traces;
  if (given("n_points")) cfg.n_points = n_points;
  if (given("n_walkers")) cfg.n_walkers = n_walkers;
  if (given("eps_tube")) cfg.eps_tube = eps_tube;
  if (given("eps_shell")) cfg.eps_shell = eps_shell;
  if (given("window")) cfg.window = window;
  if (given("l_trunc")) cfg.l_trunc = l_trunc;
  if (given("ball_radius")) cfg.ball_radius = ball_radius;

  // Subcommand defaults that depend on which command runs.
  if (cfg.command == "torsion") {
    if (cfg.domain == "ball:1") cfg.domain = "cyl:inf,1";
    if (cfg.point.empty()) cfg.point = "0,0,0";
    if (cfg.n == 1) cfg.n = 100000;
  }
  if (cfg.command == "capacity" && cfg.n == 1) cfg.n = 100000;
  if (cfg.command == "loss") {
    if (!cfg.length) cfg.length = 12.0;
    if (!cfg.radius) cfg.radius = 1.0;
    if (cfg.mode.empty()) cfg.mode = "uniform";
  }
  if (cfg.command == "constant" && cfg.mode.empty()) cfg.mode = "c";
  if (cfg.command == "rigidity" && !cfg.radius) cfg.radius = 1.0;
  if (cfg.command == "heat-content" && !cfg.length && !cfg.radius)
    throw ConfigError("heat-content: give --L, --R or both");
  if (cfg.command != "trace" && cfg.command != "torsion") cfg.domain.clear();
  if (cfg.command != "trace") cfg.start.clear();
  return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Workers workers{cfg.workers};
  std::vector<json> records;
  const std::string& cmd = cfg.command;

  if (cmd == "zeros") {
    const auto z = spectral::bessel_zero_table(cfg.n);
    for (std::size_t k = 0; k < cfg.n; ++k)
      records.push_back(series_record(cfg, "bessel_zero", {{"k", k + 1}}, {(*z)[k], k + 1, 0.0}));
  } else if (cmd == "heat-content") {
    if (cfg.length)
      records.push_back(series_record(cfg, "interval_heat_content", {{"t", cfg.t}, {"L", *cfg.length}},
                                      spectral::interval_heat_content(cfg.t, *cfg.length)));
    if (cfg.radius)
      records.push_back(series_record(cfg, "disc_heat_content", {{"t", cfg.t}, {"R", *cfg.radius}},
                                      spectral::disc_heat_content(cfg.t, *cfg.radius)));
    if (cfg.length && cfg.radius)
      records.push_back(series_record(cfg, "cylinder_heat_content",
                                      {{"t", cfg.t}, {"L", *cfg.length}, {"R", *cfg.radius}},
                                      spectral::cylinder_heat_content(cfg.t, *cfg.length, *cfg.radius)));
  } else if (cmd == "rigidity") {
    const double R = *cfg.radius;
    if (cfg.length) {
      const double L = *cfg.length;
      json r = series_record(cfg, "rigidity_cylinder", {{"L", L}, {"R", R}}, spectral::rigidity_cylinder(L, R));
      const auto s = spectral::theorem11_check(L, R);
      r["sandwich"] = {{"delta", s.delta}, {"upper", s.upper}, {"error_bound", s.tail_bound},
                       {"pass", s.entry().pass}};
      records.push_back(r);
    } else {
      records.push_back(series_record(cfg, "rigidity_disc", {{"R", R}}, {spectral::rigidity_disc(R), 0, 0.0}));
    }
  } else if (cmd == "trace") {
    const Domain d = parse_domain(cfg.domain);
    RngStream rng(cfg.seed, 0);
    PathConfig path{cfg.dt.value_or(1e-4 * d.radius * d.radius), cfg.max_steps};
    const StartMode mode = cfg.start == "axis"      ? StartMode::kAxis
                           : cfg.start == "uniform" ? StartMode::kUniformCylinder
                                                    : StartMode::kCenter;
    TracePolyline trace = [&] {
      if (d.is_ball) {
        const BallSpec ball(Point3::Zero(), d.radius);
        if (mode != StartMode::kCenter) throw ConfigError("start: balls support only 'center'");
        return sample_trace(sample_start(mode, ball, rng), ball, path, rng);
      }
      const CylinderSpec c = make_cylinder(d);
      if (!c.is_finite() && mode != StartMode::kCenter)
        throw ConfigError("start: axis and uniform starts need a finite cylinder");
      return sample_trace(sample_start(mode, c, rng), c, path, rng);
    }();
    if (cfg.out.empty()) {
      write_trace(out, trace, TraceFormat::kText);
      return kOk;
    }
    save_trace(cfg.out, trace);
    json r = record(cfg, "trace");
    r["n_vertices"] = trace.size();
    r["exit_time"] = trace_exit_time(trace);
    r["dt"] = trace.step_dt();
    out << r.dump() << '\n';
    return kOk;
  } else if (cmd == "torsion") {
    const Domain d = parse_domain(cfg.domain);
    if (d.is_ball) throw ConfigError("domain: torsion supports cylinders");
    const CylinderSpec c = make_cylinder(d);
    const Point3 x = parse_point(cfg.point);
    std::optional<TracePolyline> trace;
    if (!cfg.trace.empty()) trace = load_trace(cfg.trace);
    const WosConfig wos = resolve_wos(cfg, 0.02, 1e-3, trace.has_value());
    const Estimate e = torsion_value(x, c, trace ? &*trace : nullptr, wos, cfg.n, RngStream(cfg.seed, 0), workers);
    records.push_back(estimate_record(cfg, "torsion", e, {{"point", {x.x(), x.y(), x.z()}}, {"domain", cfg.domain}},
                                      wos));
  } else if (cmd == "capacity") {
    const TracePolyline trace = load_trace(cfg.trace);
    const WosConfig wos = resolve_wos(cfg, 0.02, 0.005, true);
    const double rho = launch_radius_for(trace, wos);
    const Estimate e = capacity_estimate(trace, wos, cfg.n, RngStream(cfg.seed, 0), workers);
    json r = estimate_record(cfg, "capacity", e, {{"trace", cfg.trace}}, wos);
    r["rho"] = rho;
    records.push_back(r);
  } else if (cmd == "kappa") {
    const WosConfig wos = resolve_wos(cfg, 0.02, 0.005, true);
    const double a = cfg.ball_radius.value_or(1.0);
    const auto k = kappa_estimate(wos, cfg.n_traces.value_or(100), cfg.n_walkers.value_or(1000),
                                  RngStream(cfg.seed, 0), a, workers);
    WosConfig wide = wos;
    wide.eps_tube = 2.0 * wos.eps_tube;
    const json in = {{"ball_radius", a}, {"n_walkers", cfg.n_walkers.value_or(1000)}};
    records.push_back(estimate_record(cfg, "kappa_eps0", k.at_eps0, in, wos));
    records.push_back(estimate_record(cfg, "kappa_2eps0", k.at_2eps0, in, wide));
    json ex = estimate_record(cfg, "kappa_extrapolated", k.extrapolated, in, wos);
    ex["eps_tube"] = 0.0;
    records.push_back(ex);
  } else if (cmd == "loss") {
    const Budgets b = resolve_budgets(cfg);
    const LossMode mode = cfg.mode == "axis" ? LossMode::kAxis : LossMode::kUniform;
    const auto l = estimate_loss(*cfg.length, *cfg.radius, mode, b, RngStream(cfg.seed, 0), workers);
    json r = estimate_record(cfg, "loss", l.value, {{"L", l.length}, {"R", l.radius}, {"mode", to_string(mode)}},
                             b.wos(l.radius));
    r["exact_rigidity"] = l.exact;
    r["fractured"] = to_json(l.fractured);
    r["window_bias_bound"] = l.window_bias_bound;
    r["upper_bound"] = spectral::loss_upper_bound(l.radius);
    records.push_back(r);
  } else if (cmd == "constant") {
    const Budgets b = resolve_budgets(cfg);
    const ConstantMode mode = cfg.mode == "cprime" ? ConstantMode::kCPrime : ConstantMode::kC;
    const auto c = estimate_constant(mode, b, RngStream(cfg.seed, 0), workers);
    const auto& bc = spectral::bound_constants();
    json r = estimate_record(cfg, std::string("constant_") + to_string(mode), c.value, {{"mode", to_string(mode)}},
                             b.wos(1.0));
    r["l_trunc"] = c.l_trunc;
    r["window"] = c.window;
    r["truncation_bound"] = c.truncation_bound;
    r["window_bias_bound"] = c.window_bias_bound;
    r["upper_bound"] = mode == ConstantMode::kC ? bc.c_upper : bc.cp_upper;
    r["lower_bound_coefficient"] = mode == ConstantMode::kC ? bc.c_lower_coeff : bc.cp_lower_coeff;
    records.push_back(r);
  } else if (cmd == "report") {
    const Budgets b = resolve_budgets(cfg);
    const BoundsReport rep = full_report(b, RngStream(cfg.seed, 0), workers);
    const json conf = cfg.to_json();
    for (const auto& e : rep.entries) {
      json r = to_json(e);
      r["config"] = conf;
      records.push_back(r);
    }
    json summary = {{"name", "summary"}, {"pass", rep.pass()}, {"entries", rep.entries.size()}, {"config", conf}};
    records.push_back(summary);
    emit(cfg, records, out);
    if (!rep.pass()) {
      for (const auto& e : rep.entries)
        if (!e.informational && !e.pass) err << "failed: " << e.name << '\n';
      return kBoundFailed;
    }
    return kOk;
  } else {
    throw ConfigError("unknown subcommand '" + cmd + "'");
  }
  emit(cfg, records, out);
  return kOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = parse(argc, argv, out);
    if (!cfg) return kOk;
    return run(*cfg, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  }
}

}  // namespace fracture::cli
