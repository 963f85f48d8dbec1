// Command-line front end: quadruped scenario runner, planar hopper rollouts,
// a standalone QP solve mode and gait-table inspection.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "quadmpc/gait.hpp"
#include "quadmpc/kernels.hpp"
#include "quadmpc/qp_solver.hpp"
#include "quadmpc/scenario.hpp"
#include "quadmpc/sim_harness.hpp"
#include "quadmpc/slip_hopper.hpp"

namespace {

using namespace quadmpc;

int log_level() {
  const char* lvl = std::getenv("QUADMPC_LOG");
  if (lvl == nullptr) return 1;
  if (std::strcmp(lvl, "quiet") == 0 || std::strcmp(lvl, "off") == 0) return 0;
  if (std::strcmp(lvl, "debug") == 0) return 2;
  return 1;
}

void debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[quadmpc] " << msg << "\n";
}

struct ToolConfig {
  ControllerConfig controller;
  HopperParams hopper;
  double hopper_duration = 10.0;
  double hopper_dt = 5e-4;
  double hopper_xdot_ref = 1.0;
  double hopper_start_height = 0.55;
  double solver_tol = 1e-6;
  int solver_max_iters = 10000;
  long seed = 0;
};

struct Binding {
  std::string key;
  enum Kind { kDouble, kInt, kBool, kLong } kind;
  void* ptr;
};

std::vector<Binding> make_bindings(ToolConfig& c) {
  ControllerConfig& ct = c.controller;
  HopperParams& h = c.hopper;
  std::vector<Binding> b;
  auto d = [&b](const char* k, double& v) { b.push_back({k, Binding::kDouble, &v}); };
  auto i = [&b](const char* k, int& v) { b.push_back({k, Binding::kInt, &v}); };
  auto f = [&b](const char* k, bool& v) { b.push_back({k, Binding::kBool, &v}); };

  d("control.dt", ct.control_dt);
  i("control.ticks_per_mpc", ct.ticks_per_mpc);
  d("control.body_height", ct.body_height);
  d("control.ground_height", ct.ground_height);
  d("control.swing_apex", ct.swing_apex);
  d("control.raibert_gain", ct.raibert_gain);
  d("control.max_step", ct.max_step);
  d("control.swing_kp_x", ct.swing_kp.x());
  d("control.swing_kp_y", ct.swing_kp.y());
  d("control.swing_kp_z", ct.swing_kp.z());
  d("control.swing_kd_x", ct.swing_kd.x());
  d("control.swing_kd_y", ct.swing_kd.y());
  d("control.swing_kd_z", ct.swing_kd.z());
  d("control.qp_tol", ct.qp_tol);
  i("control.qp_max_iters", ct.qp_max_iters);
  d("control.max_anchor_error", ct.max_anchor_error);

  d("body.mass", ct.body.mass);
  d("body.ixx", ct.body.inertia(0, 0));
  d("body.iyy", ct.body.inertia(1, 1));
  d("body.izz", ct.body.inertia(2, 2));

  d("leg.abad_offset", ct.leg.abad_offset);
  d("leg.upper", ct.leg.upper);
  d("leg.lower", ct.leg.lower);

  i("mpc.horizon", ct.mpc.horizon);
  d("mpc.dt", ct.mpc.dt_mpc);
  d("mpc.u_max", ct.mpc.u_max);
  d("mpc.f_min", ct.mpc.f_min);
  d("mpc.mu", ct.mpc.mu);
  d("mpc.r_x", ct.mpc.r_weights.x());
  d("mpc.r_y", ct.mpc.r_weights.y());
  d("mpc.r_z", ct.mpc.r_weights.z());
  static const char* kQNames[12] = {"mpc.q_roll", "mpc.q_pitch", "mpc.q_yaw",
                                    "mpc.q_px",   "mpc.q_py",    "mpc.q_pz",
                                    "mpc.q_wx",   "mpc.q_wy",    "mpc.q_wz",
                                    "mpc.q_vx",   "mpc.q_vy",    "mpc.q_vz"};
  for (int k = 0; k < 12; ++k) d(kQNames[k], ct.mpc.q_weights(k));

  d("hopper.mass", h.mass);
  d("hopper.inertia", h.inertia);
  d("hopper.rest_length", h.rest_length);
  d("hopper.spring_k", h.spring_k);
  d("hopper.spring_damping", h.spring_damping);
  d("hopper.thrust_dr", h.thrust_dr);
  d("hopper.speed_gain", h.speed_gain);
  d("hopper.servo_omega", h.servo_omega);
  d("hopper.pitch_kp", h.pitch_kp);
  d("hopper.pitch_kd", h.pitch_kd);
  f("hopper.servos_enabled", h.servos_enabled);
  d("hopper.duration", c.hopper_duration);
  d("hopper.dt", c.hopper_dt);
  d("hopper.xdot_ref", c.hopper_xdot_ref);
  d("hopper.start_height", c.hopper_start_height);

  d("solver.tol", c.solver_tol);
  i("solver.max_iters", c.solver_max_iters);
  b.push_back({"seed", Binding::kLong, &c.seed});
  return b;
}

void apply_value(std::vector<Binding>& bindings, const std::string& key,
                 const std::string& value) {
  for (Binding& bind : bindings) {
    if (bind.key != key) continue;
    try {
      switch (bind.kind) {
        case Binding::kDouble:
          *static_cast<double*>(bind.ptr) = std::stod(value);
          return;
        case Binding::kInt:
          *static_cast<int*>(bind.ptr) = std::stoi(value);
          return;
        case Binding::kLong:
          *static_cast<long*>(bind.ptr) = std::stol(value);
          return;
        case Binding::kBool: {
          bool& target = *static_cast<bool*>(bind.ptr);
          if (value == "1" || value == "true") {
            target = true;
          } else if (value == "0" || value == "false") {
            target = false;
          } else {
            throw std::runtime_error("expected 0/1/true/false");
          }
          return;
        }
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("bad value for '" + key + "': " + e.what());
    }
  }
  throw std::runtime_error("unknown configuration key '" + key + "'");
}

void dump_config(const std::vector<Binding>& bindings, std::ostream& out) {
  char buf[40];
  for (const Binding& bind : bindings) {
    out << bind.key << " = ";
    switch (bind.kind) {
      case Binding::kDouble:
        std::snprintf(buf, sizeof(buf), "%.17g", *static_cast<double*>(bind.ptr));
        out << buf;
        break;
      case Binding::kInt:
        out << *static_cast<int*>(bind.ptr);
        break;
      case Binding::kLong:
        out << *static_cast<long*>(bind.ptr);
        break;
      case Binding::kBool:
        out << (*static_cast<bool*>(bind.ptr) ? 1 : 0);
        break;
    }
    out << '\n';
  }
}

void load_config_file(std::vector<Binding>& bindings, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  std::string raw;
  int line = 0;
  while (std::getline(f, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    const std::string s = strip(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + " line " + std::to_string(line) +
                               ": expected key = value");
    }
    apply_value(bindings, strip(s.substr(0, eq)), strip(s.substr(eq + 1)));
  }
}

void apply_overrides(std::vector<Binding>& bindings,
                     const std::vector<std::string>& sets) {
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("--set needs key=value, got '" + kv + "'");
    }
    apply_value(bindings, kv.substr(0, eq), kv.substr(eq + 1));
  }
}

// ---------------------------------------------------------------------------

int run_one_scenario(const std::string& path, const ToolConfig& cfg,
                     const std::string& out_dir) {
  Scenario sc;
  try {
    sc = load_scenario(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  debug("running scenario '" + sc.name + "' (" + gait_name(sc.gait) + ", " +
        std::to_string(sc.duration) + " s)");
  SimResult res;
  try {
    res = run_scenario(sc, cfg.controller);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::filesystem::create_directories(out_dir);
  const std::string csv_path = out_dir + "/" + sc.name + ".csv";
  const std::string metrics_path = out_dir + "/" + sc.name + "_metrics.txt";
  {
    std::ofstream csv(csv_path);
    write_csv(res.log, csv);
  }
  {
    std::ofstream metrics(metrics_path);
    write_metrics(res.metrics, metrics);
  }
  if (log_level() >= 1) {
    std::ostringstream summary;
    write_metrics(res.metrics, summary);
    std::cout << "# " << sc.name << "\n" << summary.str();
  }
  debug("wrote " + csv_path + " and " + metrics_path);

  if (res.metrics.fell || !res.metrics.error.empty()) {
    std::cerr << "simulation failed: "
              << (res.metrics.error.empty() ? "fall detected"
                                            : res.metrics.error)
              << " at t = " << res.metrics.fall_time << " s\n";
    return 2;
  }
  return 0;
}

int cmd_run(const std::vector<std::string>& scenarios, const ToolConfig& cfg,
            const std::string& out_dir, int workers) {
  if (scenarios.empty()) {
    std::cerr << "error: run needs at least one --scenario\n";
    return 1;
  }
  if (workers < 1) {
    std::cerr << "error: --workers must be >= 1\n";
    return 1;
  }

  std::vector<int> codes(scenarios.size(), 0);
  if (workers == 1 || scenarios.size() == 1) {
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      codes[i] = run_one_scenario(scenarios[i], cfg, out_dir);
    }
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    const int n = std::min<std::size_t>(workers, scenarios.size());
    for (int w = 0; w < n; ++w) {
      pool.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < scenarios.size();
             i = next.fetch_add(1)) {
          codes[i] = run_one_scenario(scenarios[i], cfg, out_dir);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }
  int worst = 0;
  for (int c : codes) worst = std::max(worst, c);
  return worst;
}

int cmd_hopper(const ToolConfig& cfg, const std::string& out_dir) {
  HopperState st;
  try {
    st = initial_hopper_state(cfg.hopper, cfg.hopper_start_height);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  SlipHopper hopper(cfg.hopper, st);

  std::filesystem::create_directories(out_dir);
  const std::string csv_path = out_dir + "/hopper.csv";
  std::ofstream csv(csv_path);
  csv << "time,x,z,vx,vz,pitch,pitch_rate,leg_angle,leg_length,rest_length,"
         "phase,energy\n";
  char buf[32];
  const auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    csv << buf << sep;
  };
  const long steps = std::lround(cfg.hopper_duration / cfg.hopper_dt);
  int code = 0;
  for (long i = 0; i <= steps; ++i) {
    const HopperState& s = hopper.state();
    put(s.t, ',');
    put(s.x, ',');
    put(s.z, ',');
    put(s.vx, ',');
    put(s.vz, ',');
    put(s.pitch, ',');
    put(s.pitch_rate, ',');
    put(s.leg_angle, ',');
    put(s.leg_length, ',');
    put(s.rest_length, ',');
    csv << static_cast<int>(s.phase) << ',';
    std::snprintf(buf, sizeof(buf), "%.9g", hopper_energy(s, cfg.hopper));
    csv << buf << '\n';
    if (i == steps) break;
    try {
      hopper.step(cfg.hopper_xdot_ref, cfg.hopper_dt);
    } catch (const std::exception& e) {
      std::cerr << "simulation failed: " << e.what() << "\n";
      code = 2;
      break;
    }
  }
  debug("wrote " + csv_path);

  if (log_level() >= 1) {
    std::cout << "hops = " << hopper.hops().size() << "\n";
    if (!hopper.hops().empty()) {
      const HopRecord& last = hopper.hops().back();
      std::snprintf(buf, sizeof(buf), "%.9g", last.mean_vx);
      std::cout << "last_hop_mean_vx = " << buf << "\n";
      std::snprintf(buf, sizeof(buf), "%.9g", last.apex_z);
      std::cout << "last_hop_apex = " << buf << "\n";
    }
  }
  return code;
}

QpProblem read_qp_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open problem file: " + path);
  std::string text, line;
  while (std::getline(f, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    text += line + "\n";
  }
  std::istringstream in(text);

  auto expect = [&](const char* label) {
    std::string tok;
    if (!(in >> tok) || tok != label) {
      throw std::runtime_error(std::string("problem file: expected '") + label +
                               "', got '" + tok + "'");
    }
  };
  auto numbers = [&](Eigen::Ref<Eigen::MatrixXd> m, const char* what) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        std::string tok;
        if (!(in >> tok)) {
          throw std::runtime_error(std::string("problem file: ran out of data in ") + what);
        }
        try {
          m(r, c) = std::stod(tok);
        } catch (const std::exception&) {
          throw std::runtime_error("problem file: bad number '" + tok + "' in " + what);
        }
      }
    }
  };

  expect("dims:");
  int n = 0, m = 0;
  if (!(in >> n >> m) || n < 1 || m < 0) {
    throw std::runtime_error("problem file: bad dims");
  }
  QpProblem qp;
  qp.h.resize(n, n);
  qp.g.resize(n);
  qp.c.resize(m, n);
  qp.lower.resize(m);
  qp.upper.resize(m);
  expect("H:");
  numbers(qp.h, "H");
  expect("g:");
  numbers(qp.g, "g");
  expect("C:");
  numbers(qp.c, "C");
  expect("l:");
  numbers(qp.lower, "l");
  expect("u:");
  numbers(qp.upper, "u");
  return qp;
}

int cmd_qp(const std::string& path, const ToolConfig& cfg) {
  QpProblem qp;
  try {
    qp = read_qp_file(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  QpSolver solver;
  QpSolution sol;
  try {
    sol = solver.solve(qp, nullptr, cfg.solver_tol, cfg.solver_max_iters);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const char* status = sol.status == QpStatus::kSolved ? "solved"
                       : sol.status == QpStatus::kMaxIters ? "max_iters"
                                                           : "primal_infeasible";
  char buf[40];
  std::cout << "status = " << status << "\n";
  std::cout << "iterations = " << sol.iterations << "\n";
  const auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    std::cout << key << " = " << buf << "\n";
  };
  put("objective", sol.objective);
  put("primal_residual", sol.primal_residual);
  put("dual_residual", sol.dual_residual);
  std::cout << "u =";
  for (Eigen::Index i = 0; i < sol.u.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g", sol.u(i));
    std::cout << ' ' << buf;
  }
  std::cout << "\n";
  return sol.status == QpStatus::kSolved ? 0 : 2;
}

int cmd_gaits() {
  constexpr int kSamples = 16;
  static const char* kLegLabels[kNumLegs] = {"FL", "FR", "RL", "RR"};
  for (GaitType type : {GaitType::kStand, GaitType::kTrot, GaitType::kPace,
                        GaitType::kBound, GaitType::kPronk}) {
    const GaitSchedule g = GaitSchedule::make(type);
    std::printf("%s (period %.2f s, duty %.2f)\n", gait_name(type),
                g.cycle_period, g.duty_factor);
    for (int leg = 0; leg < kNumLegs; ++leg) {
      std::string row;
      for (int s = 0; s < kSamples; ++s) {
        const double t = g.cycle_period * (s + 0.5) / kSamples;
        row += g.in_stance(leg, t) ? '#' : '.';
      }
      std::printf("  %s: %s\n", kLegLabels[leg], row.c_str());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "quadmpc: quadruped MPC locomotion and SLIP hopper simulator.\n"
      "Set QUADMPC_LOG to quiet/debug to control verbosity; QUADMPC_KERNEL\n"
      "to scalar/avx2/neon to pin the numeric backend."};
  app.fallthrough();

  std::vector<std::string> scenario_paths;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  std::string config_path;
  std::string problem_path;
  int workers = 1;
  bool dump = false;

  app.add_option("--scenario", scenario_paths,
                 "scenario file (repeatable for batch runs)");
  app.add_option("--out", out_dir, "output directory for CSV logs and metrics");
  app.add_option("--config", config_path, "configuration file to load");
  app.add_option("--set", overrides, "override one configuration key=value");
  app.add_option("--workers", workers, "worker threads for batch scenario runs");
  app.add_option("--problem", problem_path, "QP file for the qp subcommand");
  app.add_flag("--dump-config", dump,
               "print the effective configuration and exit");

  CLI::App* sub_run = app.add_subcommand("run", "run quadruped scenarios");
  CLI::App* sub_hopper = app.add_subcommand("hopper", "run the planar hopper");
  CLI::App* sub_qp =
      app.add_subcommand("qp", "solve a QP from a file and print residuals");
  CLI::App* sub_gaits =
      app.add_subcommand("gaits", "print contact tables of the built-in gaits");
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  ToolConfig cfg;
  std::vector<Binding> bindings = make_bindings(cfg);
  try {
    if (!config_path.empty()) load_config_file(bindings, config_path);
    apply_overrides(bindings, overrides);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (dump) {
    dump_config(bindings, std::cout);
    return 0;
  }

  if (sub_run->parsed()) return cmd_run(scenario_paths, cfg, out_dir, workers);
  if (sub_hopper->parsed()) return cmd_hopper(cfg, out_dir);
  if (sub_qp->parsed()) {
    if (problem_path.empty()) {
      std::cerr << "error: qp needs --problem\n";
      return 1;
    }
    return cmd_qp(problem_path, cfg);
  }
  if (sub_gaits->parsed()) return cmd_gaits();

  std::cerr << "error: no subcommand given (try --help)\n";
  return 1;
}
