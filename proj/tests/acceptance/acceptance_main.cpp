// Acceptance suite for the locomotion stack. Each criterion prints exactly
// one [PASS]/[FAIL] line; the exit code is the number of failed criteria.
//
// Every numerical claim is checked against an oracle that does not share
// code with the implementation under test: finite differences of the
// nonlinear dynamics, fine fixed-step integration of the continuous linear
// model, first-order optimality residuals, a sparse saddle-point solve of
// the uncondensed horizon problem, closed-form flight arcs, and an energy
// audit of the undamped hopper.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "quadmpc/foc.hpp"
#include "quadmpc/linear_model.hpp"
#include "quadmpc/mpc_builder.hpp"
#include "quadmpc/qp_solver.hpp"
#include "quadmpc/scenario.hpp"
#include "quadmpc/sim_harness.hpp"
#include "quadmpc/slip_hopper.hpp"

using namespace quadmpc;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Check {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// CSV streams captured by criteria 4, 5 and 8, re-created by criterion 10.
std::map<std::string, std::string> g_outputs;

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

struct Setup {
  BodyParams params;
  ContactSet feet;
  Vec3 com;
  double yaw = 0.0;
};

Setup random_setup(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Setup s;
  s.yaw = 2.9 * u(rng);
  s.com = Vec3(u(rng), u(rng), 0.3 + 0.1 * u(rng));
  int contacts = 0;
  for (int i = 0; i < kNumLegs; ++i) {
    s.feet.foot_positions[i] =
        s.com + Vec3(0.3 * u(rng), 0.3 * u(rng), -s.com.z());
    s.feet.in_contact[i] = u(rng) > -0.5;
    contacts += s.feet.in_contact[i];
  }
  if (contacts == 0) s.feet.in_contact[0] = true;
  return s;
}

// d(euler)/d(omega) by central differences on the rotation flow
// R(h) = exp([w h]) R; the map is linear in w so unit axes suffice.
Mat3 fd_euler_rate_block(const Mat3& rotation) {
  const double h = 1e-6;
  Mat3 block;
  for (int k = 0; k < 3; ++k) {
    const Vec3 axis = Vec3::Unit(k);
    const Vec3 plus = euler_zyx(exp_so3(axis * h) * rotation);
    const Vec3 minus = euler_zyx(exp_so3(-axis * h) * rotation);
    block.col(k) = (plus - minus) / (2.0 * h);
  }
  return block;
}

// Worst absolute mismatch between the model's force-input columns and central
// differences of the nonlinear rigid-body derivative at the operating point.
double fd_input_block_error(const LinearModel& model, const Setup& s,
                            const std::array<Vec3, kNumLegs>& forces) {
  const double h = 1e-4;
  RobotState state;
  state.rotation = rot_z(s.yaw);
  state.position = s.com;

  double worst = 0.0;
  for (int k = 0; k < model.num_legs(); ++k) {
    const int leg = model.legs[k];
    for (int j = 0; j < 3; ++j) {
      ContactSet plus = s.feet, minus = s.feet;
      for (int i = 0; i < kNumLegs; ++i) {
        if (s.feet.in_contact[i]) {
          plus.forces[i] = forces[i];
          minus.forces[i] = forces[i];
        }
      }
      plus.forces[leg](j) += h;
      minus.forces[leg](j) -= h;
      const StateDerivative dp = rigid_body_derivative(state, s.params, plus);
      const StateDerivative dm = rigid_body_derivative(state, s.params, minus);
      const Vec3 dw =
          (dp.angular_acceleration - dm.angular_acceleration) / (2.0 * h);
      const Vec3 dv = (dp.acceleration - dm.acceleration) / (2.0 * h);
      worst = std::max(
          worst, (dw - model.b_ct.block<3, 1>(6, 3 * k + j)).cwiseAbs().maxCoeff());
      worst = std::max(
          worst, (dv - model.b_ct.block<3, 1>(9, 3 * k + j)).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

// Fine RK4 integration of xdot = A x + B u over one hold interval.
VecX zoh_oracle(const LinearModel& model, const VecX& x0, const VecX& u,
                double dt, int substeps) {
  const auto f = [&](const VecX& x) -> VecX {
    return model.a_ct * x + model.b_ct * u;
  };
  VecX x = x0;
  const double h = dt / substeps;
  for (int i = 0; i < substeps; ++i) {
    const VecX k1 = f(x);
    const VecX k2 = f(x + 0.5 * h * k1);
    const VecX k3 = f(x + 0.5 * h * k2);
    const VecX k4 = f(x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

// Worst violation of the first-order optimality conditions with the
// convention H u + g + C^T y = 0, y >= 0 active above, y <= 0 active below.
double kkt_residual(const QpProblem& p, const QpSolution& sol) {
  const VecX cu = p.c * sol.u;
  const VecX stat = p.h * sol.u + p.g + p.c.transpose() * sol.multipliers;
  double res = stat.size() > 0 ? stat.cwiseAbs().maxCoeff() : 0.0;
  for (int i = 0; i < p.num_constraints(); ++i) {
    res = std::max(res, p.lower(i) - cu(i));
    res = std::max(res, cu(i) - p.upper(i));
    const double y = sol.multipliers(i);
    if (y > 0.0) {
      res = std::max(res, std::min(y, p.upper(i) - cu(i)));
    } else if (y < 0.0) {
      res = std::max(res, std::min(-y, cu(i) - p.lower(i)));
    }
  }
  return res;
}

QpProblem random_problem(std::mt19937& rng, int n, int m) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  QpProblem p;
  MatX factor(n, n);
  for (int i = 0; i < n * n; ++i) factor(i / n, i % n) = gauss(rng);
  p.h = factor.transpose() * factor + 0.1 * MatX::Identity(n, n);
  p.h = ((p.h + p.h.transpose()) / 2.0).eval();
  p.g = VecX::NullaryExpr(n, [&](Eigen::Index) { return gauss(rng); });
  p.c.resize(m, n);
  for (int i = 0; i < m * n; ++i) p.c(i / n, i % n) = gauss(rng);
  const VecX center =
      VecX::NullaryExpr(n, [&](Eigen::Index) { return gauss(rng); });
  const VecX anchor = p.c * center;  // keeps the feasible set nonempty
  p.lower.resize(m);
  p.upper.resize(m);
  for (int i = 0; i < m; ++i) {
    const double slack = 0.1 + std::abs(gauss(rng));
    if (i % 5 == 4) {
      p.lower(i) = p.upper(i) = anchor(i);
    } else {
      p.lower(i) = anchor(i) - slack;
      p.upper(i) = anchor(i) + slack;
    }
  }
  return p;
}

// Minimizer of the condensed objective subject to its equality rows.
VecX equality_constrained_minimum(const QpProblem& qp) {
  std::vector<int> eq_rows;
  for (int i = 0; i < qp.num_constraints(); ++i) {
    if (qp.lower(i) == qp.upper(i)) eq_rows.push_back(i);
  }
  const int n = qp.num_vars();
  const int me = static_cast<int>(eq_rows.size());
  MatX kkt = MatX::Zero(n + me, n + me);
  VecX rhs(n + me);
  kkt.topLeftCorner(n, n) = qp.h;
  for (int i = 0; i < me; ++i) {
    kkt.block(n + i, 0, 1, n) = qp.c.row(eq_rows[i]);
    kkt.block(0, n + i, n, 1) = qp.c.row(eq_rows[i]).transpose();
    rhs(n + i) = qp.lower(eq_rows[i]);
  }
  rhs.head(n) = -qp.g;
  return kkt.partialPivLu().solve(rhs).head(n);
}

// Sparse oracle: keep every state as a variable, impose the dynamics and the
// swing-force zeros as equalities, and solve the full saddle-point system.
VecX sparse_kkt_minimum(const LinearModel& model, const ContactTable& schedule,
                        const ReferenceTrajectory& ref, const MpcConfig& cfg,
                        const Vec13& x0) {
  const int n_steps = cfg.horizon;
  const int nu = model.num_inputs();
  const int nx = 13 * n_steps;
  const int nv = nu * n_steps;
  const int nz = nx + nv;

  std::vector<int> zero_inputs;
  for (int k = 0; k < n_steps; ++k) {
    for (int leg = 0; leg < kNumLegs; ++leg) {
      if (!schedule[k][leg]) {
        for (int j = 0; j < 3; ++j) zero_inputs.push_back(nu * k + 3 * leg + j);
      }
    }
  }
  const int mc = nx + static_cast<int>(zero_inputs.size());

  MatX p = MatX::Zero(nz, nz);
  VecX q = VecX::Zero(nz);
  for (int k = 0; k < n_steps; ++k) {
    p.block<13, 13>(13 * k, 13 * k) = (2.0 * cfg.q_weights).asDiagonal();
    q.segment<13>(13 * k) = -2.0 * cfg.q_weights.cwiseProduct(ref.states[k]);
    for (int leg = 0; leg < kNumLegs; ++leg) {
      p.block<3, 3>(nx + nu * k + 3 * leg, nx + nu * k + 3 * leg) =
          (2.0 * cfg.r_weights).asDiagonal();
    }
  }

  MatX e = MatX::Zero(mc, nz);
  VecX h = VecX::Zero(mc);
  for (int k = 0; k < n_steps; ++k) {
    e.block<13, 13>(13 * k, 13 * k) = MatX::Identity(13, 13);
    e.block(13 * k, nx + nu * k, 13, nu) = -model.b_dt;
    if (k == 0) {
      h.segment<13>(0) = model.a_dt * x0;
    } else {
      e.block<13, 13>(13 * k, 13 * (k - 1)) = -model.a_dt;
    }
  }
  for (std::size_t i = 0; i < zero_inputs.size(); ++i) {
    e(nx + static_cast<int>(i), nx + zero_inputs[i]) = 1.0;
  }

  MatX kkt = MatX::Zero(nz + mc, nz + mc);
  kkt.topLeftCorner(nz, nz) = p;
  kkt.topRightCorner(nz, mc) = e.transpose();
  kkt.bottomLeftCorner(mc, nz) = e;
  VecX rhs(nz + mc);
  rhs.head(nz) = -q;
  rhs.tail(mc) = h;
  return kkt.partialPivLu().solve(rhs).segment(nx, nv);
}

// ---------------------------------------------------------------------------
// Scenario helpers
// ---------------------------------------------------------------------------

Scenario stand_scenario() {
  Scenario sc;
  sc.name = "stand";
  sc.gait = GaitType::kStand;
  sc.duration = 5.0;
  return sc;
}

Scenario trot_scenario() {
  Scenario sc;
  sc.name = "trot";
  sc.gait = GaitType::kTrot;
  sc.duration = 10.0;
  TwistSegment seg;
  seg.start = 0.0;
  seg.command.vx = 0.5;
  sc.commands.push_back(seg);
  return sc;
}

std::string csv_string(const TrajectoryLog& log) {
  std::ostringstream out;
  write_csv(log, out);
  return out.str();
}

double roll_of(const TickRecord& rec) {
  return euler_zyx(rec.state.rotation).x();
}

double mean_heading_vx(const TrajectoryLog& log, double t0, double t1) {
  double sum = 0.0;
  long count = 0;
  for (const TickRecord& rec : log.ticks) {
    if (rec.t < t0 || rec.t > t1) continue;
    sum += (rot_z(rec.state.yaw()).transpose() * rec.state.linear_velocity).x();
    ++count;
  }
  return count > 0 ? sum / count : 0.0;
}

// Serializes the hopper trace in the same layout the CLI uses.
std::string run_hopper_csv(const HopperParams& params, double duration,
                           double xdot_ref, SlipHopper* out_hopper) {
  SlipHopper hopper(params, initial_hopper_state(params, 0.55));
  std::ostringstream csv;
  csv << "time,x,z,vx,vz,pitch,pitch_rate,leg_angle,leg_length,rest_length,"
         "phase,energy\n";
  const double dt = 5e-4;
  const long steps = std::lround(duration / dt);
  char buf[400];
  for (long i = 0; i <= steps; ++i) {
    const HopperState& s = hopper.state();
    std::snprintf(buf, sizeof(buf),
                  "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d,%.9g\n",
                  s.t, s.x, s.z, s.vx, s.vz, s.pitch, s.pitch_rate, s.leg_angle,
                  s.leg_length, s.rest_length, static_cast<int>(s.phase),
                  hopper_energy(s, params));
    csv << buf;
    if (i < steps) hopper.step(xdot_ref, dt);
  }
  if (out_hopper != nullptr) *out_hopper = hopper;
  return csv.str();
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

Check criterion_linearization() {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Setup s = random_setup(rng);
    const LinearModel m = build_continuous(s.params, s.yaw, s.feet, s.com);

    const Mat3 fd = fd_euler_rate_block(rot_z(s.yaw));
    worst = std::max(worst,
                     (fd - m.a_ct.block<3, 3>(0, 6)).cwiseAbs().maxCoeff());
    worst = std::max(
        worst,
        (m.a_ct.block<3, 3>(3, 9) - Mat3::Identity()).cwiseAbs().maxCoeff());
    worst = std::max(
        worst, (m.a_ct.block<3, 1>(9, 12) + s.params.gravity).cwiseAbs().maxCoeff());

    std::array<Vec3, kNumLegs> forces{};
    for (int i = 0; i < kNumLegs; ++i) {
      forces[i] = Vec3(5.0 * u(rng), 5.0 * u(rng), 25.0 + 5.0 * u(rng));
    }
    worst = std::max(worst, fd_input_block_error(m, s, forces));
  }
  return {worst < 1e-5, fmt("worst block error %.2e over 50 samples", worst)};
}

Check criterion_discretization() {
  std::mt19937 rng(102);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Setup s = random_setup(rng);
    const LinearModel m = build_continuous(s.params, s.yaw, s.feet, s.com);
    for (double dt : {0.001, 0.010, 0.025}) {
      const LinearModel d = discretize(m, dt);
      VecX x0 = VecX::Zero(13);
      for (int i = 0; i < 12; ++i) x0(i) = 0.3 * u(rng);
      x0(12) = 1.0;
      VecX uu = VecX::Zero(m.num_inputs());
      for (int i = 0; i < uu.size(); ++i) uu(i) = 30.0 * u(rng);
      const VecX fine = zoh_oracle(m, x0, uu, dt, 1000);
      const VecX hold = d.a_dt * x0 + d.b_dt * uu;
      worst = std::max(worst, (fine - hold).cwiseAbs().maxCoeff());
    }
  }
  return {worst < 1e-8,
          fmt("worst hold-interval error %.2e over 20 models x 3 steps", worst)};
}

Check criterion_qp() {
  std::mt19937 rng(103);
  QpSolver solver;

  double worst_kkt = 0.0;
  int solved = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 59;  // 2..60 variables
    const int m = n + trial % 7;
    const QpProblem p = random_problem(rng, n, m);
    const QpSolution sol = solver.solve(p, nullptr, 1e-7, 60000);
    if (sol.status == QpStatus::kSolved) ++solved;
    worst_kkt = std::max(worst_kkt, kkt_residual(p, sol));
  }

  // Condensation against the sparse saddle-point oracle on small horizons.
  std::mt19937 rng2(104);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double dt = 0.025;
    BodyParams params;
    ContactSet feet;
    const Vec3 com(0.0, 0.0, 0.29);
    for (int i = 0; i < kNumLegs; ++i) {
      feet.foot_positions[i] =
          com + params.hip_offsets[i] + Vec3(0.05 * u(rng2), 0.05 * u(rng2), 0.0);
      feet.foot_positions[i].z() = 0.0;
      feet.in_contact[i] = true;
    }
    const LinearModel model =
        discretize(build_continuous(params, 0.4 * u(rng2), feet, com), dt);

    MpcConfig cfg;
    cfg.horizon = 1 + trial % 3;
    for (int i = 0; i < 13; ++i) cfg.q_weights(i) = 0.5 + std::abs(u(rng2));
    cfg.r_weights = Vec3::Constant(1e-4 + 1e-4 * std::abs(u(rng2)));

    ContactTable schedule(cfg.horizon);
    for (int k = 0; k < cfg.horizon; ++k) {
      int stance = 0;
      for (int leg = 0; leg < kNumLegs; ++leg) {
        schedule[k][leg] = u(rng2) > -0.4;
        stance += schedule[k][leg];
      }
      if (stance == 0) schedule[k][trial % kNumLegs] = true;
    }

    Vec13 x0;
    x0 << 0.02 * u(rng2), 0.02 * u(rng2), 0.3 * u(rng2), 0.1 * u(rng2),
        0.1 * u(rng2), 0.29 + 0.02 * u(rng2), 0.1 * u(rng2), 0.1 * u(rng2),
        0.1 * u(rng2), 0.2 * u(rng2), 0.2 * u(rng2), 0.1 * u(rng2), 1.0;
    Vec13 target = x0;
    target(5) = 0.29;
    target(9) = 0.3 * u(rng2);
    const ReferenceTrajectory ref{
        std::vector<Vec13>(cfg.horizon, target)};

    const QpProblem qp = build_mpc(model, schedule, ref, cfg, x0);
    const VecX condensed = equality_constrained_minimum(qp);
    const VecX sparse = sparse_kkt_minimum(model, schedule, ref, cfg, x0);
    const double rel = (condensed - sparse).cwiseAbs().maxCoeff() /
                       std::max(1.0, sparse.cwiseAbs().maxCoeff());
    worst_rel = std::max(worst_rel, rel);
  }

  const bool ok = solved == 100 && worst_kkt < 1e-5 && worst_rel < 1e-6;
  return {ok, fmt("%d/100 solved, worst KKT %.2e; condensation vs sparse %.2e",
                  solved, worst_kkt, worst_rel)};
}

Check criterion_standing() {
  ControllerConfig cfg;
  const SimResult res = run_scenario(stand_scenario(), cfg);
  g_outputs["stand"] = csv_string(res.log);

  double fz[kNumLegs] = {0.0, 0.0, 0.0, 0.0};
  long count = 0;
  for (const TickRecord& rec : res.log.ticks) {
    if (rec.t < 4.0) continue;
    for (int leg = 0; leg < kNumLegs; ++leg) fz[leg] += rec.forces[leg].z();
    ++count;
  }
  for (double& f : fz) f /= std::max<long>(count, 1);
  const double total = fz[0] + fz[1] + fz[2] + fz[3];
  const double weight = cfg.body.mass * 9.81;
  const double weight_err = std::abs(total - weight) / weight;
  const double asym =
      std::max(std::abs(fz[0] - fz[3]), std::abs(fz[1] - fz[2]));

  const bool ok = !res.metrics.fell && res.metrics.error.empty() &&
                  weight_err < 0.01 && asym < 1e-3;
  return {ok, fmt("weight error %.2f%%, diagonal asymmetry %.1e N, fell=%d",
                  100.0 * weight_err, asym, res.metrics.fell ? 1 : 0)};
}

Check criterion_trot() {
  ControllerConfig cfg;
  const SimResult res = run_scenario(trot_scenario(), cfg);
  g_outputs["trot"] = csv_string(res.log);
  const double mean_vx = mean_heading_vx(res.log, 5.0, 10.0);
  const bool ok = !res.metrics.fell && res.metrics.error.empty() &&
                  std::abs(mean_vx - 0.5) <= 0.1;
  return {ok, fmt("steady-state mean vx %.3f m/s (target 0.5 +/- 0.1), fell=%d",
                  mean_vx, res.metrics.fell ? 1 : 0)};
}

Check criterion_model_error() {
  ControllerConfig cfg;
  Scenario sc = trot_scenario();
  sc.name = "trot_heavy";
  sc.mass_scale = 1.15;
  sc.inertia_scale = 1.15;
  const SimResult res = run_scenario(sc, cfg);
  const double mean_vx = mean_heading_vx(res.log, 5.0, 10.0);
  const bool ok = !res.metrics.fell && res.metrics.error.empty() &&
                  std::abs(mean_vx - 0.5) <= 0.15;
  return {ok,
          fmt("x1.15 mass/inertia: mean vx %.3f m/s (target 0.5 +/- 0.15), "
              "fell=%d",
              mean_vx, res.metrics.fell ? 1 : 0)};
}

Check criterion_disturbance() {
  ControllerConfig cfg;
  Scenario sc = trot_scenario();
  sc.name = "trot_push";
  Disturbance d;
  d.time = 5.0;
  d.impulse = Vec3(0.0, 0.5 * cfg.body.mass, 0.0);
  sc.disturbances.push_back(d);
  const SimResult res = run_scenario(sc, cfg);

  double peak_roll = 0.0;       // in the two seconds after the shove
  double late_roll = 0.0;       // after the recovery deadline
  for (const TickRecord& rec : res.log.ticks) {
    const double roll = std::abs(roll_of(rec));
    if (rec.t >= 5.0 && rec.t < 7.0) peak_roll = std::max(peak_roll, roll);
    if (rec.t >= 7.0) late_roll = std::max(late_roll, roll);
  }
  const bool ok =
      !res.metrics.fell && res.metrics.error.empty() && late_roll < 0.1;
  return {ok,
          fmt("lateral impulse %.2f N*s: peak |roll| %.3f rad, after "
              "recovery %.3f rad, fell=%d",
              0.5 * cfg.body.mass, peak_roll, late_roll,
              res.metrics.fell ? 1 : 0)};
}

Check criterion_hopper() {
  // Speed regulation from rest with the stock controller. The trace is kept
  // for the determinism criterion.
  SlipHopper hopper{HopperParams(), HopperState()};
  std::string error;
  try {
    g_outputs["hopper"] = run_hopper_csv(HopperParams(), 15.0, 1.0, &hopper);
  } catch (const std::exception& e) {
    error = e.what();
  }
  int reached_at = -1;
  for (std::size_t i = 0; i < hopper.hops().size(); ++i) {
    if (std::abs(hopper.hops()[i].mean_vx - 1.0) <= 0.15) {
      reached_at = static_cast<int>(i) + 1;
      break;
    }
  }

  // Energy audit: undamped vertical bounce with the servos frozen.
  HopperParams cons;
  cons.servos_enabled = false;
  cons.thrust_dr = 0.0;
  cons.spring_damping = 0.0;
  SlipHopper bounce(cons, initial_hopper_state(cons, 0.8));
  const double e0 = hopper_energy(bounce.state(), cons);
  double worst_drift = 0.0;
  double last_energy = e0;
  std::size_t seen = 0;
  for (long i = 0; i < std::lround(6.0 / 5e-4); ++i) {
    bounce.step(0.0, 5e-4);
    if (bounce.hops().size() > seen) {  // touchdown closes a hop cycle
      seen = bounce.hops().size();
      const double e = hopper_energy(bounce.state(), cons);
      worst_drift = std::max(worst_drift, std::abs(e - last_energy) / e0);
      last_energy = e;
    }
  }

  const bool ok = error.empty() && reached_at > 0 && reached_at <= 30 &&
                  seen >= 4 && worst_drift < 1e-3;
  std::string detail =
      fmt("reached 1.0 +/- 0.15 m/s at hop %d; conservative per-cycle energy "
          "drift %.1e over %zu cycles",
          reached_at, worst_drift, seen);
  if (!error.empty()) detail += "; error: " + error;
  return {ok, detail};
}

Check criterion_foc() {
  std::mt19937 rng(105);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  double worst_rt = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const PhaseQuantities abc{10.0 * u(rng), 10.0 * u(rng), 10.0 * u(rng)};
    const double theta = 3.2 * u(rng);
    const PhaseQuantities back = inverse_dq0(dq0_transform(abc, theta), theta);
    worst_rt = std::max({worst_rt, std::abs(back.a - abc.a),
                         std::abs(back.b - abc.b), std::abs(back.c - abc.c)});
  }

  // Balanced synchronous currents must map to a constant (d, q) pair.
  const double amp = 7.5, lag = 0.6, omega = 2.0 * M_PI * 60.0;
  DqQuantities first;
  double ripple = 0.0, zero_seq = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double theta = omega * (i * 1e-4);
    const PhaseQuantities abc{amp * std::cos(theta - lag),
                              amp * std::cos(theta - lag - 2.0 * M_PI / 3.0),
                              amp * std::cos(theta - lag + 2.0 * M_PI / 3.0)};
    const DqQuantities dq0 = dq0_transform(abc, theta);
    if (i == 0) first = dq0;
    ripple = std::max({ripple, std::abs(dq0.d - first.d),
                       std::abs(dq0.q - first.q)});
    zero_seq = std::max(zero_seq, std::abs(dq0.zero));
  }

  const bool ok = worst_rt < 1e-12 && ripple < 1e-9 && zero_seq < 1e-9;
  return {ok, fmt("round-trip error %.1e, synchronous ripple %.1e", worst_rt,
                  ripple)};
}

Check criterion_determinism() {
  ControllerConfig cfg;
  const std::string stand2 = csv_string(run_scenario(stand_scenario(), cfg).log);
  const std::string trot2 = csv_string(run_scenario(trot_scenario(), cfg).log);
  std::string hopper2;
  try {
    hopper2 = run_hopper_csv(HopperParams(), 15.0, 1.0, nullptr);
  } catch (const std::exception&) {
    hopper2 = "crash";
  }

  const bool stand_ok = stand2 == g_outputs["stand"];
  const bool trot_ok = trot2 == g_outputs["trot"];
  const bool hopper_ok = hopper2 == g_outputs["hopper"];
  const bool ok = stand_ok && trot_ok && hopper_ok &&
                  !g_outputs["stand"].empty() && !g_outputs["trot"].empty() &&
                  !g_outputs["hopper"].empty();
  return {ok, fmt("bitwise identical reruns: stand=%d trot=%d hopper=%d",
                  stand_ok ? 1 : 0, trot_ok ? 1 : 0, hopper_ok ? 1 : 0)};
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    double budget_s;  // 0 = no stated budget
    Check (*fn)();
  };
  const Entry entries[] = {
      {"linearization fidelity", 5.0, criterion_linearization},
      {"discretization fidelity", 5.0, criterion_discretization},
      {"qp solver correctness", 30.0, criterion_qp},
      {"standing equilibrium", 10.0, criterion_standing},
      {"trot velocity tracking", 60.0, criterion_trot},
      {"model-error robustness", 0.0, criterion_model_error},
      {"disturbance rejection", 0.0, criterion_disturbance},
      {"slip hopper", 10.0, criterion_hopper},
      {"foc sanity", 1.0, criterion_foc},
      {"determinism", 0.0, criterion_determinism},
  };

  int failures = 0;
  int index = 0;
  for (const Entry& entry : entries) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Check check;
    try {
      check = entry.fn();
    } catch (const std::exception& e) {
      check = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    bool ok = check.ok;
    std::string detail = check.detail;
    if (entry.budget_s > 0.0 && elapsed >= entry.budget_s) {
      ok = false;
      detail += fmt("; over %.0f s budget", entry.budget_s);
    }
    std::printf("[%s] criterion %d: %s (%s; %.2f s)\n", ok ? "PASS" : "FAIL",
                index, entry.name, detail.c_str(), elapsed);
    std::fflush(stdout);
    if (!ok) ++failures;
  }

  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures;
}
