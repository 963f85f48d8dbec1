#pragma once

namespace quadmpc {

// Three-phase stator quantities (currents or voltages).
struct PhaseQuantities {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

// Rotor-synchronous direct/quadrature/zero quantities.
struct DqQuantities {
  double d = 0.0;
  double q = 0.0;
  double zero = 0.0;
};

// Amplitude-invariant Clarke followed by a Park rotation through the
// electrical angle: balanced sinusoids of amplitude A synchronous with
// theta_e map to (d, q) of magnitude A. Instantaneous power picks up the
// matching 3/2 factor: p = 3/2 (v_d i_d + v_q i_q) + 3 v_0 i_0.
DqQuantities dq0_transform(const PhaseQuantities& abc, double theta_e);
PhaseQuantities inverse_dq0(const DqQuantities& dq, double theta_e);

struct PiGains {
  double kp = 0.0;  // V/A
  double ki = 0.0;  // V/(A s)
};

// Pole placement against a first-order RL phase: kp = L w_c cancels the
// plant pole through ki = R w_c, leaving a closed loop with bandwidth w_c.
PiGains gains_for_bandwidth(double resistance, double inductance,
                            double bandwidth);

// Discrete PI per rotor-frame axis with a clamped integrator so the state
// can never wind up beyond the voltage limit.
class CurrentRegulator {
 public:
  CurrentRegulator(const PiGains& gains, double dt, double voltage_limit);

  DqQuantities step(const DqQuantities& reference,
                    const DqQuantities& measurement);
  void reset();

  double integrator_d() const { return integral_d_; }
  double integrator_q() const { return integral_q_; }

 private:
  PiGains gains_;
  double dt_;
  double voltage_limit_;
  double integral_d_ = 0.0;
  double integral_q_ = 0.0;
};

}  // namespace quadmpc
