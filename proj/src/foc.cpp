#include "quadmpc/foc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quadmpc {

DqQuantities dq0_transform(const PhaseQuantities& abc, double theta_e) {
  const double alpha = (2.0 * abc.a - abc.b - abc.c) / 3.0;
  const double beta = (abc.b - abc.c) / std::sqrt(3.0);
  const double c = std::cos(theta_e), s = std::sin(theta_e);
  DqQuantities dq;
  dq.d = c * alpha + s * beta;
  dq.q = -s * alpha + c * beta;
  dq.zero = (abc.a + abc.b + abc.c) / 3.0;
  return dq;
}

PhaseQuantities inverse_dq0(const DqQuantities& dq, double theta_e) {
  const double c = std::cos(theta_e), s = std::sin(theta_e);
  const double alpha = c * dq.d - s * dq.q;
  const double beta = s * dq.d + c * dq.q;
  const double half_sqrt3 = std::sqrt(3.0) / 2.0;
  PhaseQuantities abc;
  abc.a = alpha + dq.zero;
  abc.b = -0.5 * alpha + half_sqrt3 * beta + dq.zero;
  abc.c = -0.5 * alpha - half_sqrt3 * beta + dq.zero;
  return abc;
}

PiGains gains_for_bandwidth(double resistance, double inductance,
                            double bandwidth) {
  if (!(resistance > 0.0) || !(inductance > 0.0) || !(bandwidth > 0.0)) {
    throw std::invalid_argument("foc: plant and bandwidth must be positive");
  }
  return {inductance * bandwidth, resistance * bandwidth};
}

CurrentRegulator::CurrentRegulator(const PiGains& gains, double dt,
                                   double voltage_limit)
    : gains_(gains), dt_(dt), voltage_limit_(voltage_limit) {
  if (!(dt > 0.0) || !(voltage_limit > 0.0)) {
    throw std::invalid_argument("foc: dt and voltage limit must be positive");
  }
}

void CurrentRegulator::reset() {
  integral_d_ = 0.0;
  integral_q_ = 0.0;
}

DqQuantities CurrentRegulator::step(const DqQuantities& reference,
                                    const DqQuantities& measurement) {
  const double ed = reference.d - measurement.d;
  const double eq = reference.q - measurement.q;

  integral_d_ = std::clamp(integral_d_ + gains_.ki * ed * dt_,
                           -voltage_limit_, voltage_limit_);
  integral_q_ = std::clamp(integral_q_ + gains_.ki * eq * dt_,
                           -voltage_limit_, voltage_limit_);

  DqQuantities v;
  v.d = std::clamp(gains_.kp * ed + integral_d_, -voltage_limit_, voltage_limit_);
  v.q = std::clamp(gains_.kp * eq + integral_q_, -voltage_limit_, voltage_limit_);
  v.zero = 0.0;
  return v;
}

}  // namespace quadmpc
