#ifndef STTL_CONTROLLER_HPP
#define STTL_CONTROLLER_HPP

#include <span>
#include <vector>

#include "sttl/tube.hpp"

namespace sttl {

// Model-free tube-tracking law. The gain is positive when the symmetric part
// of the input map is positive definite and negative otherwise; delta is the
// normalized-error clamp threshold guarding against transient overshoot of
// the boundary during integration.
struct ControllerParams {
  double gain = 1.0;
  double delta = 1.0 - 1e-9;

  void validate() const;
};

struct ControlResult {
  std::vector<double> u;
  int clamped = 0;  // number of components clamped this evaluation
};

// e_i = (2 x_i - (gamma_U + gamma_L)) / (gamma_U - gamma_L); inside the tube
// iff every component lies in (-1, 1). Out-of-tube states simply produce
// |e_i| >= 1.
std::vector<double> normalized_error(const Tube& tube, std::span<const double> x, double t);

// u = -k xi(x,t) eps(x,t) with eps_i = ln((1+e_i)/(1-e_i)) and
// xi_ii = 4 / (gamma_m_i (1 - e_i^2)); u = 0 exactly at the tube center.
ControlResult control(const Tube& tube, const ControllerParams& params, std::span<const double> x,
                      double t);

struct EffortStats {
  double max_norm = 0.0;
  double mean_norm = 0.0;
  double integral_norm = 0.0;  // trapezoidal in time
};

EffortStats control_effort(const std::vector<double>& times,
                           const std::vector<std::vector<double>>& inputs);

}  // namespace sttl

#endif
