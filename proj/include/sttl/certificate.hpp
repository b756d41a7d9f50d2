#ifndef STTL_CERTIFICATE_HPP
#define STTL_CERTIFICATE_HPP

#include <string>

#include "sttl/tube.hpp"

namespace sttl {

// mu(lambda) = -rho of the boundary-mixture signal. Changing lambda_k moves
// coordinate k of the signal by at most `width_factor` everywhere, so mu is
// Lipschitz with constant rho_lip * width_factor * sqrt(n).
double lipschitz_mu(double rho_lip, double width_factor, double n_dims);

// Same bound with the boundary magnitude maxima standing in for the width
// (|gamma_U - gamma_L| <= |gamma_U| + |gamma_L| pointwise). Always at least as
// large as the width-based constant; kept as the cross-check form.
double lipschitz_mu_magnitude(const TubeLipschitz& lip, double rho_lip, double n_dims);

// max{L_L + L_U, L_dL, L_dU, sqrt(L_mu^2 + rho_lip^2 (L_L + L_U)^2)}
double composite_lipschitz(const TubeLipschitz& lip, double l_mu, double rho_lip);

struct ConstraintDiagnostics {
  double worst_separation = 0.0;
  double worst_slope = 0.0;
  double worst_robustness = 0.0;  // max over samples of -rho
  double worst_separation_time = 0.0;
  double worst_slope_time = 0.0;
};

// Output of a synthesis run: the sampled optimum, the composite Lipschitz
// constant, the covering radius, and the resulting slack eta* + L eps. The
// tube is accepted iff slack <= 0.
struct Certificate {
  double eta_star = 0.0;
  double composite_L = 0.0;
  double epsilon = 0.0;
  double slack = 0.0;  // always eta_star + composite_L * epsilon
  bool valid = false;  // always slack <= 0.0

  double rho_lip = 1.0;
  double l_mu = 0.0;
  TubeLipschitz tube_lip;
  ConstraintDiagnostics diagnostics;

  static Certificate make(double eta_star, double composite_L, double epsilon);
};

// Recomputes slack (and the composite constant, when the Lipschitz block is
// present) from the stored fields and compares exactly; mismatch raises an
// integrity error. Returns the validity flag.
bool check_certificate(const Certificate& cert);

}  // namespace sttl

#endif
