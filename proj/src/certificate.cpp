#include "sttl/certificate.hpp"

#include <algorithm>
#include <cmath>

#include "sttl/error.hpp"

namespace sttl {

double lipschitz_mu(double rho_lip, double width_factor, double n_dims) {
  if (rho_lip < 0.0 || width_factor < 0.0 || n_dims < 1.0)
    fail_invalid("lipschitz_mu: inputs must be nonnegative with n >= 1");
  return rho_lip * width_factor * std::sqrt(n_dims);
}

double lipschitz_mu_magnitude(const TubeLipschitz& lip, double rho_lip, double n_dims) {
  return lipschitz_mu(rho_lip, lip.gamma_bar_lower + lip.gamma_bar_upper, n_dims);
}

double composite_lipschitz(const TubeLipschitz& lip, double l_mu, double rho_lip) {
  double sum = lip.l_lower + lip.l_upper;
  double cross = std::sqrt(l_mu * l_mu + rho_lip * rho_lip * sum * sum);
  return std::max({sum, lip.l_dlower, lip.l_dupper, cross});
}

Certificate Certificate::make(double eta_star, double composite_L, double epsilon) {
  Certificate c;
  c.eta_star = eta_star;
  c.composite_L = composite_L;
  c.epsilon = epsilon;
  c.slack = eta_star + composite_L * epsilon;
  c.valid = c.slack <= 0.0;
  return c;
}

bool check_certificate(const Certificate& cert) {
  double slack = cert.eta_star + cert.composite_L * cert.epsilon;
  if (slack != cert.slack)
    fail_integrity("certificate: stored slack disagrees with eta* + L*eps");
  if (cert.valid != (cert.slack <= 0.0))
    fail_integrity("certificate: stored validity flag disagrees with the slack sign");
  if (cert.tube_lip.grid_step > 0.0) {
    double L = composite_lipschitz(cert.tube_lip, cert.l_mu, cert.rho_lip);
    if (L != cert.composite_L)
      fail_integrity("certificate: stored composite Lipschitz constant is inconsistent");
  }
  return cert.valid;
}

}  // namespace sttl
