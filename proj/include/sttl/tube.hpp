#ifndef STTL_TUBE_HPP
#define STTL_TUBE_HPP

#include <optional>
#include <span>
#include <vector>

#include "sttl/basis.hpp"

namespace sttl {

enum class Side { lower, upper };

// Per-dimension pair of time-varying boundary curves. Immutable after
// construction; evaluation is closed-form and reentrant.
class Tube {
 public:
  Tube(double t_f, BasisSpec basis, std::vector<std::vector<double>> coeffs_lower,
       std::vector<std::vector<double>> coeffs_upper, std::vector<double> gamma_d,
       std::optional<double> slope_cap);

  std::size_t dim() const { return lower_.size(); }
  double t_f() const { return t_f_; }
  const BasisSpec& basis() const { return basis_; }
  const std::vector<double>& gamma_d() const { return gamma_d_; }
  std::optional<double> slope_cap() const { return slope_cap_; }
  const Curve& curve(std::size_t i, Side side) const {
    return side == Side::lower ? lower_.at(i) : upper_.at(i);
  }

  double boundary(std::size_t i, Side side, double t) const;
  double boundary_derivative(std::size_t i, Side side, double t) const;

  // gamma_s_i = gamma_{i,U} + gamma_{i,L}; gamma_m_i = gamma_{i,U} - gamma_{i,L}.
  // Throws errc::integrity if some width is nonpositive at t.
  void center_and_width(double t, std::span<double> gamma_s, std::span<double> gamma_m) const;

  // gamma_L < gamma_U for all dims on a dense validation grid.
  bool widths_positive(std::size_t grid_count = 2048) const;

 private:
  void check_index(std::size_t i) const;
  double t_f_;
  BasisSpec basis_;
  std::vector<Curve> lower_, upper_;
  std::vector<double> gamma_d_;
  std::optional<double> slope_cap_;
};

// Estimated Lipschitz data for a tube (Assumption-3 constants plus the
// boundary magnitude and width maxima used by the certificate).
struct TubeLipschitz {
  double l_lower = 0.0;    // boundary value, lower curves (inflated)
  double l_upper = 0.0;    // boundary value, upper curves (inflated)
  double l_dlower = 0.0;   // boundary derivative, lower curves (inflated)
  double l_dupper = 0.0;   // boundary derivative, upper curves (inflated)
  double gamma_bar_lower = 0.0;  // max |gamma_L| over the grid (as measured)
  double gamma_bar_upper = 0.0;  // max |gamma_U| over the grid (as measured)
  double max_width = 0.0;        // max_i max_t (gamma_U - gamma_L), inflated
  double grid_step = 0.0;
  double safety_factor = 0.0;
};

// Dense-grid maximization of the exact derivatives: the four Lipschitz
// constants and the width bound are inflated by `safety_factor`; the
// magnitude maxima are reported as measured. grid_step must give at least
// three grid points over [0, t_f].
TubeLipschitz estimate_lipschitz(const Tube& tube, double grid_step, double safety_factor = 1.1);

}  // namespace sttl

#endif
