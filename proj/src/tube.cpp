#include "sttl/tube.hpp"

#include <algorithm>
#include <cmath>

#include "sttl/error.hpp"

namespace sttl {

Tube::Tube(double t_f, BasisSpec basis, std::vector<std::vector<double>> coeffs_lower,
           std::vector<std::vector<double>> coeffs_upper, std::vector<double> gamma_d,
           std::optional<double> slope_cap)
    : t_f_(t_f), basis_(std::move(basis)), gamma_d_(std::move(gamma_d)), slope_cap_(slope_cap) {
  basis_.validate();
  if (!(t_f_ > 0.0)) fail_invalid("tube: horizon must be positive");
  if (std::abs(basis_.breakpoints.back() - t_f_) > 1e-9 * std::max(1.0, t_f_))
    fail_invalid("tube: basis breakpoints must span [0, t_f]");
  if (coeffs_lower.empty() || coeffs_lower.size() != coeffs_upper.size())
    fail_invalid("tube: lower/upper coefficient sets must be nonempty and of equal dimension");
  if (gamma_d_.size() == 1 && coeffs_lower.size() > 1)
    gamma_d_.assign(coeffs_lower.size(), gamma_d_[0]);
  if (gamma_d_.size() != coeffs_lower.size())
    fail_invalid("tube: gamma_d dimension mismatch");
  for (double g : gamma_d_)
    if (!(g > 0.0)) fail_invalid("tube: gamma_d must be strictly positive");
  if (slope_cap_ && !(*slope_cap_ > 0.0)) fail_invalid("tube: slope cap must be positive");
  lower_.reserve(coeffs_lower.size());
  upper_.reserve(coeffs_upper.size());
  for (auto& c : coeffs_lower) lower_.emplace_back(basis_, std::move(c));
  for (auto& c : coeffs_upper) upper_.emplace_back(basis_, std::move(c));
}

void Tube::check_index(std::size_t i) const {
  if (i >= dim()) fail_invalid("tube: dimension index out of range");
}

double Tube::boundary(std::size_t i, Side side, double t) const {
  check_index(i);
  return curve(i, side).value(t);
}

double Tube::boundary_derivative(std::size_t i, Side side, double t) const {
  check_index(i);
  return curve(i, side).derivative(t);
}

void Tube::center_and_width(double t, std::span<double> gamma_s, std::span<double> gamma_m) const {
  if (gamma_s.size() != dim() || gamma_m.size() != dim())
    fail_invalid("tube: output span size mismatch");
  for (std::size_t i = 0; i < dim(); ++i) {
    double lo = lower_[i].value(t);
    double hi = upper_[i].value(t);
    gamma_s[i] = hi + lo;
    gamma_m[i] = hi - lo;
    if (!(gamma_m[i] > 0.0))
      fail_integrity("tube: nonpositive width at t=" + std::to_string(t) +
                     " in dimension " + std::to_string(i + 1));
  }
}

bool Tube::widths_positive(std::size_t grid_count) const {
  for (std::size_t j = 0; j < grid_count; ++j) {
    double t = t_f_ * static_cast<double>(j) / static_cast<double>(grid_count - 1);
    for (std::size_t i = 0; i < dim(); ++i)
      if (!(upper_[i].value(t) - lower_[i].value(t) > 0.0)) return false;
  }
  return true;
}

TubeLipschitz estimate_lipschitz(const Tube& tube, double grid_step, double safety_factor) {
  if (!(grid_step > 0.0)) fail_invalid("estimate_lipschitz: grid step must be positive");
  std::size_t count = static_cast<std::size_t>(std::floor(tube.t_f() / grid_step)) + 1;
  if (count < 3) fail_invalid("estimate_lipschitz: degenerate grid (fewer than 3 points)");

  TubeLipschitz out;
  out.grid_step = grid_step;
  out.safety_factor = safety_factor;

  std::vector<double> vlo(count), dlo(count), vhi(count), dhi(count);
  double l_lo = 0.0, l_hi = 0.0, ld_lo = 0.0, ld_hi = 0.0;
  double bar_lo = 0.0, bar_hi = 0.0, width = 0.0;
  for (std::size_t i = 0; i < tube.dim(); ++i) {
    tube.curve(i, Side::lower).eval_grid(grid_step, count, vlo.data(), dlo.data());
    tube.curve(i, Side::upper).eval_grid(grid_step, count, vhi.data(), dhi.data());
    for (std::size_t j = 0; j < count; ++j) {
      l_lo = std::max(l_lo, std::abs(dlo[j]));
      l_hi = std::max(l_hi, std::abs(dhi[j]));
      bar_lo = std::max(bar_lo, std::abs(vlo[j]));
      bar_hi = std::max(bar_hi, std::abs(vhi[j]));
      width = std::max(width, vhi[j] - vlo[j]);
      if (j > 0) {
        ld_lo = std::max(ld_lo, std::abs(dlo[j] - dlo[j - 1]) / grid_step);
        ld_hi = std::max(ld_hi, std::abs(dhi[j] - dhi[j - 1]) / grid_step);
      }
    }
    // the grid may stop short of t_f when the step does not divide it
    double last = static_cast<double>(count - 1) * grid_step;
    if (last < tube.t_f()) {
      double vl = tube.boundary(i, Side::lower, tube.t_f());
      double vu = tube.boundary(i, Side::upper, tube.t_f());
      l_lo = std::max(l_lo, std::abs(tube.boundary_derivative(i, Side::lower, tube.t_f())));
      l_hi = std::max(l_hi, std::abs(tube.boundary_derivative(i, Side::upper, tube.t_f())));
      bar_lo = std::max(bar_lo, std::abs(vl));
      bar_hi = std::max(bar_hi, std::abs(vu));
      width = std::max(width, vu - vl);
    }
  }
  out.l_lower = l_lo * safety_factor;
  out.l_upper = l_hi * safety_factor;
  out.l_dlower = ld_lo * safety_factor;
  out.l_dupper = ld_hi * safety_factor;
  out.gamma_bar_lower = bar_lo;
  out.gamma_bar_upper = bar_hi;
  out.max_width = width * safety_factor;
  return out;
}

}  // namespace sttl
