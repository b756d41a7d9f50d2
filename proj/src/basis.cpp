#include "sttl/basis.hpp"

#include <algorithm>
#include <cmath>

#include "sttl/error.hpp"

namespace sttl {

BasisSpec BasisSpec::polynomial(int degree, double t_f) {
  BasisSpec s;
  s.kind = Kind::polynomial;
  s.degree = degree;
  s.breakpoints = {0.0, t_f};
  s.validate();
  return s;
}

BasisSpec BasisSpec::piecewise(int degree, std::vector<double> breakpoints) {
  BasisSpec s;
  s.kind = Kind::piecewise_polynomial;
  s.degree = degree;
  s.breakpoints = std::move(breakpoints);
  s.validate();
  return s;
}

void BasisSpec::validate() const {
  if (degree < 1) fail_invalid("basis: degree must be >= 1");
  if (breakpoints.size() < 2) fail_invalid("basis: need at least the two interval endpoints");
  if (kind == Kind::polynomial && breakpoints.size() != 2)
    fail_invalid("basis: plain polynomial takes no interior breakpoints");
  if (breakpoints.front() != 0.0) fail_invalid("basis: breakpoints must start at 0");
  for (std::size_t k = 1; k < breakpoints.size(); ++k)
    if (!(breakpoints[k] > breakpoints[k - 1]))
      fail_invalid("basis: breakpoints must be strictly increasing");
  if (free_count() < 2) fail_invalid("basis: fewer than 2 free coefficients");
}

std::string BasisSpec::kind_name(Kind k) {
  return k == Kind::polynomial ? "polynomial" : "piecewise_polynomial";
}

BasisSpec::Kind BasisSpec::kind_from_name(const std::string& name) {
  if (name == "polynomial") return Kind::polynomial;
  if (name == "piecewise_polynomial") return Kind::piecewise_polynomial;
  fail_invalid("basis: unknown kind '" + name + "'");
}

Curve::Curve(BasisSpec spec, std::vector<double> coeffs)
    : spec_(std::move(spec)), coeffs_(std::move(coeffs)) {
  spec_.validate();
  if (coeffs_.size() != spec_.coeff_count())
    fail_invalid("curve: coefficient count does not match the basis");
}

std::size_t Curve::piece_at(double t) const {
  const auto& bp = spec_.breakpoints;
  double tol = 1e-9 * std::max(1.0, std::abs(bp.back()));
  if (t < bp.front() - tol || t > bp.back() + tol)
    fail_invalid("curve: evaluation time outside [0, t_f]");
  auto it = std::upper_bound(bp.begin(), bp.end(), t);
  std::size_t k = (it == bp.begin()) ? 0 : static_cast<std::size_t>(it - bp.begin()) - 1;
  return std::min(k, spec_.piece_count() - 1);
}

double Curve::value(double t) const {
  std::size_t k = piece_at(t);
  double dt = spec_.breakpoints[k + 1] - spec_.breakpoints[k];
  double s = (t - spec_.breakpoints[k]) / dt;
  const double* c = coeffs_.data() + k * spec_.coeffs_per_piece();
  double v = 0.0;
  for (int j = spec_.degree; j >= 0; --j) v = v * s + c[j];
  return v;
}

double Curve::derivative(double t) const {
  std::size_t k = piece_at(t);
  double dt = spec_.breakpoints[k + 1] - spec_.breakpoints[k];
  double s = (t - spec_.breakpoints[k]) / dt;
  const double* c = coeffs_.data() + k * spec_.coeffs_per_piece();
  double v = 0.0;
  for (int j = spec_.degree; j >= 1; --j) v = v * s + c[j] * j;
  return v / dt;
}

double Curve::second_derivative(double t) const {
  std::size_t k = piece_at(t);
  double dt = spec_.breakpoints[k + 1] - spec_.breakpoints[k];
  double s = (t - spec_.breakpoints[k]) / dt;
  const double* c = coeffs_.data() + k * spec_.coeffs_per_piece();
  double v = 0.0;
  for (int j = spec_.degree; j >= 2; --j) v = v * s + c[j] * j * (j - 1);
  return v / (dt * dt);
}

void Curve::eval_grid(double step, std::size_t count, double* values, double* derivs) const {
  const auto& bp = spec_.breakpoints;
  std::size_t k = 0;
  const int deg = spec_.degree;
  const std::size_t cpp = spec_.coeffs_per_piece();
  for (std::size_t j = 0; j < count; ++j) {
    double t = static_cast<double>(j) * step;
    while (k + 1 < spec_.piece_count() && t >= bp[k + 1]) ++k;
    double dt = bp[k + 1] - bp[k];
    double s = (t - bp[k]) / dt;
    const double* c = coeffs_.data() + k * cpp;
    double v = 0.0;
    for (int d = deg; d >= 0; --d) v = v * s + c[d];
    values[j] = v;
    if (derivs) {
      double dv = 0.0;
      for (int d = deg; d >= 1; --d) dv = dv * s + c[d] * d;
      derivs[j] = dv / dt;
    }
  }
}

CurveShape make_zero_shape(const BasisSpec& spec) {
  CurveShape sh;
  sh.knot_values.assign(spec.piece_count() + 1, 0.0);
  sh.knot_derivs.assign(spec.piece_count() + 1, 0.0);
  sh.bumps.assign(spec.piece_count() * CurveShape::bumps_per_piece(spec.degree), 0.0);
  return sh;
}

std::vector<double> shape_to_coeffs(const BasisSpec& spec, const CurveShape& shape) {
  if (spec.degree < 3)
    fail_invalid("curve shape parameterization requires degree >= 3");
  const std::size_t K = spec.piece_count();
  const std::size_t nb = CurveShape::bumps_per_piece(spec.degree);
  if (shape.knot_values.size() != K + 1 || shape.knot_derivs.size() != K + 1 ||
      shape.bumps.size() != K * nb)
    fail_invalid("curve shape: parameter sizes do not match the basis");

  std::vector<double> coeffs(spec.coeff_count(), 0.0);
  const std::size_t cpp = spec.coeffs_per_piece();
  for (std::size_t k = 0; k < K; ++k) {
    double dt = spec.breakpoints[k + 1] - spec.breakpoints[k];
    double v0 = shape.knot_values[k];
    double v1 = shape.knot_values[k + 1];
    double m0 = shape.knot_derivs[k] * dt;
    double m1 = shape.knot_derivs[k + 1] * dt;
    double* c = coeffs.data() + k * cpp;
    // cubic Hermite part
    c[0] = v0;
    c[1] = m0;
    c[2] = -3.0 * v0 - 2.0 * m0 + 3.0 * v1 - m1;
    c[3] = 2.0 * v0 + m0 - 2.0 * v1 + m1;
    // bumps: b_m(s) = s^2 (1-s)^2 (1-2s)^m, degree 4 + m
    for (std::size_t m = 0; m < nb; ++m) {
      double w = shape.bumps[k * nb + m];
      if (w == 0.0) continue;
      std::vector<double> poly = {0.0, 0.0, 1.0, -2.0, 1.0};  // s^2 (1-s)^2
      for (std::size_t q = 0; q < m; ++q) {
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t d = 0; d < poly.size(); ++d) {
          next[d] += poly[d];
          next[d + 1] -= 2.0 * poly[d];
        }
        poly = std::move(next);
      }
      for (std::size_t d = 0; d < poly.size(); ++d) c[d] += w * poly[d];
    }
  }
  return coeffs;
}

}  // namespace sttl
