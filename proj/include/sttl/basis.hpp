#ifndef STTL_BASIS_HPP
#define STTL_BASIS_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace sttl {

// Basis for one boundary curve: a polynomial of the given degree on [0, t_f],
// or a C^1 piecewise polynomial with the given interior breakpoints. A plain
// polynomial is stored as a single piece.
struct BasisSpec {
  enum class Kind { polynomial, piecewise_polynomial };

  Kind kind = Kind::polynomial;
  int degree = 5;
  std::vector<double> breakpoints;  // increasing, spans [0, t_f] inclusive

  std::size_t piece_count() const { return breakpoints.size() - 1; }
  std::size_t coeffs_per_piece() const { return static_cast<std::size_t>(degree) + 1; }
  std::size_t coeff_count() const { return piece_count() * coeffs_per_piece(); }
  // degree+1 coefficients for the first piece, then degree-1 per piece once
  // value/derivative continuity is imposed at each interior breakpoint
  std::size_t free_count() const {
    return coeffs_per_piece() + (piece_count() - 1) * (coeffs_per_piece() - 2);
  }

  static BasisSpec polynomial(int degree, double t_f);
  static BasisSpec piecewise(int degree, std::vector<double> breakpoints);
  void validate() const;

  static std::string kind_name(Kind k);
  static Kind kind_from_name(const std::string& name);
};

// Scalar C^1 piecewise-polynomial curve. Piece k holds monomial coefficients
// in the normalized coordinate s = (t - t_k) / (t_{k+1} - t_k).
class Curve {
 public:
  Curve() = default;
  Curve(BasisSpec spec, std::vector<double> coeffs);

  const BasisSpec& spec() const { return spec_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double t_begin() const { return spec_.breakpoints.front(); }
  double t_end() const { return spec_.breakpoints.back(); }

  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  // Batch evaluation at t_j = j * step, walking pieces in order.
  void eval_grid(double step, std::size_t count, double* values, double* derivs) const;

 private:
  std::size_t piece_at(double t) const;
  BasisSpec spec_;
  std::vector<double> coeffs_;
};

// Free C^1 parameterization of a curve: values and first derivatives at the
// breakpoints plus, for degree >= 4, interior "bump" coefficients per piece
// that vanish with their derivative at both piece ends. This spans exactly
// the C^1 piecewise polynomials of the basis and is the coordinate system the
// synthesis search moves in.
struct CurveShape {
  std::vector<double> knot_values;  // piece_count() + 1
  std::vector<double> knot_derivs;  // piece_count() + 1
  std::vector<double> bumps;        // piece_count() * bumps_per_piece(degree)

  static std::size_t bumps_per_piece(int degree) {
    return degree >= 4 ? static_cast<std::size_t>(degree - 3) : 0;
  }
  std::size_t param_count() const {
    return knot_values.size() + knot_derivs.size() + bumps.size();
  }
};

CurveShape make_zero_shape(const BasisSpec& spec);
std::vector<double> shape_to_coeffs(const BasisSpec& spec, const CurveShape& shape);

}  // namespace sttl

#endif
