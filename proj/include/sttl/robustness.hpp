#ifndef STTL_ROBUSTNESS_HPP
#define STTL_ROBUSTNESS_HPP

#include "sttl/signal.hpp"
#include "sttl/stl_formula.hpp"

namespace sttl {

// Quantitative robustness of `sig` against `phi` at time t. Temporal extrema
// are taken over the signal's sample grid restricted to the operator window,
// with both window endpoints always included as evaluation points (signal
// values linearly interpolated there). The until follows the printed
// semantics: the first operand is evaluated at t1, the second over [t+a, t1].
double robustness(const StlFormula& phi, const Signal& sig, double t);

// robustness(phi, sig, 0) > 0, strict.
bool satisfies(const StlFormula& phi, const Signal& sig);

}  // namespace sttl

#endif
