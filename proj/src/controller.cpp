#include "sttl/controller.hpp"

#include <cmath>

#include "sttl/error.hpp"

namespace sttl {

void ControllerParams::validate() const {
  if (gain == 0.0) fail_invalid("controller: gain must be nonzero");
  if (!(delta > 0.0 && delta < 1.0)) fail_invalid("controller: delta must lie in (0, 1)");
}

std::vector<double> normalized_error(const Tube& tube, std::span<const double> x, double t) {
  std::size_t n = tube.dim();
  if (x.size() != n) fail_invalid("controller: state dimension mismatch");
  std::vector<double> gs(n), gm(n), e(n);
  tube.center_and_width(t, gs, gm);
  for (std::size_t i = 0; i < n; ++i) e[i] = (2.0 * x[i] - gs[i]) / gm[i];
  return e;
}

ControlResult control(const Tube& tube, const ControllerParams& params, std::span<const double> x,
                      double t) {
  params.validate();
  std::size_t n = tube.dim();
  if (x.size() != n) fail_invalid("controller: state dimension mismatch");
  for (double xi : x)
    if (!std::isfinite(xi)) fail_invalid("controller: non-finite state");

  std::vector<double> gs(n), gm(n);
  tube.center_and_width(t, gs, gm);

  ControlResult out;
  out.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double e = (2.0 * x[i] - gs[i]) / gm[i];
    if (e > params.delta) {
      e = params.delta;
      ++out.clamped;
    } else if (e < -params.delta) {
      e = -params.delta;
      ++out.clamped;
    }
    double eps = std::log((1.0 + e) / (1.0 - e));
    double xi = 4.0 / (gm[i] * (1.0 - e * e));
    out.u[i] = -params.gain * xi * eps;
  }
  return out;
}

EffortStats control_effort(const std::vector<double>& times,
                           const std::vector<std::vector<double>>& inputs) {
  if (inputs.empty()) fail_invalid("control effort: empty trajectory");
  if (times.size() != inputs.size()) fail_invalid("control effort: times/inputs length mismatch");
  EffortStats st;
  std::vector<double> norms(inputs.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    double sq = 0.0;
    for (double v : inputs[j]) sq += v * v;
    norms[j] = std::sqrt(sq);
    st.max_norm = std::max(st.max_norm, norms[j]);
    sum += norms[j];
  }
  st.mean_norm = sum / static_cast<double>(inputs.size());
  for (std::size_t j = 1; j < inputs.size(); ++j)
    st.integral_norm += 0.5 * (norms[j] + norms[j - 1]) * (times[j] - times[j - 1]);
  return st;
}

}  // namespace sttl
