#include "sttl/signal.hpp"

#include <algorithm>
#include <cmath>

#include "sttl/error.hpp"

namespace sttl {

Signal::Signal(std::vector<double> times, std::vector<double> flat_values, std::size_t dim)
    : times_(std::move(times)), flat_(std::move(flat_values)), dim_(dim) {
  if (times_.empty()) fail_invalid("signal: empty sample set");
  if (dim_ == 0) fail_invalid("signal: zero state dimension");
  if (flat_.size() != times_.size() * dim_)
    fail_invalid("signal: value count does not match times * dim");
  if (times_.front() != 0.0) fail_invalid("signal: times must start at 0");
  for (std::size_t j = 1; j < times_.size(); ++j)
    if (!(times_[j] > times_[j - 1])) fail_invalid("signal: times must be strictly increasing");
  for (double v : flat_)
    if (!std::isfinite(v)) fail_invalid("signal: non-finite sample value");
}

Signal Signal::from_rows(std::vector<double> times, const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) fail_invalid("signal: empty sample set");
  std::size_t dim = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (const auto& r : rows) {
    if (r.size() != dim) fail_invalid("signal: inconsistent value dimension");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Signal(std::move(times), std::move(flat), dim);
}

void Signal::sample(double t, std::span<double> out) const {
  double tol = 1e-9 * std::max(1.0, std::abs(times_.back()));
  if (t < times_.front() - tol || t > times_.back() + tol)
    fail_invalid("signal: sample time outside the recorded span");
  t = std::clamp(t, times_.front(), times_.back());
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  if (hi == 0 || times_[hi] == t) {
    auto v = value(hi);
    std::copy(v.begin(), v.end(), out.begin());
    return;
  }
  std::size_t lo = hi - 1;
  double alpha = (t - times_[lo]) / (times_[hi] - times_[lo]);
  auto vlo = value(lo);
  auto vhi = value(hi);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = vlo[i] + alpha * (vhi[i] - vlo[i]);
}

}  // namespace sttl
