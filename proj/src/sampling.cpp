#include "sttl/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "sttl/error.hpp"

namespace sttl {

namespace {

std::vector<double> uniform_axis(double length, double max_step) {
  std::size_t intervals = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / max_step - 1e-12)));
  std::vector<double> axis(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k)
    axis[k] = length * static_cast<double>(k) / static_cast<double>(intervals);
  return axis;
}

}  // namespace

SampleSet::SampleSet(std::size_t n, double t_f, double epsilon, std::size_t max_points)
    : n_(n), t_f_(t_f), epsilon_(epsilon) {
  if (n_ < 1) fail_invalid("sample set: state dimension must be >= 1");
  if (!(t_f_ > 0.0)) fail_invalid("sample set: horizon must be positive");
  if (!(epsilon_ > 0.0)) fail_invalid("sample set: epsilon must be positive");

  // cell half-diagonal (h/2) sqrt(n+1) <= eps  =>  h <= 2 eps / sqrt(n+1)
  double h = 2.0 * epsilon_ / std::sqrt(static_cast<double>(n_) + 1.0);
  lambda_axis_ = uniform_axis(1.0, h);
  time_axis_ = uniform_axis(t_f_, h);

  double logN = static_cast<double>(n_) * std::log(static_cast<double>(lambda_axis_.size())) +
                std::log(static_cast<double>(time_axis_.size()));
  if (logN > std::log(static_cast<double>(max_points)))
    fail_invalid("sample set: epsilon so small that N exceeds the configured cap; "
                 "raise epsilon, reduce the dimension, or raise the cap");
  std::size_t count = time_axis_.size();
  for (std::size_t i = 0; i < n_; ++i) count *= lambda_axis_.size();
  count_ = count;
}

std::size_t SampleSet::lambda_count() const {
  std::size_t c = 1;
  for (std::size_t i = 0; i < n_; ++i) c *= lambda_axis_.size();
  return c;
}

void SampleSet::lambda_at(std::size_t r, std::vector<double>& out) const {
  out.resize(n_);
  std::size_t base = lambda_axis_.size();
  for (std::size_t i = n_; i-- > 0;) {
    out[i] = lambda_axis_[r % base];
    r /= base;
  }
}

std::vector<std::vector<double>> SampleSet::points() const {
  std::vector<std::vector<double>> pts;
  pts.reserve(count_);
  std::vector<double> lambda;
  for (std::size_t r = 0; r < lambda_count(); ++r) {
    lambda_at(r, lambda);
    for (double tau : time_axis_) {
      std::vector<double> w = lambda;
      w.push_back(tau);
      pts.push_back(std::move(w));
    }
  }
  return pts;
}

double SampleSet::nearest_distance(const std::vector<double>& lambda_tau) const {
  if (lambda_tau.size() != n_ + 1) fail_invalid("sample set: point dimension mismatch");
  auto axis_dist = [](const std::vector<double>& axis, double v) {
    auto it = std::lower_bound(axis.begin(), axis.end(), v);
    double best = std::numeric_limits<double>::infinity();
    if (it != axis.end()) best = std::min(best, std::abs(*it - v));
    if (it != axis.begin()) best = std::min(best, std::abs(*(it - 1) - v));
    return best;
  };
  double sq = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double d = axis_dist(lambda_axis_, lambda_tau[i]);
    sq += d * d;
  }
  double dt = axis_dist(time_axis_, lambda_tau[n_]);
  return std::sqrt(sq + dt * dt);
}

}  // namespace sttl
