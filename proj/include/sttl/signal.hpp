#ifndef STTL_SIGNAL_HPP
#define STTL_SIGNAL_HPP

#include <span>
#include <vector>

namespace sttl {

// Sampled continuous-time signal: strictly increasing times starting at 0,
// one n-vector per sample, linear interpolation between samples. Immutable
// after construction.
class Signal {
 public:
  Signal(std::vector<double> times, std::vector<double> flat_values, std::size_t dim);

  static Signal from_rows(std::vector<double> times, const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return times_.size(); }
  std::size_t dim() const { return dim_; }
  double time(std::size_t j) const { return times_[j]; }
  const std::vector<double>& times() const { return times_; }
  double span_end() const { return times_.back(); }

  std::span<const double> value(std::size_t j) const {
    return {flat_.data() + j * dim_, dim_};
  }

  // Linear interpolation; t must lie within [times.front(), times.back()].
  void sample(double t, std::span<double> out) const;

 private:
  std::vector<double> times_;
  std::vector<double> flat_;  // row-major, size() * dim()
  std::size_t dim_;
};

}  // namespace sttl

#endif
