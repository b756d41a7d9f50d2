#ifndef STTL_SAMPLING_HPP
#define STTL_SAMPLING_HPP

#include <cstddef>
#include <vector>

namespace sttl {

// epsilon-net over [0,1]^n x [0, t_f]: a uniform axis-aligned grid whose cell
// half-diagonal is at most epsilon, so every point of the augmented set lies
// within Euclidean distance epsilon of some node. Time is taken in raw units,
// exactly as the ball condition is written; rescaling time changes the
// geometry of the net.
class SampleSet {
 public:
  SampleSet(std::size_t n, double t_f, double epsilon, std::size_t max_points = kDefaultMaxPoints);

  static constexpr std::size_t kDefaultMaxPoints = 20'000'000;

  std::size_t dim() const { return n_; }
  double t_f() const { return t_f_; }
  double epsilon() const { return epsilon_; }
  std::size_t count() const { return count_; }  // N

  // per-axis grids; axis n_ is time
  const std::vector<double>& lambda_axis() const { return lambda_axis_; }
  const std::vector<double>& time_axis() const { return time_axis_; }

  // number of distinct lambda tuples (lambda_axis^ n)
  std::size_t lambda_count() const;
  // r-th lambda tuple in row-major order over the lambda grid
  void lambda_at(std::size_t r, std::vector<double>& out) const;

  // materialized sample list (lambda_1..lambda_n, tau), row-major
  std::vector<std::vector<double>> points() const;

  // Euclidean distance from an arbitrary augmented point to its nearest node.
  double nearest_distance(const std::vector<double>& lambda_tau) const;

 private:
  std::size_t n_;
  double t_f_;
  double epsilon_;
  std::size_t count_;
  std::vector<double> lambda_axis_;
  std::vector<double> time_axis_;
};

}  // namespace sttl

#endif
