#ifndef STTL_TESTS_SUPPORT_HPP
#define STTL_TESTS_SUPPORT_HPP

#include <random>
#include <string>
#include <vector>

#include "sttl/rng.hpp"
#include "sttl/signal.hpp"
#include "sttl/stl_formula.hpp"

namespace testsup {

inline std::string task_dir() {
#ifdef STTL_TASK_DIR
  return STTL_TASK_DIR;
#else
  return "tasks";
#endif
}

// Random signal with fixed dimension: random strictly increasing times
// starting at 0, values uniform in [-range, range].
inline sttl::Signal random_signal(std::mt19937_64& rng, std::size_t dim, std::size_t max_samples,
                                  double span, double range) {
  std::size_t count = 2 + rng() % (max_samples - 1);
  std::vector<double> times(count);
  times[0] = 0.0;
  for (std::size_t j = 1; j < count; ++j)
    times[j] = times[j - 1] + sttl::uniform(rng, 0.05, span / static_cast<double>(count));
  std::vector<double> flat(count * dim);
  for (double& v : flat) v = sttl::uniform(rng, -range, range);
  return sttl::Signal(std::move(times), std::move(flat), dim);
}

// Random formula over `dim`-dimensional box predicates, bounded depth.
// Intervals stay small so random signals can cover the horizon.
inline sttl::FormulaPtr random_formula(std::mt19937_64& rng, std::size_t dim, int depth,
                                       double max_interval, bool allow_negation = true) {
  using namespace sttl;
  int pick = static_cast<int>(rng() % (depth <= 0 ? 2 : (allow_negation ? 8 : 7)));
  auto base = [&]() {
    std::vector<double> center(dim), half(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      center[i] = uniform(rng, -1.0, 1.0);
      half[i] = uniform(rng, 0.2, 1.5);
    }
    return StlFormula::predicate(Predicate("p", center, half));
  };
  if (depth <= 0) return pick == 0 ? base() : base();
  auto sub = [&](bool neg_ok = true) {
    return random_formula(rng, dim, depth - 1, max_interval, neg_ok);
  };
  auto interval = [&]() {
    double a = uniform(rng, 0.0, max_interval * 0.5);
    double b = a + uniform(rng, 0.0, max_interval * 0.5);
    return Interval{a, b};
  };
  switch (pick) {
    case 0:
    case 1: return base();
    case 2: return StlFormula::conjunction(sub(), sub());
    case 3: return StlFormula::disjunction(sub(), sub());
    case 4: return StlFormula::eventually(interval(), sub());
    case 5: return StlFormula::always(interval(), sub());
    case 6: return StlFormula::until(interval(), sub(), sub());
    default: return StlFormula::negation(sub());
  }
}

}  // namespace testsup

#endif
