#ifndef STTL_TESTS_ORACLE_ROBUSTNESS_HPP
#define STTL_TESTS_ORACLE_ROBUSTNESS_HPP

// Brute-force reference semantics, independent of the library evaluators:
// materializes every temporal window as an explicit list of evaluation times
// (grid points plus both endpoints) and recurses with no sharing, no sliding
// windows and no memoization. Kept deliberately naive.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sttl/signal.hpp"
#include "sttl/stl_formula.hpp"

namespace oracle {

inline std::vector<double> window_times(const sttl::Signal& sig, double lo, double hi) {
  std::vector<double> ts;
  ts.push_back(lo);
  for (std::size_t j = 0; j < sig.size(); ++j)
    if (sig.time(j) > lo && sig.time(j) < hi) ts.push_back(sig.time(j));
  if (hi > lo) ts.push_back(hi);
  return ts;
}

inline double rho(const sttl::StlFormula& f, const sttl::Signal& sig, double t) {
  using sttl::StlKind;
  switch (f.kind) {
    case StlKind::truth:
      return std::numeric_limits<double>::infinity();
    case StlKind::predicate: {
      std::vector<double> x(sig.dim());
      sig.sample(t, x);
      return f.pred->eval(x);
    }
    case StlKind::negation:
      return -rho(*f.children[0], sig, t);
    case StlKind::conjunction:
      return std::min(rho(*f.children[0], sig, t), rho(*f.children[1], sig, t));
    case StlKind::disjunction:
      return std::max(rho(*f.children[0], sig, t), rho(*f.children[1], sig, t));
    case StlKind::eventually: {
      double best = -std::numeric_limits<double>::infinity();
      for (double t1 : window_times(sig, t + f.interval.a, t + f.interval.b))
        best = std::max(best, rho(*f.children[0], sig, t1));
      return best;
    }
    case StlKind::always: {
      double worst = std::numeric_limits<double>::infinity();
      for (double t1 : window_times(sig, t + f.interval.a, t + f.interval.b))
        worst = std::min(worst, rho(*f.children[0], sig, t1));
      return worst;
    }
    case StlKind::until: {
      // first operand at t1, second over [t+a, t1], as printed
      double best = -std::numeric_limits<double>::infinity();
      for (double t1 : window_times(sig, t + f.interval.a, t + f.interval.b)) {
        double inner = std::numeric_limits<double>::infinity();
        for (double t2 : window_times(sig, t + f.interval.a, t1))
          inner = std::min(inner, rho(*f.children[1], sig, t2));
        best = std::max(best, std::min(rho(*f.children[0], sig, t1), inner));
      }
      return best;
    }
  }
  return 0.0;
}

}  // namespace oracle

#endif
