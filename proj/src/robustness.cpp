#include "sttl/robustness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "sttl/error.hpp"

namespace sttl {

namespace {

class Evaluator {
 public:
  Evaluator(const Signal& sig) : sig_(sig), scratch_(sig.dim()) {}

  double eval(const StlFormula& f, double t) {
    auto key = std::make_pair(&f, std::bit_cast<std::uint64_t>(t));
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    double v = compute(f, t);
    memo_.emplace(key, v);
    return v;
  }

 private:
  const Signal& sig_;
  std::vector<double> scratch_;

  struct KeyHash {
    std::size_t operator()(const std::pair<const StlFormula*, std::uint64_t>& k) const {
      std::size_t h = std::hash<const void*>()(k.first);
      return h ^ (std::hash<std::uint64_t>()(k.second) + 0x9e3779b97f4a7c15ULL + (h << 6));
    }
  };
  std::unordered_map<std::pair<const StlFormula*, std::uint64_t>, double, KeyHash> memo_;

  // Window evaluation points: both endpoints plus every sample strictly inside.
  template <typename Fn>
  void for_window(double lo, double hi, Fn&& fn) {
    fn(lo);
    const auto& times = sig_.times();
    auto it = std::upper_bound(times.begin(), times.end(), lo);
    for (; it != times.end() && *it < hi; ++it) fn(*it);
    if (hi > lo) fn(hi);
  }

  double compute(const StlFormula& f, double t) {
    switch (f.kind) {
      case StlKind::truth:
        return std::numeric_limits<double>::infinity();
      case StlKind::predicate:
        sig_.sample(t, scratch_);
        return f.pred->eval(scratch_);
      case StlKind::negation:
        return -eval(*f.children[0], t);
      case StlKind::conjunction:
        return std::min(eval(*f.children[0], t), eval(*f.children[1], t));
      case StlKind::disjunction:
        return std::max(eval(*f.children[0], t), eval(*f.children[1], t));
      case StlKind::eventually: {
        double best = -std::numeric_limits<double>::infinity();
        for_window(t + f.interval.a, t + f.interval.b,
                   [&](double t1) { best = std::max(best, eval(*f.children[0], t1)); });
        return best;
      }
      case StlKind::always: {
        double worst = std::numeric_limits<double>::infinity();
        for_window(t + f.interval.a, t + f.interval.b,
                   [&](double t1) { worst = std::min(worst, eval(*f.children[0], t1)); });
        return worst;
      }
      case StlKind::until: {
        double best = -std::numeric_limits<double>::infinity();
        double lo = t + f.interval.a;
        double run2 = std::numeric_limits<double>::infinity();
        // run2 accumulates min of the second operand over [t+a, t1] as t1
        // advances through the window points.
        for_window(lo, t + f.interval.b, [&](double t1) {
          run2 = std::min(run2, eval(*f.children[1], t1));
          best = std::max(best, std::min(eval(*f.children[0], t1), run2));
        });
        return best;
      }
    }
    fail_invalid("robustness: unknown formula node");
  }
};

}  // namespace

double robustness(const StlFormula& phi, const Signal& sig, double t) {
  if (sig.size() == 0) fail_invalid("robustness: empty signal");
  if (t < sig.time(0)) fail_invalid("robustness: evaluation time precedes the signal");
  double horizon = formula_horizon(phi);
  if (t + horizon > sig.span_end() + 1e-9 * std::max(1.0, std::abs(sig.span_end())))
    fail_invalid("robustness: formula horizon exceeds the signal span");
  return Evaluator(sig).eval(phi, t);
}

bool satisfies(const StlFormula& phi, const Signal& sig) {
  return robustness(phi, sig, 0.0) > 0.0;
}

}  // namespace sttl
