#ifndef STTL_TRACE_EVAL_HPP
#define STTL_TRACE_EVAL_HPP

#include <cstddef>
#include <vector>

#include "sttl/signal.hpp"
#include "sttl/stl_formula.hpp"

namespace sttl {

// Robustness engine for signals sampled on a uniform grid t_j = j * step when
// every temporal interval endpoint is an exact multiple of the step. Under
// that alignment all window endpoints fall on grid points, so the computed
// value is identical to the recursive evaluator; each operator is a sliding
// extremum over the child trace, which keeps monitoring linear in the trace
// length. Compile once per (formula, step); evaluation is reentrant with a
// caller-provided workspace.
class TraceProgram {
 public:
  struct Node {
    StlKind kind;
    int child0 = -1;
    int child1 = -1;
    std::size_t ia = 0, ib = 0;  // window offsets, in grid indices
    const Predicate* pred = nullptr;
  };

  // Throws errc::invalid when some interval endpoint is not aligned to step.
  static TraceProgram compile(FormulaPtr phi, double step);

  static bool alignable(const StlFormula& phi, double step);

  double step() const { return step_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  // Number of grid samples needed to evaluate robustness at index 0.
  std::size_t min_grid_count() const { return horizon_steps_ + 1; }

  struct Workspace {
    std::vector<std::vector<double>> traces;  // one per node
    std::vector<std::size_t> valid;           // valid prefix length per node
    std::vector<int> deque;                   // scratch for sliding extrema
  };

  // states: row-major grid_count x dim snapshot of the signal on the grid.
  // Returns rho at t = 0; traces for all nodes are left in ws for inspection.
  double rho_at_zero(const double* states, std::size_t grid_count, std::size_t dim,
                     Workspace& ws) const;

  // Full trace of the root (valid prefix), for callers that need rho at
  // several anchor times.
  const std::vector<double>& root_trace(const Workspace& ws) const { return ws.traces.back(); }

 private:
  std::vector<Node> nodes_;
  double step_ = 0.0;
  std::size_t horizon_steps_ = 0;
};

// Convenience: robustness at t = 0 of a uniformly sampled signal.
double trace_robustness(const TraceProgram& prog, const Signal& sig);

}  // namespace sttl

#endif
