#include "sttl/trace_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sttl/error.hpp"

namespace sttl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool aligned_steps(double endpoint, double step, std::size_t& out) {
  double q = endpoint / step;
  double r = std::round(q);
  if (std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q))) return false;
  out = static_cast<std::size_t>(r);
  return true;
}

int compile_node(const StlFormula& f, double step, std::vector<TraceProgram::Node>& nodes) {
  TraceProgram::Node node;
  node.kind = f.kind;
  switch (f.kind) {
    case StlKind::truth: break;
    case StlKind::predicate: node.pred = f.pred.get(); break;
    case StlKind::negation:
      node.child0 = compile_node(*f.children[0], step, nodes);
      break;
    case StlKind::conjunction:
    case StlKind::disjunction:
      node.child0 = compile_node(*f.children[0], step, nodes);
      node.child1 = compile_node(*f.children[1], step, nodes);
      break;
    case StlKind::eventually:
    case StlKind::always:
      node.child0 = compile_node(*f.children[0], step, nodes);
      if (!aligned_steps(f.interval.a, step, node.ia) ||
          !aligned_steps(f.interval.b, step, node.ib))
        fail_invalid("trace evaluator: interval endpoint not aligned to the grid step");
      break;
    case StlKind::until:
      node.child0 = compile_node(*f.children[0], step, nodes);
      node.child1 = compile_node(*f.children[1], step, nodes);
      if (!aligned_steps(f.interval.a, step, node.ia) ||
          !aligned_steps(f.interval.b, step, node.ib))
        fail_invalid("trace evaluator: interval endpoint not aligned to the grid step");
      break;
  }
  nodes.push_back(node);
  return static_cast<int>(nodes.size()) - 1;
}

bool check_alignable(const StlFormula& f, double step) {
  std::size_t tmp;
  for (const auto& c : f.children)
    if (!check_alignable(*c, step)) return false;
  if (f.kind == StlKind::eventually || f.kind == StlKind::always || f.kind == StlKind::until)
    return aligned_steps(f.interval.a, step, tmp) && aligned_steps(f.interval.b, step, tmp);
  return true;
}

// Sliding window extremum over in[j + ia .. j + ib] via monotone deque.
template <bool Max>
void sliding(const std::vector<double>& in, std::size_t in_len, std::size_t ia, std::size_t ib,
             std::vector<double>& out, std::size_t out_len, std::vector<int>& dq) {
  dq.clear();
  std::size_t head = 0;
  auto better = [](double a, double b) { return Max ? a >= b : a <= b; };
  // prime [ia, ib)
  for (std::size_t k = ia; k < ib && k < in_len; ++k) {
    while (dq.size() > head && better(in[k], in[dq.back()])) dq.pop_back();
    dq.push_back(static_cast<int>(k));
  }
  for (std::size_t j = 0; j < out_len; ++j) {
    std::size_t enter = j + ib;
    while (dq.size() > head && better(in[enter], in[dq.back()])) dq.pop_back();
    dq.push_back(static_cast<int>(enter));
    while (static_cast<std::size_t>(dq[head]) < j + ia) ++head;
    out[j] = in[dq[head]];
  }
}

}  // namespace

TraceProgram TraceProgram::compile(FormulaPtr phi, double step) {
  if (!phi) fail_invalid("trace evaluator: null formula");
  if (!(step > 0.0)) fail_invalid("trace evaluator: step must be positive");
  TraceProgram p;
  p.step_ = step;
  compile_node(*phi, step, p.nodes_);
  std::size_t h;
  if (!aligned_steps(formula_horizon(*phi), step, h))
    fail_invalid("trace evaluator: horizon not aligned to the grid step");
  p.horizon_steps_ = h;
  return p;
}

bool TraceProgram::alignable(const StlFormula& phi, double step) {
  return step > 0.0 && check_alignable(phi, step);
}

double TraceProgram::rho_at_zero(const double* states, std::size_t grid_count, std::size_t dim,
                                 Workspace& ws) const {
  if (grid_count < min_grid_count())
    fail_invalid("trace evaluator: signal grid shorter than the formula horizon");
  ws.traces.resize(nodes_.size());
  ws.valid.assign(nodes_.size(), 0);
  for (std::size_t idx = 0; idx < nodes_.size(); ++idx) {
    const Node& nd = nodes_[idx];
    auto& tr = ws.traces[idx];
    switch (nd.kind) {
      case StlKind::truth:
        tr.assign(grid_count, kInf);
        ws.valid[idx] = grid_count;
        break;
      case StlKind::predicate: {
        tr.resize(grid_count);
        const Predicate& p = *nd.pred;
        if (p.custom) {
          for (std::size_t j = 0; j < grid_count; ++j)
            tr[j] = p.custom({states + j * dim, dim});
        } else {
          if (p.dim() != dim) fail_invalid("trace evaluator: predicate dimension mismatch");
          for (std::size_t j = 0; j < grid_count; ++j) {
            const double* x = states + j * dim;
            double h = kInf;
            for (std::size_t i = 0; i < dim; ++i)
              h = std::min(h, p.half_width[i] - std::abs(x[i] - p.center[i]));
            tr[j] = h;
          }
        }
        ws.valid[idx] = grid_count;
        break;
      }
      case StlKind::negation: {
        const auto& c = ws.traces[nd.child0];
        std::size_t len = ws.valid[nd.child0];
        tr.resize(len);
        for (std::size_t j = 0; j < len; ++j) tr[j] = -c[j];
        ws.valid[idx] = len;
        break;
      }
      case StlKind::conjunction:
      case StlKind::disjunction: {
        const auto& c0 = ws.traces[nd.child0];
        const auto& c1 = ws.traces[nd.child1];
        std::size_t len = std::min(ws.valid[nd.child0], ws.valid[nd.child1]);
        tr.resize(len);
        if (nd.kind == StlKind::conjunction)
          for (std::size_t j = 0; j < len; ++j) tr[j] = std::min(c0[j], c1[j]);
        else
          for (std::size_t j = 0; j < len; ++j) tr[j] = std::max(c0[j], c1[j]);
        ws.valid[idx] = len;
        break;
      }
      case StlKind::eventually:
      case StlKind::always: {
        const auto& c = ws.traces[nd.child0];
        std::size_t clen = ws.valid[nd.child0];
        if (clen <= nd.ib) fail_invalid("trace evaluator: window exceeds the signal span");
        std::size_t len = clen - nd.ib;
        tr.resize(len);
        if (nd.kind == StlKind::eventually)
          sliding<true>(c, clen, nd.ia, nd.ib, tr, len, ws.deque);
        else
          sliding<false>(c, clen, nd.ia, nd.ib, tr, len, ws.deque);
        ws.valid[idx] = len;
        break;
      }
      case StlKind::until: {
        const auto& c0 = ws.traces[nd.child0];
        const auto& c1 = ws.traces[nd.child1];
        std::size_t clen = std::min(ws.valid[nd.child0], ws.valid[nd.child1]);
        if (clen <= nd.ib) fail_invalid("trace evaluator: window exceeds the signal span");
        std::size_t len = clen - nd.ib;
        tr.resize(len);
        for (std::size_t j = 0; j < len; ++j) {
          double best = -kInf;
          double run2 = kInf;
          for (std::size_t k = j + nd.ia; k <= j + nd.ib; ++k) {
            run2 = std::min(run2, c1[k]);
            best = std::max(best, std::min(c0[k], run2));
          }
          tr[j] = best;
        }
        ws.valid[idx] = len;
        break;
      }
    }
  }
  if (ws.valid.back() == 0) fail_invalid("trace evaluator: formula horizon exceeds the signal span");
  return ws.traces.back()[0];
}

double trace_robustness(const TraceProgram& prog, const Signal& sig) {
  // verify uniform sampling against the compiled step
  for (std::size_t j = 0; j < sig.size(); ++j) {
    double expect = static_cast<double>(j) * prog.step();
    if (std::abs(sig.time(j) - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
      fail_invalid("trace evaluator: signal is not uniformly sampled at the compiled step");
  }
  TraceProgram::Workspace ws;
  return prog.rho_at_zero(sig.value(0).data(), sig.size(), sig.dim(), ws);
}

}  // namespace sttl
