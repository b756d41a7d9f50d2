#include "sttl/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sttl/error.hpp"
#include "sttl/parallel.hpp"

namespace sttl {

void SynthesisConfig::validate(std::size_t n, double t_f) const {
  if (gamma_d.size() != 1 && gamma_d.size() != n)
    fail_invalid("synthesis config: gamma_d must be scalar or one entry per dimension");
  for (double g : gamma_d)
    if (!(g > 0.0)) fail_invalid("synthesis config: gamma_d must be strictly positive");
  if (slope_cap && !(*slope_cap > 0.0))
    fail_invalid("synthesis config: slope cap must be positive when present");
  if (!(eta_lo < eta_hi)) fail_invalid("synthesis config: eta interval must satisfy lo < hi");
  if (!(eta_tolerance > 0.0)) fail_invalid("synthesis config: eta tolerance must be positive");
  if (restarts < 1 || sweeps < 1) fail_invalid("synthesis config: search budget must be positive");
  if (!(epsilon > 0.0)) fail_invalid("synthesis config: epsilon must be positive");
  if (state_lo.size() != n || state_hi.size() != n)
    fail_invalid("synthesis config: state bounds must match the dimension");
  for (std::size_t i = 0; i < n; ++i)
    if (!(state_lo[i] < state_hi[i])) fail_invalid("synthesis config: empty state space");
  double step = robustness_step();
  if (!(step > 0.0)) fail_invalid("synthesis config: robustness grid step must be positive");
  double q = t_f / step;
  if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, q))
    fail_invalid("synthesis config: robustness grid step must divide the horizon");
  (void)t_f;
}

ConstraintSystem::ConstraintSystem(FormulaPtr phi, SampleSet samples, const SynthesisConfig& cfg,
                                   double t_f, std::size_t n)
    : phi_(std::move(phi)),
      samples_(std::move(samples)),
      n_(n),
      t_f_(t_f),
      gamma_d_(cfg.gamma_d),
      slope_cap_(cfg.slope_cap),
      step_(cfg.robustness_step()),
      program_(TraceProgram::compile(phi_, cfg.robustness_step())) {
  if (samples_.dim() != n_) fail_invalid("constraint system: sample set dimension mismatch");
  if (gamma_d_.size() == 1) gamma_d_.assign(n_, gamma_d_[0]);
  grid_count_ = static_cast<std::size_t>(std::round(t_f_ / step_)) + 1;
  if (grid_count_ < program_.min_grid_count())
    fail_invalid("constraint system: formula horizon exceeds the tube horizon");
  if (constraint_count() > cfg.max_constraints)
    fail_invalid("constraint system: sampled constraint count " +
                 std::to_string(constraint_count()) + " exceeds the configured cap");
  lambda_count_ = samples_.lambda_count();
  lambdas_.resize(lambda_count_ * n_);
  std::vector<double> tmp;
  for (std::size_t r = 0; r < lambda_count_; ++r) {
    samples_.lambda_at(r, tmp);
    std::copy(tmp.begin(), tmp.end(), lambdas_.begin() + static_cast<std::ptrdiff_t>(r * n_));
  }
}

std::size_t ConstraintSystem::constraint_count() const {
  std::size_t per_sample = n_ + (slope_cap_ ? 2 * n_ : 0) + 1;
  return samples_.count() * per_sample;
}

double ConstraintSystem::boundary_terms(const Tube& tube, ConstraintDiagnostics* diag) const {
  const auto& taus = samples_.time_axis();
  double tau_step = taus.size() > 1 ? taus[1] - taus[0] : t_f_;
  std::size_t count = taus.size();
  std::vector<double> vlo(count), dlo(count), vhi(count), dhi(count);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_; ++i) {
    tube.curve(i, Side::lower).eval_grid(tau_step, count, vlo.data(), dlo.data());
    tube.curve(i, Side::upper).eval_grid(tau_step, count, vhi.data(), dhi.data());
    for (std::size_t j = 0; j < count; ++j) {
      double sep = vlo[j] - vhi[j] + gamma_d_[i];
      if (diag && sep > diag->worst_separation) {
        diag->worst_separation = sep;
        diag->worst_separation_time = taus[j];
      }
      worst = std::max(worst, sep);
      if (slope_cap_) {
        double sl = std::max(dlo[j], dhi[j]) - *slope_cap_;
        if (diag && sl > diag->worst_slope) {
          diag->worst_slope = sl;
          diag->worst_slope_time = taus[j];
        }
        worst = std::max(worst, sl);
      }
    }
  }
  return worst;
}

// lo/hi are boundary traces on the robustness grid, laid out dim-major.
double ConstraintSystem::lambda_rho(std::size_t lambda_index, const std::vector<double>& lo,
                                    const std::vector<double>& hi, std::vector<double>& states,
                                    TraceProgram::Workspace& tw) const {
  const double* lambda = lambdas_.data() + lambda_index * n_;
  states.resize(grid_count_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* l = lo.data() + i * grid_count_;
    const double* h = hi.data() + i * grid_count_;
    double lam = lambda[i];
    double* out = states.data() + i;
    for (std::size_t j = 0; j < grid_count_; ++j)
      out[j * n_] = lam * h[j] + (1.0 - lam) * l[j];
  }
  return program_.rho_at_zero(states.data(), grid_count_, n_, tw);
}

double ConstraintSystem::margin(const Tube& tube, ConstraintDiagnostics* diag,
                                std::vector<double>* rho_terms, bool parallel) const {
  if (tube.dim() != n_) fail_invalid("constraint system: tube dimension mismatch");
  if (diag) *diag = ConstraintDiagnostics{.worst_separation = -std::numeric_limits<double>::infinity(),
                                          .worst_slope = -std::numeric_limits<double>::infinity(),
                                          .worst_robustness = -std::numeric_limits<double>::infinity()};
  double worst = boundary_terms(tube, diag);

  std::vector<double> lo(n_ * grid_count_), hi(n_ * grid_count_);
  for (std::size_t i = 0; i < n_; ++i) {
    tube.curve(i, Side::lower).eval_grid(step_, grid_count_, lo.data() + i * grid_count_, nullptr);
    tube.curve(i, Side::upper).eval_grid(step_, grid_count_, hi.data() + i * grid_count_, nullptr);
  }

  std::vector<double> terms(lambda_count_);
  if (parallel && lambda_count_ >= 64) {
    unsigned workers = worker_count();
    std::vector<std::vector<double>> states(workers);
    std::vector<TraceProgram::Workspace> tws(workers);
    // block-partitioned by index, reduction below is in index order
    parallel_for(workers, [&](std::size_t w) {
      std::size_t begin = lambda_count_ * w / workers;
      std::size_t end = lambda_count_ * (w + 1) / workers;
      for (std::size_t r = begin; r < end; ++r)
        terms[r] = -lambda_rho(r, lo, hi, states[w], tws[w]);
    });
  } else {
    std::vector<double> states;
    TraceProgram::Workspace tw;
    for (std::size_t r = 0; r < lambda_count_; ++r) terms[r] = -lambda_rho(r, lo, hi, states, tw);
  }
  for (std::size_t r = 0; r < lambda_count_; ++r) {
    if (diag && terms[r] > diag->worst_robustness) diag->worst_robustness = terms[r];
    worst = std::max(worst, terms[r]);
  }
  if (rho_terms) *rho_terms = std::move(terms);
  return worst;
}

double ConstraintSystem::margin_with_cutoff(const Tube& tube, double cutoff,
                                            const std::vector<std::uint32_t>& order, Workspace& ws,
                                            bool* aborted) const {
  if (aborted) *aborted = false;
  double worst = boundary_terms(tube, nullptr);
  if (worst > cutoff) {
    if (aborted) *aborted = true;
    return worst;
  }
  ws.lo.resize(n_ * grid_count_);
  ws.hi.resize(n_ * grid_count_);
  for (std::size_t i = 0; i < n_; ++i) {
    tube.curve(i, Side::lower).eval_grid(step_, grid_count_, ws.lo.data() + i * grid_count_, nullptr);
    tube.curve(i, Side::upper).eval_grid(step_, grid_count_, ws.hi.data() + i * grid_count_, nullptr);
  }
  for (std::uint32_t r : order) {
    worst = std::max(worst, -lambda_rho(r, ws.lo, ws.hi, ws.states, ws.tw));
    if (worst > cutoff) {
      if (aborted) *aborted = true;
      return worst;
    }
  }
  return worst;
}

double evaluate_constraints(const Tube& tube, FormulaPtr phi, const SampleSet& samples,
                            const SynthesisConfig& cfg, ConstraintDiagnostics* diag) {
  ConstraintSystem sys(std::move(phi), samples, cfg, tube.t_f(), tube.dim());
  return sys.margin(tube, diag);
}

}  // namespace sttl
