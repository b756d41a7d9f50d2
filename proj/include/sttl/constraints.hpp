#ifndef STTL_CONSTRAINTS_HPP
#define STTL_CONSTRAINTS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "sttl/certificate.hpp"
#include "sttl/sampling.hpp"
#include "sttl/stl_formula.hpp"
#include "sttl/trace_eval.hpp"
#include "sttl/tube.hpp"

namespace sttl {

struct SynthesisConfig {
  std::vector<double> gamma_d;            // per-dimension minimum separation
  std::optional<double> slope_cap;        // L_s; disabled when absent
  double eta_lo = -1.0;
  double eta_hi = 1.0;
  double eta_tolerance = 1e-3;
  int restarts = 4;
  int sweeps = 300;                       // pattern-search sweeps per restart
  std::vector<double> state_lo, state_hi; // state space X
  std::uint64_t rng_seed = 1;
  double epsilon = 0.1;                   // covering radius of the sample set
  double monitor_step = 0.0;              // 0 -> epsilon / 2
  std::vector<double> x0;                 // optional seeding anchor
  std::size_t max_constraints = 5'000'000;
  double lipschitz_safety = 1.1;
  double lipschitz_grid_divisor = 10.0;   // estimation step = epsilon / divisor

  double robustness_step() const { return monitor_step > 0.0 ? monitor_step : epsilon * 0.5; }
  void validate(std::size_t n, double t_f) const;
};

// Sampled constraint system of the scenario program for a fixed formula,
// basis and sample set. The reported margin is the smallest eta for which
// every sampled constraint holds:
//   (a) separation  gamma_L(tau_r) - gamma_U(tau_r) + gamma_d      <= eta
//   (b) slope       dgamma_{L,U}(tau_r) - L_s                      <= eta   (optional)
//   (c) robustness  -rho(x_r) for the constant-lambda mixture x_r  <= eta
// Mixtures are evaluated over the full-horizon uniform grid with robustness
// anchored at t = 0; samples sharing a lambda tuple share one mixture signal.
class ConstraintSystem {
 public:
  ConstraintSystem(FormulaPtr phi, SampleSet samples, const SynthesisConfig& cfg, double t_f,
                   std::size_t n);

  std::size_t dim() const { return n_; }
  double t_f() const { return t_f_; }
  const SampleSet& samples() const { return samples_; }
  std::size_t constraint_count() const;

  // Full deterministic evaluation. When parallel is true, lambda blocks are
  // evaluated concurrently and reduced in index order, which is bitwise
  // identical to the sequential pass. Per-lambda -rho values are written to
  // rho_terms when provided.
  double margin(const Tube& tube, ConstraintDiagnostics* diag = nullptr,
                std::vector<double>* rho_terms = nullptr, bool parallel = true) const;

  struct Workspace {
    std::vector<double> lo, hi, states;
    TraceProgram::Workspace tw;
  };

  // Probe variant: evaluates lambda tuples in `order` and gives up as soon as
  // the running margin exceeds `cutoff` (result is then a lower bound and
  // *aborted is set). Deterministic for a fixed order; ws is reused scratch.
  double margin_with_cutoff(const Tube& tube, double cutoff,
                            const std::vector<std::uint32_t>& order, Workspace& ws,
                            bool* aborted) const;

  std::size_t lambda_count() const { return lambda_count_; }

 private:
  double boundary_terms(const Tube& tube, ConstraintDiagnostics* diag) const;
  double lambda_rho(std::size_t lambda_index, const std::vector<double>& lo,
                    const std::vector<double>& hi, std::vector<double>& states,
                    TraceProgram::Workspace& tw) const;

  FormulaPtr phi_;
  SampleSet samples_;
  std::size_t n_;
  double t_f_;
  std::vector<double> gamma_d_;
  std::optional<double> slope_cap_;
  double step_;
  std::size_t grid_count_;
  TraceProgram program_;
  std::size_t lambda_count_;
  std::vector<double> lambdas_;  // lambda_count_ x n_, row-major
};

// Spec-level one-shot form used by tests and diagnostics.
double evaluate_constraints(const Tube& tube, FormulaPtr phi, const SampleSet& samples,
                            const SynthesisConfig& cfg, ConstraintDiagnostics* diag = nullptr);

}  // namespace sttl

#endif
