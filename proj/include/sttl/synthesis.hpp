#ifndef STTL_SYNTHESIS_HPP
#define STTL_SYNTHESIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "sttl/constraints.hpp"

namespace sttl {

struct SynthesisTrace {
  struct Step {
    double eta = 0.0;
    bool feasible = false;
    double margin = 0.0;       // best margin known after the step
    std::size_t margin_evals = 0;
  };
  std::vector<Step> steps;
  double wall_seconds = 0.0;
  std::size_t total_margin_evals = 0;
};

struct SynthesisResult {
  std::optional<Tube> tube;  // absent when no feasible tube was found at eta_hi
  Certificate certificate;
  SynthesisTrace trace;
  bool accepted = false;     // certificate.valid and a tube is present
  std::string message;
};

// Waypoint schedule extracted from eventually/until deadlines; drives the
// straight-line seed tube of the first restart.
struct Waypoint {
  double time = 0.0;
  std::vector<double> center;
};

std::vector<Waypoint> extract_waypoints(const StlFormula& phi, double t_f, std::size_t n,
                                        const SynthesisConfig& cfg);

// Decides feasibility at a fixed eta by multi-start pattern search over the
// C^1 curve shapes; "infeasible" means the budget was exhausted, never a
// proof. Deterministic for a fixed config and seed.
std::optional<Tube> feasible_for_eta(FormulaPtr phi, const BasisSpec& basis,
                                     const ConstraintSystem& system, const SynthesisConfig& cfg,
                                     double eta);

// Bisects eta over [eta_lo, eta_hi], keeps the best feasible witness, then
// estimates the Lipschitz data and assembles the certificate with
// slack = eta* + L eps. A positive slack yields accepted = false (rejection),
// not an error.
SynthesisResult synthesize(FormulaPtr phi, const BasisSpec& basis, const SynthesisConfig& cfg,
                           double t_f, std::size_t n);

}  // namespace sttl

#endif
