#ifndef STTL_PIPELINE_HPP
#define STTL_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "sttl/synthesis.hpp"
#include "sttl/task.hpp"
#include "sttl/tube_io.hpp"

namespace sttl {

struct SynthesizeOutcome {
  std::optional<TubeArtifact> artifact;  // present even when rejected (valid = false)
  SynthesisResult result;
  std::string tube_path;    // written files, empty when out_dir was empty
  std::string report_path;
};

// Runs synthesis for the task and, when out_dir is nonempty, writes
// <name>.tube.json and <name>.synthesis.json there.
SynthesizeOutcome run_synthesize(const TaskFile& task, const std::string& out_dir);

struct SimulateRun {
  std::uint64_t seed = 0;
  RunReport report;
  std::string csv_path;
  Trajectory trajectory;
};

struct SimulateOutcome {
  std::vector<SimulateRun> runs;
  bool all_passed = false;  // contained and rho > 0 for every seed
  std::string report_path;
};

// Refuses artifacts whose task hash differs (integrity) or whose certificate
// is invalid. Simulates every configured seed; writes one CSV per seed plus a
// combined run report when out_dir is nonempty.
SimulateOutcome run_simulate(const TaskFile& task, const TubeArtifact& artifact,
                             const std::string& out_dir);

struct MonitorOutcome {
  double rho = 0.0;
  bool satisfied = false;
};

// formula_override empty -> the task's formula.
MonitorOutcome run_monitor(const TaskFile& task, const std::string& formula_override,
                           const std::string& csv_path);

struct VerifyOutcome {
  bool valid = false;
  double recomputed_slack = 0.0;
  double stored_slack = 0.0;
};

// Recomputes the Lipschitz estimate, the mu constant, the composite constant
// and the slack from the stored tube (not trusting the stored certificate)
// and compares with the stored values at 1e-9; disagreement is an integrity
// failure. Returns the independently recomputed validity.
VerifyOutcome run_verify(const TubeArtifact& artifact);

std::string default_tube_filename(const TaskFile& task);

}  // namespace sttl

#endif
