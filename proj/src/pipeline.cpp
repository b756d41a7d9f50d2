#include "sttl/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "sttl/error.hpp"

namespace sttl {

using nlohmann::json;

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail_invalid("cannot create output directory '" + dir + "'");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail_invalid("cannot write '" + path + "'");
  os << text;
}

}  // namespace

std::string default_tube_filename(const TaskFile& task) { return task.name + ".tube.json"; }

SynthesizeOutcome run_synthesize(const TaskFile& task, const std::string& out_dir) {
  SynthesizeOutcome out;
  out.result = synthesize(task.formula, task.basis, task.synth, task.horizon, task.dim);

  json report;
  report["task"] = task.name;
  report["task_hash"] = task.hash;
  report["seed"] = task.synth.rng_seed;
  report["accepted"] = out.result.accepted;
  report["message"] = out.result.message;
  report["wall_seconds"] = out.result.trace.wall_seconds;
  report["margin_evaluations"] = out.result.trace.total_margin_evals;
  json steps = json::array();
  for (const auto& s : out.result.trace.steps)
    steps.push_back({{"eta", s.eta},
                     {"feasible", s.feasible},
                     {"best_margin", s.margin},
                     {"margin_evaluations", s.margin_evals}});
  report["bisection"] = std::move(steps);

  if (out.result.tube) {
    TubeArtifact artifact{*out.result.tube, out.result.certificate, task.name, task.hash,
                          task.synth.rng_seed, task.synth.robustness_step()};
    out.artifact = std::move(artifact);
    report["certificate"] = {{"eta_star", out.result.certificate.eta_star},
                             {"composite_L", out.result.certificate.composite_L},
                             {"epsilon", out.result.certificate.epsilon},
                             {"slack", out.result.certificate.slack},
                             {"valid", out.result.certificate.valid}};
  }

  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    out.report_path = out_dir + "/" + task.name + ".synthesis.json";
    write_text(out.report_path, report.dump(2) + "\n");
    if (out.artifact) {
      out.tube_path = out_dir + "/" + default_tube_filename(task);
      save_tube(*out.artifact, out.tube_path);
    }
  }
  return out;
}

SimulateOutcome run_simulate(const TaskFile& task, const TubeArtifact& artifact,
                             const std::string& out_dir) {
  if (artifact.task_hash != task.hash)
    fail_integrity("simulate: tube was synthesized from a different task file (hash mismatch)");
  check_certificate(artifact.certificate);
  if (!artifact.certificate.valid)
    fail_invalid("simulate: tube certificate is not valid; rerun synthesis");
  if (!artifact.tube.widths_positive())
    fail_integrity("simulate: tube widths are not positive on the validation grid");

  Plant plant = builtin_plant(task.plant_id, task.dim);
  std::vector<double> x0 = task.x0;
  if (x0.empty()) fail_invalid("simulate: no initial state (set x0 or define region S)");

  SimulateOutcome out;
  out.all_passed = true;
  if (!out_dir.empty()) ensure_dir(out_dir);

  json runs = json::array();
  for (std::uint64_t seed : task.sim_seeds) {
    SimConfig sc = task.sim;
    sc.seed = seed;
    SimulateRun run;
    run.seed = seed;
    run.trajectory = simulate(plant, artifact.tube, task.controller, x0, sc);
    run.trajectory.tube_id = artifact.task_hash;
    run.report = verify_run(run.trajectory, artifact.tube, *task.formula);

    // monitor/certificate coherence: a contained run against a valid
    // certificate must be strictly positive
    if (run.report.contained && artifact.certificate.valid && !(run.report.rho > 0.0))
      fail_integrity("simulate: contained run monitored nonpositive against a valid certificate");

    bool pass = run.report.contained && run.report.rho > 0.0;
    out.all_passed = out.all_passed && pass;

    if (!out_dir.empty()) {
      run.csv_path = out_dir + "/" + task.name + ".run" + std::to_string(seed) + ".csv";
      std::ofstream cs(run.csv_path, std::ios::binary);
      if (!cs) fail_invalid("cannot write '" + run.csv_path + "'");
      write_trajectory_csv(cs, run.trajectory);
    }
    runs.push_back({{"seed", seed},
                    {"contained", run.report.contained},
                    {"min_margin", run.report.min_margin},
                    {"rho", run.report.rho},
                    {"clamp_count", run.report.clamp_count},
                    {"steps", run.report.steps},
                    {"effort",
                     {{"max", run.report.effort.max_norm},
                      {"mean", run.report.effort.mean_norm},
                      {"integral", run.report.effort.integral_norm}}},
                    {"csv", run.csv_path}});
    out.runs.push_back(std::move(run));
  }

  if (!out_dir.empty()) {
    json report;
    report["task"] = task.name;
    report["task_hash"] = task.hash;
    report["plant"] = task.plant_id;
    report["disturbance"] = disturbance_name(task.sim.policy);
    report["level"] = task.sim.level;
    report["step"] = task.sim.step;
    report["all_passed"] = out.all_passed;
    report["runs"] = std::move(runs);
    out.report_path = out_dir + "/" + task.name + ".runs.json";
    write_text(out.report_path, report.dump(2) + "\n");
  }
  return out;
}

MonitorOutcome run_monitor(const TaskFile& task, const std::string& formula_override,
                           const std::string& csv_path) {
  FormulaPtr phi = task.formula;
  if (!formula_override.empty()) phi = parse_formula(formula_override, task.regions);

  std::ifstream is(csv_path, std::ios::binary);
  if (!is) fail_invalid("cannot open trajectory csv '" + csv_path + "'");
  Trajectory traj = read_trajectory_csv(is);
  Signal sig = traj.as_signal();
  double horizon = formula_horizon(*phi);
  if (sig.span_end() + 1e-9 * std::max(1.0, sig.span_end()) < horizon)
    fail_invalid("monitor: trajectory span is shorter than the formula horizon");

  MonitorOutcome out;
  double step = sig.size() > 1 ? sig.time(1) - sig.time(0) : sig.span_end();
  bool uniform_grid = true;
  for (std::size_t j = 0; j < sig.size(); ++j)
    if (std::abs(sig.time(j) - static_cast<double>(j) * step) >
        1e-9 * std::max(1.0, sig.span_end())) {
      uniform_grid = false;
      break;
    }
  if (uniform_grid && TraceProgram::alignable(*phi, step)) {
    TraceProgram prog = TraceProgram::compile(phi, step);
    TraceProgram::Workspace ws;
    out.rho = prog.rho_at_zero(sig.value(0).data(), sig.size(), sig.dim(), ws);
  } else {
    out.rho = robustness(*phi, sig, 0.0);
  }
  out.satisfied = out.rho > 0.0;
  return out;
}

VerifyOutcome run_verify(const TubeArtifact& artifact) {
  const Certificate& stored = artifact.certificate;
  const Tube& tube = artifact.tube;

  if (!tube.widths_positive())
    fail_integrity("verify: tube widths are not positive on the validation grid");

  double grid_step = stored.epsilon / 10.0;
  TubeLipschitz lip = estimate_lipschitz(tube, grid_step, stored.tube_lip.safety_factor);
  double l_mu = lipschitz_mu(stored.rho_lip, lip.max_width, static_cast<double>(tube.dim()));
  double composite = composite_lipschitz(lip, l_mu, stored.rho_lip);
  double slack = stored.eta_star + composite * stored.epsilon;

  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
  if (!close(composite, stored.composite_L) || !close(l_mu, stored.l_mu) ||
      !close(slack, stored.slack))
    fail_integrity("verify: independent recomputation disagrees with the stored certificate");
  check_certificate(stored);

  VerifyOutcome out;
  out.recomputed_slack = slack;
  out.stored_slack = stored.slack;
  out.valid = slack <= 0.0 && stored.valid;
  return out;
}

}  // namespace sttl
