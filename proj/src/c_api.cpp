#include "sttl/sttl.h"

#include <optional>
#include <string>

#include "sttl/error.hpp"
#include "sttl/pipeline.hpp"

using namespace sttl;

struct sttl_task {
  TaskFile task;
};

struct sttl_tube {
  TubeArtifact artifact;
};

struct sttl_runs {
  SimulateOutcome outcome;
};

namespace {

thread_local std::string g_last_error;

sttl_status status_from(errc code) {
  switch (code) {
    case errc::ok: return STTL_OK;
    case errc::rejected: return STTL_REJECTED;
    case errc::invalid: return STTL_INVALID;
    case errc::integrity: return STTL_INTEGRITY;
    case errc::internal: return STTL_ERROR;
  }
  return STTL_ERROR;
}

template <typename Fn>
sttl_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return STTL_ERROR;
  } catch (...) {
    g_last_error = "unknown failure";
    return STTL_ERROR;
  }
}

sttl_status require(bool cond, const char* msg) {
  if (!cond) {
    g_last_error = msg;
    return STTL_INVALID;
  }
  return STTL_OK;
}

}  // namespace

extern "C" {

const char* sttl_last_error(void) { return g_last_error.c_str(); }

const char* sttl_version(void) { return "sttl 1.0.0"; }

sttl_status sttl_task_load(const char* path, sttl_task** out) {
  if (auto s = require(path && out, "sttl_task_load: null argument")) return s;
  *out = nullptr;
  return guarded([&]() {
    auto* handle = new sttl_task{load_task(path)};
    *out = handle;
    return STTL_OK;
  });
}

void sttl_task_free(sttl_task* task) { delete task; }

const char* sttl_task_name(const sttl_task* task) { return task ? task->task.name.c_str() : ""; }

size_t sttl_task_dim(const sttl_task* task) { return task ? task->task.dim : 0; }

double sttl_task_horizon(const sttl_task* task) { return task ? task->task.horizon : 0.0; }

sttl_status sttl_task_set_seed(sttl_task* task, uint64_t seed) {
  if (auto s = require(task != nullptr, "null task")) return s;
  task->task.synth.rng_seed = seed;
  return STTL_OK;
}

sttl_status sttl_task_set_epsilon(sttl_task* task, double epsilon) {
  if (auto s = require(task != nullptr, "null task")) return s;
  if (auto s = require(epsilon > 0.0, "epsilon must be positive")) return s;
  task->task.synth.epsilon = epsilon;
  return STTL_OK;
}

sttl_status sttl_task_set_sim_step(sttl_task* task, double step) {
  if (auto s = require(task != nullptr, "null task")) return s;
  if (auto s = require(step > 0.0, "step must be positive")) return s;
  task->task.sim.step = step;
  return STTL_OK;
}

sttl_status sttl_task_disable_slope_cap(sttl_task* task) {
  if (auto s = require(task != nullptr, "null task")) return s;
  task->task.synth.slope_cap.reset();
  return STTL_OK;
}

sttl_status sttl_synthesize(const sttl_task* task, const char* out_dir, sttl_tube** out) {
  if (auto s = require(task && out, "sttl_synthesize: null argument")) return s;
  *out = nullptr;
  return guarded([&]() {
    SynthesizeOutcome oc = run_synthesize(task->task, out_dir ? out_dir : "");
    if (oc.artifact) *out = new sttl_tube{std::move(*oc.artifact)};
    if (!oc.result.accepted) {
      g_last_error = oc.result.message;
      return STTL_REJECTED;
    }
    return STTL_OK;
  });
}

sttl_status sttl_tube_load(const char* path, sttl_tube** out) {
  if (auto s = require(path && out, "sttl_tube_load: null argument")) return s;
  *out = nullptr;
  return guarded([&]() {
    *out = new sttl_tube{load_tube(path)};
    return STTL_OK;
  });
}

sttl_status sttl_tube_save(const sttl_tube* tube, const char* path) {
  if (auto s = require(tube && path, "sttl_tube_save: null argument")) return s;
  return guarded([&]() {
    save_tube(tube->artifact, path);
    return STTL_OK;
  });
}

void sttl_tube_free(sttl_tube* tube) { delete tube; }

double sttl_tube_eta_star(const sttl_tube* tube) {
  return tube ? tube->artifact.certificate.eta_star : 0.0;
}

double sttl_tube_lipschitz(const sttl_tube* tube) {
  return tube ? tube->artifact.certificate.composite_L : 0.0;
}

double sttl_tube_epsilon(const sttl_tube* tube) {
  return tube ? tube->artifact.certificate.epsilon : 0.0;
}

double sttl_tube_slack(const sttl_tube* tube) {
  return tube ? tube->artifact.certificate.slack : 0.0;
}

int sttl_tube_valid(const sttl_tube* tube) {
  return tube && tube->artifact.certificate.valid ? 1 : 0;
}

size_t sttl_tube_dim(const sttl_tube* tube) { return tube ? tube->artifact.tube.dim() : 0; }

sttl_status sttl_tube_boundary(const sttl_tube* tube, size_t dim_index, int side, double t,
                               double* out) {
  if (auto s = require(tube && out, "sttl_tube_boundary: null argument")) return s;
  return guarded([&]() {
    *out = tube->artifact.tube.boundary(dim_index, side ? Side::upper : Side::lower, t);
    return STTL_OK;
  });
}

sttl_status sttl_verify(const char* tube_path, double* slack_out) {
  if (auto s = require(tube_path != nullptr, "sttl_verify: null path")) return s;
  return guarded([&]() {
    TubeArtifact artifact = load_tube(tube_path);
    VerifyOutcome oc = run_verify(artifact);
    if (slack_out) *slack_out = oc.recomputed_slack;
    if (!oc.valid) {
      g_last_error = "certificate recomputes as invalid (slack > 0)";
      return STTL_REJECTED;
    }
    return STTL_OK;
  });
}

sttl_status sttl_simulate(const sttl_task* task, const sttl_tube* tube, const char* out_dir,
                          sttl_runs** out) {
  if (auto s = require(task && tube && out, "sttl_simulate: null argument")) return s;
  *out = nullptr;
  return guarded([&]() {
    SimulateOutcome oc = run_simulate(task->task, tube->artifact, out_dir ? out_dir : "");
    bool passed = oc.all_passed;
    *out = new sttl_runs{std::move(oc)};
    if (!passed) {
      g_last_error = "at least one run left the tube or monitored nonpositive";
      return STTL_REJECTED;
    }
    return STTL_OK;
  });
}

void sttl_runs_free(sttl_runs* runs) { delete runs; }

size_t sttl_runs_count(const sttl_runs* runs) { return runs ? runs->outcome.runs.size() : 0; }

int sttl_runs_contained(const sttl_runs* runs, size_t run_index) {
  if (!runs || run_index >= runs->outcome.runs.size()) return 0;
  return runs->outcome.runs[run_index].report.contained ? 1 : 0;
}

double sttl_runs_rho(const sttl_runs* runs, size_t run_index) {
  if (!runs || run_index >= runs->outcome.runs.size()) return 0.0;
  return runs->outcome.runs[run_index].report.rho;
}

uint64_t sttl_runs_clamp_count(const sttl_runs* runs, size_t run_index) {
  if (!runs || run_index >= runs->outcome.runs.size()) return 0;
  return runs->outcome.runs[run_index].report.clamp_count;
}

double sttl_runs_min_margin(const sttl_runs* runs, size_t run_index) {
  if (!runs || run_index >= runs->outcome.runs.size()) return 0.0;
  return runs->outcome.runs[run_index].report.min_margin;
}

sttl_status sttl_monitor(const sttl_task* task, const char* formula, const char* csv_path,
                         double* rho_out) {
  if (auto s = require(task && csv_path, "sttl_monitor: null argument")) return s;
  return guarded([&]() {
    MonitorOutcome oc = run_monitor(task->task, formula ? formula : "", csv_path);
    if (rho_out) *rho_out = oc.rho;
    if (!oc.satisfied) {
      g_last_error = "trajectory does not satisfy the formula (rho <= 0)";
      return STTL_REJECTED;
    }
    return STTL_OK;
  });
}

}  // extern "C"
