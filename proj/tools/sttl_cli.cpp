// Command-line front end. Links only the C API so it exercises the same
// surface an external embedder would use.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "sttl/sttl.h"

namespace {

int report_failure(sttl_status st, const char* what) {
  std::fprintf(stderr, "error (%s): %s\n", what, sttl_last_error());
  return static_cast<int>(st);
}

struct TaskOverrides {
  std::uint64_t seed = 0;
  bool seed_set = false;
  double eps = 0.0;
  bool eps_set = false;
  double step = 0.0;
  bool step_set = false;
  bool no_slope_cap = false;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "override the synthesis RNG seed")->each([this](std::string) {
      seed_set = true;
    });
    cmd->add_option("--eps", eps, "override the covering radius epsilon")->each([this](std::string) {
      eps_set = true;
    });
    cmd->add_option("--step", step, "override the simulation step")->each([this](std::string) {
      step_set = true;
    });
    cmd->add_flag("--no-slope-cap", no_slope_cap, "drop the tube slope constraint");
  }

  sttl_status apply(sttl_task* task) const {
    sttl_status st = STTL_OK;
    if (seed_set && (st = sttl_task_set_seed(task, seed))) return st;
    if (eps_set && (st = sttl_task_set_epsilon(task, eps))) return st;
    if (step_set && (st = sttl_task_set_sim_step(task, step))) return st;
    if (no_slope_cap && (st = sttl_task_disable_slope_cap(task))) return st;
    return STTL_OK;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spatiotemporal tube synthesis and control for signal temporal logic"};
  app.require_subcommand(1);

  std::string task_path, tube_path, csv_path, formula, out_dir = "out";
  TaskOverrides ov;

  CLI::App* synth = app.add_subcommand("synthesize", "construct a certified tube for a task");
  synth->add_option("task", task_path, "task file")->required();
  synth->add_option("--out", out_dir, "output directory (default: out)");
  ov.add_flags(synth);

  CLI::App* simc = app.add_subcommand("simulate", "run the closed loop against a tube document");
  simc->add_option("task", task_path, "task file")->required();
  simc->add_option("tube", tube_path, "tube json produced by synthesize")->required();
  simc->add_option("--out", out_dir, "output directory (default: out)");
  ov.add_flags(simc);

  CLI::App* mon = app.add_subcommand("monitor", "robustness of a trajectory CSV");
  mon->add_option("task", task_path, "task file providing regions (and default formula)")
      ->required();
  mon->add_option("csv", csv_path, "trajectory csv (t,x1..xn,u1..un,w1..wn)")->required();
  mon->add_option("--formula", formula, "formula text overriding the task formula");

  CLI::App* ver = app.add_subcommand("verify", "independently recheck a tube certificate");
  ver->add_option("tube", tube_path, "tube json")->required();

  CLI11_PARSE(app, argc, argv);

  if (synth->parsed()) {
    sttl_task* task = nullptr;
    sttl_status st = sttl_task_load(task_path.c_str(), &task);
    if (st) return report_failure(st, "task");
    if ((st = ov.apply(task))) {
      sttl_task_free(task);
      return report_failure(st, "overrides");
    }
    sttl_tube* tube = nullptr;
    st = sttl_synthesize(task, out_dir.c_str(), &tube);
    if (st == STTL_OK || (st == STTL_REJECTED && tube)) {
      std::printf("task        %s\n", sttl_task_name(task));
      std::printf("eta*        % .6f\n", sttl_tube_eta_star(tube));
      std::printf("L           % .6f\n", sttl_tube_lipschitz(tube));
      std::printf("epsilon     % .6f\n", sttl_tube_epsilon(tube));
      std::printf("slack       % .6f\n", sttl_tube_slack(tube));
      std::printf("certificate %s\n", sttl_tube_valid(tube) ? "VALID" : "REJECTED");
    }
    if (st) std::fprintf(stderr, "synthesize: %s\n", sttl_last_error());
    sttl_tube_free(tube);
    sttl_task_free(task);
    return static_cast<int>(st);
  }

  if (simc->parsed()) {
    sttl_task* task = nullptr;
    sttl_status st = sttl_task_load(task_path.c_str(), &task);
    if (st) return report_failure(st, "task");
    if ((st = ov.apply(task))) {
      sttl_task_free(task);
      return report_failure(st, "overrides");
    }
    sttl_tube* tube = nullptr;
    if ((st = sttl_tube_load(tube_path.c_str(), &tube))) {
      sttl_task_free(task);
      return report_failure(st, "tube");
    }
    sttl_runs* runs = nullptr;
    st = sttl_simulate(task, tube, out_dir.c_str(), &runs);
    if (runs) {
      for (size_t r = 0; r < sttl_runs_count(runs); ++r)
        std::printf("run %zu: contained=%s rho=% .6f clamp=%llu min_margin=% .6f\n", r,
                    sttl_runs_contained(runs, r) ? "yes" : "NO", sttl_runs_rho(runs, r),
                    static_cast<unsigned long long>(sttl_runs_clamp_count(runs, r)),
                    sttl_runs_min_margin(runs, r));
    }
    if (st) std::fprintf(stderr, "simulate: %s\n", sttl_last_error());
    sttl_runs_free(runs);
    sttl_tube_free(tube);
    sttl_task_free(task);
    return static_cast<int>(st);
  }

  if (mon->parsed()) {
    sttl_task* task = nullptr;
    sttl_status st = sttl_task_load(task_path.c_str(), &task);
    if (st) return report_failure(st, "task");
    double rho = 0.0;
    st = sttl_monitor(task, formula.empty() ? nullptr : formula.c_str(), csv_path.c_str(), &rho);
    if (st == STTL_OK || st == STTL_REJECTED)
      std::printf("rho = % .9f  =>  %s\n", rho, st == STTL_OK ? "satisfied" : "violated");
    else
      std::fprintf(stderr, "monitor: %s\n", sttl_last_error());
    sttl_task_free(task);
    return static_cast<int>(st);
  }

  if (ver->parsed()) {
    double slack = 0.0;
    sttl_status st = sttl_verify(tube_path.c_str(), &slack);
    if (st == STTL_OK || st == STTL_REJECTED)
      std::printf("recomputed slack = % .9f  =>  %s\n", slack,
                  st == STTL_OK ? "VALID" : "INVALID");
    else
      std::fprintf(stderr, "verify: %s\n", sttl_last_error());
    return static_cast<int>(st);
  }
  return 0;
}
