#include "sttl/sim.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sttl/error.hpp"
#include "sttl/rng.hpp"
#include "sttl/trace_eval.hpp"

namespace sttl {

DisturbancePolicy disturbance_from_name(const std::string& name) {
  if (name == "zero") return DisturbancePolicy::zero;
  if (name == "constant") return DisturbancePolicy::constant;
  if (name == "noise") return DisturbancePolicy::noise;
  if (name == "sinusoid") return DisturbancePolicy::sinusoid;
  fail_invalid("unknown disturbance policy '" + name + "'");
}

std::string disturbance_name(DisturbancePolicy p) {
  switch (p) {
    case DisturbancePolicy::zero: return "zero";
    case DisturbancePolicy::constant: return "constant";
    case DisturbancePolicy::noise: return "noise";
    case DisturbancePolicy::sinusoid: return "sinusoid";
  }
  return "?";
}

Signal Trajectory::as_signal() const { return Signal::from_rows(times, states); }

namespace {

void rk4_step(const Plant& plant, std::vector<double>& x, std::span<const double> u,
              std::span<const double> w, double dt, std::vector<double>& k1,
              std::vector<double>& k2, std::vector<double>& k3, std::vector<double>& k4,
              std::vector<double>& tmp) {
  std::size_t n = x.size();
  plant.derivative(x, u, w, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
  plant.derivative(tmp, u, w, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
  plant.derivative(tmp, u, w, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
  plant.derivative(tmp, u, w, k4);
  for (std::size_t i = 0; i < n; ++i)
    x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

Trajectory simulate(const Plant& plant, const Tube& tube, const ControllerParams& params,
                    const std::vector<double>& x0, const SimConfig& cfg) {
  std::size_t n = plant.n;
  if (tube.dim() != n) fail_invalid("simulate: plant and tube dimension mismatch");
  if (x0.size() != n) fail_invalid("simulate: x0 dimension mismatch");
  if (!(cfg.step > 0.0)) fail_invalid("simulate: step must be positive");
  params.validate();

  // Theorem hypothesis: start strictly inside the tube
  for (std::size_t i = 0; i < n; ++i) {
    double lo = tube.boundary(i, Side::lower, 0.0);
    double hi = tube.boundary(i, Side::upper, 0.0);
    if (!(lo < x0[i] && x0[i] < hi))
      fail_invalid("simulate: initial state is not strictly inside the tube at t = 0");
  }

  std::size_t steps = static_cast<std::size_t>(std::round(tube.t_f() / cfg.step));
  if (!(steps >= 1)) fail_invalid("simulate: horizon shorter than one step");

  auto rng = make_stream(cfg.seed, 0x5157);
  std::vector<double> phase(n, 0.0);
  if (cfg.policy == DisturbancePolicy::sinusoid)
    for (std::size_t i = 0; i < n; ++i) phase[i] = uniform(rng, 0.0, 2.0 * 3.14159265358979323846);

  Trajectory traj;
  traj.seed = cfg.seed;
  traj.plant_id = plant.id;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.inputs.reserve(steps + 1);
  traj.disturbances.reserve(steps + 1);

  std::vector<double> x = x0;
  std::vector<double> w(n, 0.0);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

  for (std::size_t step = 0; step <= steps; ++step) {
    double t = static_cast<double>(step) * cfg.step;
    if (step == steps) t = tube.t_f();  // land exactly on the horizon
    for (double v : x)
      if (!std::isfinite(v))
        throw error(errc::internal, "simulate: non-finite state at step " + std::to_string(step));

    ControlResult cr = control(tube, params, x, t);
    traj.clamp_count += static_cast<std::uint64_t>(cr.clamped);

    switch (cfg.policy) {
      case DisturbancePolicy::zero:
        std::fill(w.begin(), w.end(), 0.0);
        break;
      case DisturbancePolicy::constant:
        for (std::size_t i = 0; i < n; ++i) w[i] = cfg.level * plant.disturbance_bound[i];
        break;
      case DisturbancePolicy::noise:
        for (std::size_t i = 0; i < n; ++i) {
          double b = cfg.level * plant.disturbance_bound[i];
          w[i] = uniform(rng, -b, b);
        }
        break;
      case DisturbancePolicy::sinusoid:
        for (std::size_t i = 0; i < n; ++i)
          w[i] = cfg.level * plant.disturbance_bound[i] *
                 std::sin(2.0 * 3.14159265358979323846 * cfg.sinusoid_hz * t + phase[i]);
        break;
    }

    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.inputs.push_back(cr.u);
    traj.disturbances.push_back(w);

    if (step < steps) rk4_step(plant, x, cr.u, w, cfg.step, k1, k2, k3, k4, tmp);
  }
  return traj;
}

RunReport verify_run(const Trajectory& traj, const Tube& tube, const StlFormula& phi) {
  if (traj.times.empty()) fail_invalid("verify_run: empty trajectory");
  double span = traj.times.back();
  if (std::abs(span - tube.t_f()) > 1e-6 * std::max(1.0, tube.t_f()))
    fail_invalid("verify_run: trajectory span does not match the tube horizon");

  RunReport rep;
  rep.clamp_count = traj.clamp_count;
  rep.steps = traj.times.size();
  rep.contained = true;
  rep.min_margin = std::numeric_limits<double>::infinity();
  std::size_t n = tube.dim();
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    double t = traj.times[j];
    for (std::size_t i = 0; i < n; ++i) {
      double lo = tube.boundary(i, Side::lower, t);
      double hi = tube.boundary(i, Side::upper, t);
      double xi = traj.states[j][i];
      double margin = std::min(xi - lo, hi - xi);
      rep.min_margin = std::min(rep.min_margin, margin);
      if (!(margin > 0.0)) rep.contained = false;
    }
  }

  Signal sig = traj.as_signal();
  // uniform trajectories with aligned intervals take the linear-time path
  double step = traj.times.size() > 1 ? traj.times[1] - traj.times[0] : span;
  bool uniform_grid = true;
  for (std::size_t j = 0; j < traj.times.size(); ++j)
    if (std::abs(traj.times[j] - static_cast<double>(j) * step) > 1e-9 * std::max(1.0, span)) {
      uniform_grid = false;
      break;
    }
  if (uniform_grid && TraceProgram::alignable(phi, step)) {
    TraceProgram prog = TraceProgram::compile(std::make_shared<const StlFormula>(phi), step);
    TraceProgram::Workspace ws;
    rep.rho = prog.rho_at_zero(sig.value(0).data(), sig.size(), sig.dim(), ws);
  } else {
    rep.rho = robustness(phi, sig, 0.0);
  }
  rep.effort = control_effort(traj.times, traj.inputs);
  return rep;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  os << "t";
  for (std::size_t i = 1; i <= n; ++i) os << ",x" << i;
  for (std::size_t i = 1; i <= n; ++i) os << ",u" << i;
  for (std::size_t i = 1; i <= n; ++i) os << ",w" << i;
  os << "\n";
  os.precision(17);
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    os << traj.times[j];
    for (double v : traj.states[j]) os << ',' << v;
    for (double v : traj.inputs[j]) os << ',' << v;
    for (double v : traj.disturbances[j]) os << ',' << v;
    os << "\n";
  }
}

Trajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail_invalid("trajectory csv: empty file");
  std::size_t cols = 1 + static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  if (cols < 4 || (cols - 1) % 3 != 0)
    fail_invalid("trajectory csv: header must be t,x1..xn,u1..un,w1..wn");
  std::size_t n = (cols - 1) / 3;

  Trajectory traj;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail_invalid("trajectory csv: bad number at line " + std::to_string(lineno));
      }
    }
    if (row.size() != cols)
      fail_invalid("trajectory csv: wrong column count at line " + std::to_string(lineno));
    traj.times.push_back(row[0]);
    traj.states.emplace_back(row.begin() + 1, row.begin() + 1 + n);
    traj.inputs.emplace_back(row.begin() + 1 + n, row.begin() + 1 + 2 * n);
    traj.disturbances.emplace_back(row.begin() + 1 + 2 * n, row.end());
  }
  if (traj.times.empty()) fail_invalid("trajectory csv: no samples");
  return traj;
}

}  // namespace sttl
