#ifndef STTL_SIM_HPP
#define STTL_SIM_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sttl/controller.hpp"
#include "sttl/plant.hpp"
#include "sttl/robustness.hpp"
#include "sttl/tube.hpp"

namespace sttl {

enum class DisturbancePolicy { zero, constant, noise, sinusoid };

DisturbancePolicy disturbance_from_name(const std::string& name);
std::string disturbance_name(DisturbancePolicy p);

struct SimConfig {
  double step = 1e-3;
  DisturbancePolicy policy = DisturbancePolicy::noise;
  double level = 0.5;        // fraction of the plant's disturbance bound
  double sinusoid_hz = 0.5;  // sinusoid policy only
  std::uint64_t seed = 1;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> disturbances;
  std::uint64_t clamp_count = 0;
  std::uint64_t seed = 0;
  std::string plant_id;
  std::string tube_id;

  Signal as_signal() const;
};

// Closed loop: xdot = f + g u + w integrated with classical fixed-step RK4,
// control and the noise realization held constant within a step. x0 must be
// strictly inside the tube at t = 0.
Trajectory simulate(const Plant& plant, const Tube& tube, const ControllerParams& params,
                    const std::vector<double>& x0, const SimConfig& cfg);

struct RunReport {
  bool contained = false;
  double min_margin = 0.0;  // min over steps/dims of distance to the nearer boundary
  double rho = 0.0;
  std::uint64_t clamp_count = 0;
  EffortStats effort;
  std::size_t steps = 0;
};

// Strict containment at every recorded step plus robustness at t = 0.
// A contained run against a certificate-valid tube must monitor positive;
// that coherence check lives with the caller, which has the certificate.
RunReport verify_run(const Trajectory& traj, const Tube& tube, const StlFormula& phi);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& is);

}  // namespace sttl

#endif
