#ifndef STTL_PLANT_HPP
#define STTL_PLANT_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sttl {

// Control-affine plant xdot = f(x) + g(x) u + w with equal state and input
// dimension. The controller never reads any of this; plants exist only to
// drive the simulation harness.
struct Plant {
  std::string id;
  std::size_t n = 0;
  std::function<void(std::span<const double>, std::span<double>)> drift;          // f(x)
  std::function<void(std::span<const double>, std::vector<double>&)> input_map;   // g(x), row-major n*n
  double g_lower_bound = 0.0;            // witness for the sign-definiteness assumption
  std::vector<double> disturbance_bound; // |w_i| <= W_i
  std::vector<double> state_lo, state_hi;

  void derivative(std::span<const double> x, std::span<const double> u, std::span<const double> w,
                  std::span<double> out) const;

  // Smallest eigenvalue of (g + g^T)/2 at x.
  double symmetric_min_eigenvalue(std::span<const double> x) const;
};

// Catalog: omni_robot (2-state, rotation-coupled input map), spacecraft
// (3-state rigid-body angular velocity, inertia (1, 0.9, 0.8)),
// single_integrator (any dimension). The cited case-study dynamics are not
// reprinted anywhere, so these are concrete stand-ins that satisfy the
// local-Lipschitz and sign-definiteness assumptions by construction.
std::vector<std::string> builtin_plant_ids();
Plant builtin_plant(const std::string& id, std::size_t dim_hint);

// Checks lambda_min(g_s(x)) >= bound at `trials` uniform random states.
bool check_sign_definiteness(const Plant& plant, std::size_t trials, std::uint64_t seed);

}  // namespace sttl

#endif
