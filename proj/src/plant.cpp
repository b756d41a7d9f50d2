#include "sttl/plant.hpp"

#include <cmath>

#include "sttl/error.hpp"
#include "sttl/rng.hpp"

namespace sttl {

void Plant::derivative(std::span<const double> x, std::span<const double> u,
                       std::span<const double> w, std::span<double> out) const {
  thread_local std::vector<double> g;
  drift(x, out);
  input_map(x, g);
  for (std::size_t i = 0; i < n; ++i) {
    double gu = 0.0;
    for (std::size_t j = 0; j < n; ++j) gu += g[i * n + j] * u[j];
    out[i] += gu + w[i];
  }
}

double Plant::symmetric_min_eigenvalue(std::span<const double> x) const {
  std::vector<double> g;
  input_map(x, g);
  std::vector<double> s(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s[i * n + j] = 0.5 * (g[i * n + j] + g[j * n + i]);

  // cyclic Jacobi; n is tiny here
  for (int pass = 0; pass < 64; ++pass) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += s[p * n + q] * s[p * n + q];
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = s[p * n + q];
        if (std::abs(apq) < 1e-18) continue;
        double theta = 0.5 * (s[q * n + q] - s[p * n + p]) / apq;
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double skp = s[k * n + p], skq = s[k * n + q];
          s[k * n + p] = c * skp - sn * skq;
          s[k * n + q] = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double spk = s[p * n + k], sqk = s[q * n + k];
          s[p * n + k] = c * spk - sn * sqk;
          s[q * n + k] = sn * spk + c * sqk;
        }
      }
  }
  double lmin = s[0];
  for (std::size_t i = 1; i < n; ++i) lmin = std::min(lmin, s[i * n + i]);
  return lmin;
}

std::vector<std::string> builtin_plant_ids() { return {"omni_robot", "spacecraft", "single_integrator"}; }

Plant builtin_plant(const std::string& id, std::size_t dim_hint) {
  Plant p;
  p.id = id;
  if (id == "omni_robot") {
    // velocity-controlled planar robot; the input map couples the axes
    // through a state-dependent rotation times diag(1.2, 0.8), condition
    // number 1.5, symmetric part safely positive definite
    p.n = 2;
    p.drift = [](std::span<const double>, std::span<double> out) { out[0] = out[1] = 0.0; };
    p.input_map = [](std::span<const double> x, std::vector<double>& g) {
      double a = 0.3 * std::sin(0.15 * (x[0] + x[1]));
      double c = std::cos(a), s = std::sin(a);
      g.assign({c * 1.2, -s * 0.8, s * 1.2, c * 0.8});
    };
    p.g_lower_bound = 0.55;
    p.disturbance_bound = {0.2, 0.2};
    p.state_lo = {-1.0, -1.0};
    p.state_hi = {21.0, 21.0};
  } else if (id == "spacecraft") {
    // rigid-body angular velocity dynamics with inertia J = (1, 0.9, 0.8)
    p.n = 3;
    const double J1 = 1.0, J2 = 0.9, J3 = 0.8;
    p.drift = [=](std::span<const double> x, std::span<double> out) {
      out[0] = ((J2 - J3) / J1) * x[1] * x[2];
      out[1] = ((J3 - J1) / J2) * x[2] * x[0];
      out[2] = ((J1 - J2) / J3) * x[0] * x[1];
    };
    p.input_map = [=](std::span<const double>, std::vector<double>& g) {
      g.assign({1.0 / J1, 0, 0, 0, 1.0 / J2, 0, 0, 0, 1.0 / J3});
    };
    p.g_lower_bound = 1.0;
    p.disturbance_bound = {0.1, 0.1, 0.1};
    p.state_lo = {-1.0, -1.0, -1.0};
    p.state_hi = {4.0, 4.0, 4.0};
  } else if (id == "single_integrator") {
    std::size_t n = dim_hint ? dim_hint : 1;
    p.n = n;
    p.drift = [](std::span<const double> x, std::span<double> out) {
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = 0.0;
    };
    p.input_map = [n](std::span<const double>, std::vector<double>& g) {
      g.assign(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) g[i * n + i] = 1.0;
    };
    p.g_lower_bound = 1.0;
    p.disturbance_bound.assign(n, 0.1);
    p.state_lo.assign(n, -100.0);
    p.state_hi.assign(n, 100.0);
  } else {
    fail_invalid("unknown plant id '" + id + "'");
  }
  return p;
}

bool check_sign_definiteness(const Plant& plant, std::size_t trials, std::uint64_t seed) {
  auto rng = make_stream(seed, 0xc0ffee);
  std::vector<double> x(plant.n);
  for (std::size_t k = 0; k < trials; ++k) {
    for (std::size_t i = 0; i < plant.n; ++i)
      x[i] = uniform(rng, plant.state_lo[i], plant.state_hi[i]);
    if (plant.symmetric_min_eigenvalue(x) < plant.g_lower_bound) return false;
  }
  return true;
}

}  // namespace sttl
