#include "sttl/synthesis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "sttl/error.hpp"
#include "sttl/parallel.hpp"
#include "sttl/rng.hpp"

namespace sttl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Flat search vector: per dimension, lower-curve shape then upper-curve
// shape; each shape is knot values, knot derivatives, bump coefficients.
struct Layout {
  BasisSpec basis;
  std::size_t n = 0;
  std::size_t knots = 0;
  std::size_t bumps = 0;
  std::size_t per_curve = 0;

  Layout(const BasisSpec& b, std::size_t n_dims) : basis(b), n(n_dims) {
    knots = basis.piece_count() + 1;
    bumps = basis.piece_count() * CurveShape::bumps_per_piece(basis.degree);
    per_curve = 2 * knots + bumps;
  }

  std::size_t total() const { return n * 2 * per_curve; }
  std::size_t curve_offset(std::size_t dim, Side side) const {
    return (dim * 2 + (side == Side::upper ? 1 : 0)) * per_curve;
  }

  CurveShape curve_shape(const std::vector<double>& x, std::size_t dim, Side side) const {
    CurveShape sh;
    const double* p = x.data() + curve_offset(dim, side);
    sh.knot_values.assign(p, p + knots);
    sh.knot_derivs.assign(p + knots, p + 2 * knots);
    sh.bumps.assign(p + 2 * knots, p + 2 * knots + bumps);
    return sh;
  }
};

struct Probe {
  // one or two coordinates moved together by sign*step*scale
  std::uint32_t index0;
  std::int32_t index1;  // -1 when single
  double sign;
};

class SearchProblem {
 public:
  SearchProblem(const ConstraintSystem& sys, Layout layout, const SynthesisConfig& cfg)
      : sys_(sys), layout_(std::move(layout)), cfg_(cfg) {
    build_scales();
    build_probes();
    order_.resize(sys_.lambda_count());
    std::iota(order_.begin(), order_.end(), 0u);
  }

  const Layout& layout() const { return layout_; }
  const std::vector<Probe>& probes() const { return probes_; }
  double scale(std::size_t j) const { return scales_[j]; }

  Tube make_tube(const std::vector<double>& x) const {
    std::vector<std::vector<double>> lo(layout_.n), hi(layout_.n);
    for (std::size_t i = 0; i < layout_.n; ++i) {
      lo[i] = shape_to_coeffs(layout_.basis, layout_.curve_shape(x, i, Side::lower));
      hi[i] = shape_to_coeffs(layout_.basis, layout_.curve_shape(x, i, Side::upper));
    }
    return Tube(sys_.t_f(), layout_.basis, std::move(lo), std::move(hi), cfg_.gamma_d,
                cfg_.slope_cap);
  }

  // Full evaluation; refreshes the adversarial lambda order.
  double full_margin(const std::vector<double>& x, ConstraintDiagnostics* diag = nullptr) {
    std::vector<double> terms;
    double m = sys_.margin(make_tube(x), diag, &terms, true);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return terms[a] > terms[b]; });
    return m;
  }

  double probe_margin(const std::vector<double>& x, double cutoff,
                      ConstraintSystem::Workspace& ws, bool* aborted) const {
    return sys_.margin_with_cutoff(make_tube(x), cutoff, order_, ws, aborted);
  }

 private:
  void build_scales() {
    scales_.resize(layout_.total());
    double mean_piece = sys_.t_f() / static_cast<double>(layout_.basis.piece_count());
    for (std::size_t i = 0; i < layout_.n; ++i) {
      double extent = cfg_.state_hi[i] - cfg_.state_lo[i];
      double vstep = std::max(0.02 * extent, 1e-4);
      for (Side side : {Side::lower, Side::upper}) {
        std::size_t off = layout_.curve_offset(i, side);
        for (std::size_t k = 0; k < layout_.knots; ++k) scales_[off + k] = vstep;
        for (std::size_t k = 0; k < layout_.knots; ++k)
          scales_[off + layout_.knots + k] = vstep / std::max(mean_piece, 1e-6) * 2.0;
        for (std::size_t k = 0; k < layout_.bumps; ++k)
          scales_[off + 2 * layout_.knots + k] = 0.5 * vstep;
      }
    }
  }

  void build_probes() {
    for (std::uint32_t j = 0; j < layout_.total(); ++j) {
      probes_.push_back({j, -1, +1.0});
      probes_.push_back({j, -1, -1.0});
    }
    // joint lower+upper knot moves translate the tube without changing width
    for (std::size_t i = 0; i < layout_.n; ++i) {
      std::size_t lo = layout_.curve_offset(i, Side::lower);
      std::size_t hi = layout_.curve_offset(i, Side::upper);
      for (std::size_t k = 0; k < layout_.knots; ++k) {
        probes_.push_back({static_cast<std::uint32_t>(lo + k), static_cast<std::int32_t>(hi + k), +1.0});
        probes_.push_back({static_cast<std::uint32_t>(lo + k), static_cast<std::int32_t>(hi + k), -1.0});
      }
    }
  }

  const ConstraintSystem& sys_;
  Layout layout_;
  const SynthesisConfig& cfg_;
  std::vector<double> scales_;
  std::vector<Probe> probes_;
  std::vector<std::uint32_t> order_;
};

struct SearchOutcome {
  std::vector<double> x;
  double margin = kInf;
  std::size_t evals = 0;
};

// Generalized pattern search with complete polling: every sweep evaluates the
// whole poll set against the incumbent, takes the best strict improvement,
// and halves the step when none exists. Probe evaluation is parallel; the
// accepted probe is chosen by (value, probe index), so results do not depend
// on the worker count.
SearchOutcome pattern_search(SearchProblem& prob, std::vector<double> x, double target,
                             int max_sweeps) {
  SearchOutcome out;
  double margin = prob.full_margin(x);
  out.evals = 1;
  double step = 1.0;
  const double min_step = 1.0 / 256.0;
  const auto& probes = prob.probes();

  unsigned workers = worker_count();
  std::vector<ConstraintSystem::Workspace> ws(workers);
  std::vector<double> values(probes.size());
  std::vector<char> usable(probes.size());

  for (int sweep = 0; sweep < max_sweeps && margin > target && step >= min_step; ++sweep) {
    std::vector<std::vector<double>> cand(probes.size());
    for (std::size_t p = 0; p < probes.size(); ++p) {
      cand[p] = x;
      const Probe& pr = probes[p];
      cand[p][pr.index0] += pr.sign * step * prob.scale(pr.index0);
      if (pr.index1 >= 0)
        cand[p][static_cast<std::size_t>(pr.index1)] +=
            pr.sign * step * prob.scale(static_cast<std::size_t>(pr.index1));
    }
    parallel_for(workers, [&](std::size_t w) {
      for (std::size_t p = w; p < probes.size(); p += workers) {
        bool aborted = false;
        values[p] = prob.probe_margin(cand[p], margin, ws[w], &aborted);
        usable[p] = !aborted;
      }
    });
    out.evals += probes.size();

    std::size_t best_p = probes.size();
    double best_v = margin;
    for (std::size_t p = 0; p < probes.size(); ++p) {
      if (usable[p] && values[p] < best_v) {
        best_v = values[p];
        best_p = p;
      }
    }
    if (best_p == probes.size()) {
      step *= 0.5;
      continue;
    }
    x = std::move(cand[best_p]);
    margin = prob.full_margin(x);  // same value; refreshes the lambda order
    out.evals += 1;
  }
  out.x = std::move(x);
  out.margin = margin;
  return out;
}

struct SearchState {
  std::vector<double> seed;
  std::vector<double> best_x;
  double best_margin = kInf;
  std::size_t evals = 0;
};

bool run_feasibility(SearchState& st, SearchProblem& prob, const SynthesisConfig& cfg,
                     double eta, std::size_t* step_evals) {
  *step_evals = 0;
  if (st.best_margin <= eta) return true;  // witness reuse
  for (int r = 0; r < cfg.restarts; ++r) {
    std::vector<double> start;
    if (r == 0) {
      start = st.best_x.empty() ? st.seed : st.best_x;
    } else {
      start = st.seed;
      auto rng = make_stream(cfg.rng_seed, static_cast<std::uint64_t>(r));
      for (std::size_t j = 0; j < start.size(); ++j)
        start[j] += uniform(rng, -1.0, 1.0) * prob.scale(j) * 2.0;
    }
    SearchOutcome oc = pattern_search(prob, std::move(start), eta, cfg.sweeps);
    *step_evals += oc.evals;
    st.evals += oc.evals;
    if (oc.margin < st.best_margin) {
      st.best_margin = oc.margin;
      st.best_x = std::move(oc.x);
    }
    if (st.best_margin <= eta) return true;
  }
  return false;
}

double piecewise_linear(const std::vector<Waypoint>& wps, std::size_t i, double t) {
  if (t <= wps.front().time) return wps.front().center[i];
  for (std::size_t k = 0; k + 1 < wps.size(); ++k) {
    if (t <= wps[k + 1].time) {
      double dt = wps[k + 1].time - wps[k].time;
      if (dt <= 0.0) return wps[k + 1].center[i];
      double a = (t - wps[k].time) / dt;
      return wps[k].center[i] + a * (wps[k + 1].center[i] - wps[k].center[i]);
    }
  }
  return wps.back().center[i];
}

std::vector<double> build_seed(const StlFormula& phi, const Layout& layout,
                               const SynthesisConfig& cfg, double t_f) {
  std::vector<Waypoint> wps = extract_waypoints(phi, t_f, layout.n, cfg);

  std::vector<const Predicate*> preds;
  collect_predicates(phi, preds);
  double min_hw = kInf;
  for (const Predicate* p : preds)
    if (p->is_box())
      for (double h : p->half_width) min_hw = std::min(min_hw, h);
  if (!std::isfinite(min_hw)) min_hw = 1.0;
  double margin_est = 0.45 * min_hw;

  std::vector<double> x(layout.total(), 0.0);
  const auto& bp = layout.basis.breakpoints;
  for (std::size_t i = 0; i < layout.n; ++i) {
    double gd = cfg.gamma_d.size() == 1 ? cfg.gamma_d[0] : cfg.gamma_d[i];
    double half = 0.5 * (gd + margin_est);
    for (Side side : {Side::lower, Side::upper}) {
      double shift = side == Side::lower ? -half : +half;
      std::size_t off = layout.curve_offset(i, side);
      for (std::size_t k = 0; k < layout.knots; ++k)
        x[off + k] = piecewise_linear(wps, i, bp[k]) + shift;
      for (std::size_t k = 0; k < layout.knots; ++k) {
        // derivative seed: secant slopes of the seeded knot values
        double dl = k > 0 ? (x[off + k] - x[off + k - 1]) / (bp[k] - bp[k - 1]) : 0.0;
        double dr = k + 1 < layout.knots ? (piecewise_linear(wps, i, bp[k + 1]) + shift - x[off + k]) /
                                               (bp[k + 1] - bp[k])
                                         : 0.0;
        double d = 0.5 * (dl + dr);
        if (k == 0) d = dr;
        if (k + 1 == layout.knots) d = dl;
        x[off + layout.knots + k] = d;
      }
    }
  }
  return x;
}

}  // namespace

std::optional<Tube> feasible_for_eta(FormulaPtr phi, const BasisSpec& basis,
                                     const ConstraintSystem& system, const SynthesisConfig& cfg,
                                     double eta) {
  if (eta < cfg.eta_lo || eta > cfg.eta_hi)
    fail_invalid("feasible_for_eta: eta outside the configured search interval");
  if (basis.degree < 3) fail_invalid("synthesis: search requires basis degree >= 3");
  Layout layout(basis, system.dim());
  SearchProblem prob(system, layout, cfg);
  SearchState st;
  st.seed = build_seed(*phi, layout, cfg, system.t_f());
  std::size_t evals = 0;
  if (!run_feasibility(st, prob, cfg, eta, &evals)) return std::nullopt;
  return prob.make_tube(st.best_x);
}

SynthesisResult synthesize(FormulaPtr phi, const BasisSpec& basis, const SynthesisConfig& cfg,
                           double t_f, std::size_t n) {
  auto t_start = std::chrono::steady_clock::now();
  cfg.validate(n, t_f);
  if (basis.degree < 3) fail_invalid("synthesis: search requires basis degree >= 3");
  double horizon = formula_horizon(*phi);
  if (horizon > t_f + 1e-9 * std::max(1.0, t_f))
    fail_invalid("synthesis: formula horizon exceeds the tube horizon");

  SampleSet samples(n, t_f, cfg.epsilon);
  ConstraintSystem system(phi, samples, cfg, t_f, n);
  Layout layout(basis, n);
  SearchProblem prob(system, layout, cfg);
  SearchState st;
  st.seed = build_seed(*phi, layout, cfg, t_f);

  SynthesisResult result;
  auto record = [&](double eta, bool feasible, std::size_t evals) {
    result.trace.steps.push_back({eta, feasible, st.best_margin, evals});
  };

  std::size_t evals = 0;
  bool top_feasible = run_feasibility(st, prob, cfg, cfg.eta_hi, &evals);
  record(cfg.eta_hi, top_feasible, evals);
  if (!top_feasible) {
    result.accepted = false;
    result.message = "no feasible tube at the top of the eta interval; "
                     "the task is likely unsatisfiable for this basis and sampling";
    result.trace.total_margin_evals = st.evals;
    result.trace.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
  }

  double lo = cfg.eta_lo;
  double hi = std::min(cfg.eta_hi, st.best_margin);
  while (hi - lo > cfg.eta_tolerance) {
    double mid = 0.5 * (lo + hi);
    bool feasible = run_feasibility(st, prob, cfg, mid, &evals);
    record(mid, feasible, evals);
    if (feasible)
      hi = std::min(mid, st.best_margin);
    else
      lo = mid;
  }

  Tube tube = prob.make_tube(st.best_x);
  ConstraintDiagnostics diag;
  double eta_star = system.margin(tube, &diag);

  double lip_step = cfg.epsilon / cfg.lipschitz_grid_divisor;
  TubeLipschitz lip = estimate_lipschitz(tube, lip_step, cfg.lipschitz_safety);
  double rho_lip = robustness_lipschitz_bound(*phi);
  // width-based lambda sensitivity; never larger than the magnitude form
  double l_mu = lipschitz_mu(rho_lip, lip.max_width, static_cast<double>(n));
  double composite = composite_lipschitz(lip, l_mu, rho_lip);

  Certificate cert = Certificate::make(eta_star, composite, cfg.epsilon);
  cert.rho_lip = rho_lip;
  cert.l_mu = l_mu;
  cert.tube_lip = lip;
  cert.diagnostics = diag;

  result.tube = std::move(tube);
  result.certificate = cert;
  result.accepted = cert.valid;
  result.message = cert.valid ? "certificate valid"
                              : "certificate rejected: eta* + L*eps > 0 at the sampled optimum";
  result.trace.total_margin_evals = st.evals;
  result.trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

}  // namespace sttl
