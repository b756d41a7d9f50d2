#include <algorithm>
#include <cmath>
#include <limits>

#include "sttl/synthesis.hpp"

// Waypoint extraction: a heuristic reading of the formula that produces the
// straight-line seed tube for the first search restart. It understands the
// shapes that sequential reach/avoid STL tasks are written in --
// G[0,d](A -> F[a,b] B) rule chains, F[a,b] X visits, F[a,b] G[0,s] X stays,
// and G[a,b] !O avoidance -- and falls back to a constant path when nothing
// matches. Search restarts perturb whatever this produces.

namespace sttl {

namespace {

struct Rule {
  const Predicate* antecedent;
  Interval window;
  const Predicate* target;
  double deadline;  // b-endpoint of the enclosing always
};

struct Reach {
  Interval window;
  double stay = 0.0;
  std::vector<const Predicate*> choices;
};

struct Extracted {
  std::vector<Rule> rules;
  std::vector<Reach> reaches;
  std::vector<const Predicate*> avoids;
  const Predicate* start_region = nullptr;
};

void flatten_conjuncts(const StlFormula& f, std::vector<const StlFormula*>& out) {
  if (f.kind == StlKind::conjunction) {
    flatten_conjuncts(*f.children[0], out);
    flatten_conjuncts(*f.children[1], out);
  } else {
    out.push_back(&f);
  }
}

void collect_box_predicates(const StlFormula& f, std::vector<const Predicate*>& out) {
  if (f.kind == StlKind::predicate && f.pred->is_box()) out.push_back(f.pred.get());
  for (const auto& c : f.children) collect_box_predicates(*c, out);
}

bool point_in_box(const Predicate& p, const std::vector<double>& x) {
  if (!p.is_box() || p.dim() != x.size()) return false;
  return p.eval(x) > 0.0;
}

// A -> F[a,b] B after implication desugaring: !A | F[a,b] B (either order).
bool match_rule(const StlFormula& f, double deadline, Rule& out) {
  if (f.kind != StlKind::disjunction) return false;
  const StlFormula* neg = f.children[0].get();
  const StlFormula* ev = f.children[1].get();
  if (neg->kind != StlKind::negation) std::swap(neg, ev);
  if (neg->kind != StlKind::negation || neg->children[0]->kind != StlKind::predicate) return false;
  if (ev->kind != StlKind::eventually || ev->children[0]->kind != StlKind::predicate) return false;
  out.antecedent = neg->children[0]->pred.get();
  out.window = ev->interval;
  out.target = ev->children[0]->pred.get();
  out.deadline = deadline;
  return true;
}

void classify(const StlFormula& f, const std::vector<double>& x0, Extracted& out);

void classify_conjunct(const StlFormula& c, const std::vector<double>& x0, Extracted& out) {
  switch (c.kind) {
    case StlKind::always: {
      const StlFormula& body = *c.children[0];
      if (body.kind == StlKind::negation) {
        collect_box_predicates(*body.children[0], out.avoids);
        return;
      }
      std::vector<const StlFormula*> inner;
      flatten_conjuncts(body, inner);
      for (const StlFormula* g : inner) {
        Rule r;
        if (match_rule(*g, c.interval.b, r)) out.rules.push_back(r);
      }
      return;
    }
    case StlKind::eventually: {
      const StlFormula& body = *c.children[0];
      Reach reach;
      reach.window = c.interval;
      if (body.kind == StlKind::predicate) {
        reach.choices = {body.pred.get()};
      } else if (body.kind == StlKind::always && body.children[0]->kind == StlKind::predicate) {
        reach.stay = body.interval.b;
        reach.choices = {body.children[0]->pred.get()};
      } else if (body.kind == StlKind::disjunction) {
        collect_box_predicates(body, reach.choices);
      }
      if (!reach.choices.empty()) out.reaches.push_back(reach);
      return;
    }
    case StlKind::disjunction: {
      // conditional task: !A | obligations, taken when the start lies in A
      const StlFormula* neg = c.children[0].get();
      const StlFormula* rest = c.children[1].get();
      if (neg->kind != StlKind::negation) std::swap(neg, rest);
      if (neg->kind == StlKind::negation && neg->children[0]->kind == StlKind::predicate) {
        const Predicate* region = neg->children[0]->pred.get();
        if (x0.empty() || point_in_box(*region, x0)) {
          out.start_region = region;
          classify(*rest, x0, out);
        }
      }
      return;
    }
    case StlKind::until: {
      Reach reach;
      reach.window = c.interval;
      if (c.children[1]->kind == StlKind::predicate) {
        reach.choices = {c.children[1]->pred.get()};
        out.reaches.push_back(reach);
      }
      return;
    }
    default: return;
  }
}

void classify(const StlFormula& f, const std::vector<double>& x0, Extracted& out) {
  std::vector<const StlFormula*> conj;
  flatten_conjuncts(f, conj);
  for (const StlFormula* c : conj) classify_conjunct(*c, x0, out);
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// s-interval on which the segment p->q lies inside the inflated box; empty
// when max > min.
std::pair<double, double> inside_interval(const std::vector<double>& p, const std::vector<double>& q,
                                          const Predicate& box, double clear) {
  double lo = 0.0, hi = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double blo = box.center[i] - box.half_width[i] - clear;
    double bhi = box.center[i] + box.half_width[i] + clear;
    double d = q[i] - p[i];
    if (std::abs(d) < 1e-12) {
      if (p[i] <= blo || p[i] >= bhi) return {1.0, 0.0};
      continue;
    }
    double s0 = (blo - p[i]) / d;
    double s1 = (bhi - p[i]) / d;
    if (s0 > s1) std::swap(s0, s1);
    lo = std::max(lo, s0);
    hi = std::min(hi, s1);
    if (lo >= hi) return {1.0, 0.0};
  }
  return {lo, hi};
}

struct TimedPoint {
  double time;
  std::vector<double> center;
};

// If segment a -> a+1 runs through an avoid box, inserts one via point that
// pushes the midpoint of the violating stretch out along the cheapest axis.
// Returns true when a point was inserted.
bool insert_detour(std::vector<TimedPoint>& path, std::size_t a,
                   const std::vector<const Predicate*>& avoids, double clear) {
  const auto& p = path[a].center;
  const auto& q = path[a + 1].center;
  for (const Predicate* box : avoids) {
    auto [lo, hi] = inside_interval(p, q, *box, clear);
    if (lo >= hi) continue;
    double sm = 0.5 * (lo + hi);
    std::vector<double> via(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) via[i] = p[i] + sm * (q[i] - p[i]);
    std::size_t best_axis = 0;
    double best_shift = std::numeric_limits<double>::infinity();
    double best_value = 0.0;
    for (std::size_t i = 0; i < via.size(); ++i) {
      double lo_exit = box->center[i] - box->half_width[i] - 1.25 * clear;
      double hi_exit = box->center[i] + box->half_width[i] + 1.25 * clear;
      for (double cand : {lo_exit, hi_exit}) {
        double shift = std::abs(via[i] - cand);
        if (shift < best_shift) {
          best_shift = shift;
          best_axis = i;
          best_value = cand;
        }
      }
    }
    via[best_axis] = best_value;
    double tm = path[a].time + sm * (path[a + 1].time - path[a].time);
    path.insert(path.begin() + static_cast<std::ptrdiff_t>(a) + 1, TimedPoint{tm, via});
    return true;
  }
  return false;
}

// Repeatedly inserts detours until the whole path is clear or the insertion
// budget runs out; returns whether the path ended up clear.
bool clear_path(std::vector<TimedPoint>& path, const std::vector<const Predicate*>& avoids,
                double clear, int budget) {
  std::size_t seg = 0;
  while (seg + 1 < path.size()) {
    if (budget > 0 && insert_detour(path, seg, avoids, clear))
      --budget;  // re-check the split segment from the same index
    else
      ++seg;
  }
  for (std::size_t s = 0; s + 1 < path.size(); ++s)
    for (const Predicate* box : avoids) {
      auto [lo, hi] = inside_interval(path[s].center, path[s + 1].center, *box, clear);
      if (lo < hi) return false;
    }
  return true;
}

}  // namespace

std::vector<Waypoint> extract_waypoints(const StlFormula& phi, double t_f, std::size_t n,
                                        const SynthesisConfig& cfg) {
  Extracted ex;
  classify(phi, cfg.x0, ex);

  std::vector<double> start(n, 0.0);
  if (!cfg.x0.empty()) {
    start = cfg.x0;
  } else if (ex.start_region) {
    start = ex.start_region->center;
  } else if (!ex.rules.empty()) {
    start = ex.rules.front().antecedent->center;
  } else if (cfg.state_lo.size() == n) {
    for (std::size_t i = 0; i < n; ++i) start[i] = 0.5 * (cfg.state_lo[i] + cfg.state_hi[i]);
  }

  const double c = 0.01 * t_f;       // crossing buffer
  const double t_leave = 0.005 * t_f;

  std::vector<TimedPoint> path;
  path.push_back({0.0, start});
  path.push_back({t_leave, start});

  // rule cascade from the region containing the start point
  const Predicate* current = nullptr;
  for (const Rule& r : ex.rules)
    if (point_in_box(*r.antecedent, start)) current = r.antecedent;
  double w0 = 0.0, w1 = t_leave + c;
  for (int guard = 0; guard < 64 && current; ++guard) {
    const Rule* rule = nullptr;
    for (const Rule& r : ex.rules)
      if (r.antecedent == current) rule = &r;
    if (!rule || w0 > rule->deadline) break;
    double a_min = w1 + rule->window.a;
    double a_max = w0 + rule->window.b;
    if (a_min > a_max) a_min = a_max;  // over-constrained; best effort
    double dwell = 0.3 * c;
    double a_term = std::max(a_min, rule->deadline + 2.0 * c);
    double A, B;
    bool terminal = a_term <= a_max;
    if (terminal) {
      A = a_term;
      B = A + dwell;
    } else {
      A = a_min;
      B = std::min(a_max, A + dwell);
      if (B < A) B = A;
    }
    path.push_back({A, rule->target->center});
    path.push_back({B, rule->target->center});
    if (terminal) break;
    w0 = A - c;
    w1 = B + c;
    current = rule->target;
  }

  // standalone reach obligations in deadline order
  std::vector<Reach> reaches = ex.reaches;
  std::sort(reaches.begin(), reaches.end(),
            [](const Reach& x, const Reach& y) { return x.window.a < y.window.a; });
  for (std::size_t k = 0; k < reaches.size(); ++k) {
    const Reach& re = reaches[k];
    double t1 = re.window.a + 0.4 * (re.window.b - re.window.a);
    const std::vector<double>& prev = path.back().center;
    const Predicate* choice = re.choices.front();
    if (re.choices.size() > 1) {
      const std::vector<double>* next_center = nullptr;
      if (k + 1 < reaches.size()) next_center = &reaches[k + 1].choices.front()->center;
      double best = std::numeric_limits<double>::infinity();
      for (const Predicate* cand : re.choices) {
        // detoured length in + straight length out; unclearable routes are
        // penalized out of contention
        double probe_clear = 0.5 * cand->half_width[0];
        std::vector<TimedPoint> probe{{0.0, prev}, {1.0, cand->center}};
        double cost = clear_path(probe, ex.avoids, probe_clear, 8) ? 0.0 : 1e6;
        for (std::size_t s = 0; s + 1 < probe.size(); ++s)
          cost += dist(probe[s].center, probe[s + 1].center);
        if (next_center) {
          std::vector<TimedPoint> probe2{{0.0, cand->center}, {1.0, *next_center}};
          if (!clear_path(probe2, ex.avoids, probe_clear, 8)) cost += 1e6;
          for (std::size_t s = 0; s + 1 < probe2.size(); ++s)
            cost += dist(probe2[s].center, probe2[s + 1].center);
        }
        if (cost < best) {
          best = cost;
          choice = cand;
        }
      }
    }
    double dwell = std::max(re.stay, 0.3 * c);
    path.push_back({t1, choice->center});
    path.push_back({std::min(t1 + dwell, t_f), choice->center});
  }

  std::sort(path.begin(), path.end(),
            [](const TimedPoint& x, const TimedPoint& y) { return x.time < y.time; });
  if (path.back().time < t_f) path.push_back({t_f, path.back().center});

  // obstacle clearance: half a tube width plus an expected margin
  double min_hw = std::numeric_limits<double>::infinity();
  for (const Rule& r : ex.rules)
    for (double h : r.target->half_width) min_hw = std::min(min_hw, h);
  for (const Reach& re : reaches)
    for (const Predicate* p : re.choices)
      for (double h : p->half_width) min_hw = std::min(min_hw, h);
  if (!std::isfinite(min_hw)) min_hw = 1.0;
  double margin_est = 0.45 * min_hw;
  double gd_max = cfg.gamma_d.empty() ? 0.0 : *std::max_element(cfg.gamma_d.begin(), cfg.gamma_d.end());
  double clear = 0.5 * (gd_max + margin_est) + margin_est;

  clear_path(path, ex.avoids, clear, 32);

  std::vector<Waypoint> out;
  out.reserve(path.size());
  for (auto& tp : path) out.push_back({tp.time, std::move(tp.center)});
  return out;
}

}  // namespace sttl
