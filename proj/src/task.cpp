#include "sttl/task.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sttl/error.hpp"
#include "sttl/plant.hpp"

namespace sttl {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      fail_invalid("task: expected numbers for " + what + ", got '" + tok + "'");
    }
  }
  return out;
}

double parse_one(const std::string& text, const std::string& what) {
  auto v = parse_numbers(text, what);
  if (v.size() != 1) fail_invalid("task: expected a single number for " + what);
  return v[0];
}

struct RawTask {
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::vector<std::string> region_rows;
  std::vector<std::string> formula_lines;
};

RawTask split_sections(const std::string& text, const std::string& origin) {
  RawTask raw;
  std::istringstream is(text);
  std::string line;
  std::string section;  // "" = top level
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);

    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    if (section == "regions") {
      raw.region_rows.push_back(line);
      continue;
    }
    if (section == "formula") {
      raw.formula_lines.push_back(line);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail_invalid(origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto strip = [](std::string& s) {
      auto a = s.find_first_not_of(" \t");
      auto b = s.find_last_not_of(" \t");
      s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
    };
    strip(key);
    strip(val);
    raw.sections[section][key] = val;
  }
  return raw;
}

std::string get(const RawTask& raw, const std::string& section, const std::string& key,
                const std::string& fallback = "", bool required = false) {
  auto sit = raw.sections.find(section);
  if (sit != raw.sections.end()) {
    auto kit = sit->second.find(key);
    if (kit != sit->second.end()) return kit->second;
  }
  if (required)
    fail_invalid("task: missing required key '" + key + "'" +
                 (section.empty() ? "" : " in section [" + section + "]"));
  return fallback;
}

}  // namespace

TaskFile parse_task(const std::string& text, const std::string& origin) {
  RawTask raw = split_sections(text, origin);
  TaskFile task;
  task.source_path = origin;
  task.hash = fnv1a_hex(text);

  task.name = get(raw, "", "name", "", true);
  task.dim = static_cast<std::size_t>(parse_one(get(raw, "", "dim", "", true), "dim"));
  if (task.dim < 1) fail_invalid("task: dim must be >= 1");
  task.horizon = parse_one(get(raw, "", "horizon", "", true), "horizon");
  if (!(task.horizon > 0.0)) fail_invalid("task: horizon must be positive");

  for (const std::string& row : raw.region_rows) {
    std::istringstream rs(row);
    std::string rname;
    rs >> rname;
    std::string rest;
    std::getline(rs, rest);
    std::vector<double> nums = parse_numbers(rest, "region '" + rname + "'");
    if (nums.size() != 2 * task.dim && nums.size() != task.dim + 1)
      fail_invalid("task: region '" + rname + "' needs " + std::to_string(task.dim) +
                   " center values plus half_width (one per dimension, or a single scalar)");
    std::vector<double> center(nums.begin(), nums.begin() + static_cast<std::ptrdiff_t>(task.dim));
    std::vector<double> half(nums.begin() + static_cast<std::ptrdiff_t>(task.dim), nums.end());
    task.regions.emplace(rname, Predicate(rname, center, half));
  }

  if (raw.formula_lines.empty()) fail_invalid("task: missing [formula] section");
  std::string ftext;
  for (const auto& l : raw.formula_lines) {
    if (!ftext.empty()) ftext += ' ';
    ftext += l;
  }
  task.formula_text = ftext;
  task.formula = parse_formula(ftext, task.regions);
  double fh = formula_horizon(*task.formula);
  if (fh > task.horizon + 1e-9 * std::max(1.0, task.horizon))
    fail_invalid("task: formula horizon " + std::to_string(fh) + " exceeds the task horizon " +
                 std::to_string(task.horizon));

  // basis
  std::string kind = get(raw, "basis", "kind", "polynomial");
  int degree = static_cast<int>(parse_one(get(raw, "basis", "degree", "5"), "degree"));
  if (BasisSpec::kind_from_name(kind) == BasisSpec::Kind::polynomial) {
    task.basis = BasisSpec::polynomial(degree, task.horizon);
  } else {
    std::vector<double> bp = parse_numbers(get(raw, "basis", "breakpoints", "", true), "breakpoints");
    task.basis = BasisSpec::piecewise(degree, std::move(bp));
    if (std::abs(task.basis.breakpoints.back() - task.horizon) > 1e-9 * std::max(1.0, task.horizon))
      fail_invalid("task: basis breakpoints must end at the horizon");
  }

  // synthesis
  SynthesisConfig& sc = task.synth;
  sc.epsilon = parse_one(get(raw, "synthesis", "epsilon", "", true), "epsilon");
  sc.gamma_d = parse_numbers(get(raw, "synthesis", "gamma_d", "", true), "gamma_d");
  std::string cap = get(raw, "synthesis", "slope_cap", "off");
  if (cap != "off" && !cap.empty()) sc.slope_cap = parse_one(cap, "slope_cap");
  std::vector<double> bounds =
      parse_numbers(get(raw, "synthesis", "state_bounds", "", true), "state_bounds");
  if (bounds.size() != 2 * task.dim)
    fail_invalid("task: state_bounds needs lo/hi per dimension");
  for (std::size_t i = 0; i < task.dim; ++i) {
    sc.state_lo.push_back(bounds[2 * i]);
    sc.state_hi.push_back(bounds[2 * i + 1]);
  }
  std::string eta = get(raw, "synthesis", "eta_interval", "");
  if (eta.empty()) {
    double extent = 0.0;
    for (std::size_t i = 0; i < task.dim; ++i)
      extent = std::max(extent, sc.state_hi[i] - sc.state_lo[i]);
    sc.eta_lo = -extent;
    sc.eta_hi = extent;
  } else {
    auto iv = parse_numbers(eta, "eta_interval");
    if (iv.size() != 2) fail_invalid("task: eta_interval needs two numbers");
    sc.eta_lo = iv[0];
    sc.eta_hi = iv[1];
  }
  sc.eta_tolerance = parse_one(get(raw, "synthesis", "eta_tolerance", "0.001"), "eta_tolerance");
  sc.restarts = static_cast<int>(parse_one(get(raw, "synthesis", "restarts", "4"), "restarts"));
  sc.sweeps = static_cast<int>(parse_one(get(raw, "synthesis", "sweeps", "300"), "sweeps"));
  sc.rng_seed = static_cast<std::uint64_t>(parse_one(get(raw, "synthesis", "seed", "1"), "seed"));
  std::string mstep = get(raw, "synthesis", "monitor_step", "");
  if (!mstep.empty()) sc.monitor_step = parse_one(mstep, "monitor_step");
  std::string maxc = get(raw, "synthesis", "max_constraints", "");
  if (!maxc.empty()) sc.max_constraints = static_cast<std::size_t>(parse_one(maxc, "max_constraints"));

  // controller
  task.controller.gain = parse_one(get(raw, "controller", "gain", "1.0"), "gain");
  std::string delta = get(raw, "controller", "delta", "");
  if (!delta.empty()) task.controller.delta = parse_one(delta, "delta");
  task.controller.validate();

  // simulation
  task.plant_id = get(raw, "simulation", "plant", "", true);
  task.sim.step = parse_one(get(raw, "simulation", "step", "0.001"), "step");
  task.sim.policy = disturbance_from_name(get(raw, "simulation", "disturbance", "noise"));
  task.sim.level = parse_one(get(raw, "simulation", "level", "0.5"), "level");
  task.sim.sinusoid_hz = parse_one(get(raw, "simulation", "sinusoid_hz", "0.5"), "sinusoid_hz");
  std::string seeds = get(raw, "simulation", "seeds", "1");
  task.sim_seeds.clear();
  for (double s : parse_numbers(seeds, "seeds"))
    task.sim_seeds.push_back(static_cast<std::uint64_t>(s));
  if (task.sim_seeds.empty()) fail_invalid("task: need at least one simulation seed");

  std::string x0 = get(raw, "simulation", "x0", "");
  if (!x0.empty()) {
    task.x0 = parse_numbers(x0, "x0");
    if (task.x0.size() != task.dim) fail_invalid("task: x0 dimension mismatch");
  } else if (auto it = task.regions.find("S"); it != task.regions.end()) {
    task.x0 = it->second.center;
  }
  sc.x0 = task.x0;

  sc.validate(task.dim, task.horizon);

  // cross-checks
  for (const auto& [rname, pred] : task.regions)
    if (pred.dim() != task.dim)
      fail_invalid("task: region '" + rname + "' dimension mismatch");
  Plant plant = builtin_plant(task.plant_id, task.dim);
  if (plant.n != task.dim)
    fail_invalid("task: plant '" + task.plant_id + "' has dimension " + std::to_string(plant.n) +
                 " but the task declares " + std::to_string(task.dim));
  return task;
}

TaskFile load_task(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail_invalid("cannot open task file '" + path + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_task(buf.str(), path);
}

}  // namespace sttl
