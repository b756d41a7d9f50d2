#ifndef STTL_TASK_HPP
#define STTL_TASK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sttl/constraints.hpp"
#include "sttl/controller.hpp"
#include "sttl/sim.hpp"
#include "sttl/stl_formula.hpp"

namespace sttl {

// Parsed task bundle: regions, formula, basis, synthesis and simulation
// configuration. See README for the file grammar; bundled tasks double as
// golden examples.
struct TaskFile {
  std::string name;
  std::size_t dim = 0;
  double horizon = 0.0;

  RegionTable regions;
  std::string formula_text;
  FormulaPtr formula;

  BasisSpec basis;
  SynthesisConfig synth;

  std::string plant_id;
  ControllerParams controller;
  SimConfig sim;
  std::vector<std::uint64_t> sim_seeds{1};
  std::vector<double> x0;  // defaults to the center of region S

  std::string source_path;
  std::string hash;  // fnv1a-64 over the raw file bytes, 16 hex digits
};

TaskFile parse_task(const std::string& text, const std::string& origin);
TaskFile load_task(const std::string& path);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace sttl

#endif
