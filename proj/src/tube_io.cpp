#include "sttl/tube_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sttl/error.hpp"

namespace sttl {

using nlohmann::json;

namespace {

json lipschitz_to_json(const TubeLipschitz& l) {
  return json{{"l_lower", l.l_lower},
              {"l_upper", l.l_upper},
              {"l_dlower", l.l_dlower},
              {"l_dupper", l.l_dupper},
              {"gamma_bar_lower", l.gamma_bar_lower},
              {"gamma_bar_upper", l.gamma_bar_upper},
              {"max_width", l.max_width},
              {"grid_step", l.grid_step},
              {"safety_factor", l.safety_factor}};
}

TubeLipschitz lipschitz_from_json(const json& j) {
  TubeLipschitz l;
  l.l_lower = j.at("l_lower");
  l.l_upper = j.at("l_upper");
  l.l_dlower = j.at("l_dlower");
  l.l_dupper = j.at("l_dupper");
  l.gamma_bar_lower = j.at("gamma_bar_lower");
  l.gamma_bar_upper = j.at("gamma_bar_upper");
  l.max_width = j.at("max_width");
  l.grid_step = j.at("grid_step");
  l.safety_factor = j.at("safety_factor");
  return l;
}

}  // namespace

std::string tube_to_json(const TubeArtifact& a) {
  const Tube& tube = a.tube;
  json j;
  j["schema"] = "sttl-tube-v1";
  j["task_name"] = a.task_name;
  j["task_hash"] = a.task_hash;
  j["seed"] = a.seed;
  j["monitor_step"] = a.monitor_step;
  j["n"] = tube.dim();
  j["t_f"] = tube.t_f();
  j["basis"] = {{"kind", BasisSpec::kind_name(tube.basis().kind)},
                {"degree", tube.basis().degree},
                {"breakpoints", tube.basis().breakpoints}};
  j["gamma_d"] = tube.gamma_d();
  if (tube.slope_cap())
    j["slope_cap"] = *tube.slope_cap();
  else
    j["slope_cap"] = nullptr;
  json lo = json::array(), hi = json::array();
  for (std::size_t i = 0; i < tube.dim(); ++i) {
    lo.push_back(tube.curve(i, Side::lower).coeffs());
    hi.push_back(tube.curve(i, Side::upper).coeffs());
  }
  j["coeffs_lower"] = std::move(lo);
  j["coeffs_upper"] = std::move(hi);

  const Certificate& c = a.certificate;
  j["certificate"] = {{"eta_star", c.eta_star},
                      {"composite_L", c.composite_L},
                      {"epsilon", c.epsilon},
                      {"slack", c.slack},
                      {"valid", c.valid},
                      {"rho_lip", c.rho_lip},
                      {"l_mu", c.l_mu},
                      {"lipschitz", lipschitz_to_json(c.tube_lip)},
                      {"diagnostics",
                       {{"worst_separation", c.diagnostics.worst_separation},
                        {"worst_slope", c.diagnostics.worst_slope},
                        {"worst_robustness", c.diagnostics.worst_robustness},
                        {"worst_separation_time", c.diagnostics.worst_separation_time},
                        {"worst_slope_time", c.diagnostics.worst_slope_time}}}};
  return j.dump(2) + "\n";
}

TubeArtifact tube_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail_invalid(std::string("tube json: parse failure: ") + e.what());
  }
  try {
    if (j.at("schema") != "sttl-tube-v1") fail_invalid("tube json: unknown schema");
    const json& jb = j.at("basis");
    BasisSpec basis;
    basis.kind = BasisSpec::kind_from_name(jb.at("kind"));
    basis.degree = jb.at("degree");
    basis.breakpoints = jb.at("breakpoints").get<std::vector<double>>();
    basis.validate();

    std::vector<std::vector<double>> lo, hi;
    for (const auto& c : j.at("coeffs_lower")) lo.push_back(c.get<std::vector<double>>());
    for (const auto& c : j.at("coeffs_upper")) hi.push_back(c.get<std::vector<double>>());

    std::optional<double> cap;
    if (!j.at("slope_cap").is_null()) cap = j.at("slope_cap").get<double>();

    Tube tube(j.at("t_f"), basis, std::move(lo), std::move(hi),
              j.at("gamma_d").get<std::vector<double>>(), cap);
    if (tube.dim() != j.at("n").get<std::size_t>())
      fail_invalid("tube json: coefficient arrays disagree with the declared dimension");

    const json& jc = j.at("certificate");
    Certificate cert;
    cert.eta_star = jc.at("eta_star");
    cert.composite_L = jc.at("composite_L");
    cert.epsilon = jc.at("epsilon");
    cert.slack = jc.at("slack");
    cert.valid = jc.at("valid");
    cert.rho_lip = jc.at("rho_lip");
    cert.l_mu = jc.at("l_mu");
    cert.tube_lip = lipschitz_from_json(jc.at("lipschitz"));
    const json& jd = jc.at("diagnostics");
    cert.diagnostics.worst_separation = jd.at("worst_separation");
    cert.diagnostics.worst_slope = jd.at("worst_slope");
    cert.diagnostics.worst_robustness = jd.at("worst_robustness");
    cert.diagnostics.worst_separation_time = jd.at("worst_separation_time");
    cert.diagnostics.worst_slope_time = jd.at("worst_slope_time");

    TubeArtifact a{std::move(tube), cert, j.at("task_name"), j.at("task_hash"), j.at("seed"),
                   j.at("monitor_step")};
    return a;
  } catch (const error&) {
    throw;
  } catch (const std::exception& e) {
    fail_invalid(std::string("tube json: missing or malformed field: ") + e.what());
  }
}

void save_tube(const TubeArtifact& artifact, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail_invalid("cannot write tube file '" + path + "'");
  os << tube_to_json(artifact);
}

TubeArtifact load_tube(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail_invalid("cannot open tube file '" + path + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return tube_from_json(buf.str());
}

}  // namespace sttl
