#ifndef STTL_TUBE_IO_HPP
#define STTL_TUBE_IO_HPP

#include <cstdint>
#include <string>

#include "sttl/certificate.hpp"
#include "sttl/tube.hpp"

namespace sttl {

// On-disk tube document: basis, coefficients, separation/slope parameters,
// the attached certificate, and provenance (task name/hash, seed). Numeric
// round-trip is bit exact.
struct TubeArtifact {
  Tube tube;
  Certificate certificate;
  std::string task_name;
  std::string task_hash;
  std::uint64_t seed = 0;
  double monitor_step = 0.0;
};

std::string tube_to_json(const TubeArtifact& artifact);
TubeArtifact tube_from_json(const std::string& json_text);

void save_tube(const TubeArtifact& artifact, const std::string& path);
TubeArtifact load_tube(const std::string& path);

}  // namespace sttl

#endif
