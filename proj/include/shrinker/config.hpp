#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "shrinker/minmax.hpp"
#include "shrinker/sweepout.hpp"

namespace shrinker {

/// Everything a CLI run depends on. Serialises to a canonical key=value block whose hash
/// identifies the run in manifests.
struct RunConfig {
  std::string scheme = "o24-z4";  // one of scheme_ids() or "sphere"
  std::string family = "doubled"; // sphere, doubled, catenoid, catenoid-param
  double t = 0.5;
  double s = 0.5;
  int grid = 60;
  int refine = 3;
  double tol = 1e-3;
  std::string out = "out";
  std::uint64_t seed = 1;
  std::vector<double> eps = {0.05, 0.1, 0.2};
  double delta_ratio = -1.0;  // catenoid-check uses delta = delta_ratio * eps
  FamilyConfig family_cfg;
  SolverConfig solver;
};

/// Reads `key = value` lines; '#' starts a comment. Throws ParseError with the line number.
std::map<std::string, std::string> parse_key_values(std::istream& in);

/// Applies recognised keys; unknown keys and malformed values throw InvalidParams.
void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& kv);

/// Checks enum-like names and ranges.
void check_config(const RunConfig& cfg);

std::string canonical_text(const RunConfig& cfg);

/// 64-bit FNV-1a of the canonical text.
std::uint64_t config_hash(const RunConfig& cfg);

}  // namespace shrinker
