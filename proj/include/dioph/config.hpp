#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dioph/cfrac.hpp"
#include "dioph/experiment.hpp"

namespace dioph {

// A coefficient spec names an exact construction:
//   p/q or p             the rational itself
//   golden(depth)        golden ratio truncation (depth defaults to 40)
//   sqrt(k, depth)       sqrt(k) truncation (depth defaults to 40)
//   sigma(target, depth) constructed with sigma = target (depth defaults to 10)
struct Coefficient {
  std::string spec;
  ExactReal value;
  std::optional<CFrac> cf;  // set for constructions
};

Coefficient parse_coefficient(const std::string& spec);
std::vector<Coefficient> parse_coefficients(const std::string& comma_list);
std::vector<ExactReal> values(const std::vector<Coefficient>& cs);

struct RunConfig {
  Hyperplane hyperplane;
  std::vector<Coefficient> a;
  Coefficient b;
  ExperimentConfig experiment;
  std::string output_dir;
};

// Reads the INI file. Every missing key and violated constraint is collected
// into one ConfigError.
RunConfig load_config(const std::string& path);

}  // namespace dioph
