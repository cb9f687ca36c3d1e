#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "funcrate/functionals.hpp"
#include "funcrate/kernels.hpp"
#include "funcrate/processes.hpp"

namespace funcrate {

enum class AbscissaMode { kLogN, kLogNOverLog };

std::string abscissa_mode_name(AbscissaMode mode);

// Fully validated experiment description. Invariants: every ladder rung
// divides n_fine, ladder strictly increasing with length >= 3 and
// max(n)^2 <= n_fine, p >= 2, (Q, V, p) integrable, ||h||_V finite, seed
// mandatory.
struct ExperimentConfig {
  ProcessSpec process;
  TestFunction h;
  WeightV V;
  MajorantQ Q;
  double horizon_T = 1.0;
  double x0 = 0.0;
  double p = 2.0;
  std::vector<int> n_ladder;
  int n_fine = 0;
  long replicates = 0;  // M
  std::uint64_t seed = 0;
  AbscissaMode abscissa_mode = AbscissaMode::kLogNOverLog;
  std::string out_csv, out_json, out_svg;
  std::map<std::string, std::string> echo;  // raw key/value pairs as parsed
};

struct ConfigResult {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> violations;  // every violation, not just the first

  bool ok() const { return violations.empty() && config.has_value(); }
};

// Flat key = value document; '#' starts a comment, lists are whitespace
// separated. Returns the validated config or the full violation list.
ConfigResult parse_config_text(const std::string& text);
ConfigResult parse_config_file(const std::string& path);

}  // namespace funcrate
