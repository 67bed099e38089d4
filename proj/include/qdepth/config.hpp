#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "qdepth/dynamics.hpp"
#include "qdepth/experiment.hpp"
#include "qdepth/optimizer.hpp"
#include "qdepth/selection.hpp"

namespace qdepth {

inline constexpr const char* kToolName = "qdepth";
inline constexpr const char* kToolVersion = "0.1.0";

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Everything an experiment command needs. Field names follow the CLI flags
/// and the keys of the key=value config file.
struct RunConfig {
  // graph source: a file, or the seeded generator
  std::string graph_path;
  int nodes = 5;
  int edges = 8;
  double weight_min = 0.1;
  double weight_max = 1.0;
  std::uint64_t seed = 7;

  std::string noise = "relaxation";
  double coupling = 0.2;

  int p = 8;      ///< initial depth for sweeps, upper end of the baseline range
  int p_min = 1;  ///< lower end of the baseline range
  double x0 = 0.1;
  double scale = ScaleFactor::kDefault;

  double eta = 0.008;
  double epsilon = 1e-3;
  int iters = 300;
  int pg_iters = 200;  ///< hybrid split: proximal iterations, the rest are plain descent

  double lambda_init = 6.0;
  double lambda_factor = 0.6;
  int rounds = 8;
  double plateau_tol = 0.01;

  double dt = 1e-3;
  std::string integrator = "exact";

  std::string out = "results";
  int jobs = 1;
  bool timing = false;  ///< fill the seconds column of baseline.csv (breaks byte-identity)

  /// Throws ConfigError naming the offending key.
  void validate() const;

  /// Sorted key=value lines with 17-digit numbers.
  [[nodiscard]] std::string serialize() const;
  /// FNV-1a 64 of serialize() without the keys that do not affect results
  /// (out, jobs), as 16 hex digits.
  [[nodiscard]] std::string hash() const;

  [[nodiscard]] Graph load_or_generate_graph() const;
  [[nodiscard]] NoiseModel noise_model() const;
  [[nodiscard]] IntegratorConfig integrator_config() const;
  [[nodiscard]] OptimizerConfig optimizer_config(bool hybrid) const;
  [[nodiscard]] LambdaSchedule lambda_schedule() const;
  [[nodiscard]] QaoaProblem problem() const;
};

/// Comment line placed at the top of text outputs.
std::string provenance_line(const RunConfig& cfg);

}  // namespace qdepth
