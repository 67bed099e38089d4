#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdepth {

/// Scalar objective over a parameter vector. Must be safe to call concurrently
/// when gradients are evaluated with more than one job.
using Objective = std::function<double(std::span<const double>)>;

class EvaluationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HybridSplit {
  int pg_iterations = 200;
  int vanilla_iterations = 100;
};

struct OptimizerConfig {
  double eta = 0.008;
  double epsilon = 1e-3;
  double lambda = 0.0;
  int iterations = 300;
  std::optional<HybridSplit> hybrid;
  int jobs = 1;  ///< parallel objective evaluations inside one gradient

  void validate() const;
};

struct TrajectoryPoint {
  std::vector<double> x;
  double objective = 0.0;    ///< f(x)
  double regularized = 0.0;  ///< f(x) + lambda * |x|_1
  int zero_count = 0;        ///< entries that are exactly 0.0
};

/// Iterates x_0 ... x_K. On an evaluation failure the run stops and `failure`
/// holds the message; the points recorded so far are kept.
struct Trajectory {
  std::vector<TrajectoryPoint> points;
  std::optional<std::string> failure;

  [[nodiscard]] bool ok() const { return !failure.has_value(); }
  [[nodiscard]] const TrajectoryPoint& last() const { return points.back(); }
};

/// Central difference (f(x + e_i eps) - f(x - e_i eps)) / (2 eps) per entry.
std::vector<double> fd_gradient(const Objective& f, std::span<const double> x, double epsilon,
                                int jobs = 1);

/// Proximal map of t*|.|: shrink toward zero by t, exactly 0.0 on [-t, t].
double soft_threshold(double z, double threshold);

std::vector<double> gd_step(std::span<const double> x, std::span<const double> gradient,
                            double eta);
std::vector<double> pg_step(std::span<const double> x, std::span<const double> gradient,
                            double eta, double lambda);

double l1_norm(std::span<const double> x);
int count_zeros(std::span<const double> x);

/// Plain gradient descent for cfg.iterations steps; cfg.lambda only enters the
/// recorded regularized value.
Trajectory run_gd(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg);

/// Proximal gradient descent on f + lambda |x|_1 for cfg.iterations steps.
Trajectory run_pg(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg);

/// Result of removing pruned entries after the proximal phase.
struct CompactedProblem {
  Objective objective;
  std::vector<double> x;
};

using Compactor = std::function<CompactedProblem(std::span<const double>)>;

struct HybridResult {
  Trajectory pg_phase;       ///< pg_iterations + 1 points
  Trajectory vanilla_phase;  ///< vanilla_iterations + 1 points on the compacted vector
  [[nodiscard]] bool ok() const { return pg_phase.ok() && vanilla_phase.ok(); }
};

/// Proximal phase on f, then `compact` drops the zeroed entries and plain
/// gradient descent continues on the reduced problem without the penalty.
HybridResult run_hybrid(const Objective& f, const Compactor& compact, std::vector<double> x0,
                        const OptimizerConfig& cfg);

}  // namespace qdepth
