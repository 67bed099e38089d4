#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdepth/dynamics.hpp"
#include "qdepth/optimizer.hpp"
#include "qdepth/problems.hpp"

namespace qdepth {

class QaoaProblem;

/// Exact extrema of sum w_ij s_i s_j over all spin assignments. Bit k of an
/// arg mask is node k, with the same sign convention as the operators.
struct CutExtrema {
  double c_min = 0.0;
  double c_max = 0.0;
  std::uint64_t argmin = 0;
  std::uint64_t argmax = 0;
};

inline constexpr int kMaxEnumerationNodes = 24;

CutExtrema brute_force_extrema(const Graph& graph);

/// Node 0 first.
std::string bitstring(std::uint64_t mask, int n_nodes);

/// r = 1 - (value - c_min) / (c_max - c_min); raw, not clamped.
double approximation_ratio(double value, const CutExtrema& extrema);
double clamp_ratio(double r);

/// Drops zero-duration entries and folds neighbours with the same generator.
std::vector<ScheduleStep> merge_operations(const ControlSchedule& schedule);

/// True when both schedules give the same noiseless final state within `tol`.
bool invariance_check_merge(const ControlSchedule& schedule, const ControlSchedule& merged,
                            const DiagonalObservable& problem, const ComplexMatrix& mixer,
                            double tol = 1e-10);

struct LambdaSchedule {
  double initial = 6.0;
  double factor = 0.6;
  int max_rounds = 8;
  double plateau_tol = 0.01;

  void validate() const;
  [[nodiscard]] std::vector<double> values() const;
};

struct ExperimentRecord {
  double lambda = 0.0;
  int selected_params = 0;   ///< nonzero entries of the final parameter vector
  int effective_depth = 0;   ///< operations left after merging
  double ratio = 0.0;        ///< unregularized ratio at the end of the proximal run
  double objective = 0.0;    ///< tr(H_o rho) at that point
  std::optional<double> phase2_ratio;  ///< hybrid runs: ratio after the plain-descent phase
  std::vector<double> final_x;
  std::vector<ScheduleStep> merged;
  int iterations = 0;
  double final_regularized = 0.0;
  bool stopped_early = false;
  std::optional<std::string> failure;

  [[nodiscard]] bool ok() const { return !failure.has_value(); }
  /// Ratio used to rank arms: the phase-2 value for hybrid runs.
  [[nodiscard]] double score() const { return phase2_ratio.value_or(ratio); }
};

struct SweepResult {
  std::vector<ExperimentRecord> records;
  std::optional<std::size_t> best;
  bool stopped_early = false;
};

/// Runs one proximal (or hybrid, when opt_cfg.hybrid is set) optimization at
/// the given lambda starting from schedule0.
ExperimentRecord run_arm(const QaoaProblem& problem, const ControlSchedule& schedule0,
                         const OptimizerConfig& opt_cfg, double lambda);

/// Shrinking-lambda sweep with plateau early stop.
SweepResult run_lambda_sweep(const QaoaProblem& problem, const ControlSchedule& schedule0,
                             const OptimizerConfig& opt_cfg, const LambdaSchedule& lsched);

/// Leftmost point of the plateau: among successful records whose score lies
/// within the tolerance of the best score, the one with the fewest selected
/// parameters (then higher score, then larger lambda).
std::optional<std::size_t> select_best(std::span<const ExperimentRecord> records,
                                       double plateau_tol);

struct BaselineRow {
  int p = 0;
  int params = 0;
  double ratio = 0.0;
  double objective = 0.0;
  double seconds = 0.0;
};

/// Unregularized gradient descent from x0 at every depth in p_range.
std::vector<BaselineRow> exhaustive_depth_baseline(const QaoaProblem& problem,
                                                   const OptimizerConfig& opt_cfg,
                                                   std::span<const int> p_range, double x0);

}  // namespace qdepth
