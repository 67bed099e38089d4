#include "qdepth/selection.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "qdepth/experiment.hpp"

namespace qdepth {

CutExtrema brute_force_extrema(const Graph& graph) {
  if (graph.n_nodes < 1 || graph.n_nodes > kMaxEnumerationNodes) {
    throw std::invalid_argument(fmt::format("enumeration supports 1..{} nodes, got {}",
                                            kMaxEnumerationNodes, graph.n_nodes));
  }
  CutExtrema out;
  out.c_min = std::numeric_limits<double>::infinity();
  out.c_max = -std::numeric_limits<double>::infinity();
  const std::uint64_t count = std::uint64_t{1} << graph.n_nodes;
  for (std::uint64_t assignment = 0; assignment < count; ++assignment) {
    double value = 0.0;
    for (const Edge& e : graph.edges) {
      const bool same = ((assignment >> e.u) & 1U) == ((assignment >> e.v) & 1U);
      value += same ? e.weight : -e.weight;
    }
    if (value < out.c_min) {
      out.c_min = value;
      out.argmin = assignment;
    }
    if (value > out.c_max) {
      out.c_max = value;
      out.argmax = assignment;
    }
  }
  return out;
}

std::string bitstring(std::uint64_t mask, int n_nodes) {
  std::string s(static_cast<std::size_t>(n_nodes), '0');
  for (int k = 0; k < n_nodes; ++k) {
    if ((mask >> k) & 1U) s[static_cast<std::size_t>(k)] = '1';
  }
  return s;
}

double approximation_ratio(double value, const CutExtrema& extrema) {
  if (!(extrema.c_max > extrema.c_min)) {
    throw std::invalid_argument(fmt::format(
        "degenerate extrema (c_min = c_max = {}): the graph has no edges", extrema.c_min));
  }
  return 1.0 - (value - extrema.c_min) / (extrema.c_max - extrema.c_min);
}

double clamp_ratio(double r) { return std::clamp(r, 0.0, 1.0); }

std::vector<ScheduleStep> merge_operations(const ControlSchedule& schedule) {
  std::vector<ScheduleStep> merged;
  for (const ScheduleStep& step : schedule.steps()) {
    if (step.duration == 0.0) continue;
    if (!merged.empty() && merged.back().generator == step.generator) {
      merged.back().duration += step.duration;
    } else {
      merged.push_back(step);
    }
  }
  return merged;
}

bool invariance_check_merge(const ControlSchedule& schedule, const ControlSchedule& merged,
                            const DiagonalObservable& problem, const ComplexMatrix& mixer,
                            double tol) {
  const UnitaryOracle oracle(problem, mixer);
  const int n_qubits = std::countr_zero(static_cast<std::uint64_t>(problem.dim()));
  const StateVector psi0 = plus_state_vector(n_qubits);
  const StateVector a = oracle.run(psi0, schedule);
  const StateVector b = oracle.run(psi0, merged);
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

void LambdaSchedule::validate() const {
  if (!(initial > 0.0) || !std::isfinite(initial)) {
    throw std::invalid_argument(fmt::format("initial lambda must be positive, got {}", initial));
  }
  if (!(factor > 0.0 && factor < 1.0)) {
    throw std::invalid_argument(fmt::format("lambda factor must lie in (0, 1), got {}", factor));
  }
  if (max_rounds < 1) {
    throw std::invalid_argument(fmt::format("rounds must be positive, got {}", max_rounds));
  }
  if (!(plateau_tol >= 0.0)) {
    throw std::invalid_argument(fmt::format("plateau tolerance must be >= 0, got {}", plateau_tol));
  }
}

std::vector<double> LambdaSchedule::values() const {
  validate();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(max_rounds));
  for (int k = 0; k < max_rounds; ++k) {
    // Nominal grid values: round to 12 significant digits so that 6 * 0.6
    // lands on the double nearest 3.6 rather than one ulp below.
    const double raw = initial * std::pow(factor, k);
    out.push_back(std::stod(fmt::format("{:.12g}", raw)));
  }
  return out;
}

ExperimentRecord run_arm(const QaoaProblem& problem, const ControlSchedule& schedule0,
                         const OptimizerConfig& opt_cfg, double lambda) {
  OptimizerConfig cfg = opt_cfg;
  cfg.lambda = lambda;
  ExperimentRecord rec;
  rec.lambda = lambda;
  rec.iterations = cfg.iterations;

  const std::vector<Generator> pattern = schedule0.generators();
  const Objective f = problem.objective(pattern);

  const auto fill_from = [&](const Trajectory& traj) {
    const TrajectoryPoint& last = traj.last();
    rec.final_x = last.x;
    rec.objective = last.objective;
    rec.final_regularized = last.regularized;
    rec.ratio = problem.ratio(last.objective);
    rec.selected_params = static_cast<int>(last.x.size()) - last.zero_count;
    rec.merged = merge_operations(schedule0.with_durations(last.x));
    rec.effective_depth = static_cast<int>(rec.merged.size());
  };

  try {
    if (cfg.hybrid) {
      const Compactor compact = [&problem, &schedule0](std::span<const double> x) {
        const ControlSchedule reduced(merge_operations(schedule0.with_durations(x)));
        return CompactedProblem{problem.objective(reduced.generators()), reduced.durations()};
      };
      const HybridResult result = run_hybrid(f, compact, schedule0.durations(), cfg);
      if (result.pg_phase.points.empty() || !result.pg_phase.ok()) {
        rec.failure = result.pg_phase.failure.value_or("proximal phase produced no points");
        return rec;
      }
      fill_from(result.pg_phase);
      if (!result.vanilla_phase.ok()) {
        rec.failure = result.vanilla_phase.failure;
        return rec;
      }
      const TrajectoryPoint& last = result.vanilla_phase.last();
      rec.phase2_ratio = problem.ratio(last.objective);
      // Keep the pattern of the compacted schedule, with the refined durations.
      for (std::size_t i = 0; i < rec.merged.size(); ++i) rec.merged[i].duration = last.x[i];
    } else {
      const Trajectory traj = run_pg(f, schedule0.durations(), cfg);
      if (traj.points.empty() || !traj.ok()) {
        rec.failure = traj.failure.value_or("optimizer produced no points");
        if (!traj.points.empty()) fill_from(traj);
        return rec;
      }
      fill_from(traj);
    }
  } catch (const std::exception& e) {
    rec.failure = e.what();
  }
  return rec;
}

std::optional<std::size_t> select_best(std::span<const ExperimentRecord> records,
                                       double plateau_tol) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    if (r.ok()) top = std::max(top, r.score());
  }
  if (!std::isfinite(top)) return std::nullopt;
  const double window = std::isfinite(plateau_tol) ? plateau_tol : 0.0;

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!r.ok() || r.score() < top - window) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto& b = records[*best];
    const bool better =
        r.selected_params < b.selected_params ||
        (r.selected_params == b.selected_params &&
         (r.score() > b.score() || (r.score() == b.score() && r.lambda > b.lambda)));
    if (better) best = i;
  }
  return best;
}

SweepResult run_lambda_sweep(const QaoaProblem& problem, const ControlSchedule& schedule0,
                             const OptimizerConfig& opt_cfg, const LambdaSchedule& lsched) {
  opt_cfg.validate();
  SweepResult result;
  const std::vector<double> grid = lsched.values();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    ExperimentRecord rec = run_arm(problem, schedule0, opt_cfg, grid[k]);
    bool stop = false;
    if (k == 0) {
      // Nothing to compare against yet: only an infinite tolerance stops here.
      stop = std::isinf(lsched.plateau_tol);
    } else {
      const ExperimentRecord& prev = result.records.back();
      // Arms that pruned everything sit on the trivial plateau of the initial
      // state; that plateau never triggers the stop.
      const bool comparable = rec.ok() && prev.ok() && rec.selected_params > 0 &&
                              prev.selected_params > 0;
      stop = comparable && std::abs(rec.score() - prev.score()) < lsched.plateau_tol;
    }
    rec.stopped_early = stop && k + 1 < grid.size();
    result.records.push_back(std::move(rec));
    if (stop && k + 1 < grid.size()) {
      result.stopped_early = true;
      break;
    }
  }
  result.best = select_best(result.records, lsched.plateau_tol);
  return result;
}

std::vector<BaselineRow> exhaustive_depth_baseline(const QaoaProblem& problem,
                                                   const OptimizerConfig& opt_cfg,
                                                   std::span<const int> p_range, double x0) {
  if (p_range.empty()) {
    throw std::invalid_argument("empty range");
  }
  OptimizerConfig cfg = opt_cfg;
  cfg.lambda = 0.0;
  cfg.hybrid.reset();
  cfg.validate();
  std::vector<BaselineRow> rows;
  rows.reserve(p_range.size());
  for (const int p : p_range) {
    const auto start = std::chrono::steady_clock::now();
    const ControlSchedule schedule = ControlSchedule::qaoa_uniform(p, x0);
    const Trajectory traj = run_gd(problem.objective(schedule.generators()), schedule.durations(), cfg);
    if (!traj.ok()) {
      throw EvaluationFailed(fmt::format("baseline at p = {} failed: {}", p, *traj.failure));
    }
    BaselineRow row;
    row.p = p;
    row.params = 2 * p;
    row.objective = traj.last().objective;
    row.ratio = problem.ratio(row.objective);
    row.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qdepth
