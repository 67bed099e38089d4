#include "qdepth/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <fmt/format.h>

namespace qdepth {

void OptimizerConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument(fmt::format("eta must be positive, got {}", eta));
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument(fmt::format("epsilon must be positive, got {}", epsilon));
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument(fmt::format("lambda must be >= 0, got {}", lambda));
  }
  if (iterations < 0) {
    throw std::invalid_argument(fmt::format("iterations must be >= 0, got {}", iterations));
  }
  if (hybrid) {
    if (hybrid->pg_iterations < 0 || hybrid->vanilla_iterations < 0 ||
        hybrid->pg_iterations + hybrid->vanilla_iterations != iterations) {
      throw std::invalid_argument(fmt::format(
          "hybrid split ({}, {}) must be non-negative and sum to {} iterations",
          hybrid->pg_iterations, hybrid->vanilla_iterations, iterations));
    }
  }
  if (jobs < 1) {
    throw std::invalid_argument(fmt::format("jobs must be >= 1, got {}", jobs));
  }
}

namespace {

double checked_eval(const Objective& f, std::span<const double> x) {
  double value = 0.0;
  try {
    value = f(x);
  } catch (const std::exception& e) {
    throw EvaluationFailed(fmt::format("objective evaluation failed: {}", e.what()));
  }
  if (!std::isfinite(value)) {
    throw EvaluationFailed("objective evaluation returned a non-finite value");
  }
  return value;
}

}  // namespace

std::vector<double> fd_gradient(const Objective& f, std::span<const double> x, double epsilon,
                                int jobs) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("finite-difference epsilon must be positive");
  }
  const std::size_t n = x.size();
  // values[2i] = f(x + eps e_i), values[2i + 1] = f(x - eps e_i)
  std::vector<double> values(2 * n, 0.0);
  const auto evaluate = [&](std::size_t k) {
    std::vector<double> probe(x.begin(), x.end());
    probe[k / 2] += (k % 2 == 0) ? epsilon : -epsilon;
    values[k] = checked_eval(f, probe);
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 2 * n);
  if (workers <= 1) {
    for (std::size_t k = 0; k < 2 * n; ++k) evaluate(k);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = w; k < 2 * n; k += workers) evaluate(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  std::vector<double> grad(n);
  for (std::size_t i = 0; i < n; ++i) {
    grad[i] = (values[2 * i] - values[2 * i + 1]) / (2.0 * epsilon);
  }
  return grad;
}

double soft_threshold(double z, double threshold) {
  if (z > threshold) return z - threshold;
  if (z < -threshold) return z + threshold;
  return 0.0;
}

std::vector<double> gd_step(std::span<const double> x, std::span<const double> gradient,
                            double eta) {
  if (x.size() != gradient.size()) {
    throw std::invalid_argument("parameter and gradient sizes differ");
  }
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - eta * gradient[i];
  return out;
}

std::vector<double> pg_step(std::span<const double> x, std::span<const double> gradient,
                            double eta, double lambda) {
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("lambda must be >= 0");
  }
  std::vector<double> z = gd_step(x, gradient, eta);
  const double threshold = lambda * eta;
  for (double& v : z) v = soft_threshold(v, threshold);
  return z;
}

double l1_norm(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += std::abs(v);
  return acc;
}

int count_zeros(std::span<const double> x) {
  return static_cast<int>(std::count(x.begin(), x.end(), 0.0));
}

namespace {

enum class StepKind { Gradient, Proximal };

TrajectoryPoint make_point(const Objective& f, std::vector<double> x, double lambda) {
  TrajectoryPoint p;
  p.objective = checked_eval(f, x);
  p.regularized = p.objective + lambda * l1_norm(x);
  p.zero_count = count_zeros(x);
  p.x = std::move(x);
  return p;
}

Trajectory descend(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg,
                   int iterations, StepKind kind) {
  Trajectory traj;
  traj.points.reserve(static_cast<std::size_t>(iterations) + 1);
  try {
    traj.points.push_back(make_point(f, std::move(x0), cfg.lambda));
    for (int k = 0; k < iterations; ++k) {
      const std::vector<double>& x = traj.points.back().x;
      const std::vector<double> grad = fd_gradient(f, x, cfg.epsilon, cfg.jobs);
      std::vector<double> next = kind == StepKind::Proximal ? pg_step(x, grad, cfg.eta, cfg.lambda)
                                                            : gd_step(x, grad, cfg.eta);
      traj.points.push_back(make_point(f, std::move(next), cfg.lambda));
    }
  } catch (const EvaluationFailed& e) {
    traj.failure = e.what();
  }
  return traj;
}

}  // namespace

Trajectory run_gd(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg) {
  cfg.validate();
  return descend(f, std::move(x0), cfg, cfg.iterations, StepKind::Gradient);
}

Trajectory run_pg(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg) {
  cfg.validate();
  return descend(f, std::move(x0), cfg, cfg.iterations, StepKind::Proximal);
}

HybridResult run_hybrid(const Objective& f, const Compactor& compact, std::vector<double> x0,
                        const OptimizerConfig& cfg) {
  cfg.validate();
  if (!cfg.hybrid) {
    throw std::invalid_argument("run_hybrid requires a hybrid split");
  }
  HybridResult result;
  result.pg_phase = descend(f, std::move(x0), cfg, cfg.hybrid->pg_iterations, StepKind::Proximal);
  if (!result.pg_phase.ok()) {
    result.vanilla_phase.failure = "skipped: proximal phase failed";
    return result;
  }
  CompactedProblem reduced = compact(result.pg_phase.last().x);
  OptimizerConfig plain = cfg;
  plain.lambda = 0.0;
  result.vanilla_phase = descend(reduced.objective, std::move(reduced.x), plain,
                                 cfg.hybrid->vanilla_iterations, StepKind::Gradient);
  return result;
}

}  // namespace qdepth
