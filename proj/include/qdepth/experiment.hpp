#pragma once

#include <memory>
#include <vector>

#include "qdepth/dynamics.hpp"
#include "qdepth/optimizer.hpp"
#include "qdepth/problems.hpp"
#include "qdepth/selection.hpp"

namespace qdepth {

/// One Max-Cut instance under one noise model, ready to evaluate schedules.
/// Cheap to copy; copies share the immutable evolver.
class QaoaProblem {
 public:
  QaoaProblem(Graph graph, const NoiseModel& noise, ScaleFactor scale,
              const IntegratorConfig& integrator);

  [[nodiscard]] const Graph& graph() const { return *graph_; }
  [[nodiscard]] const QaoaModel& model() const { return *model_; }
  [[nodiscard]] const CutExtrema& extrema() const { return extrema_; }
  [[nodiscard]] const IntegratorConfig& integrator() const { return evolver_->config(); }

  [[nodiscard]] DensityMatrix final_state(const ControlSchedule& schedule) const;
  /// tr(H_o rho) for the unscaled cost Hamiltonian.
  [[nodiscard]] double evaluate(const ControlSchedule& schedule) const;
  [[nodiscard]] double ratio(double objective_value) const;

  /// Objective over the durations of a fixed generator pattern.
  [[nodiscard]] Objective objective(std::vector<Generator> pattern) const;

 private:
  std::shared_ptr<const Graph> graph_;
  std::shared_ptr<const QaoaModel> model_;
  std::shared_ptr<const Evolver> evolver_;
  std::shared_ptr<const DensityMatrix> rho0_;
  CutExtrema extrema_;
};

/// Integrator settings used by the experiment commands: closed-form segment
/// propagators, with negative durations run as reversed Hamiltonians.
IntegratorConfig experiment_integrator(IntegrationMethod method = IntegrationMethod::Exact,
                                       double step = 1e-3);

}  // namespace qdepth
