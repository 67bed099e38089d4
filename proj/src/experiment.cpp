#include "qdepth/experiment.hpp"

#include <fmt/format.h>

namespace qdepth {

QaoaProblem::QaoaProblem(Graph graph, const NoiseModel& noise, ScaleFactor scale,
                         const IntegratorConfig& integrator)
    : graph_(std::make_shared<const Graph>(make_graph(graph.n_nodes, std::move(graph.edges)))),
      model_(std::make_shared<const QaoaModel>(QaoaModel::build(*graph_, noise, scale))),
      evolver_(std::make_shared<const Evolver>(*model_, integrator)),
      rho0_(std::make_shared<const DensityMatrix>(initial_plus_state(graph_->n_nodes))),
      extrema_(brute_force_extrema(*graph_)) {
  if (!(extrema_.c_max > extrema_.c_min)) {
    throw std::invalid_argument("graph has no edges: the approximation ratio is undefined");
  }
}

DensityMatrix QaoaProblem::final_state(const ControlSchedule& schedule) const {
  return evolver_->run(*rho0_, schedule);
}

double QaoaProblem::evaluate(const ControlSchedule& schedule) const {
  return expectation(model_->observable, final_state(schedule));
}

double QaoaProblem::ratio(double objective_value) const {
  return approximation_ratio(objective_value, extrema_);
}

Objective QaoaProblem::objective(std::vector<Generator> pattern) const {
  return [self = *this, pattern = std::move(pattern)](std::span<const double> x) {
    if (x.size() != pattern.size()) {
      throw std::invalid_argument(fmt::format("expected {} durations, got {}", pattern.size(),
                                              x.size()));
    }
    std::vector<ScheduleStep> steps(pattern.size());
    for (std::size_t i = 0; i < pattern.size(); ++i) steps[i] = {pattern[i], x[i]};
    return self.evaluate(ControlSchedule(std::move(steps)));
  };
}

IntegratorConfig experiment_integrator(IntegrationMethod method, double step) {
  IntegratorConfig cfg;
  cfg.method = method;
  cfg.step = step;
  cfg.negative_time = NegativeTimePolicy::ReverseHamiltonian;
  return cfg;
}

}  // namespace qdepth
