#include "qdepth/config.hpp"

#include <cmath>

#include <fmt/format.h>

namespace qdepth {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

template <typename T>
void require(bool ok, const char* key, const T& value, const char* rule) {
  if (!ok) {
    throw ConfigError(fmt::format("invalid {} = {}: {}", key, value, rule));
  }
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void RunConfig::validate() const {
  if (graph_path.empty()) {
    require(nodes >= 2 && nodes <= kMaxQubits, "nodes", nodes, "must lie in [2, 12]");
    const int max_edges = nodes * (nodes - 1) / 2;
    require(edges >= 1 && edges <= max_edges, "edges", edges,
            "must lie in [1, nodes*(nodes-1)/2]");
    require(weight_min > 0.0 && std::isfinite(weight_min), "weight-min", weight_min,
            "must be positive");
    require(weight_max >= weight_min && std::isfinite(weight_max), "weight-max", weight_max,
            "must be >= weight-min");
  }
  try {
    (void)parse_noise_kind(noise);
    (void)parse_integration_method(integrator);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  require(coupling >= 0.0 && std::isfinite(coupling), "coupling", coupling, "must be >= 0");
  require(p >= 1 && p <= 64, "p", p, "must lie in [1, 64]");
  require(p_min >= 1, "p-min", p_min, "must be >= 1");
  require(std::isfinite(x0), "x0", x0, "must be finite");
  require(scale > 0.0 && std::isfinite(scale), "scale", scale, "must be positive");
  require(eta > 0.0 && std::isfinite(eta), "eta", eta, "must be positive");
  require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon", epsilon, "must be positive");
  require(iters >= 0, "iters", iters, "must be >= 0");
  require(pg_iters >= 0 && pg_iters <= iters, "pg-iters", pg_iters, "must lie in [0, iters]");
  require(lambda_init > 0.0 && std::isfinite(lambda_init), "lambda-init", lambda_init,
          "must be positive");
  require(lambda_factor > 0.0 && lambda_factor < 1.0, "lambda-factor", lambda_factor,
          "must lie in (0, 1)");
  require(rounds >= 1, "rounds", rounds, "must be >= 1");
  require(plateau_tol >= 0.0, "plateau-tol", plateau_tol, "must be >= 0");
  require(dt > 0.0 && std::isfinite(dt), "dt", dt, "must be positive");
  require(jobs >= 1, "jobs", jobs, "must be >= 1");
  require(!out.empty(), "out", "''", "must name a directory");
}

std::string RunConfig::serialize() const {
  // Keys in lexicographic order.
  std::string s;
  s += fmt::format("coupling={}\n", num(coupling));
  s += fmt::format("dt={}\n", num(dt));
  s += fmt::format("edges={}\n", edges);
  s += fmt::format("epsilon={}\n", num(epsilon));
  s += fmt::format("eta={}\n", num(eta));
  if (!graph_path.empty()) s += fmt::format("graph={}\n", graph_path);
  s += fmt::format("integrator={}\n", integrator);
  s += fmt::format("iters={}\n", iters);
  s += fmt::format("jobs={}\n", jobs);
  s += fmt::format("lambda-factor={}\n", num(lambda_factor));
  s += fmt::format("lambda-init={}\n", num(lambda_init));
  s += fmt::format("nodes={}\n", nodes);
  s += fmt::format("noise={}\n", noise);
  s += fmt::format("out={}\n", out);
  s += fmt::format("p={}\n", p);
  s += fmt::format("p-min={}\n", p_min);
  s += fmt::format("pg-iters={}\n", pg_iters);
  s += fmt::format("plateau-tol={}\n", num(plateau_tol));
  s += fmt::format("rounds={}\n", rounds);
  s += fmt::format("scale={}\n", num(scale));
  s += fmt::format("seed={}\n", seed);
  s += fmt::format("timing={}\n", timing ? "true" : "false");
  s += fmt::format("weight-max={}\n", num(weight_max));
  s += fmt::format("weight-min={}\n", num(weight_min));
  s += fmt::format("x0={}\n", num(x0));
  return s;
}

std::string RunConfig::hash() const {
  RunConfig canonical = *this;
  canonical.out = "-";
  canonical.jobs = 1;
  std::string text = canonical.serialize();
  if (!graph_path.empty()) {
    // The path alone does not pin the instance.
    text += serialize_graph(load_graph(graph_path));
  }
  return fmt::format("{:016x}", fnv1a(text));
}

Graph RunConfig::load_or_generate_graph() const {
  if (!graph_path.empty()) {
    return load_graph(graph_path);
  }
  return random_graph(nodes, edges, {weight_min, weight_max}, seed);
}

NoiseModel RunConfig::noise_model() const {
  return NoiseModel(parse_noise_kind(noise), coupling);
}

IntegratorConfig RunConfig::integrator_config() const {
  return experiment_integrator(parse_integration_method(integrator), dt);
}

OptimizerConfig RunConfig::optimizer_config(bool hybrid) const {
  OptimizerConfig cfg;
  cfg.eta = eta;
  cfg.epsilon = epsilon;
  cfg.iterations = iters;
  cfg.jobs = jobs;
  if (hybrid) cfg.hybrid = HybridSplit{pg_iters, iters - pg_iters};
  return cfg;
}

LambdaSchedule RunConfig::lambda_schedule() const {
  return LambdaSchedule{lambda_init, lambda_factor, rounds, plateau_tol};
}

QaoaProblem RunConfig::problem() const {
  return QaoaProblem(load_or_generate_graph(), noise_model(), ScaleFactor(scale),
                     integrator_config());
}

std::string provenance_line(const RunConfig& cfg) {
  return fmt::format("{} {} config_hash={}", kToolName, kToolVersion, cfg.hash());
}

}  // namespace qdepth
