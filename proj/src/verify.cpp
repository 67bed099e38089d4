#include "qdepth/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "qdepth/dynamics.hpp"
#include "qdepth/optimizer.hpp"
#include "qdepth/problems.hpp"
#include "qdepth/selection.hpp"

namespace qdepth {

namespace {

using Check = std::function<double(CheckResult&)>;

ControlSchedule random_schedule(std::mt19937_64& rng, int p, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> x(static_cast<std::size_t>(2 * p));
  for (double& v : x) v = d(rng);
  return ControlSchedule::qaoa(x);
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

ComplexMatrix projector(const StateVector& psi) { return psi * psi.adjoint(); }

DensityMatrix single_qubit(Complex a00, Complex a01, Complex a11) {
  ComplexMatrix m(2, 2);
  m << a00, a01, std::conj(a01), a11;
  return DensityMatrix(m);
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const VerifyOptions& opts) {
  IntegratorConfig rk4;
  rk4.step = opts.dt;
  rk4.method = IntegrationMethod::Rk4;
  IntegratorConfig exact = rk4;
  exact.method = IntegrationMethod::Exact;

  const Graph graph = random_graph(3, 3, {0.1, 1.0}, opts.seed);
  const NoiseModel quiet;
  const NoiseModel relaxation(NoiseKind::Relaxation, 0.2);
  const NoiseModel dephasing(NoiseKind::Dephasing, 0.2);

  std::vector<std::pair<std::string, Check>> checks;
  checks.emplace_back("generators-hermitian", [&](CheckResult& r) {
    r.tolerance = 1e-12;
    const QaoaModel m = QaoaModel::build(graph, quiet, ScaleFactor());
    return std::max(hermiticity_error(m.observable.dense()), hermiticity_error(m.mixer));
  });
  checks.emplace_back("mixer-spectrum", [&](CheckResult& r) {
    r.tolerance = 1e-10;
    const int n = 4;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(build_mixer(n));
    std::vector<double> expected;
    for (int k = 0; k <= n; ++k) {
      const int mult = static_cast<int>(std::round(std::tgamma(n + 1) /
                                                   (std::tgamma(k + 1) * std::tgamma(n - k + 1))));
      expected.insert(expected.end(), static_cast<std::size_t>(mult), n - 2.0 * k);
    }
    std::sort(expected.begin(), expected.end());
    double worst = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      worst = std::max(worst, std::abs(es.eigenvalues()[i] - expected[static_cast<std::size_t>(i)]));
    }
    return worst;
  });
  checks.emplace_back("rabi-oscillation", [&](CheckResult& r) {
    r.tolerance = 1e-6;
    const DensityMatrix rho0 = single_qubit(1.0, 0.0, 0.0);
    double worst = 0.0;
    for (const double t : {0.3, 0.9, 1.7}) {
      const DensityMatrix rho = evolve_segment(rho0, pauli(Pauli::X), t, {}, rk4);
      worst = std::max(worst, std::abs(rho.matrix()(1, 1).real() - std::pow(std::sin(t), 2)));
    }
    return worst;
  });
  checks.emplace_back("dephasing-coherence", [&](CheckResult& r) {
    r.tolerance = 1e-6;
    const DensityMatrix rho0 = single_qubit(0.5, 0.5, 0.5);
    const auto ops = build_noise_operators(dephasing, 1);
    const ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
    double worst = 0.0;
    for (const double t : {0.25, 1.0, 2.5}) {
      const DensityMatrix rho = evolve_segment(rho0, zero, t, ops, rk4);
      worst = std::max(worst, std::abs(rho.matrix()(0, 1) - 0.5 * std::exp(-2.0 * 0.2 * t)));
    }
    return worst;
  });
  checks.emplace_back("relaxation-decay", [&](CheckResult& r) {
    r.tolerance = 1e-6;
    const DensityMatrix rho0 = single_qubit(1.0, 0.0, 0.0);
    const auto ops = build_noise_operators(relaxation, 1);
    const ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
    double worst = 0.0;
    for (const double t : {0.25, 1.0, 2.5}) {
      const DensityMatrix rho = evolve_segment(rho0, zero, t, ops, rk4);
      worst = std::max(worst, std::abs(rho.matrix()(0, 0).real() - std::exp(-0.2 * t)));
    }
    return worst;
  });
  checks.emplace_back("noiseless-matches-unitary", [&](CheckResult& r) {
    r.tolerance = 1e-5;
    const QaoaModel m = QaoaModel::build(graph, quiet, ScaleFactor());
    const UnitaryOracle oracle(m.problem, m.mixer);
    std::mt19937_64 rng(opts.seed);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const ControlSchedule s = random_schedule(rng, 1 + trial % 3, -0.3, 0.3);
      const StateVector psi = oracle.run(plus_state_vector(m.n_qubits), s);
      const DensityMatrix rho = evolve_schedule(initial_plus_state(m.n_qubits), s, m, rk4);
      worst = std::max(worst, max_abs(rho.matrix() - projector(psi)));
    }
    return worst;
  });
  for (const auto* noise : {&relaxation, &dephasing}) {
    checks.emplace_back(fmt::format("{}-state-valid", to_string(noise->kind)), [&, noise](CheckResult& r) {
      r.tolerance = 1e-8;
      const QaoaModel m = QaoaModel::build(graph, *noise, ScaleFactor());
      std::mt19937_64 rng(opts.seed + 1);
      double worst = 0.0;
      for (int trial = 0; trial < 3; ++trial) {
        const ControlSchedule s = random_schedule(rng, 2, 0.0, 0.3);
        const DensityMatrix rho = evolve_schedule(initial_plus_state(m.n_qubits), s, m, rk4);
        worst = std::max({worst, rho.trace_error(), rho.hermiticity_error(),
                          std::max(0.0, -rho.min_eigenvalue())});
      }
      return worst;
    });
  }
  checks.emplace_back("exact-matches-rk4", [&](CheckResult& r) {
    r.tolerance = 1e-6;
    std::mt19937_64 rng(opts.seed + 2);
    double worst = 0.0;
    for (const auto* noise : {&quiet, &relaxation, &dephasing}) {
      const QaoaModel m = QaoaModel::build(graph, *noise, ScaleFactor());
      const ControlSchedule s = random_schedule(rng, 2, 0.0, 0.3);
      const DensityMatrix a = evolve_schedule(initial_plus_state(m.n_qubits), s, m, rk4);
      const DensityMatrix b = evolve_schedule(initial_plus_state(m.n_qubits), s, m, exact);
      worst = std::max(worst, max_abs(a.matrix() - b.matrix()));
    }
    return worst;
  });
  checks.emplace_back("soft-threshold", [&](CheckResult& r) {
    r.tolerance = 0.0;
    const double cases[][3] = {{0.0625, 0.125, 0.0}, {-0.0625, 0.125, 0.0}, {0.125, 0.125, 0.0},
                               {0.75, 0.25, 0.5}, {-0.75, 0.25, -0.5}, {0.0, 0.0, 0.0}};
    double worst = 0.0;
    for (const auto& c : cases) worst = std::max(worst, std::abs(soft_threshold(c[0], c[1]) - c[2]));
    return worst;
  });
  checks.emplace_back("cut-extrema", [&](CheckResult& r) {
    r.tolerance = 0.0;
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const int n = 2 + k % 5;
      const Graph g = random_graph(n, std::min(n, n * (n - 1) / 2), {0.1, 1.0}, opts.seed + 100 + static_cast<std::uint64_t>(k));
      const CutExtrema ex = brute_force_extrema(g);
      const Eigen::VectorXd& d = build_maxcut_hamiltonian(g).diagonal;
      worst = std::max({worst, std::abs(ex.c_min - d.minCoeff()), std::abs(ex.c_max - d.maxCoeff())});
    }
    return worst;
  });
  checks.emplace_back("merge-invariance", [&](CheckResult& r) {
    r.tolerance = 1e-10;
    const QaoaModel m = QaoaModel::build(graph, quiet, ScaleFactor());
    const UnitaryOracle oracle(m.problem, m.mixer);
    std::mt19937_64 rng(opts.seed + 3);
    std::bernoulli_distribution prune(0.4);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> x = random_schedule(rng, 4, -0.5, 0.5).durations();
      for (double& v : x) {
        if (prune(rng)) v = 0.0;
      }
      const ControlSchedule s = ControlSchedule::qaoa(x);
      const ControlSchedule merged(merge_operations(s));
      const StateVector psi0 = plus_state_vector(m.n_qubits);
      worst = std::max(worst, (oracle.run(psi0, s) - oracle.run(psi0, merged)).cwiseAbs().maxCoeff());
    }
    return worst;
  });

  std::vector<CheckResult> results;
  for (auto& [name, fn] : checks) {
    CheckResult r;
    r.name = name;
    try {
      r.measured = fn(r);
      r.passed = std::isfinite(r.measured) && r.measured <= r.tolerance;
    } catch (const std::exception& e) {
      r.measured = std::numeric_limits<double>::infinity();
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_report(const std::vector<CheckResult>& results) {
  std::string s;
  int passed = 0;
  for (const auto& r : results) {
    s += fmt::format("{} {:<28} error = {:.3e}  tol = {:.1e}{}\n", r.passed ? "PASS" : "FAIL",
                     r.name, r.measured, r.tolerance, r.detail.empty() ? "" : "  (" + r.detail + ")");
    passed += r.passed ? 1 : 0;
  }
  s += fmt::format("{}/{} checks passed\n", passed, results.size());
  return s;
}

}  // namespace qdepth
