#include "qdepth/dynamics.hpp"

#include <bit>
#include <cmath>

#include <fmt/format.h>

#include "qdepth/problems.hpp"
#include "qdepth/propagator.hpp"

namespace qdepth {

const char* to_string(Generator g) {
  return g == Generator::Problem ? "problem" : "mixer";
}

// ---------------------------------------------------------------------------
// ControlSchedule

ControlSchedule ControlSchedule::qaoa(std::span<const double> x) {
  if (x.size() % 2 != 0) {
    throw std::invalid_argument(
        fmt::format("QAOA parameter vector must have even length, got {}", x.size()));
  }
  std::vector<ScheduleStep> steps;
  steps.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    steps.push_back({i % 2 == 0 ? Generator::Problem : Generator::Mixer, x[i]});
  }
  return ControlSchedule(std::move(steps));
}

ControlSchedule ControlSchedule::qaoa_uniform(int p, double value) {
  if (p < 1) {
    throw std::invalid_argument(fmt::format("depth p must be positive, got {}", p));
  }
  const std::vector<double> x(static_cast<std::size_t>(2 * p), value);
  return qaoa(x);
}

std::vector<double> ControlSchedule::durations() const {
  std::vector<double> out;
  out.reserve(steps_.size());
  for (const auto& s : steps_) out.push_back(s.duration);
  return out;
}

std::vector<Generator> ControlSchedule::generators() const {
  std::vector<Generator> out;
  out.reserve(steps_.size());
  for (const auto& s : steps_) out.push_back(s.generator);
  return out;
}

ControlSchedule ControlSchedule::with_durations(std::span<const double> x) const {
  if (x.size() != steps_.size()) {
    throw std::invalid_argument(fmt::format("schedule has {} steps but {} durations were given",
                                            steps_.size(), x.size()));
  }
  std::vector<ScheduleStep> steps = steps_;
  for (std::size_t i = 0; i < x.size(); ++i) steps[i].duration = x[i];
  return ControlSchedule(std::move(steps));
}

double ControlSchedule::total_time() const {
  double t = 0.0;
  for (const auto& s : steps_) t += std::abs(s.duration);
  return t;
}

// ---------------------------------------------------------------------------
// DensityMatrix

namespace {

bool is_power_of_two(Eigen::Index n) {
  return n >= 2 && std::has_single_bit(static_cast<std::uint64_t>(n));
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || !is_power_of_two(m_.rows())) {
    throw std::invalid_argument(fmt::format(
        "density matrix must be square with power-of-two size, got {}x{}", m_.rows(), m_.cols()));
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(psi * psi.adjoint());
}

int DensityMatrix::n_qubits() const {
  return std::countr_zero(static_cast<std::uint64_t>(m_.rows()));
}

double DensityMatrix::trace_error() const {
  return std::abs(m_.trace() - Complex(1.0, 0.0));
}

double DensityMatrix::hermiticity_error() const {
  return qdepth::hermiticity_error(m_);
}

double DensityMatrix::min_eigenvalue() const {
  const ComplexMatrix herm = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityMatrix::purity() const {
  // tr(rho^2) = sum |rho_ab|^2 for Hermitian rho.
  return (m_.cwiseProduct(m_.transpose())).sum().real();
}

StateVector plus_state_vector(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument(fmt::format(
        "register of {} qubits outside the dense-matrix limit [1, {}]", n_qubits, kMaxQubits));
  }
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  return StateVector::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
}

DensityMatrix initial_plus_state(int n_qubits) {
  const StateVector psi = plus_state_vector(n_qubits);
  const double value = 1.0 / static_cast<double>(psi.size());
  return DensityMatrix(ComplexMatrix::Constant(psi.size(), psi.size(), Complex(value, 0.0)));
}

// ---------------------------------------------------------------------------
// Integrator configuration

void IntegratorConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument(fmt::format("integrator step must be positive, got {}", step));
  }
}

const char* to_string(IntegrationMethod m) {
  return m == IntegrationMethod::Rk4 ? "rk4" : "exact";
}

IntegrationMethod parse_integration_method(const std::string& text) {
  if (text == "rk4") return IntegrationMethod::Rk4;
  if (text == "exact") return IntegrationMethod::Exact;
  throw std::invalid_argument(
      fmt::format("unknown integrator '{}' (expected rk4 or exact)", text));
}

// ---------------------------------------------------------------------------
// Lindbladian

namespace {

void check_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(fmt::format("dimension mismatch: state is {}x{}, {} is {}x{}",
                                            a.rows(), a.cols(), what, b.rows(), b.cols()));
  }
}

}  // namespace

LindbladGenerator::LindbladGenerator(const ComplexMatrix& hamiltonian,
                                     const std::vector<CouplingOperator>& noise) {
  if (hamiltonian.rows() != hamiltonian.cols()) {
    throw std::invalid_argument("Hamiltonian must be square");
  }
  h_ = hamiltonian.sparseView();
  ComplexMatrix anti = ComplexMatrix::Zero(hamiltonian.rows(), hamiltonian.cols());
  for (const auto& [op, rate] : noise) {
    check_same_dim(hamiltonian, op, "coupling operator");
    if (rate == 0.0) continue;
    anti += 0.5 * rate * (op.adjoint() * op);
    jumps_.push_back(op.sparseView());
    jumps_adj_.push_back(ComplexMatrix(op.adjoint()).sparseView());
    rates_.push_back(rate);
  }
  anti_ = anti.sparseView();
}

void LindbladGenerator::apply(const ComplexMatrix& rho, ComplexMatrix& out) const {
  const Complex minus_i(0.0, -1.0);
  out.noalias() = minus_i * (h_ * rho);
  out.noalias() -= minus_i * (rho * h_);
  if (jumps_.empty()) return;
  out.noalias() -= anti_ * rho;
  out.noalias() -= rho * anti_;
  ComplexMatrix tmp(rho.rows(), rho.cols());
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    tmp.noalias() = jumps_[k] * rho;
    out.noalias() += rates_[k] * (tmp * jumps_adj_[k]);
  }
}

LindbladGenerator LindbladGenerator::reversed() const {
  LindbladGenerator g = *this;
  g.h_ = -h_;
  return g;
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& hamiltonian,
                           const std::vector<CouplingOperator>& noise) {
  check_same_dim(rho, hamiltonian, "Hamiltonian");
  const LindbladGenerator gen(hamiltonian, noise);
  ComplexMatrix out(rho.rows(), rho.cols());
  gen.apply(rho, out);
  return out;
}

namespace {

void rk4_integrate(const LindbladGenerator& gen, ComplexMatrix& rho, double duration,
                   double max_step) {
  const auto n_steps = static_cast<long>(std::ceil(duration / max_step));
  const double h = duration / static_cast<double>(n_steps);
  const Eigen::Index d = rho.rows();
  ComplexMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), probe(d, d);
  for (long s = 0; s < n_steps; ++s) {
    gen.apply(rho, k1);
    probe = rho + (0.5 * h) * k1;
    gen.apply(probe, k2);
    probe = rho + (0.5 * h) * k2;
    gen.apply(probe, k3);
    probe = rho + h * k3;
    gen.apply(probe, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

void check_finite(const ComplexMatrix& rho) {
  if (!rho.allFinite()) {
    throw IntegrationDiverged("integration diverged: non-finite density-matrix entries");
  }
}

bool any_dissipation(const std::vector<CouplingOperator>& noise) {
  for (const auto& op : noise) {
    if (op.coupling != 0.0) return true;
  }
  return false;
}

}  // namespace

DensityMatrix evolve_segment(const DensityMatrix& rho, const ComplexMatrix& hamiltonian,
                             double duration, const std::vector<CouplingOperator>& noise,
                             const IntegratorConfig& cfg) {
  cfg.validate();
  check_same_dim(rho.matrix(), hamiltonian, "Hamiltonian");
  if (duration == 0.0) return rho;
  if (!std::isfinite(duration)) {
    throw std::invalid_argument("segment duration must be finite");
  }
  if (duration < 0.0 && any_dissipation(noise) &&
      cfg.negative_time == NegativeTimePolicy::Reject) {
    throw NegativeDurationError(
        fmt::format("negative duration {} under dissipative evolution", duration));
  }
  const LindbladGenerator forward(hamiltonian, noise);
  const LindbladGenerator gen = duration < 0.0 ? forward.reversed() : forward;
  ComplexMatrix m = rho.matrix();
  rk4_integrate(gen, m, std::abs(duration), cfg.step);
  check_finite(m);
  return DensityMatrix(std::move(m));
}

// ---------------------------------------------------------------------------
// Model and evolver

QaoaModel QaoaModel::build(const Graph& graph, const NoiseModel& noise, ScaleFactor scale) {
  QaoaModel model;
  model.n_qubits = graph.n_nodes;
  model.observable = build_maxcut_hamiltonian(graph);
  model.problem = model.observable.scaled(scale.value());
  model.mixer = build_mixer(graph.n_nodes) * scale.value();
  model.mixer_coefficient = scale.value();
  model.noise = noise;
  model.noise_ops = build_noise_operators(noise, graph.n_nodes);
  return model;
}

Evolver::Evolver(const QaoaModel& model, const IntegratorConfig& cfg)
    : cfg_(cfg), noise_(model.noise) {
  cfg_.validate();
  if (cfg_.method == IntegrationMethod::Exact) {
    exact_ = std::make_unique<ExactPropagator>(model);
  } else {
    problem_ = std::make_unique<LindbladGenerator>(model.problem.dense(), model.noise_ops);
    mixer_ = std::make_unique<LindbladGenerator>(model.mixer, model.noise_ops);
    problem_rev_ = std::make_unique<LindbladGenerator>(problem_->reversed());
    mixer_rev_ = std::make_unique<LindbladGenerator>(mixer_->reversed());
  }
}

Evolver::~Evolver() = default;
Evolver::Evolver(Evolver&&) noexcept = default;
Evolver& Evolver::operator=(Evolver&&) noexcept = default;

void Evolver::step_rk4(ComplexMatrix& rho, const ScheduleStep& step) const {
  const bool reverse = step.duration < 0.0;
  const LindbladGenerator& gen = step.generator == Generator::Problem
                                     ? (reverse ? *problem_rev_ : *problem_)
                                     : (reverse ? *mixer_rev_ : *mixer_);
  if (gen.dim() != rho.rows()) {
    throw std::invalid_argument("dimension mismatch between state and model");
  }
  rk4_integrate(gen, rho, std::abs(step.duration), cfg_.step);
}

DensityMatrix Evolver::run(const DensityMatrix& rho0, const ControlSchedule& schedule) const {
  ComplexMatrix rho = rho0.matrix();
  for (const ScheduleStep& step : schedule.steps()) {
    if (step.duration == 0.0) continue;
    if (!std::isfinite(step.duration)) {
      throw std::invalid_argument("schedule contains a non-finite duration");
    }
    if (step.duration < 0.0 && !noise_.unitary() &&
        cfg_.negative_time == NegativeTimePolicy::Reject) {
      throw NegativeDurationError(fmt::format(
          "negative {} duration {} under {} noise", to_string(step.generator), step.duration,
          to_string(noise_.kind)));
    }
    if (exact_) {
      exact_->apply(rho, step.generator, step.duration);
    } else {
      step_rk4(rho, step);
    }
    check_finite(rho);
  }
  return DensityMatrix(std::move(rho));
}

DensityMatrix evolve_schedule(const DensityMatrix& rho0, const ControlSchedule& schedule,
                              const QaoaModel& model, const IntegratorConfig& cfg) {
  if (rho0.dim() != model.problem.dim()) {
    throw std::invalid_argument(fmt::format("state dimension {} does not match model dimension {}",
                                            rho0.dim(), model.problem.dim()));
  }
  return Evolver(model, cfg).run(rho0, schedule);
}

// ---------------------------------------------------------------------------
// Unitary oracle

UnitaryOracle::UnitaryOracle(const DiagonalObservable& problem, const ComplexMatrix& mixer)
    : problem_(problem.diagonal) {
  if (mixer.rows() != problem.dim() || mixer.cols() != problem.dim()) {
    throw std::invalid_argument("problem and mixer dimensions differ");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(mixer);
  mixer_eigenvalues_ = solver.eigenvalues();
  mixer_eigenvectors_ = solver.eigenvectors();
}

StateVector UnitaryOracle::run(const StateVector& psi, const ControlSchedule& schedule) const {
  if (psi.size() != problem_.size()) {
    throw std::invalid_argument(fmt::format("state dimension {} does not match operator dimension {}",
                                            psi.size(), problem_.size()));
  }
  StateVector out = psi;
  for (const ScheduleStep& step : schedule.steps()) {
    if (step.duration == 0.0) continue;
    if (step.generator == Generator::Problem) {
      for (Eigen::Index b = 0; b < out.size(); ++b) {
        out[b] *= std::polar(1.0, -problem_[b] * step.duration);
      }
    } else {
      StateVector coeffs = mixer_eigenvectors_.adjoint() * out;
      for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        coeffs[k] *= std::polar(1.0, -mixer_eigenvalues_[k] * step.duration);
      }
      out.noalias() = mixer_eigenvectors_ * coeffs;
    }
  }
  return out;
}

StateVector unitary_oracle(const StateVector& psi, const ControlSchedule& schedule,
                           const DiagonalObservable& problem, const ComplexMatrix& mixer) {
  return UnitaryOracle(problem, mixer).run(psi, schedule);
}

// ---------------------------------------------------------------------------
// Measurement

double expectation(const DiagonalObservable& obs, const DensityMatrix& rho) {
  if (obs.dim() != rho.dim()) {
    throw std::invalid_argument(fmt::format("observable dimension {} does not match state dimension {}",
                                            obs.dim(), rho.dim()));
  }
  Complex acc(0.0, 0.0);
  for (int b = 0; b < obs.dim(); ++b) {
    acc += obs.diagonal[b] * rho.matrix()(b, b);
  }
  if (std::abs(acc.imag()) > 1e-9) {
    throw std::domain_error(
        fmt::format("expectation has imaginary residue {:.3e}", acc.imag()));
  }
  return acc.real();
}

double expectation(const DiagonalObservable& obs, const StateVector& psi) {
  if (obs.dim() != psi.size()) {
    throw std::invalid_argument("observable and state dimensions differ");
  }
  return (obs.diagonal.array() * psi.array().abs2()).sum();
}

}  // namespace qdepth
