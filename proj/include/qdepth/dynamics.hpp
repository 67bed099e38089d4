#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>

#include "qdepth/operators.hpp"

namespace qdepth {

struct Graph;

enum class Generator { Problem, Mixer };

const char* to_string(Generator g);

struct ScheduleStep {
  Generator generator = Generator::Problem;
  double duration = 0.0;

  friend bool operator==(const ScheduleStep&, const ScheduleStep&) = default;
};

/// Ordered sequence of (generator, duration) segments. A freshly built QAOA
/// schedule alternates Problem, Mixer, ...; merged schedules need not.
class ControlSchedule {
 public:
  ControlSchedule() = default;
  explicit ControlSchedule(std::vector<ScheduleStep> steps) : steps_(std::move(steps)) {}

  /// x = (gamma_1, beta_1, ..., gamma_p, beta_p) in execution order.
  static ControlSchedule qaoa(std::span<const double> x);
  static ControlSchedule qaoa_uniform(int p, double value);

  [[nodiscard]] const std::vector<ScheduleStep>& steps() const { return steps_; }
  [[nodiscard]] std::size_t size() const { return steps_.size(); }
  [[nodiscard]] std::vector<double> durations() const;
  [[nodiscard]] std::vector<Generator> generators() const;
  /// Same generator pattern, new durations.
  [[nodiscard]] ControlSchedule with_durations(std::span<const double> x) const;
  /// Sum of |duration|, the time the register is exposed to noise.
  [[nodiscard]] double total_time() const;

  friend bool operator==(const ControlSchedule&, const ControlSchedule&) = default;

 private:
  std::vector<ScheduleStep> steps_;
};

/// 2^N x 2^N density operator.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);
  static DensityMatrix pure(const StateVector& psi);

  [[nodiscard]] const ComplexMatrix& matrix() const { return m_; }
  [[nodiscard]] ComplexMatrix& matrix() { return m_; }
  [[nodiscard]] int dim() const { return static_cast<int>(m_.rows()); }
  [[nodiscard]] int n_qubits() const;

  [[nodiscard]] double trace_error() const;  ///< |tr(rho) - 1|
  [[nodiscard]] double hermiticity_error() const;
  [[nodiscard]] double min_eigenvalue() const;
  [[nodiscard]] double purity() const;  ///< tr(rho^2)

 private:
  ComplexMatrix m_;
};

/// |s><s| with |s> the uniform superposition; every entry is 2^-N.
DensityMatrix initial_plus_state(int n_qubits);
StateVector plus_state_vector(int n_qubits);

enum class IntegrationMethod {
  Rk4,    ///< fixed-step classical Runge-Kutta on the master equation
  Exact,  ///< closed-form segment propagators (see propagator.hpp)
};

/// How a negative duration is treated when the evolution is dissipative.
enum class NegativeTimePolicy {
  Reject,             ///< throw NegativeDurationError
  ReverseHamiltonian  ///< evolve forward for |t| under -H; noise still acts for |t|
};

struct IntegratorConfig {
  double step = 1e-3;
  IntegrationMethod method = IntegrationMethod::Rk4;
  NegativeTimePolicy negative_time = NegativeTimePolicy::Reject;

  void validate() const;
};

const char* to_string(IntegrationMethod m);
IntegrationMethod parse_integration_method(const std::string& text);

class NegativeDurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IntegrationDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Right-hand side of the Lindblad equation,
///   -i[H, rho] + sum_n g_n (L rho L^+ - 1/2 L^+L rho - 1/2 rho L^+L).
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& hamiltonian,
                           const std::vector<CouplingOperator>& noise);

/// Sparse form of one time-independent Lindbladian, reused across RK4 stages.
class LindbladGenerator {
 public:
  LindbladGenerator(const ComplexMatrix& hamiltonian, const std::vector<CouplingOperator>& noise);

  [[nodiscard]] int dim() const { return static_cast<int>(h_.rows()); }
  [[nodiscard]] bool dissipative() const { return !jumps_.empty(); }
  void apply(const ComplexMatrix& rho, ComplexMatrix& out) const;
  [[nodiscard]] LindbladGenerator reversed() const;

 private:
  LindbladGenerator() = default;

  using Sparse = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
  Sparse h_;
  Sparse anti_;  // 1/2 sum g L^+L
  std::vector<Sparse> jumps_;
  std::vector<Sparse> jumps_adj_;
  std::vector<double> rates_;
};

/// RK4 over |duration| with ceil(|duration| / step) uniform sub-steps.
DensityMatrix evolve_segment(const DensityMatrix& rho, const ComplexMatrix& hamiltonian,
                             double duration, const std::vector<CouplingOperator>& noise,
                             const IntegratorConfig& cfg);

/// Generators and noise of one experiment. `problem` and `mixer` already carry
/// the scale factor; `observable` is the unscaled cost Hamiltonian.
struct QaoaModel {
  int n_qubits = 0;
  DiagonalObservable observable;
  DiagonalObservable problem;
  ComplexMatrix mixer;
  double mixer_coefficient = 1.0;
  NoiseModel noise;
  std::vector<CouplingOperator> noise_ops;

  static QaoaModel build(const Graph& graph, const NoiseModel& noise, ScaleFactor scale);
};

class ExactPropagator;

/// Runs schedules against one model; holds the precomputed generators.
/// Immutable after construction, so one instance may serve many threads.
class Evolver {
 public:
  Evolver(const QaoaModel& model, const IntegratorConfig& cfg);
  ~Evolver();
  Evolver(Evolver&&) noexcept;
  Evolver& operator=(Evolver&&) noexcept;

  [[nodiscard]] DensityMatrix run(const DensityMatrix& rho0, const ControlSchedule& schedule) const;
  [[nodiscard]] const IntegratorConfig& config() const { return cfg_; }

 private:
  void step_rk4(ComplexMatrix& rho, const ScheduleStep& step) const;

  IntegratorConfig cfg_;
  NoiseModel noise_;
  std::unique_ptr<LindbladGenerator> problem_;
  std::unique_ptr<LindbladGenerator> mixer_;
  std::unique_ptr<LindbladGenerator> problem_rev_;
  std::unique_ptr<LindbladGenerator> mixer_rev_;
  std::unique_ptr<ExactPropagator> exact_;
};

/// Applies every nonzero schedule entry in order with the Lindblad dynamics.
DensityMatrix evolve_schedule(const DensityMatrix& rho0, const ControlSchedule& schedule,
                              const QaoaModel& model, const IntegratorConfig& cfg);

/// Noiseless reference path on state vectors: exp(-i H_o g) by diagonal
/// phases and exp(-i H_c b) through a cached eigendecomposition of H_c.
class UnitaryOracle {
 public:
  UnitaryOracle(const DiagonalObservable& problem, const ComplexMatrix& mixer);

  [[nodiscard]] StateVector run(const StateVector& psi, const ControlSchedule& schedule) const;

 private:
  Eigen::VectorXd problem_;
  Eigen::VectorXd mixer_eigenvalues_;
  ComplexMatrix mixer_eigenvectors_;
};

StateVector unitary_oracle(const StateVector& psi, const ControlSchedule& schedule,
                           const DiagonalObservable& problem, const ComplexMatrix& mixer);

/// tr(H rho) for diagonal H; throws if the imaginary residue exceeds 1e-9.
double expectation(const DiagonalObservable& obs, const DensityMatrix& rho);
double expectation(const DiagonalObservable& obs, const StateVector& psi);

}  // namespace qdepth
