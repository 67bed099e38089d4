#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "qdepth/dynamics.hpp"
#include "qdepth/problems.hpp"

using namespace qdepth;

namespace {

IntegratorConfig rk4(double step = 1e-3) {
  IntegratorConfig c;
  c.step = step;
  return c;
}

IntegratorConfig exact() {
  IntegratorConfig c;
  c.method = IntegrationMethod::Exact;
  return c;
}

DensityMatrix qubit(Complex a00, Complex a01, Complex a11) {
  ComplexMatrix m(2, 2);
  m << a00, a01, std::conj(a01), a11;
  return DensityMatrix(m);
}

ControlSchedule random_schedule(std::mt19937_64& rng, int p, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> x(static_cast<std::size_t>(2 * p));
  for (double& v : x) v = d(rng);
  return ControlSchedule::qaoa(x);
}

// Dense vectorised Lindbladian (row-major vec), exponentiated directly.
ComplexMatrix superoperator_reference(const ComplexMatrix& rho, const ComplexMatrix& h,
                                      const std::vector<CouplingOperator>& noise, double t) {
  const Eigen::Index d = rho.rows();
  ComplexMatrix gen = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index k = 0; k < d * d; ++k) {
    ComplexMatrix basis = ComplexMatrix::Zero(d, d);
    basis(k / d, k % d) = 1.0;
    const ComplexMatrix col = lindblad_rhs(basis, h, noise);
    for (Eigen::Index j = 0; j < d * d; ++j) gen(j, k) = col(j / d, j % d);
  }
  const ComplexMatrix prop = (gen * Complex(t)).exp();
  Eigen::VectorXcd v(d * d);
  for (Eigen::Index k = 0; k < d * d; ++k) v(k) = rho(k / d, k % d);
  const Eigen::VectorXcd w = prop * v;
  ComplexMatrix out(d, d);
  for (Eigen::Index k = 0; k < d * d; ++k) out(k / d, k % d) = w(k);
  return out;
}

}  // namespace

TEST(Schedule, QaoaLayout) {
  const std::vector<double> x{0.1, 0.2, 0.3, 0.4};
  const ControlSchedule s = ControlSchedule::qaoa(x);
  ASSERT_EQ(s.size(), 4U);
  EXPECT_EQ(s.steps()[0].generator, Generator::Problem);
  EXPECT_EQ(s.steps()[1].generator, Generator::Mixer);
  EXPECT_EQ(s.durations(), x);
  EXPECT_DOUBLE_EQ(ControlSchedule::qaoa(std::vector<double>{0.1, -0.2}).total_time(), 0.3);
  EXPECT_THROW(ControlSchedule::qaoa(std::vector<double>{0.1, 0.2, 0.3}), std::invalid_argument);
}

TEST(InitialState, PlusProjector) {
  const DensityMatrix r1 = initial_plus_state(1);
  EXPECT_EQ(r1.matrix(), ComplexMatrix::Constant(2, 2, 0.5));
  const DensityMatrix r2 = initial_plus_state(2);
  EXPECT_EQ(r2.matrix(), ComplexMatrix::Constant(4, 4, 0.25));
  for (int n = 1; n <= 4; ++n) EXPECT_NEAR(initial_plus_state(n).purity(), 1.0, 1e-12);
}

TEST(DensityMatrixType, RejectsNonSquare) {
  EXPECT_THROW(DensityMatrix(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
  EXPECT_THROW(DensityMatrix(ComplexMatrix::Zero(3, 3)), std::invalid_argument);
}

TEST(LindbladRhs, CommutingCaseIsZero) {
  const Graph g = make_graph(2, {{0, 1, 0.7}});
  const ComplexMatrix h = build_maxcut_hamiltonian(g).dense();
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  rho.diagonal() << 0.1, 0.2, 0.3, 0.4;
  EXPECT_EQ(lindblad_rhs(rho, h, {}).cwiseAbs().maxCoeff(), 0.0);
}

TEST(LindbladRhs, Traceless) {
  const Graph g = random_graph(3, 3, {0.1, 1.0}, 5);
  const ComplexMatrix h = build_maxcut_hamiltonian(g).dense() + build_mixer(3);
  const ComplexMatrix rho = initial_plus_state(3).matrix();
  for (const NoiseKind kind : {NoiseKind::Relaxation, NoiseKind::Dephasing}) {
    const auto ops = build_noise_operators(NoiseModel(kind, 0.3), 3);
    EXPECT_LE(std::abs(lindblad_rhs(rho, h, ops).trace()), 1e-12);
  }
}

TEST(LindbladRhs, DephasingCoherenceRate) {
  const auto ops = build_noise_operators(NoiseModel(NoiseKind::Dephasing, 0.3), 1);
  const DensityMatrix rho = qubit(0.5, Complex(0.2, 0.1), 0.5);
  const ComplexMatrix d = lindblad_rhs(rho.matrix(), ComplexMatrix::Zero(2, 2), ops);
  EXPECT_NEAR(std::abs(d(0, 1) - (-2.0 * 0.3) * rho.matrix()(0, 1)), 0.0, 1e-15);
}

TEST(EvolveSegment, ZeroDurationIsIdentity) {
  const DensityMatrix rho = initial_plus_state(2);
  const auto out = evolve_segment(rho, build_mixer(2), 0.0, {}, rk4());
  EXPECT_EQ(out.matrix(), rho.matrix());
}

TEST(EvolveSegment, RabiPopulation) {
  const DensityMatrix rho0 = qubit(1.0, 0.0, 0.0);
  for (const double t : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    const auto rho = evolve_segment(rho0, pauli(Pauli::X), t, {}, rk4());
    EXPECT_NEAR(rho.matrix()(1, 1).real(), std::pow(std::sin(t), 2), 1e-6) << "t = " << t;
  }
}

TEST(EvolveSegment, DephasingOffDiagonal) {
  const double g = 0.4;
  const auto ops = build_noise_operators(NoiseModel(NoiseKind::Dephasing, g), 1);
  const DensityMatrix rho0 = qubit(0.5, 0.5, 0.5);
  for (const double t : {0.2, 1.0, 3.0}) {
    const auto rho = evolve_segment(rho0, ComplexMatrix::Zero(2, 2), t, ops, rk4());
    EXPECT_NEAR(std::abs(rho.matrix()(0, 1) - 0.5 * std::exp(-2.0 * g * t)), 0.0, 1e-6);
  }
}

TEST(EvolveSegment, RelaxationPopulation) {
  const double g = 0.5;
  const auto ops = build_noise_operators(NoiseModel(NoiseKind::Relaxation, g), 1);
  const DensityMatrix rho0 = qubit(1.0, 0.0, 0.0);
  for (const double t : {0.2, 1.0, 3.0}) {
    const auto rho = evolve_segment(rho0, ComplexMatrix::Zero(2, 2), t, ops, rk4());
    EXPECT_NEAR(rho.matrix()(0, 0).real(), std::exp(-g * t), 1e-6);
    EXPECT_NEAR(rho.matrix()(1, 1).real(), 1.0 - std::exp(-g * t), 1e-6);
  }
}

TEST(EvolveSegment, MatchesSuperoperatorExponential) {
  const Graph g = random_graph(2, 1, {0.1, 1.0}, 2);
  const ComplexMatrix h = build_maxcut_hamiltonian(g).dense() + 0.7 * build_mixer(2);
  const auto ops = build_noise_operators(NoiseModel(NoiseKind::Relaxation, 0.3), 2);
  const DensityMatrix rho0 = initial_plus_state(2);
  const auto rho = evolve_segment(rho0, h, 0.8, ops, rk4());
  EXPECT_LE((rho.matrix() - superoperator_reference(rho0.matrix(), h, ops, 0.8)).cwiseAbs().maxCoeff(),
            1e-9);
}

TEST(EvolveSegment, FourthOrderConvergence) {
  const DensityMatrix rho0 = qubit(1.0, 0.0, 0.0);
  const auto ops = build_noise_operators(NoiseModel(NoiseKind::Relaxation, 0.3), 1);
  const ComplexMatrix h = pauli(Pauli::X) + 0.5 * pauli(Pauli::Z);
  const ComplexMatrix ref = superoperator_reference(rho0.matrix(), h, ops, 1.0);
  const double e1 = (evolve_segment(rho0, h, 1.0, ops, rk4(0.1)).matrix() - ref).cwiseAbs().maxCoeff();
  const double e2 = (evolve_segment(rho0, h, 1.0, ops, rk4(0.05)).matrix() - ref).cwiseAbs().maxCoeff();
  EXPECT_GE(e1 / e2, 8.0) << e1 << " " << e2;
}

TEST(EvolveSegment, NegativeDurationUnderNoiseRejected) {
  const auto ops = build_noise_operators(NoiseModel(NoiseKind::Dephasing, 0.1), 1);
  EXPECT_THROW(evolve_segment(initial_plus_state(1), pauli(Pauli::X), -0.1, ops, rk4()),
               NegativeDurationError);
  // Without noise a negative duration is plain time reversal.
  const auto back = evolve_segment(evolve_segment(initial_plus_state(1), pauli(Pauli::Z), 0.3, {}, rk4()),
                                   pauli(Pauli::Z), -0.3, {}, rk4());
  EXPECT_LE((back.matrix() - initial_plus_state(1).matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(EvolveSegment, DivergenceDetected) {
  EXPECT_THROW(evolve_segment(qubit(1.0, 0.0, 0.0), 1e3 * pauli(Pauli::X), 200.0, {}, rk4(0.5)),
               IntegrationDiverged);
}

TEST(EvolveSchedule, AllZeroIsIdentity) {
  const Graph g = random_graph(3, 3, {0.1, 1.0}, 1);
  const QaoaModel m = QaoaModel::build(g, NoiseModel(NoiseKind::Relaxation, 0.2), ScaleFactor());
  const DensityMatrix rho0 = initial_plus_state(3);
  EXPECT_EQ(evolve_schedule(rho0, ControlSchedule::qaoa_uniform(3, 0.0), m, rk4()).matrix(),
            rho0.matrix());
}

TEST(EvolveSchedule, NoiselessMatchesOracle) {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 4; ++n) {
    const Graph g = random_graph(n, n - 1, {0.1, 1.0}, static_cast<std::uint64_t>(n));
    const QaoaModel m = QaoaModel::build(g, NoiseModel(), ScaleFactor());
    const ControlSchedule s = random_schedule(rng, 2, -0.3, 0.3);
    const StateVector psi = unitary_oracle(plus_state_vector(n), s, m.problem, m.mixer);
    const DensityMatrix rho = evolve_schedule(initial_plus_state(n), s, m, rk4());
    EXPECT_LE((rho.matrix() - psi * psi.adjoint()).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(EvolveSchedule, NegativeNoisyPolicy) {
  const Graph g = random_graph(2, 1, {0.1, 1.0}, 1);
  const QaoaModel m = QaoaModel::build(g, NoiseModel(NoiseKind::Relaxation, 0.2), ScaleFactor());
  const ControlSchedule s = ControlSchedule::qaoa(std::vector<double>{0.1, -0.1});
  EXPECT_THROW(evolve_schedule(initial_plus_state(2), s, m, rk4()), NegativeDurationError);

  // Reversed Hamiltonian: same state as the explicit -H forward run.
  IntegratorConfig reverse = rk4();
  reverse.negative_time = NegativeTimePolicy::ReverseHamiltonian;
  const DensityMatrix rho = evolve_schedule(initial_plus_state(2), s, m, reverse);
  DensityMatrix ref = evolve_segment(initial_plus_state(2), m.problem.dense(), 0.1, m.noise_ops, rk4());
  ref = evolve_segment(ref, -m.mixer, 0.1, m.noise_ops, rk4());
  EXPECT_LE((rho.matrix() - ref.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(EvolveSchedule, NoisyStatesStayValid) {
  std::mt19937_64 rng(9);
  for (const NoiseKind kind : {NoiseKind::Relaxation, NoiseKind::Dephasing}) {
    const Graph g = random_graph(3, 3, {0.1, 1.0}, 4);
    const QaoaModel m = QaoaModel::build(g, NoiseModel(kind, 0.5), ScaleFactor());
    const DensityMatrix rho =
        evolve_schedule(initial_plus_state(3), random_schedule(rng, 3, 0.0, 0.3), m, rk4());
    EXPECT_LE(rho.trace_error(), 1e-8);
    EXPECT_LE(rho.hermiticity_error(), 1e-8);
    EXPECT_GE(rho.min_eigenvalue(), -1e-7);
    EXPECT_LT(rho.purity(), 1.0);
  }
}

TEST(ExactPropagation, AgreesWithRk4) {
  std::mt19937_64 rng(21);
  for (const NoiseKind kind : {NoiseKind::None, NoiseKind::Relaxation, NoiseKind::Dephasing}) {
    const Graph g = random_graph(4, 5, {0.1, 1.0}, 8);
    const QaoaModel m = QaoaModel::build(g, NoiseModel(kind, 0.5), ScaleFactor());
    IntegratorConfig a = rk4();
    IntegratorConfig b = exact();
    a.negative_time = b.negative_time = NegativeTimePolicy::ReverseHamiltonian;
    const ControlSchedule s = random_schedule(rng, 2, -0.2, 0.3);
    const DensityMatrix ra = evolve_schedule(initial_plus_state(4), s, m, a);
    const DensityMatrix rb = evolve_schedule(initial_plus_state(4), s, m, b);
    EXPECT_LE((ra.matrix() - rb.matrix()).cwiseAbs().maxCoeff(), 1e-7) << to_string(kind);
  }
}

TEST(UnitaryOracle, EmptyScheduleAndRotation) {
  const StateVector psi = plus_state_vector(2);
  const Graph g = make_graph(2, {{0, 1, 1.0}});
  const DiagonalObservable h = build_maxcut_hamiltonian(g);
  EXPECT_EQ(unitary_oracle(psi, ControlSchedule(), h, build_mixer(2)), psi);

  // exp(-i X pi/2)|0> = -i|1>
  const DiagonalObservable zero{Eigen::VectorXd::Zero(2)};
  StateVector ket0(2);
  ket0 << 1.0, 0.0;
  const ControlSchedule s({{Generator::Mixer, M_PI / 2}});
  const StateVector out = unitary_oracle(ket0, s, zero, build_mixer(1));
  EXPECT_NEAR(std::abs(out(0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(out(1) - Complex(0.0, -1.0)), 0.0, 1e-12);
}

TEST(Expectation, Examples) {
  const Graph g = random_graph(4, 5, {0.1, 1.0}, 2);
  const DiagonalObservable h = build_maxcut_hamiltonian(g);
  EXPECT_NEAR(expectation(h, initial_plus_state(4)), 0.0, 1e-12);
  const DiagonalObservable ones{Eigen::VectorXd::Ones(16)};
  EXPECT_NEAR(expectation(ones, initial_plus_state(4)), 1.0, 1e-12);
  ComplexMatrix point = ComplexMatrix::Zero(16, 16);
  point(5, 5) = 1.0;
  EXPECT_EQ(expectation(h, DensityMatrix(point)), h.diagonal(5));
}

TEST(Expectation, RejectsLargeImaginaryResidue) {
  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 0) = Complex(1.0, 1e-3);
  const DiagonalObservable obs{Eigen::VectorXd::Ones(2)};
  EXPECT_THROW(expectation(obs, DensityMatrix(bad)), std::domain_error);
}
