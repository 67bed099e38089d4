#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qdepth {

struct Graph;

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Largest register size for which dense 2^N x 2^N matrices are built.
inline constexpr int kMaxQubits = 12;

/// Basis convention used everywhere in the library: bit k of a basis index
/// (least significant bit = qubit 0) holds qubit k. A clear bit has sigma_z
/// eigenvalue +1, a set bit -1. In Kronecker products qubit 0 is therefore the
/// rightmost factor.
inline int spin_of(std::uint64_t basis_index, int qubit) {
  return ((basis_index >> qubit) & 1U) ? -1 : 1;
}

enum class Pauli { Z, X, Minus };

/// Exact 2x2 matrices sigma_z = diag(1,-1), sigma_x, sigma_- = [[0,0],[1,0]].
ComplexMatrix pauli(Pauli kind);

/// I (x) ... (x) op (x) ... (x) I with `op` in the slot of `qubit`.
/// Throws std::out_of_range for a bad qubit index and std::invalid_argument
/// for a non-2x2 operator or a register outside [1, kMaxQubits].
ComplexMatrix embed_single_qubit(const ComplexMatrix& op, int qubit, int n_qubits);

/// Eigenvalues of a Hamiltonian that is diagonal in the computational basis.
struct DiagonalObservable {
  Eigen::VectorXd diagonal;

  [[nodiscard]] int dim() const { return static_cast<int>(diagonal.size()); }
  [[nodiscard]] ComplexMatrix dense() const;
  [[nodiscard]] DiagonalObservable scaled(double factor) const;
};

/// Positive multiplier applied to both generators before evolution.
class ScaleFactor {
 public:
  static constexpr double kDefault = 6.0;

  ScaleFactor() = default;
  explicit ScaleFactor(double value);

  [[nodiscard]] double value() const { return value_; }

 private:
  double value_ = kDefault;
};

/// H_o = sum over edges w_ij Z_i Z_j, stored as its diagonal.
DiagonalObservable build_maxcut_hamiltonian(const Graph& graph);

/// H_c = sum_n X^(n) with unit coefficient per qubit.
ComplexMatrix build_mixer(int n_qubits);

enum class NoiseKind { None, Relaxation, Dephasing };

struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  double coupling = 0.0;

  NoiseModel() = default;
  NoiseModel(NoiseKind kind, double coupling);

  /// True when the model produces no dissipation at all.
  [[nodiscard]] bool unitary() const { return kind == NoiseKind::None || coupling == 0.0; }
};

struct CouplingOperator {
  ComplexMatrix op;
  double coupling = 0.0;
};

/// One embedded L_n per qubit (sigma_- for relaxation, sigma_z for dephasing),
/// each with the model's uniform coupling. Empty for NoiseKind::None.
std::vector<CouplingOperator> build_noise_operators(const NoiseModel& model, int n_qubits);

/// Largest |M - M^dagger| entry.
double hermiticity_error(const ComplexMatrix& m);

const char* to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& text);

}  // namespace qdepth
