#pragma once

#include <cstdint>
#include <vector>

#include "qdepth/dynamics.hpp"

namespace qdepth {

/// Closed-form propagators for the two QAOA segment types.
///
/// Mixer segments: c*sum_n X^(n) and uniform single-qubit noise split into
/// commuting per-qubit Lindbladians, so the segment map is the tensor power of
/// one 4x4 superoperator exponential.
///
/// Problem segments: the Hamiltonian is diagonal. Without noise or under
/// dephasing every entry rho_ab only picks up a factor
/// exp(t(-i(h_a - h_b) - 2g popcount(a^b))). Under relaxation the jump
/// L rho L^+ feeds rho_ab from rho_(a-m)(b-m) for bits m set in both a and b,
/// a triangular system whose solution is a finite sum of exponentials. Its
/// coefficients obey a recursion with ratios g / (k_u - k_e) of modulus at most
/// 1, so no cancellation blows up.
class ExactPropagator {
 public:
  explicit ExactPropagator(const QaoaModel& model);

  /// Evolves rho in place. Negative durations fold the sign into the
  /// Hamiltonian; callers enforce any policy before getting here.
  void apply(ComplexMatrix& rho, Generator generator, double duration) const;

 private:
  void apply_mixer(ComplexMatrix& rho, double duration) const;
  void apply_problem(ComplexMatrix& rho, double duration) const;
  void apply_problem_relaxation(ComplexMatrix& rho, double duration) const;

  int n_qubits_;
  std::uint32_t dim_;
  Eigen::VectorXd problem_;
  double mixer_coefficient_;
  NoiseModel noise_;

  // Relaxation bookkeeping: entries sorted by popcount(a & b), with offsets into
  // a packed coefficient table indexed by subsets of a & b.
  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> offset_;
  std::size_t table_size_ = 0;
};

}  // namespace qdepth
