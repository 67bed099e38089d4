#include "qdepth/propagator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

namespace qdepth {

namespace {

constexpr int kMaxExactRelaxationQubits = 10;

using Matrix4c = Eigen::Matrix<Complex, 4, 4>;
using Matrix2c = Eigen::Matrix<Complex, 2, 2>;

// Superoperator of X -> -i c [sigma_x, X] + g D_L(X) on one qubit, acting on
// vec(X) with index 2*i + j for entry (i, j).
Matrix4c single_qubit_liouvillian(double coefficient, const NoiseModel& noise) {
  Matrix2c sx;
  sx << 0.0, 1.0, 1.0, 0.0;
  Matrix2c l = Matrix2c::Zero();
  const bool dissipative = !noise.unitary();
  if (noise.kind == NoiseKind::Relaxation) {
    l(1, 0) = 1.0;
  } else if (noise.kind == NoiseKind::Dephasing) {
    l(0, 0) = 1.0;
    l(1, 1) = -1.0;
  }
  const Matrix2c ldl = l.adjoint() * l;
  const Complex minus_i(0.0, -1.0);

  Matrix4c s = Matrix4c::Zero();
  for (int k = 0; k < 2; ++k) {
    for (int col = 0; col < 2; ++col) {
      Matrix2c basis = Matrix2c::Zero();
      basis(k, col) = 1.0;
      Matrix2c image = minus_i * coefficient * (sx * basis - basis * sx);
      if (dissipative) {
        image += noise.coupling *
                 (l * basis * l.adjoint() - 0.5 * (ldl * basis) - 0.5 * (basis * ldl));
      }
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          s(2 * i + j, 2 * k + col) = image(i, j);
        }
      }
    }
  }
  return s;
}

}  // namespace

ExactPropagator::ExactPropagator(const QaoaModel& model)
    : n_qubits_(model.n_qubits),
      dim_(static_cast<std::uint32_t>(model.problem.dim())),
      problem_(model.problem.diagonal),
      mixer_coefficient_(model.mixer_coefficient),
      noise_(model.noise) {
  if (n_qubits_ < 1 || n_qubits_ > kMaxQubits || dim_ != (1U << n_qubits_)) {
    throw std::invalid_argument("model dimension inconsistent with its qubit count");
  }
  if (noise_.kind == NoiseKind::Relaxation && !noise_.unitary()) {
    if (n_qubits_ > kMaxExactRelaxationQubits) {
      throw std::invalid_argument(fmt::format(
          "exact relaxation propagator supports at most {} qubits; use the rk4 integrator",
          kMaxExactRelaxationQubits));
    }
    const std::uint32_t n_entries = dim_ * dim_;
    order_.resize(n_entries);
    for (std::uint32_t e = 0; e < n_entries; ++e) order_[e] = e;
    const auto common = [this](std::uint32_t e) {
      return std::popcount((e >> n_qubits_) & (e & (dim_ - 1)));
    };
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::uint32_t x, std::uint32_t y) { return common(x) < common(y); });
    offset_.resize(n_entries);
    std::size_t total = 0;
    for (std::uint32_t e = 0; e < n_entries; ++e) {
      offset_[e] = static_cast<std::uint32_t>(total);
      total += std::size_t{1} << common(e);
    }
    table_size_ = total;
  }
}

void ExactPropagator::apply(ComplexMatrix& rho, Generator generator, double duration) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) {
    throw std::invalid_argument("dimension mismatch between state and model");
  }
  if (duration == 0.0) return;
  if (generator == Generator::Mixer) {
    apply_mixer(rho, duration);
  } else if (noise_.kind == NoiseKind::Relaxation && !noise_.unitary()) {
    apply_problem_relaxation(rho, duration);
  } else {
    apply_problem(rho, duration);
  }
}

void ExactPropagator::apply_mixer(ComplexMatrix& rho, double duration) const {
  const double sign = duration < 0.0 ? -1.0 : 1.0;
  const double tau = std::abs(duration);
  const Matrix4c gen = single_qubit_liouvillian(sign * mixer_coefficient_, noise_);
  const Matrix4c prop = (tau * gen).exp();

  std::array<Complex, 4> in{};
  for (int q = 0; q < n_qubits_; ++q) {
    const std::uint32_t m = 1U << q;
    for (std::uint32_t b = 0; b < dim_; ++b) {
      if (b & m) continue;
      for (std::uint32_t a = 0; a < dim_; ++a) {
        if (a & m) continue;
        in[0] = rho(a, b);
        in[1] = rho(a, b | m);
        in[2] = rho(a | m, b);
        in[3] = rho(a | m, b | m);
        for (int r = 0; r < 4; ++r) {
          const Complex v = prop(r, 0) * in[0] + prop(r, 1) * in[1] + prop(r, 2) * in[2] +
                            prop(r, 3) * in[3];
          const std::uint32_t ra = (r & 2) ? (a | m) : a;
          const std::uint32_t rb = (r & 1) ? (b | m) : b;
          rho(ra, rb) = v;
        }
      }
    }
  }
}

void ExactPropagator::apply_problem(ComplexMatrix& rho, double duration) const {
  // Phase exp(-i h t) holds for either sign of t once the sign is folded into H.
  std::vector<Complex> phase(dim_);
  for (std::uint32_t a = 0; a < dim_; ++a) {
    phase[a] = std::polar(1.0, -problem_[a] * duration);
  }
  std::vector<double> decay(static_cast<std::size_t>(n_qubits_) + 1, 1.0);
  if (noise_.kind == NoiseKind::Dephasing && !noise_.unitary()) {
    for (int k = 0; k <= n_qubits_; ++k) {
      decay[k] = std::exp(-2.0 * noise_.coupling * std::abs(duration) * k);
    }
  }
  for (std::uint32_t b = 0; b < dim_; ++b) {
    const Complex pb = std::conj(phase[b]);
    for (std::uint32_t a = 0; a < dim_; ++a) {
      rho(a, b) *= phase[a] * pb * decay[std::popcount(a ^ b)];
    }
  }
}

void ExactPropagator::apply_problem_relaxation(ComplexMatrix& rho, double duration) const {
  const double sign = duration < 0.0 ? -1.0 : 1.0;
  const double tau = std::abs(duration);
  const double g = noise_.coupling;
  const int n = n_qubits_;

  // exp(kappa_(a,b) tau) factorises into left[a] * right[b] with
  // kappa_(a,b) = -i (h_a - h_b) - g/2 (zeros(a) + zeros(b)).
  std::vector<Complex> left(dim_), right(dim_), rate(dim_);
  for (std::uint32_t a = 0; a < dim_; ++a) {
    const double zeros = n - std::popcount(a);
    rate[a] = Complex(-0.5 * g * zeros, -sign * problem_[a]);
    left[a] = std::exp(rate[a] * tau);
    right[a] = std::exp(std::conj(rate[a]) * tau);
  }
  const auto kappa = [&](std::uint32_t a, std::uint32_t b) { return rate[a] + std::conj(rate[b]); };

  const ComplexMatrix rho0 = rho;
  std::vector<Complex> table(table_size_);
  std::array<std::uint32_t, 32> bits{};

  for (const std::uint32_t e : order_) {
    const std::uint32_t a = e >> n;
    const std::uint32_t b = e & (dim_ - 1);
    const std::uint32_t s = a & b;
    int r = 0;
    for (std::uint32_t rest = s; rest; rest &= rest - 1) bits[r++] = std::countr_zero(rest);
    const std::uint32_t full = (1U << r) - 1;
    Complex* coef = table.data() + offset_[e];
    const Complex k_e = kappa(a, b);

    Complex partial(0.0, 0.0);
    Complex value(0.0, 0.0);
    for (std::uint32_t idx = 0; idx < full; ++idx) {
      std::uint32_t removed = 0;  // s minus the subset u encoded by idx
      Complex feed(0.0, 0.0);
      for (std::uint32_t rem = full ^ idx; rem; rem &= rem - 1) {
        const int j = std::countr_zero(rem);
        const std::uint32_t m = 1U << bits[j];
        removed |= m;
        const std::uint32_t src = ((a & ~m) << n) | (b & ~m);
        const std::uint32_t src_idx = (idx & ((1U << j) - 1)) | ((idx >> (j + 1)) << j);
        feed += table[offset_[src] + src_idx];
      }
      const std::uint32_t ua = a & ~removed;
      const std::uint32_t ub = b & ~removed;
      const Complex c = g * feed / (kappa(ua, ub) - k_e);
      coef[idx] = c;
      partial += c;
      value += c * left[ua] * right[ub];
    }
    const Complex own = rho0(a, b) - partial;
    coef[full] = own;
    value += own * left[a] * right[b];
    rho(a, b) = value;
  }
}

}  // namespace qdepth
