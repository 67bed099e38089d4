#include "qdepth/operators.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "qdepth/problems.hpp"

namespace qdepth {

namespace {

void check_register(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument(
        fmt::format("register of {} qubits outside the dense-matrix limit [1, {}]", n_qubits,
                    kMaxQubits));
  }
}

}  // namespace

ComplexMatrix pauli(Pauli kind) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (kind) {
    case Pauli::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case Pauli::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Pauli::Minus:
      m(1, 0) = 1.0;
      break;
  }
  return m;
}

ComplexMatrix embed_single_qubit(const ComplexMatrix& op, int qubit, int n_qubits) {
  check_register(n_qubits);
  if (op.rows() != 2 || op.cols() != 2) {
    throw std::invalid_argument("embed_single_qubit expects a 2x2 operator");
  }
  if (qubit < 0 || qubit >= n_qubits) {
    throw std::out_of_range(
        fmt::format("qubit index {} out of range for {} qubits", qubit, n_qubits));
  }
  const Eigen::Index left = Eigen::Index{1} << (n_qubits - 1 - qubit);
  const Eigen::Index right = Eigen::Index{1} << qubit;
  const ComplexMatrix upper = Eigen::kroneckerProduct(ComplexMatrix::Identity(left, left), op);
  return Eigen::kroneckerProduct(upper, ComplexMatrix::Identity(right, right));
}

ComplexMatrix DiagonalObservable::dense() const {
  return diagonal.cast<Complex>().asDiagonal();
}

DiagonalObservable DiagonalObservable::scaled(double factor) const {
  return DiagonalObservable{diagonal * factor};
}

ScaleFactor::ScaleFactor(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(fmt::format("scale factor must be positive, got {}", value));
  }
}

DiagonalObservable build_maxcut_hamiltonian(const Graph& graph) {
  check_register(graph.n_nodes);
  // Re-validate: callers may have assembled the struct by hand.
  const Graph checked = make_graph(graph.n_nodes, graph.edges);
  const std::uint64_t dim = std::uint64_t{1} << checked.n_nodes;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) {
    double value = 0.0;
    for (const Edge& e : checked.edges) {
      value += e.weight * spin_of(b, e.u) * spin_of(b, e.v);
    }
    diag[static_cast<Eigen::Index>(b)] = value;
  }
  return DiagonalObservable{std::move(diag)};
}

ComplexMatrix build_mixer(int n_qubits) {
  check_register(n_qubits);
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  const ComplexMatrix x = pauli(Pauli::X);
  for (int q = 0; q < n_qubits; ++q) {
    h += embed_single_qubit(x, q, n_qubits);
  }
  return h;
}

NoiseModel::NoiseModel(NoiseKind kind_, double coupling_) : kind(kind_), coupling(coupling_) {
  if (!(coupling_ >= 0.0) || !std::isfinite(coupling_)) {
    throw std::invalid_argument(fmt::format("coupling must be >= 0, got {}", coupling_));
  }
}

std::vector<CouplingOperator> build_noise_operators(const NoiseModel& model, int n_qubits) {
  std::vector<CouplingOperator> ops;
  if (model.kind == NoiseKind::None) {
    return ops;
  }
  check_register(n_qubits);
  const ComplexMatrix local =
      pauli(model.kind == NoiseKind::Relaxation ? Pauli::Minus : Pauli::Z);
  ops.reserve(static_cast<std::size_t>(n_qubits));
  for (int q = 0; q < n_qubits; ++q) {
    ops.push_back({embed_single_qubit(local, q, n_qubits), model.coupling});
  }
  return ops;
}

double hermiticity_error(const ComplexMatrix& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

const char* to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::None:
      return "none";
    case NoiseKind::Relaxation:
      return "relaxation";
    case NoiseKind::Dephasing:
      return "dephasing";
  }
  return "none";
}

NoiseKind parse_noise_kind(const std::string& text) {
  if (text == "none") return NoiseKind::None;
  if (text == "relaxation") return NoiseKind::Relaxation;
  if (text == "dephasing") return NoiseKind::Dephasing;
  throw std::invalid_argument(
      fmt::format("unknown noise kind '{}' (expected none, relaxation or dephasing)", text));
}

}  // namespace qdepth
