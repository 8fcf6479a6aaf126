#include "circuit.hpp"

#include <cmath>

namespace nlsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_targets(const CircuitOp& op, int n_qubits) {
  if (static_cast<int>(op.targets.size()) != op.gate.arity())
    fail(ErrorCode::InvalidArgument, "gate arity does not match target count");
  for (size_t i = 0; i < op.targets.size(); ++i) {
    if (op.targets[i] < 0 || op.targets[i] >= n_qubits)
      fail(ErrorCode::InvalidArgument, "gate target out of range");
    for (size_t j = i + 1; j < op.targets.size(); ++j)
      if (op.targets[i] == op.targets[j])
        fail(ErrorCode::InvalidArgument, "duplicate gate target");
  }
}

Vec basis_vector(Basis basis, int outcome) {
  Vec v(2);
  if (basis == Basis::Z) {
    v << (outcome > 0 ? 1.0 : 0.0), (outcome > 0 ? 0.0 : 1.0);
  } else {
    v << kInvSqrt2, (outcome > 0 ? kInvSqrt2 : -kInvSqrt2);
  }
  return v;
}

}  // namespace

Mat Gate::matrix() const {
  Mat m;
  switch (kind) {
    case GateKind::H:
      m.resize(2, 2);
      m << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
      break;
    case GateKind::X:
      m = Mat::Zero(2, 2);
      m(0, 1) = m(1, 0) = 1.0;
      break;
    case GateKind::Z:
      m = Mat::Identity(2, 2);
      m(1, 1) = -1.0;
      break;
    case GateKind::CNOT:
      m = Mat::Zero(4, 4);
      m(0, 0) = m(1, 1) = 1.0;
      m(2, 3) = m(3, 2) = 1.0;
      break;
    case GateKind::RY:
      m.resize(2, 2);
      m << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
      break;
    case GateKind::Phase:
      m = Mat::Identity(2, 2);
      m(1, 1) = std::exp(cxd(0.0, angle));
      break;
  }
  return m;
}

Gate Gate::inverse() const {
  switch (kind) {
    case GateKind::RY:
      return ry(-angle);
    case GateKind::Phase:
      return phase(-angle);
    default:
      return *this;  // H, X, Z, CNOT are involutions
  }
}

const char* Gate::name() const {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::CNOT: return "CNOT";
    case GateKind::RY: return "RY";
    case GateKind::Phase: return "PHASE";
  }
  return "?";
}

Mat embed(const Mat& u, const std::vector<int>& targets, int n_qubits) {
  const int t = static_cast<int>(targets.size());
  if (u.rows() != u.cols() || u.rows() != (Eigen::Index{1} << t))
    fail(ErrorCode::Dimension, "gate matrix does not match target count");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;

  // Gate-space index of a full basis index (first target most significant).
  auto gate_bits = [&](Eigen::Index full) {
    Eigen::Index g = 0;
    for (int j = 0; j < t; ++j)
      g = (g << 1) | ((full >> (n_qubits - 1 - targets[j])) & 1);
    return g;
  };
  // Replace the target bits of `full` with those of gate-space index `g`.
  auto with_gate_bits = [&](Eigen::Index full, Eigen::Index g) {
    for (int j = 0; j < t; ++j) {
      const int pos = n_qubits - 1 - targets[j];
      full = (full & ~(Eigen::Index{1} << pos)) |
             (((g >> (t - 1 - j)) & 1) << pos);
    }
    return full;
  };

  Mat out = Mat::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Eigen::Index gcol = gate_bits(col);
    for (Eigen::Index grow = 0; grow < u.rows(); ++grow) {
      const cxd v = u(grow, gcol);
      if (v != 0.0) out(with_gate_bits(col, grow), col) = v;
    }
  }
  return out;
}

StateVector apply(const StateVector& state, const CircuitOp& op) {
  check_targets(op, state.n_qubits());
  const Mat u = embed(op.gate.matrix(), op.targets, state.n_qubits());
  return StateVector(state.n_qubits(), u * state.amps());
}

DensityMatrix apply(const DensityMatrix& rho, const CircuitOp& op) {
  check_targets(op, rho.n_qubits());
  const Mat u = embed(op.gate.matrix(), op.targets, rho.n_qubits());
  return DensityMatrix(rho.n_qubits(), u * rho.mat() * u.adjoint());
}

StateVector apply_all(StateVector state, const std::vector<CircuitOp>& ops) {
  for (const CircuitOp& op : ops) state = apply(state, op);
  return state;
}

std::array<MeasureBranch, 2> measure_branch(const StateVector& state, int qubit,
                                            Basis basis) {
  if (qubit < 0 || qubit >= state.n_qubits())
    fail(ErrorCode::InvalidArgument, "measured qubit out of range");

  std::array<MeasureBranch, 2> branches{};
  int slot = 0;
  for (int outcome : {+1, -1}) {
    const Vec v = basis_vector(basis, outcome);
    const Mat projector = embed(v * v.adjoint(), {qubit}, state.n_qubits());
    Vec collapsed = projector * state.amps();
    const double p = collapsed.squaredNorm();
    MeasureBranch& branch = branches[slot++];
    branch.qubit = qubit;
    branch.basis = basis;
    branch.outcome = outcome;
    branch.probability = p;
    if (p >= 1e-12)
      branch.state = StateVector(state.n_qubits(), collapsed / std::sqrt(p));
  }
  return branches;
}

PostselectResult postselect(const StateVector& state, int qubit,
                            const StateVector& target) {
  const int n = state.n_qubits();
  if (qubit < 0 || qubit >= n)
    fail(ErrorCode::InvalidArgument, "post-selected qubit out of range");
  if (target.n_qubits() != 1)
    fail(ErrorCode::InvalidArgument, "post-selection target must be one qubit");
  if (n < 2)
    fail(ErrorCode::InvalidArgument, "post-selection needs a remaining subsystem");
  if (std::abs(target.norm() - 1.0) > 1e-8)
    fail(ErrorCode::Normalization, "post-selection target must be normalized");

  const int pos = n - 1 - qubit;  // bit position of the removed qubit
  const Eigen::Index out_dim = Eigen::Index{1} << (n - 1);
  const Eigen::Index low_mask = (Eigen::Index{1} << pos) - 1;

  Vec out(out_dim);
  for (Eigen::Index r = 0; r < out_dim; ++r) {
    const Eigen::Index high = (r & ~low_mask) << 1;
    const Eigen::Index base = high | (r & low_mask);
    out(r) = std::conj(target.amp(0)) * state.amp(base) +
             std::conj(target.amp(1)) * state.amp(base | (Eigen::Index{1} << pos));
  }
  const double p = out.squaredNorm();
  if (p < 1e-12)
    fail(ErrorCode::ImpossiblePostselection, "post-selection probability is zero");
  return {p, StateVector(n - 1, out / std::sqrt(p))};
}

}  // namespace nlsim
