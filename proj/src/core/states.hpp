#pragma once

// Quantum-state primitives for few-qubit simulation: state vectors, density
// matrices, tensor products, partial trace, Schmidt decomposition and the
// purity/entanglement measures built on them.
//
// Amplitude indexing convention, used everywhere in this library: qubit 0 is
// the MOST significant bit of the basis index, i.e. |q0 q1 ... q_{n-1}> sits
// at index q0*2^(n-1) + q1*2^(n-2) + ... + q_{n-1}.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "error.hpp"

namespace nlsim {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Default tolerances: structural invariants vs derived (two-route) equalities.
inline constexpr double kInvariantTol = 1e-10;
inline constexpr double kDerivedTol = 1e-9;

// Tensor products refuse to grow past this dimension (2^10 = 10 qubits).
inline constexpr Eigen::Index kMaxTensorDim = 1 << 10;

class StateVector {
 public:
  StateVector(int n_qubits, Vec amplitudes);

  static StateVector zero(int n_qubits);                      // |0...0>
  static StateVector basis(int n_qubits, Eigen::Index index);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amps_.size(); }
  const Vec& amps() const { return amps_; }
  cxd amp(Eigen::Index i) const { return amps_(i); }

  double norm() const { return amps_.norm(); }
  StateVector normalized() const;
  // First amplitude with magnitude > 1e-12 made real non-negative; used for
  // deterministic state comparisons.
  StateVector canonicalized() const;

 private:
  int n_qubits_;
  Vec amps_;
};

class DensityMatrix {
 public:
  DensityMatrix(int n_qubits, Mat matrix);

  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return mat_.rows(); }
  const Mat& mat() const { return mat_; }

  double trace_real() const { return mat_.trace().real(); }
  DensityMatrix normalized() const;

  // Checks Hermiticity, positive semidefiniteness, finiteness and the trace
  // range (0, 1 + tol]. Runs on construction in validating builds.
  void validate(double tol = kInvariantTol) const;

 private:
  int n_qubits_;
  Mat mat_;
};

// Kronecker products; a's indices are the most significant qubits.
Mat tensor(const Mat& a, const Mat& b, Eigen::Index max_dim = kMaxTensorDim);
StateVector tensor(const StateVector& a, const StateVector& b,
                   Eigen::Index max_dim = kMaxTensorDim);

// Reduced density matrix over `keep` (ascending, nonempty); kept qubits
// retain their relative order. Trace is preserved.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep);

struct SchmidtDecomposition {
  double lambda0 = 0.0;  // >= lambda1 >= 0, lambda0^2 + lambda1^2 = 1
  double lambda1 = 0.0;
  std::array<StateVector, 2> basis_a;  // single-qubit, orthonormal
  std::array<StateVector, 2> basis_b;

  // lambda0 |a0 b0> + lambda1 |a1 b1>; equals the decomposed state.
  StateVector reconstruct() const;
};

// Two-qubit Schmidt decomposition via eigendecomposition of the 2x2 reduced
// density matrix of side A. Requires a normalized input (1e-8).
SchmidtDecomposition schmidt(const StateVector& psi);

// Pure two-qubit entanglement measure 2*lambda0*lambda1, in [0, 1].
double concurrence(const StateVector& psi);

// Tr(rho^2); expects a normalized density matrix.
double purity(const DensityMatrix& rho);

// <psi| rho |psi>.
double fidelity(const StateVector& psi, const DensityMatrix& rho);

// Largest eigenvalue and its eigenvector; used to read a pure state back out
// of a rank-one branch.
std::pair<double, StateVector> dominant_eigenstate(const DensityMatrix& rho);

template <typename A, typename B>
double max_abs_diff(const Eigen::MatrixBase<A>& a,
                    const Eigen::MatrixBase<B>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Column-stacking vectorization and its inverse (square matrices).
Vec vec_of(const Mat& m);
Mat unvec(const Vec& v);

}  // namespace nlsim
