#include "states.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>

namespace nlsim {

// Debug-mode validator: every DensityMatrix constructed anywhere in the
// library gets checked unless NDEBUG is set (override with NLSIM_VALIDATE).
#if !defined(NDEBUG) || defined(NLSIM_VALIDATE)
#define NLSIM_VALIDATING_STATES 1
#endif

namespace {

constexpr double kPsdTol = 1e-9;

bool is_power_of_two(Eigen::Index x) { return x > 0 && (x & (x - 1)) == 0; }

// Bit of `qubit` inside an n-qubit basis index (qubit 0 most significant).
inline int bit_of(Eigen::Index index, int qubit, int n) {
  return static_cast<int>((index >> (n - 1 - qubit)) & 1);
}

}  // namespace

StateVector::StateVector(int n_qubits, Vec amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits_ < 1 || n_qubits_ > 20)
    fail(ErrorCode::InvalidArgument,
         "state vector qubit count out of range: " + std::to_string(n_qubits_));
  if (amps_.size() != (Eigen::Index{1} << n_qubits_))
    fail(ErrorCode::Dimension, "amplitude count does not match qubit count");
  if (!amps_.allFinite())
    fail(ErrorCode::InvalidArgument, "non-finite amplitude");
}

StateVector StateVector::zero(int n_qubits) { return basis(n_qubits, 0); }

StateVector StateVector::basis(int n_qubits, Eigen::Index index) {
  if (n_qubits < 1 || n_qubits > 20)
    fail(ErrorCode::InvalidArgument, "qubit count out of range");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (index < 0 || index >= dim)
    fail(ErrorCode::InvalidArgument, "basis index out of range");
  Vec a = Vec::Zero(dim);
  a(index) = 1.0;
  return StateVector(n_qubits, std::move(a));
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n < 1e-12)
    fail(ErrorCode::Normalization, "cannot normalize a near-zero state");
  return StateVector(n_qubits_, amps_ / n);
}

StateVector StateVector::canonicalized() const {
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    const double mag = std::abs(amps_(i));
    if (mag > 1e-12) {
      return StateVector(n_qubits_, amps_ * (mag / amps_(i)));
    }
  }
  return *this;
}

DensityMatrix::DensityMatrix(int n_qubits, Mat matrix)
    : n_qubits_(n_qubits), mat_(std::move(matrix)) {
  if (n_qubits_ < 1 || n_qubits_ > 20)
    fail(ErrorCode::InvalidArgument, "density matrix qubit count out of range");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits_;
  if (mat_.rows() != dim || mat_.cols() != dim)
    fail(ErrorCode::Dimension, "density matrix shape does not match qubit count");
#ifdef NLSIM_VALIDATING_STATES
  validate();
#endif
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(psi.n_qubits(), psi.amps() * psi.amps().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  return DensityMatrix(n_qubits,
                       Mat::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::normalized() const {
  const double tr = trace_real();
  if (tr < 1e-12)
    fail(ErrorCode::Normalization, "cannot normalize a near-zero density matrix");
  return DensityMatrix(n_qubits_, mat_ / tr);
}

void DensityMatrix::validate(double tol) const {
  if (!mat_.allFinite())
    fail(ErrorCode::InvalidArgument, "non-finite density matrix entry");
  if (max_abs_diff(mat_, mat_.adjoint()) > tol)
    fail(ErrorCode::InvalidArgument, "density matrix is not Hermitian");
  const double tr = mat_.trace().real();
  if (std::abs(mat_.trace().imag()) > tol || tr <= 0.0 || tr > 1.0 + tol)
    fail(ErrorCode::InvalidArgument, "density matrix trace outside (0, 1]");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (mat_ + mat_.adjoint()),
                                        Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol)
    fail(ErrorCode::InvalidArgument, "density matrix is not positive semidefinite");
}

Mat tensor(const Mat& a, const Mat& b, Eigen::Index max_dim) {
  if (!is_power_of_two(a.rows()) || !is_power_of_two(a.cols()) ||
      !is_power_of_two(b.rows()) || !is_power_of_two(b.cols()))
    fail(ErrorCode::Dimension, "tensor factors must have power-of-two dims");
  if (a.rows() * b.rows() > max_dim || a.cols() * b.cols() > max_dim)
    fail(ErrorCode::Dimension, "tensor product exceeds the maximum dimension");
  return Eigen::kroneckerProduct(a, b);
}

StateVector tensor(const StateVector& a, const StateVector& b,
                   Eigen::Index max_dim) {
  if (a.dim() * b.dim() > max_dim)
    fail(ErrorCode::Dimension, "tensor product exceeds the maximum dimension");
  Vec out = Eigen::kroneckerProduct(a.amps(), b.amps());
  return StateVector(a.n_qubits() + b.n_qubits(), std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep) {
  const int n = rho.n_qubits();
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (kept.empty())
    fail(ErrorCode::InvalidArgument, "partial trace must keep at least one qubit");
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    fail(ErrorCode::InvalidArgument, "duplicate qubit index in partial trace");
  if (kept.front() < 0 || kept.back() >= n)
    fail(ErrorCode::InvalidArgument, "qubit index out of range in partial trace");

  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);

  const int k = static_cast<int>(kept.size());
  const int m = n - k;
  const Eigen::Index out_dim = Eigen::Index{1} << k;
  const Eigen::Index sum_dim = Eigen::Index{1} << m;

  // Scatter a subsystem index into the full index at the given qubits.
  auto scatter = [n](Eigen::Index sub, const std::vector<int>& qubits) {
    Eigen::Index full = 0;
    const int s = static_cast<int>(qubits.size());
    for (int j = 0; j < s; ++j) {
      const Eigen::Index bit = (sub >> (s - 1 - j)) & 1;
      full |= bit << (n - 1 - qubits[j]);
    }
    return full;
  };

  Mat out = Mat::Zero(out_dim, out_dim);
  for (Eigen::Index a = 0; a < out_dim; ++a) {
    const Eigen::Index row_kept = scatter(a, kept);
    for (Eigen::Index b = 0; b < out_dim; ++b) {
      const Eigen::Index col_kept = scatter(b, kept);
      cxd sum = 0.0;
      for (Eigen::Index s = 0; s < sum_dim; ++s) {
        const Eigen::Index t = scatter(s, traced);
        sum += rho.mat()(row_kept | t, col_kept | t);
      }
      out(a, b) = sum;
    }
  }
  return DensityMatrix(k, std::move(out));
}

StateVector SchmidtDecomposition::reconstruct() const {
  StateVector term0 = tensor(basis_a[0], basis_b[0]);
  StateVector term1 = tensor(basis_a[1], basis_b[1]);
  return StateVector(2, lambda0 * term0.amps() + lambda1 * term1.amps());
}

SchmidtDecomposition schmidt(const StateVector& psi) {
  if (psi.n_qubits() != 2)
    fail(ErrorCode::Dimension, "Schmidt decomposition expects a 2-qubit state");
  if (std::abs(psi.norm() - 1.0) > 1e-8)
    fail(ErrorCode::Normalization, "Schmidt decomposition expects a normalized state");

  // Coefficient matrix: row = qubit-A bit, column = qubit-B bit.
  Eigen::Matrix2cd coeff;
  coeff << psi.amp(0), psi.amp(1), psi.amp(2), psi.amp(3);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(coeff * coeff.adjoint());
  // Eigen returns ascending eigenvalues; index 1 is the dominant one.
  Eigen::Vector2cd a0 = es.eigenvectors().col(1);
  Eigen::Vector2cd a1 = es.eigenvectors().col(0);

  // The dominant coefficient is >= 1/sqrt(2), so this division is safe.
  const Eigen::Vector2cd w0 = coeff.transpose() * a0.conjugate();
  const double lambda0 = w0.norm();
  Eigen::Vector2cd b0 = w0 / lambda0;

  // The partner B-side vector is the orthogonal complement of b0; reading
  // the small coefficient off the complement (rather than as the square
  // root of the small eigenvalue) keeps it accurate near product states.
  Eigen::Vector2cd b1(-std::conj(b0(1)), std::conj(b0(0)));
  const Eigen::Vector2cd w1 = coeff.transpose() * a1.conjugate();
  const cxd overlap = b1.dot(w1);
  const double lambda1 = std::abs(overlap);
  if (lambda1 > 1e-15) b1 *= overlap / lambda1;

  // Phase convention: leading entry of each A-side vector real non-negative,
  // compensated on the B side so lambda*|a b| terms stay fixed.
  auto fix_phase = [](Eigen::Vector2cd& a, Eigen::Vector2cd& b) {
    for (int i = 0; i < 2; ++i) {
      const double mag = std::abs(a(i));
      if (mag > 1e-12) {
        const cxd phase = a(i) / mag;
        a /= phase;
        b *= phase;
        return;
      }
    }
  };
  fix_phase(a0, b0);
  fix_phase(a1, b1);

  auto sv = [](const Eigen::Vector2cd& v) {
    return StateVector(1, Vec(v));
  };
  return SchmidtDecomposition{lambda0, lambda1,
                              {sv(a0), sv(a1)},
                              {sv(b0), sv(b1)}};
}

double concurrence(const StateVector& psi) {
  const SchmidtDecomposition sd = schmidt(psi);
  return std::clamp(2.0 * sd.lambda0 * sd.lambda1, 0.0, 1.0);
}

double purity(const DensityMatrix& rho) {
  if (std::abs(rho.trace_real() - 1.0) > 1e-8)
    fail(ErrorCode::Normalization, "purity expects a normalized density matrix");
  return (rho.mat() * rho.mat()).trace().real();
}

double fidelity(const StateVector& psi, const DensityMatrix& rho) {
  if (psi.dim() != rho.dim())
    fail(ErrorCode::Dimension, "fidelity dimension mismatch");
  return (psi.amps().adjoint() * rho.mat() * psi.amps())(0).real();
}

std::pair<double, StateVector> dominant_eigenstate(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho.mat());
  const Eigen::Index last = rho.dim() - 1;
  return {es.eigenvalues()(last),
          StateVector(rho.n_qubits(), es.eigenvectors().col(last))};
}

Vec vec_of(const Mat& m) {
  return Eigen::Map<const Vec>(m.data(), m.size());
}

Mat unvec(const Vec& v) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size())
    fail(ErrorCode::Dimension, "unvec expects a square-length vector");
  return Eigen::Map<const Mat>(v.data(), d, d);
}

}  // namespace nlsim
