#include "measurement.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

namespace nlsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Projector onto the two-qubit basis state |ij>.
Mat proj(int i, int j) {
  Mat p = Mat::Zero(4, 4);
  p(2 * i + j, 2 * i + j) = 1.0;
  return p;
}

}  // namespace

Eigen::Index MeasurementOperatorSet::dim() const {
  return operators.empty() ? 0 : operators.front().rows();
}

double MeasurementOperatorSet::completeness_residual() const {
  const Eigen::Index d = dim();
  Mat sum = Mat::Zero(d, d);
  for (const Mat& m : operators) sum += m.adjoint() * m;
  return max_abs_diff(sum, Mat::Identity(d, d));
}

MeasurementOperatorSet build_nmem_operators(double theta) {
  if (theta < 0.0 || theta > M_PI / 4.0 + 1e-12)
    fail(ErrorCode::InvalidArgument, "meter angle outside [0, pi/4]");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Mat even = proj(0, 0) + proj(1, 1);
  const Mat odd = proj(0, 1) + proj(1, 0);
  const Mat m_same = kInvSqrt2 * (c * even + s * odd);
  const Mat m_diff = kInvSqrt2 * (s * even + c * odd);
  return {{"++", "+-", "-+", "--"}, {m_same, m_diff, m_diff, m_same}};
}

MeasurementOperatorSet build_mem_operators(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Mat even = proj(0, 0) + proj(1, 1);
  const Mat odd = proj(0, 1) + proj(1, 0);
  const Mat even_sgn = proj(0, 0) - proj(1, 1);
  const Mat odd_sgn = proj(0, 1) - proj(1, 0);
  return {{"++", "+-", "-+", "--"},
          {kInvSqrt2 * (c * even + s * odd_sgn),
           kInvSqrt2 * (c * odd + s * even_sgn),
           kInvSqrt2 * (c * odd - s * even_sgn),
           kInvSqrt2 * (c * even - s * odd_sgn)}};
}

std::pair<Mat, Mat> nmem_effective_operators(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Mat even = proj(0, 0) + proj(1, 1);
  const Mat odd = proj(0, 1) + proj(1, 0);
  return {c * even + s * odd, s * even + c * odd};
}

int spin_product_rule(const std::string& label) {
  int product = 1;
  for (char ch : label) {
    if (ch == '-')
      product = -product;
    else if (ch != '+')
      fail(ErrorCode::InvalidArgument,
           "outcome label must consist of '+'/'-' signs: " + label);
  }
  return product;
}

Eigen::Index QuantumInstrument::dim() const {
  if (!kraus_plus.empty()) return kraus_plus.front().rows();
  if (!kraus_minus.empty()) return kraus_minus.front().rows();
  return 0;
}

const std::vector<Mat>& QuantumInstrument::kraus(int outcome) const {
  if (outcome == 1) return kraus_plus;
  if (outcome == -1) return kraus_minus;
  fail(ErrorCode::InvalidArgument, "instrument outcome must be +1 or -1");
}

Mat QuantumInstrument::superoperator(int outcome) const {
  const Eigen::Index d = dim();
  Mat s = Mat::Zero(d * d, d * d);
  for (const Mat& k : kraus(outcome))
    s += Eigen::kroneckerProduct(k.conjugate(), k);
  return s;
}

double QuantumInstrument::trace_preservation_residual() const {
  const Eigen::Index d = dim();
  Mat sum = Mat::Zero(d, d);
  for (const std::vector<Mat>* set : {&kraus_plus, &kraus_minus})
    for (const Mat& k : *set) sum += k.adjoint() * k;
  return max_abs_diff(sum, Mat::Identity(d, d));
}

QuantumInstrument coarse_grain(const MeasurementOperatorSet& ops,
                               const ProductRule& rule) {
  if (ops.labels.size() != ops.operators.size())
    fail(ErrorCode::InvalidArgument, "label/operator count mismatch");
  QuantumInstrument instrument;
  for (size_t i = 0; i < ops.labels.size(); ++i) {
    const int outcome = rule(ops.labels[i]);
    if (outcome == 1)
      instrument.kraus_plus.push_back(ops.operators[i]);
    else if (outcome == -1)
      instrument.kraus_minus.push_back(ops.operators[i]);
    else
      fail(ErrorCode::InvalidArgument, "product rule must return +1 or -1");
  }
  return instrument;
}

double Povm::completeness_residual() const {
  return max_abs_diff(effect_plus + effect_minus,
                      Mat::Identity(effect_plus.rows(), effect_plus.cols()));
}

Povm povm_of(const QuantumInstrument& instrument) {
  const Eigen::Index d = instrument.dim();
  Mat e_plus = Mat::Zero(d, d);
  Mat e_minus = Mat::Zero(d, d);
  for (const Mat& k : instrument.kraus_plus) e_plus += k.adjoint() * k;
  for (const Mat& k : instrument.kraus_minus) e_minus += k.adjoint() * k;
  return {e_plus, e_minus};
}

Mat spin_product_observable() {
  Mat sz = Mat::Identity(2, 2);
  sz(1, 1) = -1.0;
  return Eigen::kroneckerProduct(sz, sz);
}

double strength_of(const Povm& povm) {
  const Eigen::Index d = povm.effect_plus.rows();
  Mat observable;
  if (d == 2) {
    observable = Mat::Identity(2, 2);
    observable(1, 1) = -1.0;
  } else if (d == 4) {
    observable = spin_product_observable();
  } else {
    fail(ErrorCode::ShapeMismatch, "strength is defined for 1- or 2-qubit POVMs");
  }

  const double s =
      (povm.effect_plus * observable).trace().real() / static_cast<double>(d / 2);
  const Mat identity = Mat::Identity(d, d);
  const double residual =
      std::max(max_abs_diff(povm.effect_plus, 0.5 * (identity + s * observable)),
               max_abs_diff(povm.effect_minus, 0.5 * (identity - s * observable)));
  if (residual > 1e-8)
    fail(ErrorCode::ShapeMismatch,
         "POVM effects are not of spin-product form (residual " +
             std::to_string(residual) + ")");
  return s;
}

std::map<int, InstrumentBranch> apply_instrument(const QuantumInstrument& instrument,
                                                 const DensityMatrix& rho) {
  if (instrument.dim() != rho.dim())
    fail(ErrorCode::Dimension, "instrument/state dimension mismatch");
  std::map<int, InstrumentBranch> result;
  for (int outcome : {+1, -1}) {
    Mat branch = Mat::Zero(rho.dim(), rho.dim());
    for (const Mat& k : instrument.kraus(outcome))
      branch += k * rho.mat() * k.adjoint();
    const double p = branch.trace().real();
    InstrumentBranch& out = result[outcome];
    out.probability = p;
    if (p >= 1e-12)
      out.state = DensityMatrix(rho.n_qubits(), branch / p);
  }
  return result;
}

}  // namespace nlsim
