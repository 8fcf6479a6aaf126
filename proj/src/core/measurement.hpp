#pragma once

// Measurement-theory layer: labeled measurement-operator sets for the
// spin-product schemes, coarse-grained quantum instruments, POVM extraction
// and strength readout.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "states.hpp"

namespace nlsim {

struct MeasurementOperatorSet {
  std::vector<std::string> labels;
  std::vector<Mat> operators;  // one per label, common square dimension

  Eigen::Index dim() const;
  // max-abs of (sum M^dagger M - identity).
  double completeness_residual() const;
};

// Ideal-meter operator set: the two distinct operators weight the even- and
// odd-parity projectors with cos/sin, and local outcome pairs of equal global
// parity share one operator. theta in [0, pi/4].
MeasurementOperatorSet build_nmem_operators(double theta);

// Rotated Bell-meter operator set: each local outcome pair gets its own
// operator, with antisymmetric sign structure across the parity projectors.
// Any real theta is accepted (the angle wraps).
MeasurementOperatorSet build_mem_operators(double theta);

// Effective +1/-1 operators of the ideal scheme (valid because operators
// within a global outcome coincide).
std::pair<Mat, Mat> nmem_effective_operators(double theta);

// Global outcome of a local-outcome label: the product of its '+'/'-' signs.
int spin_product_rule(const std::string& label);
using ProductRule = std::function<int(const std::string&)>;

struct QuantumInstrument {
  std::vector<Mat> kraus_plus;   // global outcome +1
  std::vector<Mat> kraus_minus;  // global outcome -1

  Eigen::Index dim() const;
  const std::vector<Mat>& kraus(int outcome) const;
  // Column-stacking process matrix sum_k conj(K) (x) K for one outcome.
  Mat superoperator(int outcome) const;
  // max-abs of (sum_{r,k} K^dagger K - identity).
  double trace_preservation_residual() const;
};

QuantumInstrument coarse_grain(const MeasurementOperatorSet& ops,
                               const ProductRule& rule = spin_product_rule);

struct Povm {
  Mat effect_plus;
  Mat effect_minus;
  double completeness_residual() const;
};

// E_r = sum_k K^dagger K per outcome (the superoperator adjoint applied to
// the identity).
Povm povm_of(const QuantumInstrument& instrument);

// sigma_z (x) sigma_z on two qubits.
Mat spin_product_observable();

// Strength s with effects of the form (1 +- s * observable) / 2, where the
// observable is sigma_z for one qubit and sigma_z (x) sigma_z for two.
// Raises ShapeMismatch when the effects deviate from that form by > 1e-8.
double strength_of(const Povm& povm);

struct InstrumentBranch {
  double probability = 0.0;
  std::optional<DensityMatrix> state;  // normalized; empty when probability ~ 0
};

// Outcome probabilities and normalized post-measurement states.
std::map<int, InstrumentBranch> apply_instrument(const QuantumInstrument& instrument,
                                                 const DensityMatrix& rho);

}  // namespace nlsim
