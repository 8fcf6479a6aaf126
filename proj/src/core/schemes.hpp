#pragma once

// End-to-end circuit realizations of the spin-product measurement schemes:
// the ideal scheme with a partially entangled shared meter, the rotated
// Bell-meter variant, the erasure protocol it is compared against, and the
// one-qubit baseline they all generalize. Also the process-tomography bridge
// used to cross-validate circuit runs against the analytic operator sets.

#include "circuit.hpp"
#include "measurement.hpp"

namespace nlsim {

struct MeterSpec {
  double theta = 0.0;  // in [0, pi/4]
  double phi = 0.0;    // in [0, pi]; 0 for the ideal meter

  double strength() const { return std::cos(2.0 * theta); }
  // Closed-form meter concurrence sqrt(1 - (1 - S^2) cos^2(phi/2)); the
  // simulated value via schmidt() is the oracle this is tested against.
  double concurrence() const;
  void validate() const;
};

// (1/sqrt(2)) (cos t |00> + e^{i phi} sin t |01> + sin t |10> + cos t |11>).
StateVector prepare_meter(const MeterSpec& spec);

struct FilterPreparation {
  double success_probability;  // exactly 1/2, computed from amplitudes
  StateVector meter;
};

// Probabilistic reduction of a Bell pair to the ideal meter state: one side
// couples a local ancilla (H, RY, CNOT) and post-selects it on |0>.
FilterPreparation prepare_meter_by_filter(double theta);

enum class Scheme { Nmem, Mem, Erasure, SingleQubit };
const char* scheme_name(Scheme scheme);

struct OutcomeEntry {
  std::string label;  // local outcomes, e.g. "++" or "+"
  double probability; // absolute, including post-selection factors
  std::optional<DensityMatrix> state;  // normalized post-measurement system state
};

struct GlobalBranch {
  double probability = 0.0;  // conditional on scheme success
  std::optional<DensityMatrix> state;
  double purity = 0.0;  // of `state`; meaningful only when present
};

struct SchemeRun {
  Scheme scheme;
  double theta = 0.0;  // effective meter angle of the run
  double phi = 0.0;
  StateVector input;
  std::vector<OutcomeEntry> outcome_table;  // probabilities sum to success
  double success_probability = 1.0;
  // Post-selection stages and their success probabilities, in order.
  std::vector<std::pair<std::string, double>> postselections;

  // Coarse-grained branches keyed by the product of local outcomes.
  std::map<int, GlobalBranch> global_branches() const;
  // Probability-weighted purity loss of the coarse-grained branches relative
  // to the pure input.
  double delta_gamma() const;
};

// Shared-meter scheme: prepare the meter, couple both system qubits to their
// meter qubits with CNOTs, read the meter out in Z. General phi accepted.
SchemeRun run_nmem(const MeterSpec& meter, const StateVector& psi);

// Bell-meter scheme: share a Bell pair, rotate the two meter qubits by
// theta1/theta2, couple with CNOTs, read out. Effective angle theta2 - theta1.
SchemeRun run_mem(double theta1, double theta2, const StateVector& psi);

// Erasure protocol: strong CNOT couplings to a shared Bell meter,
// post-selection of one meter qubit on |0>, weak coupling of the other to a
// local meter, erasure post-selection on |+>, readout of the local meter.
SchemeRun run_erasure(double meter_theta, const StateVector& psi);

// One-qubit baseline: meter RY(theta)|0>, CNOT from the system, Z readout.
SchemeRun run_single_qubit(double theta, const StateVector& psi);

// Common states.
StateVector ket_plus();
StateVector bell_phi_plus();
StateVector bell_psi_plus();

// Fixed spanning set for process reconstruction: all 4^n products of
// {|0>, |1>, |+>, |+i>} per qubit, in base-4 counting order.
std::vector<StateVector> tomography_inputs(int n_qubits);

using SchemeRunner = std::function<SchemeRun(const StateVector&)>;

struct InstrumentReconstruction {
  Mat superop_plus;   // d^2 x d^2 process matrices, conditional on success
  Mat superop_minus;
  double residual = 0.0;

  const Mat& superop(int outcome) const;
  // Kraus form via the Choi eigendecomposition; raises Inconsistent when the
  // reconstructed map is not completely positive or does not reproduce the
  // process matrices.
  QuantumInstrument to_instrument() const;
};

// Reconstructs the per-outcome process matrices of a scheme from runs over
// the spanning input set. Raises Inconsistent when the linear reconstruction
// fails to reproduce the observed branches (residual > 1e-8).
InstrumentReconstruction reconstruct_instrument(const SchemeRunner& runner,
                                                int n_system_qubits);

// POVM effects read off a reconstruction via the superoperator adjoint
// applied to the identity.
Povm povm_of(const InstrumentReconstruction& reconstruction);

}  // namespace nlsim
