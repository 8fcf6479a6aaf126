#pragma once

// Gate library and circuit engine: named gates applied to selected qubits of
// a StateVector or DensityMatrix, projective measurement with outcome
// branching, and post-selection.

#include <optional>
#include <string>
#include <vector>

#include "states.hpp"

namespace nlsim {

enum class GateKind { H, X, Z, CNOT, RY, Phase };

struct Gate {
  GateKind kind;
  double angle = 0.0;  // rotation angle (RY) or phase (Phase)

  static Gate h() { return {GateKind::H}; }
  static Gate x() { return {GateKind::X}; }
  static Gate z() { return {GateKind::Z}; }
  static Gate cnot() { return {GateKind::CNOT}; }
  // RY(t)|0> = cos t |0> + sin t |1>; real rotation matrix.
  static Gate ry(double theta) { return {GateKind::RY, theta}; }
  // diag(1, e^{i phi}).
  static Gate phase(double phi) { return {GateKind::Phase, phi}; }

  int arity() const { return kind == GateKind::CNOT ? 2 : 1; }
  Mat matrix() const;
  Gate inverse() const;
  const char* name() const;
};

struct CircuitOp {
  Gate gate;
  std::vector<int> targets;  // control first for CNOT
};

// Full 2^n x 2^n unitary with `u` acting on `targets` (first target is the
// most significant gate-space qubit) and identity elsewhere.
Mat embed(const Mat& u, const std::vector<int>& targets, int n_qubits);

StateVector apply(const StateVector& state, const CircuitOp& op);
// Conjugation rho -> U rho U^dagger; mixed-state execution path.
DensityMatrix apply(const DensityMatrix& rho, const CircuitOp& op);
StateVector apply_all(StateVector state, const std::vector<CircuitOp>& ops);

enum class Basis { Z, X };

struct MeasureBranch {
  int qubit;
  Basis basis;
  int outcome;                       // +1 or -1 (Z: |0> -> +1; X: |+> -> +1)
  double probability;
  std::optional<StateVector> state;  // renormalized; empty when probability ~ 0
};

// Both outcome branches of a projective single-qubit measurement, zero
// probability branches included (flagged by an empty state).
std::array<MeasureBranch, 2> measure_branch(const StateVector& state, int qubit,
                                            Basis basis);

struct PostselectResult {
  double probability;
  StateVector state;  // one fewer qubit, renormalized
};

// Projects `qubit` onto `target` (single-qubit state) and removes it.
// Probability below 1e-12 raises ImpossiblePostselection.
PostselectResult postselect(const StateVector& state, int qubit,
                            const StateVector& target);

}  // namespace nlsim
