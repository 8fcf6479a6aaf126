#include "schemes.hpp"

#include <cmath>

namespace nlsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_system_input(const StateVector& psi, int n_qubits) {
  if (psi.n_qubits() != n_qubits)
    fail(ErrorCode::Dimension, "unexpected system qubit count");
  if (std::abs(psi.norm() - 1.0) > 1e-8)
    fail(ErrorCode::Normalization, "system input state must be normalized");
}

// Measures `qubits` of the joint state in Z and traces them out, producing
// one labeled entry per outcome combination. `base_probability` carries the
// post-selection factors accumulated before the readout.
std::vector<OutcomeEntry> readout(const StateVector& joint,
                                  const std::vector<int>& qubits,
                                  const std::vector<int>& system_qubits,
                                  double base_probability) {
  std::vector<OutcomeEntry> entries;
  struct Branchlet {
    std::string label;
    double probability;
    std::optional<StateVector> state;
  };
  std::vector<Branchlet> frontier{{"", 1.0, joint}};
  for (int qubit : qubits) {
    std::vector<Branchlet> next;
    for (const Branchlet& branch : frontier) {
      if (!branch.state) {
        // Dead branch: expand the label space with zero-probability entries.
        for (const char* sign : {"+", "-"})
          next.push_back({branch.label + sign, 0.0, std::nullopt});
        continue;
      }
      for (const MeasureBranch& mb : measure_branch(*branch.state, qubit, Basis::Z)) {
        next.push_back({branch.label + (mb.outcome > 0 ? "+" : "-"),
                        branch.probability * mb.probability, mb.state});
      }
    }
    frontier = std::move(next);
  }
  for (const Branchlet& branch : frontier) {
    OutcomeEntry entry;
    entry.label = branch.label;
    entry.probability = base_probability * branch.probability;
    if (branch.state && branch.probability >= 1e-12)
      entry.state = partial_trace(DensityMatrix::pure(*branch.state), system_qubits);
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace

double MeterSpec::concurrence() const {
  const double s = strength();
  const double c2 = std::cos(0.5 * phi) * std::cos(0.5 * phi);
  const double value = 1.0 - (1.0 - s * s) * c2;
  return std::sqrt(std::max(value, 0.0));
}

void MeterSpec::validate() const {
  if (!(theta >= -1e-12 && theta <= M_PI / 4.0 + 1e-12))
    fail(ErrorCode::InvalidArgument, "meter angle outside [0, pi/4]");
  if (!(phi >= -1e-12 && phi <= M_PI + 1e-12))
    fail(ErrorCode::InvalidArgument, "meter phase outside [0, pi]");
}

StateVector prepare_meter(const MeterSpec& spec) {
  spec.validate();
  const double c = std::cos(spec.theta);
  const double s = std::sin(spec.theta);
  Vec amps(4);
  amps << kInvSqrt2 * c, kInvSqrt2 * s * std::exp(cxd(0.0, spec.phi)),
      kInvSqrt2 * s, kInvSqrt2 * c;
  return StateVector(2, std::move(amps));
}

FilterPreparation prepare_meter_by_filter(double theta) {
  MeterSpec{theta, 0.0}.validate();
  const double alpha = M_PI / 4.0 - theta;

  // [meter A, meter B, ancilla]
  StateVector reg = tensor(bell_phi_plus(), StateVector::zero(1));
  reg = apply(reg, {Gate::h(), {0}});
  reg = apply(reg, {Gate::ry(alpha), {2}});
  reg = apply(reg, {Gate::cnot(), {0, 2}});
  PostselectResult ps = postselect(reg, 2, StateVector::basis(1, 0));
  StateVector meter = apply(ps.state, {Gate::h(), {0}});
  return {ps.probability, meter.canonicalized()};
}

const char* scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Nmem: return "nmem";
    case Scheme::Mem: return "mem";
    case Scheme::Erasure: return "erasure";
    case Scheme::SingleQubit: return "single-qubit";
  }
  return "?";
}

std::map<int, GlobalBranch> SchemeRun::global_branches() const {
  const Eigen::Index d = input.dim();
  std::map<int, Mat> accum{{+1, Mat::Zero(d, d)}, {-1, Mat::Zero(d, d)}};
  for (const OutcomeEntry& entry : outcome_table) {
    if (!entry.state) continue;
    accum[spin_product_rule(entry.label)] +=
        entry.probability * entry.state->mat();
  }
  std::map<int, GlobalBranch> out;
  for (int outcome : {+1, -1}) {
    GlobalBranch& branch = out[outcome];
    const double p_abs = accum[outcome].trace().real();
    branch.probability = p_abs / success_probability;
    if (p_abs >= 1e-12) {
      branch.state = DensityMatrix(input.n_qubits(), accum[outcome] / p_abs);
      branch.purity = purity(*branch.state);
    }
  }
  return out;
}

double SchemeRun::delta_gamma() const {
  double dg = 0.0;
  for (const auto& [outcome, branch] : global_branches()) {
    (void)outcome;
    if (branch.state) dg += branch.probability * (1.0 - branch.purity);
  }
  return dg;
}

SchemeRun run_nmem(const MeterSpec& meter, const StateVector& psi) {
  check_system_input(psi, 2);
  // [system A, system B, meter A, meter B]
  StateVector joint = tensor(psi, prepare_meter(meter));
  joint = apply(joint, {Gate::cnot(), {0, 2}});
  joint = apply(joint, {Gate::cnot(), {1, 3}});

  SchemeRun run{Scheme::Nmem, meter.theta, meter.phi, psi, {}, 1.0, {}};
  run.outcome_table = readout(joint, {2, 3}, {0, 1}, 1.0);
  return run;
}

SchemeRun run_mem(double theta1, double theta2, const StateVector& psi) {
  check_system_input(psi, 2);
  StateVector joint = tensor(psi, bell_phi_plus());
  joint = apply(joint, {Gate::ry(theta1), {2}});
  joint = apply(joint, {Gate::ry(theta2), {3}});
  joint = apply(joint, {Gate::cnot(), {0, 2}});
  joint = apply(joint, {Gate::cnot(), {1, 3}});

  SchemeRun run{Scheme::Mem, theta2 - theta1, 0.0, psi, {}, 1.0, {}};
  run.outcome_table = readout(joint, {2, 3}, {0, 1}, 1.0);
  return run;
}

SchemeRun run_erasure(double meter_theta, const StateVector& psi) {
  check_system_input(psi, 2);
  MeterSpec{meter_theta, 0.0}.validate();

  // [system A, system B, meter A, meter B, local meter]
  StateVector joint = tensor(tensor(psi, bell_phi_plus()), StateVector::zero(1));
  joint = apply(joint, {Gate::ry(meter_theta), {4}});
  joint = apply(joint, {Gate::cnot(), {0, 2}});
  joint = apply(joint, {Gate::cnot(), {1, 3}});

  // Teleport the parity to one side: post-select meter A on |0>.
  PostselectResult alice = postselect(joint, 2, StateVector::basis(1, 0));
  // [system A, system B, meter B, local meter]
  StateVector after_alice = alice.state;
  after_alice = apply(after_alice, {Gate::cnot(), {2, 3}});
  // Erase the leftover which-parity information: post-select meter B on |+>.
  PostselectResult erase = postselect(after_alice, 2, ket_plus());

  SchemeRun run{Scheme::Erasure, meter_theta, 0.0, psi, {}, 1.0, {}};
  run.success_probability = alice.probability * erase.probability;
  run.postselections = {{"alice-meter-zero", alice.probability},
                        {"bob-erasure-plus", erase.probability}};
  // [system A, system B, local meter]
  run.outcome_table = readout(erase.state, {2}, {0, 1}, run.success_probability);
  return run;
}

SchemeRun run_single_qubit(double theta, const StateVector& psi) {
  check_system_input(psi, 1);
  MeterSpec{theta, 0.0}.validate();
  StateVector meter = apply(StateVector::zero(1), {Gate::ry(theta), {0}});
  StateVector joint = tensor(psi, meter);
  joint = apply(joint, {Gate::cnot(), {0, 1}});

  SchemeRun run{Scheme::SingleQubit, theta, 0.0, psi, {}, 1.0, {}};
  run.outcome_table = readout(joint, {1}, {0}, 1.0);
  return run;
}

StateVector ket_plus() {
  Vec a(2);
  a << kInvSqrt2, kInvSqrt2;
  return StateVector(1, std::move(a));
}

StateVector bell_phi_plus() {
  Vec a = Vec::Zero(4);
  a(0) = a(3) = kInvSqrt2;
  return StateVector(2, std::move(a));
}

StateVector bell_psi_plus() {
  Vec a = Vec::Zero(4);
  a(1) = a(2) = kInvSqrt2;
  return StateVector(2, std::move(a));
}

std::vector<StateVector> tomography_inputs(int n_qubits) {
  std::vector<StateVector> kets;
  {
    Vec plus(2), plus_i(2);
    plus << kInvSqrt2, kInvSqrt2;
    plus_i << kInvSqrt2, cxd(0.0, kInvSqrt2);
    kets = {StateVector::basis(1, 0), StateVector::basis(1, 1),
            StateVector(1, plus), StateVector(1, plus_i)};
  }
  std::vector<StateVector> inputs;
  const int count = 1 << (2 * n_qubits);  // 4^n
  inputs.reserve(count);
  for (int code = 0; code < count; ++code) {
    int digits = code;
    StateVector state = kets[(digits >> (2 * (n_qubits - 1))) & 3];
    for (int q = 1; q < n_qubits; ++q)
      state = tensor(state, kets[(digits >> (2 * (n_qubits - 1 - q))) & 3]);
    inputs.push_back(std::move(state));
  }
  return inputs;
}

const Mat& InstrumentReconstruction::superop(int outcome) const {
  if (outcome == 1) return superop_plus;
  if (outcome == -1) return superop_minus;
  fail(ErrorCode::InvalidArgument, "outcome must be +1 or -1");
}

QuantumInstrument InstrumentReconstruction::to_instrument() const {
  const Eigen::Index m = superop_plus.rows();
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(m))));

  QuantumInstrument instrument;
  for (int outcome : {+1, -1}) {
    const Mat& s = superop(outcome);
    // Choi matrix: block (i, j) holds the map applied to |i><j|.
    Mat choi = Mat::Zero(m, m);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        Vec e = Vec::Zero(m);
        e(j * d + i) = 1.0;
        choi.block(i * d, j * d, d, d) = unvec(s * e);
      }
    if (max_abs_diff(choi, choi.adjoint()) > 1e-9)
      fail(ErrorCode::Inconsistent, "reconstructed map is not Hermiticity-preserving");

    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (choi + choi.adjoint()));
    std::vector<Mat>& kraus =
        outcome == 1 ? instrument.kraus_plus : instrument.kraus_minus;
    Mat rebuilt = Mat::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const double eigenvalue = es.eigenvalues()(k);
      if (eigenvalue < -1e-9)
        fail(ErrorCode::Inconsistent, "reconstructed map is not completely positive");
      if (eigenvalue <= 1e-12) continue;
      Mat op = std::sqrt(eigenvalue) * unvec(es.eigenvectors().col(k));
      rebuilt += tensor(op.conjugate(), op, m);
      kraus.push_back(std::move(op));
    }
    if (max_abs_diff(rebuilt, s) > 1e-8)
      fail(ErrorCode::Inconsistent, "Kraus form does not reproduce the process matrix");
  }
  return instrument;
}

InstrumentReconstruction reconstruct_instrument(const SchemeRunner& runner,
                                                int n_system_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_system_qubits;
  const Eigen::Index m = d * d;
  const std::vector<StateVector> inputs = tomography_inputs(n_system_qubits);

  Mat basis(m, m), out_plus = Mat::Zero(m, m), out_minus = Mat::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    basis.col(k) = vec_of(DensityMatrix::pure(inputs[k]).mat());
    const SchemeRun run = runner(inputs[k]);
    for (const auto& [outcome, branch] : run.global_branches()) {
      if (!branch.state) continue;
      Mat& target = outcome == 1 ? out_plus : out_minus;
      target.col(k) = vec_of(Mat(branch.probability * branch.state->mat()));
    }
  }

  const Mat basis_inverse = basis.partialPivLu().inverse();
  InstrumentReconstruction rec;
  rec.superop_plus = out_plus * basis_inverse;
  rec.superop_minus = out_minus * basis_inverse;
  rec.residual = std::max(max_abs_diff(rec.superop_plus * basis, out_plus),
                          max_abs_diff(rec.superop_minus * basis, out_minus));
  if (rec.residual > 1e-8)
    fail(ErrorCode::Inconsistent, "process reconstruction residual too large");
  return rec;
}

Povm povm_of(const InstrumentReconstruction& reconstruction) {
  const Eigen::Index m = reconstruction.superop_plus.rows();
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(m))));
  const Vec identity = vec_of(Mat::Identity(d, d));
  return {unvec(reconstruction.superop_plus.adjoint() * identity),
          unvec(reconstruction.superop_minus.adjoint() * identity)};
}

}  // namespace nlsim
