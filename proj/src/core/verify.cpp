#include "verify.hpp"

#include <cmath>
#include <limits>

#include "analysis.hpp"
#include "rng.hpp"

namespace nlsim {

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  return out;
}

Gate random_gate(Rng& rng) {
  switch (rng.uniform_int(0, 5)) {
    case 0: return Gate::h();
    case 1: return Gate::x();
    case 2: return Gate::z();
    case 3: return Gate::cnot();
    case 4: return Gate::ry(rng.uniform(-M_PI, M_PI));
    default: return Gate::phase(rng.uniform(-M_PI, M_PI));
  }
}

CircuitOp random_op(Rng& rng, int n_qubits) {
  Gate gate = random_gate(rng);
  while (gate.arity() > n_qubits) gate = random_gate(rng);
  if (gate.arity() == 1) return {gate, {rng.uniform_int(0, n_qubits - 1)}};
  const int control = rng.uniform_int(0, n_qubits - 1);
  int target = rng.uniform_int(0, n_qubits - 2);
  if (target >= control) ++target;
  return {gate, {control, target}};
}

// Matrices with dyadic-rational entries; products of three of them are exact
// in double precision, so associativity can be asserted with zero tolerance.
Mat random_dyadic_matrix(Rng& rng, Eigen::Index dim) {
  Mat m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      m(r, c) = cxd(rng.uniform_int(-64, 64) / 64.0,
                    rng.uniform_int(-64, 64) / 64.0);
  return m;
}

double check_schmidt_reconstruction(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const StateVector psi = rng.random_state(2);
    const SchmidtDecomposition sd = schmidt(psi);
    worst = std::max(worst, max_abs_diff(sd.reconstruct().amps(), psi.amps()));
    worst = std::max(worst, std::abs(sd.lambda0 * sd.lambda0 +
                                     sd.lambda1 * sd.lambda1 - 1.0));
    const double c = concurrence(psi);
    worst = std::max({worst, -c, c - 1.0});
    // Orthonormality on both sides.
    for (const auto& basis : {sd.basis_a, sd.basis_b}) {
      worst = std::max(worst, std::abs(basis[0].norm() - 1.0));
      worst = std::max(worst, std::abs(basis[1].norm() - 1.0));
      worst = std::max(worst,
                       std::abs(basis[0].amps().dot(basis[1].amps())));
    }
  }
  return worst;
}

double check_marginal_purity_law(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const StateVector psi = rng.random_state(2);
    const double c = concurrence(psi);
    const double gamma = purity(partial_trace(DensityMatrix::pure(psi), {0}));
    worst = std::max(worst, std::abs(gamma - (1.0 - 0.5 * c * c)));
  }
  for (int i = 0; i < 200; ++i) {
    const StateVector psi = rng.random_product_state(2);
    worst = std::max(worst, std::abs(purity(partial_trace(
                                DensityMatrix::pure(psi), {1})) - 1.0));
    worst = std::max(worst, concurrence(psi));
  }
  return worst;
}

double check_tensor_associativity(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Mat a = random_dyadic_matrix(rng, 2);
    const Mat b = random_dyadic_matrix(rng, 4);
    const Mat c = random_dyadic_matrix(rng, 2);
    worst = std::max(worst, max_abs_diff(tensor(tensor(a, b), c),
                                         tensor(a, tensor(b, c))));
  }
  return worst;
}

double check_density_matrix_validity(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    const int n = rng.uniform_int(1, 3);
    const Eigen::Index dim = Eigen::Index{1} << n;
    Mat m = Mat::Zero(dim, dim);
    double w0 = rng.uniform(0.1, 1.0), w1 = rng.uniform(0.1, 1.0),
           w2 = rng.uniform(0.1, 1.0);
    const double total = w0 + w1 + w2;
    for (double w : {w0 / total, w1 / total, w2 / total}) {
      const StateVector psi = rng.random_state(n);
      m += w * (psi.amps() * psi.amps().adjoint());
    }
    const DensityMatrix rho(n, m);
    worst = std::max(worst, max_abs_diff(rho.mat(), rho.mat().adjoint()));
    worst = std::max(worst, std::abs(rho.trace_real() - 1.0));
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.mat(), Eigen::EigenvaluesOnly);
    worst = std::max(worst, -es.eigenvalues().minCoeff());
  }
  return worst;
}

double check_gate_unitarity(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Mat u = random_gate(rng).matrix();
    worst = std::max(worst,
                     max_abs_diff(u.adjoint() * u,
                                  Mat::Identity(u.rows(), u.cols())));
  }
  return worst;
}

double check_norm_preservation(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int n = rng.uniform_int(1, 4);
    const StateVector psi = rng.random_state(n);
    const StateVector out = apply(psi, random_op(rng, n));
    worst = std::max(worst, std::abs(out.norm() - 1.0));
  }
  return worst;
}

double check_measurement_completeness(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int n = rng.uniform_int(1, 3);
    const StateVector psi = rng.random_state(n);
    const int qubit = rng.uniform_int(0, n - 1);
    const Basis basis = rng.uniform_int(0, 1) == 0 ? Basis::Z : Basis::X;
    const auto branches = measure_branch(psi, qubit, basis);
    worst = std::max(worst, std::abs(branches[0].probability +
                                     branches[1].probability - 1.0));
    if (branches[0].state && branches[1].state)
      worst = std::max(worst, std::abs(branches[0].state->amps().dot(
                                  branches[1].state->amps())));
  }
  return worst;
}

double check_inverse_composition(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int n = 3;
    const StateVector psi = rng.random_state(n);
    std::vector<CircuitOp> ops;
    for (int g = 0; g < 20; ++g) ops.push_back(random_op(rng, n));
    StateVector state = apply_all(psi, ops);
    for (auto it = ops.rbegin(); it != ops.rend(); ++it)
      state = apply(state, {it->gate.inverse(), it->targets});
    worst = std::max(worst, max_abs_diff(state.amps(), psi.amps()));
  }
  return worst;
}

double check_operator_identities(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const MeasurementOperatorSet ops =
        build_nmem_operators(rng.uniform(0.0, M_PI / 4.0));
    worst = std::max(worst, max_abs_diff(ops.operators[0], ops.operators[3]));
    worst = std::max(worst, max_abs_diff(ops.operators[1], ops.operators[2]));
  }
  return worst;
}

double check_effective_operators(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double theta = rng.uniform(0.0, M_PI / 4.0);
    const QuantumInstrument instrument =
        coarse_grain(build_nmem_operators(theta));
    const auto [m_plus, m_minus] = nmem_effective_operators(theta);
    const DensityMatrix rho = DensityMatrix::pure(rng.random_state(2));
    const auto branches = apply_instrument(instrument, rho);
    for (const auto& [outcome, branch] : branches) {
      if (!branch.state) continue;
      const Mat& m = outcome == 1 ? m_plus : m_minus;
      const Mat direct = m * rho.mat() * m.adjoint();
      worst = std::max(worst, max_abs_diff(branch.state->mat(),
                                           direct / direct.trace().real()));
      worst = std::max(worst,
                       std::abs(branch.probability - direct.trace().real()));
    }
  }
  return worst;
}

double check_eigenstate_preservation(Rng&) {
  double worst = 0.0;
  for (double theta : linspace(0.02, M_PI / 4.0 - 0.02, 9)) {
    const QuantumInstrument instrument =
        coarse_grain(build_nmem_operators(theta));
    for (Eigen::Index basis_index = 0; basis_index < 4; ++basis_index) {
      const DensityMatrix rho =
          DensityMatrix::pure(StateVector::basis(2, basis_index));
      for (const auto& [outcome, branch] : apply_instrument(instrument, rho)) {
        (void)outcome;
        if (branch.state)
          worst = std::max(worst, max_abs_diff(branch.state->mat(), rho.mat()));
      }
    }
  }
  return worst;
}

double check_entanglement_preservation(Rng&) {
  double worst = 0.0;
  for (double theta : linspace(0.0, M_PI / 4.0, 9)) {
    const QuantumInstrument instrument =
        coarse_grain(build_nmem_operators(theta));
    const auto branches =
        apply_instrument(instrument, DensityMatrix::pure(bell_phi_plus()));
    const InstrumentBranch& plus = branches.at(+1);
    if (!plus.state) continue;
    const auto [weight, state] = dominant_eigenstate(*plus.state);
    worst = std::max(worst, std::abs(weight - 1.0));
    worst = std::max(worst, std::abs(concurrence(state) - 1.0));
  }
  return worst;
}

double check_povm_law(Rng&) {
  double worst = 0.0;
  const Mat observable = spin_product_observable();
  const Mat identity = Mat::Identity(4, 4);
  for (double theta : linspace(0.0, M_PI / 4.0, 50)) {
    const double s = std::cos(2.0 * theta);
    const Mat expected_plus = 0.5 * (identity + s * observable);
    const Mat expected_minus = 0.5 * (identity - s * observable);

    const Povm analytic = povm_of(coarse_grain(build_nmem_operators(theta)));
    worst = std::max(worst, max_abs_diff(analytic.effect_plus, expected_plus));
    worst = std::max(worst, max_abs_diff(analytic.effect_minus, expected_minus));

    const MeterSpec spec{theta, 0.0};
    const Povm simulated = povm_of(reconstruct_instrument(
        [&](const StateVector& psi) { return run_nmem(spec, psi); }, 2));
    worst = std::max(worst, max_abs_diff(simulated.effect_plus, expected_plus));
    worst = std::max(worst, max_abs_diff(simulated.effect_minus, expected_minus));
  }
  return worst;
}

double check_mem_inefficiency(Rng&) {
  double worst = 0.0;
  const DensityMatrix rho = DensityMatrix::pure(tensor(ket_plus(), ket_plus()));
  for (double theta : linspace(0.0, M_PI / 4.0, 25)) {
    const double s = std::cos(2.0 * theta);
    const auto branches =
        apply_instrument(coarse_grain(build_mem_operators(theta)), rho);
    double dg = 0.0;
    for (const auto& [outcome, branch] : branches) {
      (void)outcome;
      if (branch.state) dg += branch.probability * (1.0 - purity(*branch.state));
    }
    worst = std::max(worst, std::abs(dg - 0.5 * (1.0 - s * s)));
  }
  return worst;
}

double check_circuit_vs_analytic(Rng& rng) {
  double worst = 0.0;
  for (double theta : linspace(0.0, M_PI / 4.0, 25)) {
    const MeterSpec spec{theta, 0.0};
    const InstrumentReconstruction nmem_rec = reconstruct_instrument(
        [&](const StateVector& psi) { return run_nmem(spec, psi); }, 2);
    const QuantumInstrument nmem = coarse_grain(build_nmem_operators(theta));
    worst = std::max(worst,
                     max_abs_diff(nmem_rec.superop_plus, nmem.superoperator(+1)));
    worst = std::max(worst, max_abs_diff(nmem_rec.superop_minus,
                                         nmem.superoperator(-1)));

    const double theta1 = rng.uniform(-M_PI / 2.0, M_PI / 2.0);
    const InstrumentReconstruction mem_rec = reconstruct_instrument(
        [&](const StateVector& psi) {
          return run_mem(theta1, theta1 + theta, psi);
        },
        2);
    const QuantumInstrument mem = coarse_grain(build_mem_operators(theta));
    worst = std::max(worst,
                     max_abs_diff(mem_rec.superop_plus, mem.superoperator(+1)));
    worst = std::max(worst,
                     max_abs_diff(mem_rec.superop_minus, mem.superoperator(-1)));
  }
  return worst;
}

double check_erasure_equivalence(Rng&) {
  double worst = 0.0;
  for (double theta : linspace(0.0, M_PI / 4.0, 10)) {
    const InstrumentReconstruction erased = reconstruct_instrument(
        [&](const StateVector& psi) { return run_erasure(theta, psi); }, 2);
    const QuantumInstrument nmem = coarse_grain(build_nmem_operators(theta));
    worst = std::max(worst,
                     max_abs_diff(erased.superop_plus, nmem.superoperator(+1)));
    worst = std::max(worst,
                     max_abs_diff(erased.superop_minus, nmem.superoperator(-1)));
  }
  return worst;
}

double check_filter_success(Rng&) {
  double worst = 0.0;
  for (double theta : linspace(0.0, M_PI / 4.0, 11))
    worst = std::max(worst,
                     std::abs(prepare_meter_by_filter(theta).success_probability -
                              0.5));
  return worst;
}

double check_bell_phase_noise(Rng&) {
  double worst = 0.0;
  const StateVector plus_plus = tensor(ket_plus(), ket_plus());
  for (double theta : linspace(0.0, M_PI / 4.0, 25)) {
    const double s = std::cos(2.0 * theta);
    const double dg = run_nmem({theta, M_PI}, plus_plus).delta_gamma();
    worst = std::max(worst, std::abs(dg - 0.5 * (1.0 - s * s)));
  }
  return worst;
}

double check_general_phase_noise(Rng&) {
  double worst = 0.0;
  const StateVector plus_plus = tensor(ket_plus(), ket_plus());
  for (double theta : linspace(0.0, M_PI / 4.0, 20)) {
    for (double phi : linspace(0.0, M_PI, 20)) {
      const double dg = run_nmem({theta, phi}, plus_plus).delta_gamma();
      const double expected =
          delta_gamma_closed_form(std::cos(2.0 * theta), phi);
      worst = std::max(worst, std::abs(dg - expected));
    }
  }
  return worst;
}

struct MeterSample {
  double concurrence_target;
  double strength_target;
  MeterSpec spec;
};

std::vector<MeterSample> sample_feasible_meters(Rng& rng, int count) {
  std::vector<MeterSample> samples;
  for (int i = 0; i < count; ++i) {
    const double c = rng.uniform(0.05, 0.999);
    const double s = rng.uniform(0.0, c);
    samples.push_back(
        {c, s, MeterSpec{theta_for_strength(s), phi_for(c, s)}});
  }
  return samples;
}

double check_constructed_meter_concurrence(Rng& rng) {
  double worst = 0.0;
  for (const MeterSample& sample : sample_feasible_meters(rng, 15))
    worst = std::max(worst, std::abs(concurrence(prepare_meter(sample.spec)) -
                                     sample.concurrence_target));
  return worst;
}

double check_constructed_meter_strength(Rng& rng) {
  double worst = 0.0;
  for (const MeterSample& sample : sample_feasible_meters(rng, 15)) {
    const Povm povm = povm_of(reconstruct_instrument(
        [&](const StateVector& psi) { return run_nmem(sample.spec, psi); }, 2));
    worst =
        std::max(worst, std::abs(strength_of(povm) - sample.strength_target));
  }
  return worst;
}

double check_constructed_meter_noise(Rng& rng) {
  double worst = 0.0;
  const StateVector plus_plus = tensor(ket_plus(), ket_plus());
  for (const MeterSample& sample : sample_feasible_meters(rng, 15)) {
    const double dg = run_nmem(sample.spec, plus_plus).delta_gamma();
    const double expected = delta_gamma_closed_form(sample.strength_target,
                                                    sample.spec.phi);
    worst = std::max(worst, std::abs(dg - expected));
  }
  return worst;
}

double check_noise_boundary(Rng&) {
  double worst = 0.0;
  for (double s : linspace(0.0, 1.0, 101))
    worst = std::max(worst, std::abs(delta_gamma_closed_form(s, M_PI) -
                                     0.5 * (1.0 - s * s)));
  return worst;
}

double check_noise_surface_feasibility(Rng&) {
  double worst = 0.0;
  const int grid = 21;
  const auto points = noise_surface(grid, grid);
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const NoisePoint& p = points[static_cast<size_t>(i) * grid + j];
      const bool expected = p.concurrence >= p.strength - 1e-12;
      if (p.feasible != expected) worst = std::max(worst, 1.0);
      if (!p.feasible) continue;
      worst = std::max({worst, -p.delta_gamma, p.delta_gamma - 0.5});
      if (i == j) worst = std::max(worst, std::abs(p.delta_gamma));
    }
  }
  return worst;
}

struct Suite {
  const char* name;
  double tolerance;
  double (*run)(Rng&);
};

constexpr Suite kSuites[] = {
    {"qcore.schmidt-reconstruction", 1e-9, check_schmidt_reconstruction},
    {"qcore.marginal-purity-law", 1e-9, check_marginal_purity_law},
    {"qcore.tensor-associativity", 0.0, check_tensor_associativity},
    {"qcore.density-matrix-validity", 1e-9, check_density_matrix_validity},
    {"circuit.gate-unitarity", 1e-12, check_gate_unitarity},
    {"circuit.norm-preservation", 1e-12, check_norm_preservation},
    {"circuit.measurement-completeness", 1e-10, check_measurement_completeness},
    {"circuit.inverse-composition", 1e-10, check_inverse_composition},
    {"meastheory.operator-identities", 0.0, check_operator_identities},
    {"meastheory.effective-operators", 1e-12, check_effective_operators},
    {"meastheory.eigenstate-preservation", 1e-12, check_eigenstate_preservation},
    {"meastheory.entanglement-preservation", 1e-10,
     check_entanglement_preservation},
    {"meastheory.povm-law", 1e-10, check_povm_law},
    {"meastheory.mem-inefficiency", 1e-10, check_mem_inefficiency},
    {"schemes.circuit-vs-analytic", 1e-10, check_circuit_vs_analytic},
    {"schemes.erasure-equivalence", 1e-9, check_erasure_equivalence},
    {"schemes.filter-success", 1e-12, check_filter_success},
    {"schemes.bell-phase-noise", 1e-10, check_bell_phase_noise},
    {"schemes.general-phase-noise", 1e-10, check_general_phase_noise},
    {"analysis.constructed-meter-concurrence", 1e-9,
     check_constructed_meter_concurrence},
    {"analysis.constructed-meter-strength", 1e-10,
     check_constructed_meter_strength},
    {"analysis.constructed-meter-noise", 1e-10, check_constructed_meter_noise},
    {"analysis.noise-boundary", 1e-14, check_noise_boundary},
    {"analysis.noise-surface-feasibility", 1e-12,
     check_noise_surface_feasibility},
};

}  // namespace

std::vector<CheckResult> run_verification(
    std::uint64_t seed, std::optional<double> tolerance_override) {
  std::vector<CheckResult> results;
  std::uint64_t index = 0;
  for (const Suite& suite : kSuites) {
    CheckResult result;
    result.name = suite.name;
    result.tolerance = tolerance_override.value_or(suite.tolerance);
    Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * ++index));
    try {
      result.max_residual = suite.run(rng);
      result.passed = result.max_residual <= result.tolerance;
    } catch (const std::exception& err) {
      result.max_residual = std::numeric_limits<double>::infinity();
      result.passed = false;
      result.note = err.what();
    }
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace nlsim
