#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/rng.hpp"
#include "core/schemes.hpp"

using namespace nlsim;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double branch_probability(const SchemeRun& run, const std::string& label) {
  for (const OutcomeEntry& entry : run.outcome_table)
    if (entry.label == label) return entry.probability;
  FAIL("missing outcome label ", label);
  return 0.0;
}

double outcome_sum(const SchemeRun& run) {
  double sum = 0.0;
  for (const OutcomeEntry& entry : run.outcome_table) sum += entry.probability;
  return sum;
}

}  // namespace

TEST_CASE("meter preparation: Bell limit, ideal angle, phased form") {
  const StateVector bell = prepare_meter({0.0, 0.0});
  CHECK(max_abs_diff(bell.amps(), bell_phi_plus().amps()) < 1e-15);

  const StateVector ideal = prepare_meter({M_PI / 8.0, 0.0});
  CHECK(concurrence(ideal) == doctest::Approx(kInvSqrt2).epsilon(1e-12));
  CHECK(MeterSpec{M_PI / 8.0, 0.0}.concurrence() ==
        doctest::Approx(kInvSqrt2).epsilon(1e-12));

  // A pi-phased meter is locally equivalent to a Bell state.
  const StateVector phased = prepare_meter({0.3, M_PI});
  CHECK(concurrence(phased) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(phased.amp(1).real() == doctest::Approx(-std::sin(0.3) * kInvSqrt2));

  CHECK_THROWS_AS(prepare_meter({-0.2, 0.0}), Error);
  CHECK_THROWS_AS(prepare_meter({M_PI / 2.0, 0.0}), Error);
  CHECK_THROWS_AS(prepare_meter({0.1, 4.0}), Error);
}

TEST_CASE("meter concurrence closed form tracks the simulated value") {
  Rng rng(1);
  for (int i = 0; i < 40; ++i) {
    const MeterSpec spec{rng.uniform(0.0, M_PI / 4.0), rng.uniform(0.0, M_PI)};
    CHECK(concurrence(prepare_meter(spec)) ==
          doctest::Approx(spec.concurrence()).epsilon(1e-10));
  }
}

TEST_CASE("filter preparation halves the norm and yields the ideal meter") {
  const FilterPreparation at_zero = prepare_meter_by_filter(0.0);
  CHECK(at_zero.success_probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(max_abs_diff(at_zero.meter.amps(), bell_phi_plus().amps()) < 1e-12);

  const FilterPreparation mid = prepare_meter_by_filter(M_PI / 8.0);
  CHECK(mid.success_probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(max_abs_diff(mid.meter.amps(),
                     prepare_meter({M_PI / 8.0, 0.0}).canonicalized().amps()) <
        1e-10);

  const FilterPreparation weak = prepare_meter_by_filter(M_PI / 4.0);
  CHECK(weak.success_probability == doctest::Approx(0.5).epsilon(1e-12));
  for (int i = 0; i < 4; ++i)
    CHECK(weak.meter.amp(i).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(concurrence(weak.meter) < 1e-10);
}

TEST_CASE("strong measurement of a parity eigenstate is deterministic") {
  const SchemeRun run = run_nmem({0.0, 0.0}, StateVector::basis(2, 0));
  CHECK(branch_probability(run, "++") + branch_probability(run, "--") ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(run.success_probability == doctest::Approx(1.0));
  const auto global = run.global_branches();
  CHECK(global.at(+1).probability == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(global.at(+1).state.has_value());
  CHECK(max_abs_diff(global.at(+1).state->mat(),
                     DensityMatrix::pure(StateVector::basis(2, 0)).mat()) <
        1e-12);
}

TEST_CASE("zero-strength run is outcome-uniform and non-disturbing") {
  const StateVector plus_plus = tensor(ket_plus(), ket_plus());
  const SchemeRun run = run_nmem({M_PI / 4.0, 0.0}, plus_plus);
  for (const char* label : {"++", "+-", "-+", "--"})
    CHECK(branch_probability(run, label) == doctest::Approx(0.25).epsilon(1e-12));
  for (const OutcomeEntry& entry : run.outcome_table) {
    REQUIRE(entry.state.has_value());
    CHECK(max_abs_diff(entry.state->mat(),
                       DensityMatrix::pure(plus_plus).mat()) < 1e-12);
  }
  CHECK(run.delta_gamma() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Bell input stays maximally entangled through the ideal scheme") {
  const SchemeRun run = run_nmem({M_PI / 8.0, 0.0}, bell_phi_plus());

  // Oracle: effective +1 operator applied directly to the input.
  const auto [m_plus, m_minus] = nmem_effective_operators(M_PI / 8.0);
  const Vec branch = m_plus * bell_phi_plus().amps();
  const double expected_p = branch.squaredNorm();
  CHECK(expected_p == doctest::Approx(0.5 * (1.0 + kInvSqrt2)).epsilon(1e-12));

  const auto global = run.global_branches();
  CHECK(global.at(+1).probability == doctest::Approx(expected_p).epsilon(1e-12));
  REQUIRE(global.at(+1).state.has_value());
  const Vec normalized = branch / branch.norm();
  CHECK(max_abs_diff(global.at(+1).state->mat(),
                     Mat(normalized * normalized.adjoint())) < 1e-12);
  const auto [weight, state] = dominant_eigenstate(*global.at(+1).state);
  CHECK(weight == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(concurrence(state) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("per-label run branches match the analytic operator sandwiches") {
  Rng rng(2);
  const MeasurementOperatorSet nmem_ops = build_nmem_operators(0.3);
  const MeasurementOperatorSet mem_ops = build_mem_operators(0.45);
  for (int i = 0; i < 20; ++i) {
    const StateVector psi = rng.random_state(2);

    const SchemeRun nmem_run = run_nmem({0.3, 0.0}, psi);
    const double theta1 = rng.uniform(-1.0, 1.0);
    const SchemeRun mem_run = run_mem(theta1, theta1 + 0.45, psi);

    for (int setup = 0; setup < 2; ++setup) {
      const SchemeRun& run = setup == 0 ? nmem_run : mem_run;
      const MeasurementOperatorSet& ops = setup == 0 ? nmem_ops : mem_ops;
      CHECK(outcome_sum(run) == doctest::Approx(1.0).epsilon(1e-10));
      for (size_t k = 0; k < ops.labels.size(); ++k) {
        const Vec sandwich = ops.operators[k] * psi.amps();
        const double p = sandwich.squaredNorm();
        CHECK(branch_probability(run, ops.labels[k]) ==
              doctest::Approx(p).epsilon(1e-10));
        if (p < 1e-12) continue;
        const Vec normalized = sandwich / sandwich.norm();
        for (const OutcomeEntry& entry : run.outcome_table)
          if (entry.label == ops.labels[k])
            CHECK(max_abs_diff(entry.state->mat(),
                               Mat(normalized * normalized.adjoint())) < 1e-10);
      }
    }
  }
}

TEST_CASE("equal rotations make the Bell-meter scheme projective") {
  const SchemeRun run = run_mem(0.4, 0.4, StateVector::basis(2, 1));  // |01>
  const auto global = run.global_branches();
  CHECK(global.at(-1).probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(global.at(+1).probability == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Bell-meter run on |++> reaches the half-purity floor") {
  const StateVector plus_plus = tensor(ket_plus(), ket_plus());
  const SchemeRun run = run_mem(0.0, M_PI / 4.0, plus_plus);
  const auto global = run.global_branches();
  for (int outcome : {+1, -1}) {
    REQUIRE(global.at(outcome).state.has_value());
    CHECK(global.at(outcome).purity == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK(run.delta_gamma() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("reconstructed process matrices match the analytic instruments") {
  for (double t : {M_PI / 8.0, 0.3}) {
    const MeterSpec spec{t, 0.0};
    const InstrumentReconstruction nmem_rec = reconstruct_instrument(
        [&](const StateVector& psi) { return run_nmem(spec, psi); }, 2);
    const QuantumInstrument nmem = coarse_grain(build_nmem_operators(t));
    CHECK(max_abs_diff(nmem_rec.superop_plus, nmem.superoperator(+1)) < 1e-10);
    CHECK(max_abs_diff(nmem_rec.superop_minus, nmem.superoperator(-1)) < 1e-10);

    const InstrumentReconstruction mem_rec = reconstruct_instrument(
        [&](const StateVector& psi) { return run_mem(0.1, 0.1 + t, psi); }, 2);
    const QuantumInstrument mem = coarse_grain(build_mem_operators(t));
    CHECK(max_abs_diff(mem_rec.superop_plus, mem.superoperator(+1)) < 1e-10);
    CHECK(max_abs_diff(mem_rec.superop_minus, mem.superoperator(-1)) < 1e-10);
  }
}

TEST_CASE("reconstruction of a trivial scheme is the identity map") {
  const auto identity_runner = [](const StateVector& psi) {
    SchemeRun run{Scheme::Nmem, 0.0, 0.0, psi, {}, 1.0, {}};
    run.outcome_table.push_back({"++", 1.0, DensityMatrix::pure(psi)});
    return run;
  };
  const InstrumentReconstruction rec = reconstruct_instrument(identity_runner, 2);
  CHECK(max_abs_diff(rec.superop_plus, Mat::Identity(16, 16)) < 1e-12);
  CHECK(max_abs_diff(rec.superop_minus, Mat::Zero(16, 16)) < 1e-12);
}

TEST_CASE("Kraus extraction reproduces the reconstructed process matrix") {
  const MeterSpec spec{0.25, 0.9};
  const InstrumentReconstruction rec = reconstruct_instrument(
      [&](const StateVector& psi) { return run_nmem(spec, psi); }, 2);
  const QuantumInstrument instrument = rec.to_instrument();
  CHECK(max_abs_diff(instrument.superoperator(+1), rec.superop_plus) < 1e-9);
  CHECK(max_abs_diff(instrument.superoperator(-1), rec.superop_minus) < 1e-9);
  CHECK(instrument.trace_preservation_residual() < 1e-9);
  const Povm povm = povm_of(instrument);
  CHECK(povm.completeness_residual() < 1e-9);
}

TEST_CASE("erasure post-selections have input-independent probabilities") {
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const SchemeRun run = run_erasure(0.3, rng.random_state(2));
    REQUIRE(run.postselections.size() == 2);
    CHECK(run.postselections[0].second == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(run.postselections[1].second == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(run.success_probability == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(outcome_sum(run) ==
          doctest::Approx(run.success_probability).epsilon(1e-10));
  }
}

TEST_CASE("strong erasure run reads the parity deterministically") {
  const SchemeRun run = run_erasure(0.0, StateVector::basis(2, 0));
  const auto global = run.global_branches();
  CHECK(global.at(+1).probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(global.at(-1).probability == doctest::Approx(0.0).epsilon(1e-12));

  const SchemeRun odd = run_erasure(0.0, StateVector::basis(2, 1));
  CHECK(odd.global_branches().at(-1).probability ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("conditional erasure instrument equals the shared-meter scheme") {
  for (double t : {0.15, M_PI / 8.0, 0.6}) {
    const InstrumentReconstruction erased = reconstruct_instrument(
        [&](const StateVector& psi) { return run_erasure(t, psi); }, 2);
    const QuantumInstrument nmem = coarse_grain(build_nmem_operators(t));
    CHECK(max_abs_diff(erased.superop_plus, nmem.superoperator(+1)) < 1e-10);
    CHECK(max_abs_diff(erased.superop_minus, nmem.superoperator(-1)) < 1e-10);
  }
}

TEST_CASE("one-qubit baseline reproduces its POVM and limits") {
  Mat sz = Mat::Identity(2, 2);
  sz(1, 1) = -1.0;
  Rng rng(4);
  for (double t : {0.0, 0.2, M_PI / 8.0, M_PI / 4.0}) {
    const double s = std::cos(2.0 * t);
    const InstrumentReconstruction rec = reconstruct_instrument(
        [&](const StateVector& psi) { return run_single_qubit(t, psi); }, 1);
    const Povm povm = povm_of(rec);
    CHECK(max_abs_diff(povm.effect_plus,
                       0.5 * (Mat::Identity(2, 2) + s * sz)) < 1e-12);
    CHECK(max_abs_diff(povm.effect_minus,
                       0.5 * (Mat::Identity(2, 2) - s * sz)) < 1e-12);
  }

  // Weak limit: both outcomes equally likely whatever the input.
  const StateVector psi = rng.random_state(1);
  const SchemeRun weak = run_single_qubit(M_PI / 4.0, psi);
  CHECK(branch_probability(weak, "+") == doctest::Approx(0.5).epsilon(1e-12));
  // Strong limit: the + outcome picks up the |0> population.
  const SchemeRun strong = run_single_qubit(0.0, psi);
  CHECK(branch_probability(strong, "+") ==
        doctest::Approx(std::norm(psi.amp(0))).epsilon(1e-12));
}

TEST_CASE("phased meters degrade purity by the closed-form amount") {
  const StateVector plus_plus = tensor(ket_plus(), ket_plus());
  Rng rng(5);
  for (int i = 0; i < 15; ++i) {
    const double t = rng.uniform(0.0, M_PI / 4.0);
    const double phi = rng.uniform(0.0, M_PI);
    const double s = std::cos(2.0 * t);
    const double bracket = std::cos(0.5 * phi) * std::cos(0.5 * phi) +
                           s * std::sin(0.5 * phi) * std::sin(0.5 * phi);
    const double expected = 0.5 * (1.0 - bracket * bracket);
    CHECK(run_nmem({t, phi}, plus_plus).delta_gamma() ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("scheme runners validate their inputs") {
  CHECK_THROWS_AS(run_nmem({0.1, 0.0}, StateVector::basis(1, 0)), Error);
  CHECK_THROWS_AS(run_nmem({0.1, 0.0}, StateVector(2, Vec::Ones(4))), Error);
  CHECK_THROWS_AS(run_erasure(2.0, StateVector::basis(2, 0)), Error);
  CHECK_THROWS_AS(run_single_qubit(0.1, StateVector::basis(2, 0)), Error);
}
