#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/circuit.hpp"
#include "core/rng.hpp"

using namespace nlsim;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

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

}  // namespace

TEST_CASE("CNOT truth table") {
  // (control, target) -> flipped target iff control set.
  const int expected[4] = {0, 1, 3, 2};
  for (int in = 0; in < 4; ++in) {
    const StateVector out =
        apply(StateVector::basis(2, in), {Gate::cnot(), {0, 1}});
    CHECK(std::abs(out.amp(expected[in]) - 1.0) < 1e-15);
  }
  // Reversed target order: control on qubit 1.
  const StateVector out =
      apply(StateVector::basis(2, 1), {Gate::cnot(), {1, 0}});
  CHECK(std::abs(out.amp(3) - 1.0) < 1e-15);
}

TEST_CASE("zero-angle rotation is the identity") {
  Rng rng(2);
  const StateVector psi = rng.random_state(3);
  const StateVector out = apply(psi, {Gate::ry(0.0), {1}});
  CHECK(max_abs_diff(out.amps(), psi.amps()) == 0.0);
}

TEST_CASE("rotation prepares cos/sin meter amplitudes") {
  const double t = 0.37;
  const StateVector meter = apply(StateVector::zero(1), {Gate::ry(t), {0}});
  CHECK(meter.amp(0).real() == doctest::Approx(std::cos(t)).epsilon(1e-15));
  CHECK(meter.amp(1).real() == doctest::Approx(std::sin(t)).epsilon(1e-15));
}

TEST_CASE("Hadamard pair leaves the Bell state invariant") {
  Vec bell = Vec::Zero(4);
  bell(0) = bell(3) = kInvSqrt2;
  const StateVector psi(2, bell);

  // Oracle: explicit 4x4 matrix-vector product.
  const Mat hh = tensor(Gate::h().matrix(), Gate::h().matrix());
  const Vec expected = hh * psi.amps();

  StateVector out = apply(psi, {Gate::h(), {0}});
  out = apply(out, {Gate::h(), {1}});
  CHECK(max_abs_diff(out.amps(), expected) < 1e-15);
  CHECK(max_abs_diff(out.amps(), psi.amps()) < 1e-15);
}

TEST_CASE("embedding matches explicit tensor construction") {
  const Mat h = Gate::h().matrix();
  const Mat id = Mat::Identity(2, 2);
  CHECK(max_abs_diff(embed(h, {0}, 2), tensor(h, id)) == 0.0);
  CHECK(max_abs_diff(embed(h, {1}, 2), tensor(id, h)) == 0.0);
  CHECK(max_abs_diff(embed(Gate::cnot().matrix(), {0, 1}, 2),
                     Gate::cnot().matrix()) == 0.0);
}

TEST_CASE("gate matrices are unitary for random angles") {
  Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    const Mat u = random_gate(rng).matrix();
    CHECK(max_abs_diff(u.adjoint() * u, Mat::Identity(u.rows(), u.cols())) <
          1e-12);
  }
}

TEST_CASE("apply preserves norm and validates targets") {
  Rng rng(6);
  for (int i = 0; i < 2000; ++i) {
    const int n = rng.uniform_int(1, 4);
    Gate gate = random_gate(rng);
    while (gate.arity() > n) gate = random_gate(rng);
    std::vector<int> targets{rng.uniform_int(0, n - 1)};
    if (gate.arity() == 2) {
      int other = rng.uniform_int(0, n - 2);
      if (other >= targets[0]) ++other;
      targets.push_back(other);
    }
    const StateVector out = apply(rng.random_state(n), {gate, targets});
    CHECK(std::abs(out.norm() - 1.0) < 1e-12);
  }

  const StateVector psi = rng.random_state(2);
  CHECK_THROWS_AS(apply(psi, {Gate::h(), {2}}), Error);
  CHECK_THROWS_AS(apply(psi, {Gate::cnot(), {0, 0}}), Error);
  CHECK_THROWS_AS(apply(psi, {Gate::cnot(), {0}}), Error);
}

TEST_CASE("density matrix path agrees with the state vector path") {
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const StateVector psi = rng.random_state(2);
    const CircuitOp op{random_gate(rng), {0, 1}};
    const CircuitOp fixed =
        op.gate.arity() == 1 ? CircuitOp{op.gate, {rng.uniform_int(0, 1)}} : op;
    const DensityMatrix via_dm = apply(DensityMatrix::pure(psi), fixed);
    const DensityMatrix via_sv = DensityMatrix::pure(apply(psi, fixed));
    CHECK(max_abs_diff(via_dm.mat(), via_sv.mat()) < 1e-12);
  }
}

TEST_CASE("measuring |+> in Z splits evenly") {
  const StateVector plus = apply(StateVector::zero(1), {Gate::h(), {0}});
  const auto branches = measure_branch(plus, 0, Basis::Z);
  CHECK(branches[0].outcome == 1);
  CHECK(branches[0].probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(branches[1].probability == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(branches[0].state.has_value());
  CHECK(std::abs(branches[0].state->amp(0) - 1.0) < 1e-12);
  REQUIRE(branches[1].state.has_value());
  CHECK(std::abs(branches[1].state->amp(1) - 1.0) < 1e-12);
}

TEST_CASE("measuring a basis state flags the impossible branch") {
  const auto branches = measure_branch(StateVector::zero(1), 0, Basis::Z);
  CHECK(branches[0].probability == doctest::Approx(1.0));
  CHECK(branches[0].state.has_value());
  CHECK(branches[1].probability == doctest::Approx(0.0));
  CHECK_FALSE(branches[1].state.has_value());
}

TEST_CASE("meter qubit statistics of the ideal meter state are unbiased") {
  // Amplitude-sum oracle: each local Z outcome collects cos^2 + sin^2 = 1 of
  // the meter weight, i.e. probability 1/2.
  const double t = M_PI / 8.0;
  Vec amps(4);
  amps << kInvSqrt2 * std::cos(t), kInvSqrt2 * std::sin(t),
      kInvSqrt2 * std::sin(t), kInvSqrt2 * std::cos(t);
  const StateVector meter(2, amps);
  for (int qubit : {0, 1}) {
    const auto branches = measure_branch(meter, qubit, Basis::Z);
    CHECK(branches[0].probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(branches[1].probability == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("X-basis measurement distinguishes |+> and |->") {
  const StateVector plus = apply(StateVector::zero(1), {Gate::h(), {0}});
  const auto branches = measure_branch(plus, 0, Basis::X);
  CHECK(branches[0].probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(branches[1].probability == doctest::Approx(0.0));
}

TEST_CASE("measurement branches are orthogonal and complete") {
  Rng rng(10);
  for (int i = 0; i < 200; ++i) {
    const int n = rng.uniform_int(1, 3);
    const StateVector psi = rng.random_state(n);
    const int qubit = rng.uniform_int(0, n - 1);
    const Basis basis = rng.uniform_int(0, 1) == 0 ? Basis::Z : Basis::X;
    const auto branches = measure_branch(psi, qubit, basis);
    CHECK(branches[0].probability + branches[1].probability ==
          doctest::Approx(1.0).epsilon(1e-10));
    if (branches[0].state && branches[1].state)
      CHECK(std::abs(branches[0].state->amps().dot(
                branches[1].state->amps())) < 1e-10);
  }
}

TEST_CASE("post-selecting a Bell state halves the norm") {
  Vec bell = Vec::Zero(4);
  bell(0) = bell(3) = kInvSqrt2;
  const PostselectResult ps =
      postselect(StateVector(2, bell), 0, StateVector::basis(1, 0));
  CHECK(ps.probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ps.state.n_qubits() == 1);
  CHECK(std::abs(ps.state.amp(0) - 1.0) < 1e-12);
}

TEST_CASE("impossible post-selection raises") {
  CHECK_THROWS_AS(
      postselect(StateVector::basis(2, 0), 0, StateVector::basis(1, 1)),
      Error);
  try {
    postselect(StateVector::basis(2, 0), 0, StateVector::basis(1, 1));
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ImpossiblePostselection);
  }
}

TEST_CASE("post-selection of a middle qubit agrees with projection") {
  Rng rng(12);
  Vec plus(2);
  plus << kInvSqrt2, kInvSqrt2;
  const StateVector target(1, plus);
  for (int i = 0; i < 40; ++i) {
    const StateVector psi = rng.random_state(3);
    const PostselectResult ps = postselect(psi, 1, target);

    // Oracle: project with the embedded |+><+| and re-index by hand.
    const Mat projector =
        embed(target.amps() * target.amps().adjoint(), {1}, 3);
    const Vec projected = projector * psi.amps();
    CHECK(ps.probability ==
          doctest::Approx(projected.squaredNorm()).epsilon(1e-12));
    // Contract the state against <+| on qubit 1.
    Vec contracted(4);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        contracted(2 * a + b) =
            kInvSqrt2 * (psi.amp(4 * a + b) + psi.amp(4 * a + 2 + b));
    CHECK(max_abs_diff(ps.state.amps(),
                       Vec(contracted / contracted.norm())) < 1e-10);
  }
}

TEST_CASE("a circuit followed by its inverse restores the state") {
  Rng rng(14);
  for (int i = 0; i < 100; ++i) {
    const StateVector psi = rng.random_state(3);
    std::vector<CircuitOp> ops;
    for (int g = 0; g < 15; ++g) {
      Gate gate = random_gate(rng);
      if (gate.arity() == 1) {
        ops.push_back({gate, {rng.uniform_int(0, 2)}});
      } else {
        const int control = rng.uniform_int(0, 2);
        int target = rng.uniform_int(0, 1);
        if (target >= control) ++target;
        ops.push_back({gate, {control, target}});
      }
    }
    StateVector state = apply_all(psi, ops);
    for (auto it = ops.rbegin(); it != ops.rend(); ++it)
      state = apply(state, {it->gate.inverse(), it->targets});
    CHECK(max_abs_diff(state.amps(), psi.amps()) < 1e-10);
  }
}
