#pragma once

// Deterministic random helpers for the property suites. Uniform doubles are
// derived from raw mt19937_64 output so a seed pins the exact byte stream.

#include <cstdint>
#include <random>

#include "states.hpp"

namespace nlsim {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  cxd complex_in_square() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

  StateVector random_state(int n_qubits) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Vec a(dim);
    do {
      for (Eigen::Index i = 0; i < dim; ++i) a(i) = complex_in_square();
    } while (a.norm() < 1e-3);
    return StateVector(n_qubits, std::move(a)).normalized();
  }

  StateVector random_product_state(int n_qubits) {
    StateVector out = random_state(1);
    for (int q = 1; q < n_qubits; ++q) out = tensor(out, random_state(1));
    return out;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace nlsim
