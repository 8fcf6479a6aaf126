#pragma once

// Closed-form relations between measurement strength, meter entanglement and
// purity degradation, plus the parameter sweeps built on them.

#include "schemes.hpp"

namespace nlsim {

// Meter phase required to realize strength S with meter concurrence C:
// phi = 2 arccos sqrt((1 - C^2) / (1 - S^2)). Requires C >= S (otherwise the
// entanglement is insufficient and InvalidArgument is raised); C = S gives 0,
// and the strong-measurement corner C = S = 1 is defined as 0.
double phi_for(double concurrence, double strength);

// Purity degradation (1/2) {1 - (cos^2(phi/2) + S sin^2(phi/2))^2} of the
// coarse-grained measurement on an equal superposition input.
double delta_gamma_closed_form(double strength, double phi);

// Principal-branch meter angle for a given strength: theta = arccos(S) / 2.
double theta_for_strength(double strength);

struct StrengthLawSample {
  double theta = 0.0;
  double concurrence = 0.0;  // of the ideal meter state, via schmidt
  double strength = 0.0;     // of the circuit-derived POVM
};

// Builds the ideal meter at `theta`, reconstructs the scheme POVM from
// simulation, and returns both sides of the strength/concurrence law.
// Raises Inconsistent when they disagree beyond 1e-10.
StrengthLawSample strength_concurrence_check(double theta);

struct NoisePoint {
  double concurrence = 0.0;
  double strength = 0.0;
  double phi = 0.0;          // meaningful only when feasible
  double delta_gamma = 0.0;  // meaningful only when feasible
  bool feasible = false;     // concurrence >= strength (within 1e-12)
};

// Row-major sweep over a grid_c x grid_s grid of (concurrence, strength) in
// [0,1] x [0,1], concurrence varying slowest. Resolutions must be >= 2.
std::vector<NoisePoint> noise_surface(int grid_c, int grid_s);

}  // namespace nlsim
