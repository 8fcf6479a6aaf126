#include "analysis.hpp"

#include <algorithm>
#include <cmath>

namespace nlsim {

double phi_for(double concurrence, double strength) {
  if (concurrence < 0.0 || concurrence > 1.0 + 1e-12 || strength < 0.0 ||
      strength > 1.0 + 1e-12)
    fail(ErrorCode::InvalidArgument, "concurrence and strength must lie in [0, 1]");
  if (concurrence < strength - 1e-12)
    fail(ErrorCode::InvalidArgument,
         "infeasible: meter concurrence below the requested strength");
  if (strength >= 1.0 - 1e-15) return 0.0;  // strong limit: any meter is Bell
  const double ratio = std::clamp(
      (1.0 - concurrence * concurrence) / (1.0 - strength * strength), 0.0, 1.0);
  return 2.0 * std::acos(std::sqrt(ratio));
}

double delta_gamma_closed_form(double strength, double phi) {
  const double c2 = std::cos(0.5 * phi) * std::cos(0.5 * phi);
  const double s2 = std::sin(0.5 * phi) * std::sin(0.5 * phi);
  const double bracket = c2 + strength * s2;
  return 0.5 * (1.0 - bracket * bracket);
}

double theta_for_strength(double strength) {
  if (strength < 0.0 || strength > 1.0 + 1e-12)
    fail(ErrorCode::InvalidArgument, "strength must lie in [0, 1]");
  return 0.5 * std::acos(std::clamp(strength, 0.0, 1.0));
}

StrengthLawSample strength_concurrence_check(double theta) {
  const MeterSpec spec{theta, 0.0};
  StrengthLawSample sample;
  sample.theta = theta;
  sample.concurrence = concurrence(prepare_meter(spec));

  const InstrumentReconstruction rec = reconstruct_instrument(
      [&](const StateVector& psi) { return run_nmem(spec, psi); }, 2);
  sample.strength = strength_of(povm_of(rec));

  if (std::abs(sample.concurrence - sample.strength) > 1e-10)
    fail(ErrorCode::Inconsistent,
         "strength/concurrence law violated beyond tolerance");
  return sample;
}

std::vector<NoisePoint> noise_surface(int grid_c, int grid_s) {
  if (grid_c < 2 || grid_s < 2)
    fail(ErrorCode::InvalidArgument, "noise surface resolutions must be >= 2");
  std::vector<NoisePoint> points;
  points.reserve(static_cast<size_t>(grid_c) * grid_s);
  for (int i = 0; i < grid_c; ++i) {
    const double c = static_cast<double>(i) / (grid_c - 1);
    for (int j = 0; j < grid_s; ++j) {
      const double s = static_cast<double>(j) / (grid_s - 1);
      NoisePoint point;
      point.concurrence = c;
      point.strength = s;
      point.feasible = c >= s - 1e-12;
      if (point.feasible) {
        point.phi = phi_for(c, s);
        point.delta_gamma = delta_gamma_closed_form(s, point.phi);
      }
      points.push_back(point);
    }
  }
  return points;
}

}  // namespace nlsim
