// C API implementation: thin translation layer between the C surface and the
// C++ core. Exceptions are caught at the boundary and mapped to status codes.

#include "nlsim/nlsim.h"

#include <cstring>
#include <memory>
#include <new>

#include "core/analysis.hpp"
#include "core/verify.hpp"

using namespace nlsim;

struct nlsim_run {
  SchemeRun run;
  std::map<int, GlobalBranch> global;
  double delta_gamma;

  explicit nlsim_run(SchemeRun r)
      : run(std::move(r)),
        global(run.global_branches()),
        delta_gamma(run.delta_gamma()) {}
};

struct nlsim_sweep {
  std::vector<NoisePoint> points;
};

struct nlsim_report {
  std::vector<CheckResult> results;
};

namespace {

nlsim_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return NLSIM_ERR_INVALID_ARGUMENT;
    case ErrorCode::Dimension: return NLSIM_ERR_DIMENSION;
    case ErrorCode::Normalization: return NLSIM_ERR_NORMALIZATION;
    case ErrorCode::ImpossiblePostselection:
      return NLSIM_ERR_IMPOSSIBLE_POSTSELECTION;
    case ErrorCode::ShapeMismatch: return NLSIM_ERR_SHAPE;
    case ErrorCode::Inconsistent: return NLSIM_ERR_INCONSISTENT;
    case ErrorCode::Internal: return NLSIM_ERR_INTERNAL;
  }
  return NLSIM_ERR_INTERNAL;
}

template <typename Fn>
nlsim_status guarded(Fn&& fn) {
  try {
    fn();
    return NLSIM_OK;
  } catch (const Error& err) {
    return status_of(err.code());
  } catch (const std::bad_alloc&) {
    return NLSIM_ERR_INTERNAL;
  } catch (const std::exception&) {
    return NLSIM_ERR_INTERNAL;
  }
}

StateVector state_from_doubles(const double* amps, int n_qubits) {
  if (amps == nullptr)
    fail(ErrorCode::InvalidArgument, "null amplitude pointer");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    v(i) = cxd(amps[2 * i], amps[2 * i + 1]);
  return StateVector(n_qubits, std::move(v));
}

void write_amps(const StateVector& state, double* out) {
  for (Eigen::Index i = 0; i < state.dim(); ++i) {
    out[2 * i] = state.amp(i).real();
    out[2 * i + 1] = state.amp(i).imag();
  }
}

void write_matrix(const Mat& m, double* out) {
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out[k++] = m(r, c).real();
      out[k++] = m(r, c).imag();
    }
}

void finish_run(SchemeRun&& run, nlsim_run** out) {
  *out = std::make_unique<nlsim_run>(std::move(run)).release();
}

}  // namespace

extern "C" {

const char* nlsim_version(void) { return "0.1.0"; }

const char* nlsim_status_name(nlsim_status status) {
  switch (status) {
    case NLSIM_OK: return "ok";
    case NLSIM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NLSIM_ERR_DIMENSION: return "dimension mismatch";
    case NLSIM_ERR_NORMALIZATION: return "normalization error";
    case NLSIM_ERR_IMPOSSIBLE_POSTSELECTION: return "impossible post-selection";
    case NLSIM_ERR_SHAPE: return "unexpected operator shape";
    case NLSIM_ERR_INCONSISTENT: return "internal consistency check failed";
    case NLSIM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

nlsim_status nlsim_prepare_meter(double theta, double phi, double* amps) {
  return guarded([&] {
    if (amps == nullptr) fail(ErrorCode::InvalidArgument, "null output pointer");
    write_amps(prepare_meter({theta, phi}), amps);
  });
}

nlsim_status nlsim_prepare_meter_filtered(double theta,
                                          double* success_probability,
                                          double* amps) {
  return guarded([&] {
    if (success_probability == nullptr || amps == nullptr)
      fail(ErrorCode::InvalidArgument, "null output pointer");
    const FilterPreparation prep = prepare_meter_by_filter(theta);
    *success_probability = prep.success_probability;
    write_amps(prep.meter, amps);
  });
}

nlsim_status nlsim_meter_concurrence(double theta, double phi,
                                     double* concurrence_out) {
  return guarded([&] {
    if (concurrence_out == nullptr)
      fail(ErrorCode::InvalidArgument, "null output pointer");
    *concurrence_out = concurrence(prepare_meter({theta, phi}));
  });
}

nlsim_status nlsim_run_nmem(double theta, double phi, const double* psi,
                            nlsim_run** out) {
  return guarded([&] {
    if (out == nullptr) fail(ErrorCode::InvalidArgument, "null output pointer");
    finish_run(run_nmem({theta, phi}, state_from_doubles(psi, 2)), out);
  });
}

nlsim_status nlsim_run_mem(double theta1, double theta2, const double* psi,
                           nlsim_run** out) {
  return guarded([&] {
    if (out == nullptr) fail(ErrorCode::InvalidArgument, "null output pointer");
    finish_run(run_mem(theta1, theta2, state_from_doubles(psi, 2)), out);
  });
}

nlsim_status nlsim_run_erasure(double theta, const double* psi,
                               nlsim_run** out) {
  return guarded([&] {
    if (out == nullptr) fail(ErrorCode::InvalidArgument, "null output pointer");
    finish_run(run_erasure(theta, state_from_doubles(psi, 2)), out);
  });
}

void nlsim_run_free(nlsim_run* run) { delete run; }

const char* nlsim_run_scheme(const nlsim_run* run) {
  return run == nullptr ? "?" : scheme_name(run->run.scheme);
}

double nlsim_run_success_probability(const nlsim_run* run) {
  return run == nullptr ? 0.0 : run->run.success_probability;
}

double nlsim_run_delta_gamma(const nlsim_run* run) {
  return run == nullptr ? 0.0 : run->delta_gamma;
}

int nlsim_run_postselection_count(const nlsim_run* run) {
  return run == nullptr ? 0 : static_cast<int>(run->run.postselections.size());
}

nlsim_status nlsim_run_postselection(const nlsim_run* run, int index,
                                     const char** name, double* probability) {
  return guarded([&] {
    if (run == nullptr || name == nullptr || probability == nullptr)
      fail(ErrorCode::InvalidArgument, "null pointer");
    if (index < 0 ||
        index >= static_cast<int>(run->run.postselections.size()))
      fail(ErrorCode::InvalidArgument, "post-selection index out of range");
    *name = run->run.postselections[index].first.c_str();
    *probability = run->run.postselections[index].second;
  });
}

int nlsim_run_branch_count(const nlsim_run* run) {
  return run == nullptr ? 0 : static_cast<int>(run->run.outcome_table.size());
}

nlsim_status nlsim_run_branch(const nlsim_run* run, int index, char* label,
                              double* probability, double* rho) {
  return guarded([&] {
    if (run == nullptr || label == nullptr || probability == nullptr)
      fail(ErrorCode::InvalidArgument, "null pointer");
    if (index < 0 || index >= static_cast<int>(run->run.outcome_table.size()))
      fail(ErrorCode::InvalidArgument, "branch index out of range");
    const OutcomeEntry& entry = run->run.outcome_table[index];
    std::strncpy(label, entry.label.c_str(), 7);
    label[7] = '\0';
    *probability = entry.probability / run->run.success_probability;
    if (rho != nullptr) {
      if (entry.state) {
        write_matrix(entry.state->mat(), rho);
      } else {
        const Eigen::Index dim = run->run.input.dim();
        std::memset(rho, 0, sizeof(double) * 2 * dim * dim);
      }
    }
  });
}

nlsim_status nlsim_run_global(const nlsim_run* run, int outcome,
                              double* probability, double* purity,
                              double* rho) {
  return guarded([&] {
    if (run == nullptr || probability == nullptr || purity == nullptr)
      fail(ErrorCode::InvalidArgument, "null pointer");
    const auto it = run->global.find(outcome);
    if (it == run->global.end())
      fail(ErrorCode::InvalidArgument, "global outcome must be +1 or -1");
    const GlobalBranch& branch = it->second;
    *probability = branch.probability;
    *purity = branch.state ? branch.purity : 0.0;
    if (rho != nullptr) {
      if (branch.state) {
        write_matrix(branch.state->mat(), rho);
      } else {
        const Eigen::Index dim = run->run.input.dim();
        std::memset(rho, 0, sizeof(double) * 2 * dim * dim);
      }
    }
  });
}

nlsim_status nlsim_strength_concurrence(double theta, double* concurrence_out,
                                        double* strength_out) {
  return guarded([&] {
    if (concurrence_out == nullptr || strength_out == nullptr)
      fail(ErrorCode::InvalidArgument, "null output pointer");
    const StrengthLawSample sample = strength_concurrence_check(theta);
    *concurrence_out = sample.concurrence;
    *strength_out = sample.strength;
  });
}

nlsim_status nlsim_phi_for(double concurrence_in, double strength,
                           double* phi) {
  return guarded([&] {
    if (phi == nullptr) fail(ErrorCode::InvalidArgument, "null output pointer");
    *phi = phi_for(concurrence_in, strength);
  });
}

double nlsim_delta_gamma(double strength, double phi) {
  return delta_gamma_closed_form(strength, phi);
}

nlsim_status nlsim_noise_surface(int grid_c, int grid_s, nlsim_sweep** out) {
  return guarded([&] {
    if (out == nullptr) fail(ErrorCode::InvalidArgument, "null output pointer");
    auto sweep = std::make_unique<nlsim_sweep>();
    sweep->points = noise_surface(grid_c, grid_s);
    *out = sweep.release();
  });
}

int nlsim_sweep_row_count(const nlsim_sweep* sweep) {
  return sweep == nullptr ? 0 : static_cast<int>(sweep->points.size());
}

nlsim_status nlsim_sweep_row(const nlsim_sweep* sweep, int index,
                             double* concurrence_out, double* strength,
                             double* phi, double* delta_gamma, int* feasible) {
  return guarded([&] {
    if (sweep == nullptr || concurrence_out == nullptr || strength == nullptr ||
        phi == nullptr || delta_gamma == nullptr || feasible == nullptr)
      fail(ErrorCode::InvalidArgument, "null pointer");
    if (index < 0 || index >= static_cast<int>(sweep->points.size()))
      fail(ErrorCode::InvalidArgument, "sweep row index out of range");
    const NoisePoint& p = sweep->points[index];
    *concurrence_out = p.concurrence;
    *strength = p.strength;
    *phi = p.feasible ? p.phi : 0.0;
    *delta_gamma = p.feasible ? p.delta_gamma : 0.0;
    *feasible = p.feasible ? 1 : 0;
  });
}

void nlsim_sweep_free(nlsim_sweep* sweep) { delete sweep; }

nlsim_status nlsim_verify(uint64_t seed, double tolerance_override,
                          nlsim_report** out) {
  return guarded([&] {
    if (out == nullptr) fail(ErrorCode::InvalidArgument, "null output pointer");
    auto report = std::make_unique<nlsim_report>();
    std::optional<double> override_value;
    if (tolerance_override > 0.0) override_value = tolerance_override;
    report->results = run_verification(seed, override_value);
    *out = report.release();
  });
}

int nlsim_report_count(const nlsim_report* report) {
  return report == nullptr ? 0 : static_cast<int>(report->results.size());
}

nlsim_status nlsim_report_entry(const nlsim_report* report, int index,
                                const char** name, double* residual,
                                double* tolerance, int* passed) {
  return guarded([&] {
    if (report == nullptr || name == nullptr || residual == nullptr ||
        tolerance == nullptr || passed == nullptr)
      fail(ErrorCode::InvalidArgument, "null pointer");
    if (index < 0 || index >= static_cast<int>(report->results.size()))
      fail(ErrorCode::InvalidArgument, "report index out of range");
    const CheckResult& result = report->results[index];
    *name = result.name.c_str();
    *residual = result.max_residual;
    *tolerance = result.tolerance;
    *passed = result.passed ? 1 : 0;
  });
}

int nlsim_report_all_passed(const nlsim_report* report) {
  if (report == nullptr) return 0;
  for (const CheckResult& result : report->results)
    if (!result.passed) return 0;
  return 1;
}

void nlsim_report_free(nlsim_report* report) { delete report; }

}  // extern "C"
