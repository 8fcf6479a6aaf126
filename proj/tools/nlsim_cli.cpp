// Command-line front end for the nlsim shared library: runs measurement
// schemes on chosen inputs, executes the verification suites, and emits
// sweep data as CSV or JSON. Exit codes: 0 success, 1 verification or
// internal-consistency failure, 2 usage/configuration error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlsim/nlsim.h"

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

int exit_code_for(nlsim_status status) {
  switch (status) {
    case NLSIM_OK:
      return kExitOk;
    case NLSIM_ERR_INVALID_ARGUMENT:
    case NLSIM_ERR_DIMENSION:
    case NLSIM_ERR_NORMALIZATION:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

[[noreturn]] void die(nlsim_status status, const std::string& context) {
  std::cerr << "error: " << context << ": " << nlsim_status_name(status)
            << "\n";
  std::exit(exit_code_for(status));
}

// Resolves --output against NLSIM_OUTPUT_DIR for relative paths; empty means
// stdout.
std::string resolve_output_path(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("NLSIM_OUTPUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  std::string joined = dir;
  if (joined.back() != '/') joined += '/';
  return joined + path;
}

void emit(const std::string& path, const std::string& content) {
  const std::string resolved = resolve_output_path(path);
  if (resolved.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(resolved, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output path: " << resolved << "\n";
    std::exit(kExitUsage);
  }
  out << content;
  if (!out.good()) {
    std::cerr << "error: failed writing output path: " << resolved << "\n";
    std::exit(kExitUsage);
  }
}

struct InputState {
  std::string name;        // preset name or "custom"
  double amps[8] = {0.0};  // interleaved re/im
};

InputState resolve_input(const std::string& text) {
  static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  static const std::map<std::string, std::vector<double>> presets = {
      {"zero-zero", {1, 0, 0, 0, 0, 0, 0, 0}},
      {"bell-phi+", {inv_sqrt2, 0, 0, 0, 0, 0, inv_sqrt2, 0}},
      {"bell-psi+", {0, 0, inv_sqrt2, 0, inv_sqrt2, 0, 0, 0}},
      {"plus-plus", {0.5, 0, 0.5, 0, 0.5, 0, 0.5, 0}},
  };

  InputState input;
  const auto preset = presets.find(text);
  if (preset != presets.end()) {
    input.name = text;
    std::copy(preset->second.begin(), preset->second.end(), input.amps);
    return input;
  }

  // Custom state: 8 comma-separated numbers re0,im0,...,re3,im3 (normalized).
  std::vector<double> values;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    try {
      size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      std::cerr << "error: --input expects a preset name or 8 numbers, got '"
                << token << "'\n";
      std::exit(kExitUsage);
    }
  }
  if (values.size() != 8) {
    std::cerr << "error: --input expects a preset "
                 "(zero-zero, bell-phi+, bell-psi+, plus-plus) or 8 "
                 "comma-separated amplitude components\n";
    std::exit(kExitUsage);
  }
  double norm2 = 0.0;
  for (int i = 0; i < 4; ++i)
    norm2 += values[2 * i] * values[2 * i] + values[2 * i + 1] * values[2 * i + 1];
  if (norm2 < 1e-24) {
    std::cerr << "error: input amplitudes have zero norm\n";
    std::exit(kExitUsage);
  }
  const double scale = 1.0 / std::sqrt(norm2);
  input.name = "custom";
  for (int i = 0; i < 8; ++i) input.amps[i] = values[i] * scale;
  return input;
}

ordered_json matrix_json(const double* rho, bool present) {
  if (!present) return nullptr;
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < 4; ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < 4; ++c) {
      const int k = 2 * (4 * r + c);
      row.push_back({rho[k], rho[k + 1]});
    }
    rows.push_back(row);
  }
  return rows;
}

void print_matrix_text(std::ostream& out, const double* rho) {
  for (int r = 0; r < 4; ++r) {
    out << "      ";
    for (int c = 0; c < 4; ++c) {
      const int k = 2 * (4 * r + c);
      out << "(" << fmt12(rho[k]) << "," << fmt12(rho[k + 1]) << ")";
      out << (c == 3 ? "\n" : " ");
    }
  }
}

struct SimulateOptions {
  std::string scheme;
  double theta = 0.0;
  double phi = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  std::string input = "zero-zero";
  std::string format = "text";
  std::string output;
  bool degrees = false;
};

int cmd_simulate(const SimulateOptions& opt) {
  const double to_rad = opt.degrees ? M_PI / 180.0 : 1.0;
  const InputState input = resolve_input(opt.input);

  nlsim_run* run = nullptr;
  nlsim_status status = NLSIM_ERR_INVALID_ARGUMENT;
  if (opt.scheme == "nmem") {
    status = nlsim_run_nmem(opt.theta * to_rad, opt.phi * to_rad, input.amps, &run);
  } else if (opt.scheme == "mem") {
    status = nlsim_run_mem(opt.theta1 * to_rad, opt.theta2 * to_rad, input.amps, &run);
  } else if (opt.scheme == "erasure") {
    status = nlsim_run_erasure(opt.theta * to_rad, input.amps, &run);
  } else {
    std::cerr << "error: unknown scheme '" << opt.scheme
              << "' (expected nmem, mem or erasure)\n";
    return kExitUsage;
  }
  if (status != NLSIM_OK) die(status, "simulate");

  const double success = nlsim_run_success_probability(run);
  const double delta_gamma = nlsim_run_delta_gamma(run);

  std::ostringstream out;
  if (opt.format == "json") {
    ordered_json doc;
    doc["command"] = "simulate";
    doc["scheme"] = opt.scheme;
    ordered_json params;
    if (opt.scheme == "mem") {
      params["theta1"] = opt.theta1 * to_rad;
      params["theta2"] = opt.theta2 * to_rad;
    } else {
      params["theta"] = opt.theta * to_rad;
      if (opt.scheme == "nmem") params["phi"] = opt.phi * to_rad;
    }
    doc["parameters"] = params;
    ordered_json amps = ordered_json::array();
    for (int i = 0; i < 4; ++i)
      amps.push_back({input.amps[2 * i], input.amps[2 * i + 1]});
    doc["input"] = {{"name", input.name}, {"amplitudes", amps}};
    doc["success_probability"] = success;

    ordered_json stages = ordered_json::array();
    for (int i = 0; i < nlsim_run_postselection_count(run); ++i) {
      const char* name = nullptr;
      double probability = 0.0;
      nlsim_run_postselection(run, i, &name, &probability);
      stages.push_back({{"name", name}, {"probability", probability}});
    }
    doc["postselections"] = stages;

    ordered_json locals = ordered_json::array();
    for (int i = 0; i < nlsim_run_branch_count(run); ++i) {
      char label[8];
      double probability = 0.0, rho[32];
      nlsim_run_branch(run, i, label, &probability, rho);
      locals.push_back({{"label", label},
                        {"probability", probability},
                        {"post_state", matrix_json(rho, probability >= 1e-12)}});
    }
    doc["local_outcomes"] = locals;

    ordered_json globals = ordered_json::array();
    for (int outcome : {+1, -1}) {
      double probability = 0.0, purity = 0.0, rho[32];
      nlsim_run_global(run, outcome, &probability, &purity, rho);
      const bool present = probability >= 1e-12;
      globals.push_back({{"outcome", outcome},
                         {"probability", probability},
                         {"purity", present ? ordered_json(purity) : nullptr},
                         {"post_state", matrix_json(rho, present)}});
    }
    doc["global_outcomes"] = globals;
    doc["delta_gamma"] = delta_gamma;
    out << doc.dump(2) << "\n";
  } else if (opt.format == "csv") {
    out << "outcome,probability,purity\n";
    for (int outcome : {+1, -1}) {
      double probability = 0.0, purity = 0.0;
      nlsim_run_global(run, outcome, &probability, &purity, nullptr);
      out << (outcome > 0 ? "+1" : "-1") << "," << fmt12(probability) << ","
          << (probability >= 1e-12 ? fmt12(purity) : "") << "\n";
    }
  } else if (opt.format == "text") {
    out << "scheme: " << nlsim_run_scheme(run) << "\n";
    if (opt.scheme == "mem") {
      out << "theta1: " << fmt12(opt.theta1 * to_rad)
          << "\ntheta2: " << fmt12(opt.theta2 * to_rad) << "\n";
    } else {
      out << "theta: " << fmt12(opt.theta * to_rad) << "\n";
      if (opt.scheme == "nmem") out << "phi: " << fmt12(opt.phi * to_rad) << "\n";
    }
    out << "input: " << input.name << "\n";
    out << "success probability: " << fmt12(success) << "\n";
    for (int i = 0; i < nlsim_run_postselection_count(run); ++i) {
      const char* name = nullptr;
      double probability = 0.0;
      nlsim_run_postselection(run, i, &name, &probability);
      out << "  post-selection " << name << ": p=" << fmt12(probability) << "\n";
    }
    out << "local outcomes (conditional on success):\n";
    for (int i = 0; i < nlsim_run_branch_count(run); ++i) {
      char label[8];
      double probability = 0.0;
      nlsim_run_branch(run, i, label, &probability, nullptr);
      out << "  " << label << "  p=" << fmt12(probability) << "\n";
    }
    out << "global outcomes (conditional on success):\n";
    for (int outcome : {+1, -1}) {
      double probability = 0.0, purity = 0.0, rho[32];
      nlsim_run_global(run, outcome, &probability, &purity, rho);
      out << "  " << (outcome > 0 ? "+1" : "-1") << "  p=" << fmt12(probability);
      if (probability >= 1e-12) {
        out << "  purity=" << fmt12(purity) << "\n    post state:\n";
        print_matrix_text(out, rho);
      } else {
        out << "  (impossible branch)\n";
      }
    }
    out << "delta gamma: " << fmt12(delta_gamma) << "\n";
  } else {
    std::cerr << "error: unknown format '" << opt.format << "'\n";
    nlsim_run_free(run);
    return kExitUsage;
  }

  nlsim_run_free(run);
  emit(opt.output, out.str());
  return kExitOk;
}

int cmd_verify(std::uint64_t seed, double tolerance, const std::string& output) {
  nlsim_report* report = nullptr;
  const nlsim_status status = nlsim_verify(seed, tolerance, &report);
  if (status != NLSIM_OK) die(status, "verify");

  std::ostringstream out;
  out << "verification suites (seed " << seed;
  if (tolerance > 0.0) out << ", tolerance override " << fmt12(tolerance);
  out << ")\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-42s %-13s %-10s %s\n", "suite",
                "residual", "tolerance", "status");
  out << line;
  int passed = 0;
  const int count = nlsim_report_count(report);
  for (int i = 0; i < count; ++i) {
    const char* name = nullptr;
    double residual = 0.0, tol = 0.0;
    int ok = 0;
    nlsim_report_entry(report, i, &name, &residual, &tol, &ok);
    std::snprintf(line, sizeof line, "%-42s %-13.6g %-10.3g %s\n", name,
                  residual, tol, ok ? "PASS" : "FAIL");
    out << line;
    passed += ok;
  }
  out << passed << "/" << count << " suites passed\n";
  const bool all_passed = nlsim_report_all_passed(report) != 0;
  nlsim_report_free(report);
  emit(output, out.str());
  return all_passed ? kExitOk : kExitFailure;
}

int cmd_sweep_noise(int grid_c, int grid_s, const std::string& format,
                    const std::string& output) {
  nlsim_sweep* sweep = nullptr;
  const nlsim_status status = nlsim_noise_surface(grid_c, grid_s, &sweep);
  if (status != NLSIM_OK) die(status, "sweep-noise");

  std::ostringstream out;
  const int rows = nlsim_sweep_row_count(sweep);
  if (format == "csv") {
    out << "concurrence,strength,phi,delta_gamma,feasible\n";
    for (int i = 0; i < rows; ++i) {
      double c = 0.0, s = 0.0, phi = 0.0, dg = 0.0;
      int feasible = 0;
      nlsim_sweep_row(sweep, i, &c, &s, &phi, &dg, &feasible);
      out << fmt12(c) << "," << fmt12(s) << ",";
      if (feasible)
        out << fmt12(phi) << "," << fmt12(dg) << ",1\n";
      else
        out << ",,0\n";
    }
  } else if (format == "json") {
    ordered_json doc;
    doc["command"] = "sweep-noise";
    doc["grid_c"] = grid_c;
    doc["grid_s"] = grid_s;
    ordered_json rows_json = ordered_json::array();
    for (int i = 0; i < rows; ++i) {
      double c = 0.0, s = 0.0, phi = 0.0, dg = 0.0;
      int feasible = 0;
      nlsim_sweep_row(sweep, i, &c, &s, &phi, &dg, &feasible);
      rows_json.push_back({{"concurrence", c},
                           {"strength", s},
                           {"phi", feasible ? ordered_json(phi) : nullptr},
                           {"delta_gamma", feasible ? ordered_json(dg) : nullptr},
                           {"feasible", feasible != 0}});
    }
    doc["rows"] = rows_json;
    out << doc.dump(2) << "\n";
  } else {
    std::cerr << "error: sweep-noise supports csv or json output\n";
    nlsim_sweep_free(sweep);
    return kExitUsage;
  }
  nlsim_sweep_free(sweep);
  emit(output, out.str());
  return kExitOk;
}

int cmd_strength_law(int points, const std::string& format,
                     const std::string& output) {
  if (points < 2) {
    std::cerr << "error: --points must be >= 2\n";
    return kExitUsage;
  }
  std::ostringstream out;
  ordered_json rows_json = ordered_json::array();
  if (format == "csv") out << "theta,concurrence,strength,residual\n";
  for (int i = 0; i < points; ++i) {
    const double theta = (M_PI / 4.0) * static_cast<double>(i) / (points - 1);
    double concurrence = 0.0, strength = 0.0;
    const nlsim_status status =
        nlsim_strength_concurrence(theta, &concurrence, &strength);
    if (status != NLSIM_OK) die(status, "strength-law");
    const double residual = std::abs(concurrence - strength);
    if (format == "csv") {
      out << fmt12(theta) << "," << fmt12(concurrence) << "," << fmt12(strength)
          << "," << fmt12(residual) << "\n";
    } else {
      rows_json.push_back({{"theta", theta},
                           {"concurrence", concurrence},
                           {"strength", strength},
                           {"residual", residual}});
    }
  }
  if (format == "json") {
    ordered_json doc;
    doc["command"] = "strength-law";
    doc["points"] = points;
    doc["rows"] = rows_json;
    out << doc.dump(2) << "\n";
  } else if (format != "csv") {
    std::cerr << "error: strength-law supports csv or json output\n";
    return kExitUsage;
  }
  emit(output, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal spin-product measurement simulator"};
  app.set_version_flag("--version", std::string(nlsim_version()));
  app.require_subcommand(1);

  SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "run a measurement scheme on a two-qubit input");
  simulate->add_option("--scheme", sim.scheme, "nmem, mem or erasure")
      ->required();
  simulate->add_option("--theta", sim.theta, "meter angle (nmem, erasure)");
  simulate->add_option("--phi", sim.phi, "meter phase (nmem)");
  simulate->add_option("--theta1", sim.theta1, "first rotation angle (mem)");
  simulate->add_option("--theta2", sim.theta2, "second rotation angle (mem)");
  simulate->add_option("--input", sim.input,
                       "preset (zero-zero, bell-phi+, bell-psi+, plus-plus) "
                       "or 8 comma-separated amplitude components");
  simulate->add_option("--format", sim.format, "text, json or csv");
  simulate->add_option("--output", sim.output, "output path (default stdout)");
  simulate->add_flag("--deg", sim.degrees, "interpret angles as degrees");

  std::uint64_t seed = 12345;
  double tolerance = 0.0;
  std::string verify_output;
  CLI::App* verify =
      app.add_subcommand("verify", "run the cross-module verification suites");
  verify->add_option("--seed", seed, "seed for the randomized suites");
  verify->add_option("--tolerance", tolerance,
                     "override every suite tolerance (0 keeps defaults)");
  verify->add_option("--output", verify_output, "output path (default stdout)");

  int grid_c = 101, grid_s = 101;
  std::string sweep_format = "csv", sweep_output;
  CLI::App* sweep = app.add_subcommand(
      "sweep-noise", "emit the purity-degradation surface over "
                     "(concurrence, strength)");
  sweep->add_option("--grid-c", grid_c, "concurrence resolution (>= 2)");
  sweep->add_option("--grid-s", grid_s, "strength resolution (>= 2)");
  sweep->add_option("--format", sweep_format, "csv or json");
  sweep->add_option("--output", sweep_output, "output path (default stdout)");

  int points = 50;
  std::string law_format = "csv", law_output;
  CLI::App* law = app.add_subcommand(
      "strength-law", "tabulate meter concurrence against simulated "
                      "measurement strength");
  law->add_option("--points", points, "number of meter angles (>= 2)");
  law->add_option("--format", law_format, "csv or json");
  law->add_option("--output", law_output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (simulate->parsed()) return cmd_simulate(sim);
  if (verify->parsed()) return cmd_verify(seed, tolerance, verify_output);
  if (sweep->parsed())
    return cmd_sweep_noise(grid_c, grid_s, sweep_format, sweep_output);
  if (law->parsed()) return cmd_strength_law(points, law_format, law_output);
  return kExitUsage;
}
