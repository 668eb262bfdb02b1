// cli.hpp — Command-line driver: configuration, subcommands, CSV emission

#pragma once

#include <string>
#include <vector>

#include "qheat/propagator.hpp"
#include "qheat/spectral.hpp"

namespace qheat::cli {

struct RunConfig {
  std::string model = "ohmic";  // ohmic | semicircle | discrete
  double eta = 0.05;
  double s = 1.0;
  double omega_c = 10.0;
  double g = 0.12;
  double zeta = 0.03;
  double big_omega = 1.0;
  std::string modes;  // discrete model: "omega:g,omega:g,..."

  double omega0 = 1.0;
  double beta_s = 1.2;
  double beta_b = 0.2;

  double t_end = 30.0;
  int n_steps = 0;  // 0: dt chosen so max(omega0, kernel scale) * dt <= 0.05
  int l_max = 0;    // 0: tail rule
  int xi_points = 41;
  int stride = 0;      // heat CSV row decimation; 0: ~100 rows
  int n_modes = 400;   // oracle discretization count
  double oracle_omega_max = 0.0;  // 0: model default

  std::string sweep_var;  // eta | g (from --range)
  double sweep_lo = 0.0;
  double sweep_hi = 0.0;
  int sweep_count = 0;

  std::string out;  // output CSV path; "" = qheat_<cmd>.csv
  bool svg = false;
  std::string omega_ref = "omega0";  // unit label recorded in CSV headers
};

// preset < config file < --set, later sources win; unknown keys are hard errors.
void apply_preset(RunConfig& cfg, const std::string& name);
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);
void apply_config_file(RunConfig& cfg, const std::string& path);
void validate(const RunConfig& cfg);

spectral::SpectralDensity make_density(const RunConfig& cfg);
propagator::TimeGrid make_grid(const RunConfig& cfg, const spectral::SpectralDensity& sd);
std::string resolved_comment(const RunConfig& cfg, const std::string& cmd, int n_steps_resolved);

// Full driver. Exit codes: 0 success, 1 failed verification, 2 usage error,
// 3 numerical/domain error.
int run_cli(const std::vector<std::string>& args);

}  // namespace qheat::cli
