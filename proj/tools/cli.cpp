#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "csv.hpp"
#include "qheat/errors.hpp"
#include "qheat/heat.hpp"
#include "qheat/oracle.hpp"
#include "qheat/spectrum.hpp"
#include "svg.hpp"

namespace qheat::cli {

namespace {

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("unparsable value for " + key + ": '" + value + "'");
  }
  if (used != value.size())
    throw ConfigError("unparsable value for " + key + ": '" + value + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  int x = 0;
  try {
    x = std::stoi(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("unparsable value for " + key + ": '" + value + "'");
  }
  if (used != value.size())
    throw ConfigError("unparsable value for " + key + ": '" + value + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError("unparsable value for " + key + ": '" + value + "'");
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

int thread_budget(int points) {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("QHEAT_THREADS")) {
    try {
      n = std::min(n, std::max(1, std::stoi(env)));
    } catch (const std::exception&) {
      throw ConfigError("QHEAT_THREADS is not an integer");
    }
  }
  return std::max(1, std::min(n, points));
}

// Index-sliced worker pool; each slot is written by exactly one worker, so the
// result is independent of scheduling.
template <typename Fn>
void parallel_for(int count, Fn&& fn) {
  const int workers = thread_budget(count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

void apply_preset(RunConfig& cfg, const std::string& name) {
  if (name == "fig2") {
    cfg.model = "ohmic";
    cfg.eta = 0.05;
    cfg.s = 1.0;
    cfg.omega_c = 10.0;
    cfg.omega0 = 1.0;
    cfg.beta_s = 1.2;
    cfg.beta_b = 0.2;
    cfg.t_end = 30.0;
    cfg.omega_ref = "omega0";
  } else if (name == "fig3") {
    cfg.model = "semicircle";
    cfg.g = 0.12;
    cfg.zeta = 0.03;
    cfg.big_omega = 1.0;
    cfg.omega0 = 1.05;
    cfg.beta_s = 1.0;
    cfg.beta_b = 5.0;
    cfg.t_end = 600.0;
    cfg.omega_ref = "Omega";
  } else if (name == "sm1") {
    cfg.model = "semicircle";
    cfg.g = 0.12;
    cfg.zeta = 0.08;
    cfg.big_omega = 1.0;
    cfg.omega0 = 1.05;
    cfg.beta_s = 0.5;
    cfg.beta_b = 0.2;
    cfg.t_end = 600.0;
    cfg.omega_ref = "Omega";
  } else {
    throw ConfigError("unknown preset: " + name + " (expected fig2, fig3 or sm1)");
  }
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "model") {
    if (value != "ohmic" && value != "semicircle" && value != "discrete")
      throw ConfigError("model must be ohmic, semicircle or discrete");
    cfg.model = value;
  } else if (key == "eta") {
    cfg.eta = parse_double(key, value);
  } else if (key == "s") {
    cfg.s = parse_double(key, value);
  } else if (key == "omega_c") {
    cfg.omega_c = parse_double(key, value);
  } else if (key == "g") {
    cfg.g = parse_double(key, value);
  } else if (key == "zeta") {
    cfg.zeta = parse_double(key, value);
  } else if (key == "big_omega" || key == "Omega") {
    cfg.big_omega = parse_double(key, value);
  } else if (key == "modes") {
    cfg.modes = value;
  } else if (key == "omega0") {
    cfg.omega0 = parse_double(key, value);
  } else if (key == "beta_s") {
    cfg.beta_s = parse_double(key, value);
  } else if (key == "beta_b") {
    cfg.beta_b = parse_double(key, value);
  } else if (key == "t_end") {
    cfg.t_end = parse_double(key, value);
  } else if (key == "n_steps") {
    cfg.n_steps = parse_int(key, value);
  } else if (key == "l_max") {
    cfg.l_max = parse_int(key, value);
  } else if (key == "xi_points") {
    cfg.xi_points = parse_int(key, value);
  } else if (key == "stride") {
    cfg.stride = parse_int(key, value);
  } else if (key == "n_modes") {
    cfg.n_modes = parse_int(key, value);
  } else if (key == "oracle_omega_max") {
    cfg.oracle_omega_max = parse_double(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "svg") {
    cfg.svg = parse_bool(key, value);
  } else if (key == "omega_ref") {
    cfg.omega_ref = value;
  } else {
    throw ConfigError("unknown configuration key: " + key);
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void validate(const RunConfig& cfg) {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0)) throw ConfigError(std::string(name) + " must be > 0");
  };
  positive(cfg.omega0, "omega0");
  positive(cfg.beta_s, "beta_s");
  positive(cfg.beta_b, "beta_b");
  positive(cfg.t_end, "t_end");
  if (cfg.model == "ohmic") {
    if (cfg.eta < 0.0) throw ConfigError("eta must be >= 0");
    positive(cfg.s, "s");
    positive(cfg.omega_c, "omega_c");
  } else if (cfg.model == "semicircle") {
    positive(cfg.g, "g");
    positive(cfg.zeta, "zeta");
    positive(cfg.big_omega, "big_omega");
  }
  if (cfg.n_steps < 0) throw ConfigError("n_steps must be >= 0");
  if (cfg.l_max < 0) throw ConfigError("l_max must be >= 0");
  if (cfg.xi_points < 3) throw ConfigError("xi_points must be >= 3");
  if (cfg.stride < 0) throw ConfigError("stride must be >= 0");
  if (cfg.n_modes < 1) throw ConfigError("n_modes must be >= 1");
}

spectral::SpectralDensity make_density(const RunConfig& cfg) {
  if (cfg.model == "ohmic")
    return spectral::SpectralDensity::ohmic(cfg.eta, cfg.s, cfg.omega_c);
  if (cfg.model == "semicircle")
    return spectral::SpectralDensity::semicircle(cfg.g, cfg.zeta, cfg.big_omega);
  std::vector<spectral::BathMode> modes;
  std::stringstream ss(cfg.modes);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError("modes entries must look like omega:g");
    modes.push_back({parse_double("modes", item.substr(0, colon)),
                     parse_double("modes", item.substr(colon + 1))});
  }
  return spectral::SpectralDensity::discrete(std::move(modes));
}

propagator::TimeGrid make_grid(const RunConfig& cfg, const spectral::SpectralDensity& sd) {
  const double scale = std::max(cfg.omega0, sd.frequency_scale());
  if (cfg.n_steps > 0) {
    const propagator::TimeGrid grid(cfg.t_end, cfg.n_steps);
    if (grid.dt() * scale > 0.05 * (1.0 + 1e-12))
      std::cerr << "qheat: warning: dt * omega_max = " << grid.dt() * scale
                << " exceeds 0.05; results may be under-resolved\n";
    return grid;
  }
  const double dt_target = scale > 0.0 ? 0.05 / scale : cfg.t_end / 1000.0;
  int n = static_cast<int>(std::ceil(cfg.t_end / dt_target));
  n = std::max(n, 100);
  if (n > 2'000'000) throw ConfigError("auto grid would need more than 2e6 steps");
  return propagator::TimeGrid(cfg.t_end, n);
}

std::string resolved_comment(const RunConfig& cfg, const std::string& cmd,
                             int n_steps_resolved) {
  std::string c = "cmd=" + cmd + " model=" + cfg.model;
  if (cfg.model == "ohmic")
    c += " eta=" + format_g17(cfg.eta) + " s=" + format_g17(cfg.s) +
         " omega_c=" + format_g17(cfg.omega_c);
  else if (cfg.model == "semicircle")
    c += " g=" + format_g17(cfg.g) + " zeta=" + format_g17(cfg.zeta) +
         " big_omega=" + format_g17(cfg.big_omega);
  else
    c += " modes=" + (cfg.modes.empty() ? std::string("none") : cfg.modes);
  c += " omega0=" + format_g17(cfg.omega0) + " beta_s=" + format_g17(cfg.beta_s) +
       " beta_b=" + format_g17(cfg.beta_b) + " t_end=" + format_g17(cfg.t_end) +
       " n_steps=" + std::to_string(n_steps_resolved) +
       " l_max=" + std::to_string(cfg.l_max) +
       " xi_points=" + std::to_string(cfg.xi_points) + " omega_ref=" + cfg.omega_ref;
  return c;
}

namespace {

std::string out_path(const RunConfig& cfg, const std::string& cmd) {
  return cfg.out.empty() ? "qheat_" + cmd + ".csv" : cfg.out;
}

std::string svg_path(const std::string& csv) {
  const auto dot = csv.rfind(".csv");
  return (dot == std::string::npos ? csv : csv.substr(0, dot)) + ".svg";
}

int resolve_l_max(const RunConfig& cfg, Complex u, double v) {
  if (cfg.l_max > 0) return cfg.l_max;
  return heat::adequate_l_max(cfg.beta_s, cfg.omega0, u, v);
}

int cmd_kernels(const RunConfig& cfg) {
  const auto sd = make_density(cfg);
  const auto grid = make_grid(cfg, sd);
  const auto samples = spectral::sample_kernels(sd, cfg.beta_b, grid.times());
  CsvTable csv(resolved_comment(cfg, "kernels", grid.n_steps),
               "t,re_mu,im_mu,re_nu,im_nu");
  for (std::size_t i = 0; i < samples.times.size(); ++i)
    csv.row({format_g17(samples.times[i]), format_g17(samples.mu[i].real()),
             format_g17(samples.mu[i].imag()), format_g17(samples.nu[i].real()),
             format_g17(samples.nu[i].imag())});
  const std::string path = out_path(cfg, "kernels");
  csv.write(path);
  if (cfg.svg) {
    std::vector<double> re(samples.mu.size()), im(samples.mu.size());
    for (std::size_t i = 0; i < samples.mu.size(); ++i) {
      re[i] = samples.mu[i].real();
      im[i] = samples.mu[i].imag();
    }
    write_line_chart(svg_path(path), "memory kernel", samples.times,
                     {{"re_mu", re}, {"im_mu", im}});
  }
  return 0;
}

int cmd_propagate(const RunConfig& cfg) {
  const auto sd = make_density(cfg);
  const auto grid = make_grid(cfg, sd);
  const auto traj = propagator::solve_trajectory(sd, cfg.omega0, cfg.beta_b, grid);
  CsvTable csv(resolved_comment(cfg, "propagate", grid.n_steps), "t,re_u,im_u,abs_u,v");
  const auto times = grid.times();
  for (std::size_t i = 0; i < times.size(); ++i)
    csv.row({format_g17(times[i]), format_g17(traj.u[i].real()),
             format_g17(traj.u[i].imag()), format_g17(std::abs(traj.u[i])),
             format_g17(traj.v[i])});
  const std::string path = out_path(cfg, "propagate");
  csv.write(path);
  if (cfg.svg) {
    std::vector<double> abs_u(traj.u.size());
    for (std::size_t i = 0; i < traj.u.size(); ++i) abs_u[i] = std::abs(traj.u[i]);
    write_line_chart(svg_path(path), "dissipation and noise", times,
                     {{"abs_u", abs_u}, {"v", traj.v}});
  }
  return 0;
}

std::vector<std::string> spectrum_fields(const spectrum::BoundStateSet& bound,
                                         const spectrum::AsymptoticState& asym,
                                         double param) {
  std::vector<std::string> f(8);
  f[0] = format_g17(param);
  f[1] = std::to_string(bound.count());
  f[2] = bound.count() > 0 ? format_g17(bound.states[0].energy) : "";
  f[3] = bound.count() > 0 ? format_g17(bound.states[0].weight) : "";
  f[4] = bound.count() > 1 ? format_g17(bound.states[1].energy) : "";
  f[5] = bound.count() > 1 ? format_g17(bound.states[1].weight) : "";
  f[6] = format_g17(asym.v_constant);
  f[7] = format_g17(asym.beat_frequency);
  return f;
}

int cmd_spectrum(const RunConfig& cfg) {
  const auto sd = make_density(cfg);
  const double param = cfg.model == "ohmic" ? cfg.eta : cfg.g;
  const auto bound = spectrum::find_bound_states(sd, cfg.omega0);
  const auto asym = spectrum::asymptotic_state(sd, cfg.omega0, cfg.beta_b, bound);
  CsvTable csv(resolved_comment(cfg, "spectrum", 0),
               "g_or_eta,count,E_b_1,Z_1,E_b_2,Z_2,v_inf_const,beat_freq");
  csv.row(spectrum_fields(bound, asym, param));
  csv.write(out_path(cfg, "spectrum"));
  return 0;
}

int cmd_heat(const RunConfig& cfg) {
  const auto sd = make_density(cfg);
  const auto grid = make_grid(cfg, sd);
  const auto traj = propagator::solve_trajectory(sd, cfg.omega0, cfg.beta_b, grid);
  const int stride = cfg.stride > 0 ? cfg.stride : std::max(1, grid.n_steps / 100);
  CsvTable csv(resolved_comment(cfg, "heat", grid.n_steps) +
                   " stride=" + std::to_string(stride),
               "t,beta_eff,mean_heat,ft_gjw,ft_jw");
  const auto times = grid.times();
  for (int i = stride; i <= grid.n_steps; i += stride) {
    if (traj.v[i] <= 1e-12) continue;  // beta_eff undefined this early
    const Complex u = traj.u[i];
    const double v = traj.v[i];
    const heat::HeatSetup setup(cfg.beta_s, cfg.beta_b, cfg.omega0,
                                resolve_l_max(cfg, u, v));
    const double beff = heat::effective_beta(cfg.omega0, u, v);
    const auto dist = heat::heat_distribution(setup, u, v);
    csv.row({format_g17(times[i]), format_g17(beff),
             format_g17(heat::mean_heat(setup, u, v)),
             format_g17(heat::integral_ft_value(dist, beff - cfg.beta_s)),
             format_g17(heat::integral_ft_value(dist, cfg.beta_b - cfg.beta_s))});
  }
  const std::string path = out_path(cfg, "heat");
  csv.write(path);
  return 0;
}

int cmd_oracle(const RunConfig& cfg) {
  const auto sd = make_density(cfg);
  const auto grid = make_grid(cfg, sd);
  double omega_max = cfg.oracle_omega_max;
  if (omega_max <= 0.0)
    omega_max = sd.is_ohmic() ? std::min(sd.support_max(), 2.0 * cfg.omega_c)
                              : sd.support_max();
  const auto modes = sd.discretize(cfg.n_modes, omega_max);
  const auto reference = oracle::single_particle_u_v(
      oracle::SingleParticleModel{cfg.omega0, modes.modes}, cfg.beta_b, grid);
  // Support-matched comparison: the Volterra kernels are truncated at the same
  // omega_max the discretization covers.
  const double cap = sd.is_discrete() ? 0.0 : omega_max;
  const auto traj = propagator::solve_trajectory(sd, cfg.omega0, cfg.beta_b, grid, cap);

  CsvTable csv(resolved_comment(cfg, "oracle", grid.n_steps),
               "t,abs_u_volterra,abs_u_oracle,v_volterra,v_oracle,err_u,err_v");
  const auto times = grid.times();
  for (std::size_t i = 0; i < times.size(); ++i)
    csv.row({format_g17(times[i]), format_g17(std::abs(traj.u[i])),
             format_g17(std::abs(reference.u[i])), format_g17(traj.v[i]),
             format_g17(reference.v[i]),
             format_g17(std::abs(traj.u[i] - reference.u[i])),
             format_g17(std::abs(traj.v[i] - reference.v[i]))});
  const std::string path = out_path(cfg, "oracle");
  csv.write(path);
  if (cfg.svg) {
    std::vector<double> eu(times.size()), ev(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      eu[i] = std::abs(traj.u[i] - reference.u[i]);
      ev[i] = std::abs(traj.v[i] - reference.v[i]);
    }
    write_line_chart(svg_path(path), "solver vs oracle", times,
                     {{"err_u", eu}, {"err_v", ev}});
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  std::string var = cfg.sweep_var;
  double lo = cfg.sweep_lo, hi = cfg.sweep_hi;
  int count = cfg.sweep_count;
  if (var.empty()) {
    var = cfg.model == "ohmic" ? "eta" : "g";
    lo = 0.02;
    hi = 0.20;
    count = 37;
  }
  if (var != "eta" && var != "g")
    throw ConfigError("sweep variable must be eta or g");
  if (count < 2) throw ConfigError("sweep needs at least 2 points");

  std::vector<std::vector<std::string>> rows(count);
  std::vector<std::string> failures(count);
  parallel_for(count, [&](int i) {
    try {
      RunConfig point = cfg;
      const double value = lo + (hi - lo) * i / (count - 1);
      apply_key(point, var, format_g17(value));
      const auto sd = make_density(point);
      const auto bound = spectrum::find_bound_states(sd, point.omega0);
      const auto asym = spectrum::asymptotic_state(sd, point.omega0, point.beta_b, bound);
      auto fields = spectrum_fields(bound, asym, value);
      // Extrema of the lossless oscillation: both |u|^2 and v are linear in
      // cos(beat t), so the extrema sit at phase 0 and pi.
      double beff_min, beff_max, q_min, q_max;
      const heat::HeatSetup setup(
          point.beta_s, point.beta_b, point.omega0,
          heat::adequate_l_max(point.beta_s, point.omega0, 0.0, 0.0));
      auto stats_at = [&](double phase_t) {
        return heat::steady_state_stats(setup, asym, phase_t, 3);
      };
      if (bound.count() == 2) {
        const double half_period = std::numbers::pi / asym.beat_frequency;
        const auto s0 = stats_at(0.0);
        const auto s1 = stats_at(half_period);
        beff_min = std::min(s0.beta_eff, s1.beta_eff);
        beff_max = std::max(s0.beta_eff, s1.beta_eff);
        q_min = std::min(s0.mean_heat, s1.mean_heat);
        q_max = std::max(s0.mean_heat, s1.mean_heat);
      } else {
        const auto s0 = stats_at(0.0);
        beff_min = beff_max = s0.beta_eff;
        q_min = q_max = s0.mean_heat;
      }
      fields.push_back(format_g17(beff_min));
      fields.push_back(format_g17(beff_max));
      fields.push_back(format_g17(q_min));
      fields.push_back(format_g17(q_max));
      rows[i] = std::move(fields);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });
  for (const auto& f : failures)
    if (!f.empty()) throw NumericalError("sweep point failed: " + f);

  CsvTable csv(resolved_comment(cfg, "sweep", 0) + " range=" + var + "=" +
                   format_g17(lo) + ":" + format_g17(hi) + ":" + std::to_string(count),
               "g_or_eta,count,E_b_1,Z_1,E_b_2,Z_2,v_inf_const,beat_freq,"
               "beta_eff_min,beta_eff_max,mean_heat_min,mean_heat_max");
  for (const auto& r : rows) csv.row(r);
  const std::string path = out_path(cfg, "sweep");
  csv.write(path);
  if (cfg.svg) {
    std::vector<double> xs(count), bmin(count), bmax(count);
    for (int i = 0; i < count; ++i) {
      xs[i] = lo + (hi - lo) * i / (count - 1);
      bmin[i] = std::stod(rows[i][8]);
      bmax[i] = std::stod(rows[i][9]);
    }
    write_line_chart(svg_path(path), "steady-state beta_eff vs " + var, xs,
                     {{"beta_eff_min", bmin}, {"beta_eff_max", bmax}});
  }
  return 0;
}

struct VerifyRow {
  std::string check;
  double residual;
  double tolerance;
  std::string status;
};

int cmd_verify(const RunConfig& cfg) {
  const auto sd = make_density(cfg);
  const auto grid = make_grid(cfg, sd);
  const auto traj = propagator::solve_trajectory(sd, cfg.omega0, cfg.beta_b, grid);

  std::vector<int> sample_idx;
  for (double frac : {0.2, 0.4, 0.6, 0.8, 1.0})
    sample_idx.push_back(std::max(1, static_cast<int>(grid.n_steps * frac)));

  std::vector<VerifyRow> rows;
  auto push = [&](const std::string& name, double residual, double tol, bool expected_fail) {
    std::string status = residual <= tol ? "PASS" : (expected_fail ? "FAIL-expected" : "FAIL");
    rows.push_back({name, residual, tol, status});
  };

  {  // chi(0) = 1
    double worst = 0.0;
    for (int i : sample_idx) {
      const heat::HeatSetup setup(cfg.beta_s, cfg.beta_b, cfg.omega0,
                                  heat::adequate_l_max(cfg.beta_s, cfg.omega0, 0.0, 0.0));
      worst = std::max(worst, std::abs(heat::characteristic_function(
                                  0.0, setup, traj.u[i], traj.v[i]) - 1.0));
    }
    push("chi_at_zero", worst, 1e-14, false);
  }
  {  // permutation symmetry of chi under xi -> beta_eff - beta_s - xi
    double worst = 0.0;
    for (int i : sample_idx) {
      const Complex u = traj.u[i];
      const double v = traj.v[i];
      if (v <= 1e-12) continue;
      const heat::HeatSetup setup(cfg.beta_s, cfg.beta_b, cfg.omega0,
                                  heat::adequate_l_max(cfg.beta_s, cfg.omega0, 0.0, 0.0));
      const double beff = heat::effective_beta(cfg.omega0, u, v);
      const auto xi = heat::admissible_xi_grid(setup, u, v, cfg.xi_points);
      for (double x : xi) {
        const double a = heat::characteristic_function(x, setup, u, v);
        const double b =
            heat::characteristic_function(beff - cfg.beta_s - x, setup, u, v);
        worst = std::max(worst, std::abs(a - b) / a);
      }
    }
    push("permutation_symmetry", worst, 1e-8, false);
  }
  {  // integral fluctuation theorems
    double worst_gjw = 0.0, worst_jw = 0.0;
    for (int i : sample_idx) {
      const Complex u = traj.u[i];
      const double v = traj.v[i];
      if (v <= 1e-12) continue;
      const heat::HeatSetup setup(cfg.beta_s, cfg.beta_b, cfg.omega0,
                                  resolve_l_max(cfg, u, v));
      const auto dist = heat::heat_distribution(setup, u, v);
      const double beff = heat::effective_beta(cfg.omega0, u, v);
      worst_gjw = std::max(
          worst_gjw, std::abs(heat::integral_ft_value(dist, beff - cfg.beta_s) - 1.0));
      worst_jw = std::max(
          worst_jw,
          std::abs(heat::integral_ft_value(dist, cfg.beta_b - cfg.beta_s) - 1.0));
    }
    push("integral_ft_generalized", worst_gjw, 1e-6, false);
    push("integral_ft_jarzynski_wojcik", worst_jw, 1e-6, true);
  }
  {  // detailed balance on random channel parameters
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const double mag = uniform(rng);
      const Complex u = std::polar(mag, 2.0 * std::numbers::pi * uniform(rng));
      const double v = 1e-6 + 10.0 * uniform(rng);
      const int l = static_cast<int>(uniform(rng) * 40);
      const int lp = static_cast<int>(uniform(rng) * 40);
      const double beff = heat::effective_beta(cfg.omega0, u, v);
      const double lhs = heat::log_transition_probability(u, v, l, lp) -
                         heat::log_transition_probability(u, v, lp, l);
      const double rhs = -beff * cfg.omega0 * (lp - l);
      worst = std::max(worst, std::abs(std::expm1(lhs - rhs)));
    }
    push("detailed_balance", worst, 1e-10, false);
  }
  {  // Markovian limit: beta_eff == beta_b along the whole trajectory
    const auto ma = propagator::markovian_trajectory(sd, cfg.omega0, cfg.beta_b,
                                                     propagator::TimeGrid(cfg.t_end, 20));
    double worst = 0.0;
    for (int i = 1; i <= 20; ++i)
      worst = std::max(worst, std::abs(heat::effective_beta(cfg.omega0, ma.u[i], ma.v[i]) -
                                       cfg.beta_b));
    push("markov_beta_eff", worst, 1e-12, false);
  }
  {  // Volterra vs matrix-exponential on a small discrete bath
    const std::vector<spectral::BathMode> modes{{0.8, 0.12}, {1.0, 0.2}, {1.3, 0.1}};
    const auto dsd = spectral::SpectralDensity::discrete(modes);
    const propagator::TimeGrid dgrid(2.0, 4000);
    const auto volterra = propagator::solve_trajectory(dsd, cfg.omega0, cfg.beta_b, dgrid);
    const auto exact = oracle::single_particle_u_v(
        oracle::SingleParticleModel{cfg.omega0, modes}, cfg.beta_b, dgrid);
    double worst = 0.0;
    for (int i = 0; i <= dgrid.n_steps; ++i) {
      worst = std::max(worst, std::abs(volterra.u[i] - exact.u[i]));
      worst = std::max(worst, std::abs(volterra.v[i] - exact.v[i]));
    }
    push("oracle_discrete", worst, 1e-6, false);
  }

  CsvTable csv(resolved_comment(cfg, "verify", grid.n_steps),
               "check,residual,tolerance,status");
  bool failed = false;
  for (const auto& r : rows) {
    csv.row({r.check, format_g17(r.residual), format_g17(r.tolerance), r.status});
    std::cout << r.check << "," << format_g17(r.residual) << ","
              << format_g17(r.tolerance) << "," << r.status << "\n";
    if (r.status == "FAIL") failed = true;
  }
  csv.write(out_path(cfg, "verify"));
  return failed ? 1 : 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"qheat: non-Markovian heat statistics of a damped quantum oscillator"};
  app.require_subcommand(1);

  std::string preset, config_file, range, out;
  std::vector<std::string> sets;
  bool svg = false;
  std::string chosen;

  const std::vector<std::string> names = {"kernels", "propagate", "spectrum", "heat",
                                          "verify",  "sweep",     "oracle"};
  const std::vector<std::string> descriptions = {
      "dump memory/noise kernel samples",
      "solve the dissipation and noise functions",
      "bound states, residues and asymptotic noise",
      "effective temperature, mean heat and fluctuation-theorem values",
      "run the invariant suite and print a report table",
      "scan eta or g and tabulate steady-state statistics",
      "compare the Volterra solver against the discretized-bath propagator"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto* sub = app.add_subcommand(names[i], descriptions[i]);
    sub->add_option("--preset", preset, "parameter preset: fig2, fig3 or sm1");
    sub->add_option("--config", config_file, "key = value configuration file");
    sub->add_option("--set", sets, "override a single key, e.g. --set eta=0.15");
    sub->add_option("--range", range, "sweep range var=lo:hi:count");
    sub->add_option("--out", out, "output CSV path");
    sub->add_flag("--svg", svg, "also write an SVG line plot");
    sub->callback([&chosen, name = names[i]] { chosen = name; });
  }

  std::vector<const char*> argv;
  argv.push_back("qheat");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig cfg;
    if (!preset.empty()) apply_preset(cfg, preset);
    if (!config_file.empty()) apply_config_file(cfg, config_file);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got '" + kv + "'");
      apply_key(cfg, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
    if (!range.empty()) {
      const auto eq = range.find('=');
      if (eq == std::string::npos) throw ConfigError("--range expects var=lo:hi:count");
      cfg.sweep_var = trim(range.substr(0, eq));
      std::string rest = range.substr(eq + 1);
      const auto c1 = rest.find(':');
      const auto c2 = rest.find(':', c1 == std::string::npos ? 0 : c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos)
        throw ConfigError("--range expects var=lo:hi:count");
      cfg.sweep_lo = parse_double("range", rest.substr(0, c1));
      cfg.sweep_hi = parse_double("range", rest.substr(c1 + 1, c2 - c1 - 1));
      cfg.sweep_count = parse_int("range", rest.substr(c2 + 1));
    }
    if (!out.empty()) cfg.out = out;
    if (svg) cfg.svg = true;
    validate(cfg);

    if (chosen == "kernels") return cmd_kernels(cfg);
    if (chosen == "propagate") return cmd_propagate(cfg);
    if (chosen == "spectrum") return cmd_spectrum(cfg);
    if (chosen == "heat") return cmd_heat(cfg);
    if (chosen == "verify") return cmd_verify(cfg);
    if (chosen == "sweep") return cmd_sweep(cfg);
    if (chosen == "oracle") return cmd_oracle(cfg);
    throw ConfigError("no subcommand selected");
  } catch (const ConfigError& e) {
    std::cerr << "qheat: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qheat: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace qheat::cli
