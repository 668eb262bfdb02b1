#include "qheat/propagator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qheat/errors.hpp"

namespace qheat::propagator {

TimeGrid::TimeGrid(double t_end_, int n_steps_) : t_end(t_end_), n_steps(n_steps_) {
  if (!(t_end > 0.0)) throw DomainError("TimeGrid: t_end must be > 0");
  if (n_steps < 1) throw DomainError("TimeGrid: n_steps must be >= 1");
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> t(n_steps + 1);
  const double h = dt();
  for (int i = 0; i <= n_steps; ++i) t[i] = i * h;
  return t;
}

std::vector<Complex> solve_u(const std::vector<Complex>& mu, double omega0,
                             const TimeGrid& grid) {
  const int n = grid.n_steps;
  if (static_cast<int>(mu.size()) < n + 1)
    throw DomainError("solve_u: kernel samples shorter than the grid");
  const double h = grid.dt();

  std::vector<Complex> u(n + 1);
  u[0] = 1.0;
  const Complex i_w0(0.0, omega0);
  // u_{m+1} [1 + (h/2) i w0 + (h^2/4) mu_0] = u_m + (h/2)(f_m - S_{m+1})
  const Complex denom = 1.0 + 0.5 * h * i_w0 + 0.25 * h * h * mu[0];
  Complex f_prev = -i_w0;  // f(0): convolution over an empty interval vanishes

  for (int m = 0; m < n; ++m) {
    // S = h [ mu_{m+1} u_0 / 2 + sum_{j=1..m} mu_{m+1-j} u_j ]
    double s_re = 0.5 * mu[m + 1].real();  // u[0] = 1
    double s_im = 0.5 * mu[m + 1].imag();
    for (int j = 1; j <= m; ++j) {
      const Complex& k = mu[m + 1 - j];
      const Complex& uj = u[j];
      s_re += k.real() * uj.real() - k.imag() * uj.imag();
      s_im += k.real() * uj.imag() + k.imag() * uj.real();
    }
    const Complex S = h * Complex(s_re, s_im);
    const Complex next = (u[m] + 0.5 * h * (f_prev - S)) / denom;
    u[m + 1] = next;
    if (std::abs(next) > 1.0 + 1e-6)
      throw SolverError("solve_u: |u| exceeded 1 + 1e-6 at t = " +
                        std::to_string((m + 1) * h) + "; reduce dt");
    f_prev = -i_w0 * next - (S + 0.5 * h * mu[0] * next);
  }
  return u;
}

std::vector<Complex> solve_u(const spectral::SpectralDensity& sd, double omega0,
                             const TimeGrid& grid, double omega_cap) {
  // A dummy positive temperature; only mu is consumed here.
  if (sd.is_discrete() && omega_cap == 0.0) {
    std::vector<Complex> mu(grid.n_steps + 1);
    const double h = grid.dt();
    for (int i = 0; i <= grid.n_steps; ++i) mu[i] = sd.memory_kernel(i * h);
    return solve_u(mu, omega0, grid);
  }
  const auto samples = spectral::sample_kernels(sd, 1.0, grid.times(), omega_cap);
  return solve_u(samples.mu, omega0, grid);
}

std::vector<double> solve_v(const std::vector<Complex>& nu,
                            const std::vector<Complex>& u, const TimeGrid& grid) {
  const int n = grid.n_steps;
  if (static_cast<int>(nu.size()) < n + 1)
    throw DomainError("solve_v: kernel samples shorter than the grid");
  if (static_cast<int>(u.size()) < n + 1)
    throw DomainError("solve_v: u shorter than the grid");
  const double h = grid.dt();
  const double h2 = h * h;
  const double nu0 = nu[0].real();

  std::vector<double> v(n + 1);
  v[0] = 0.0;
  // Split the double trapezoidal sum into the strict lower triangle T (its
  // mirror is the exact conjugate) plus the diagonal D:
  //   v_m = h^2 [ 2 Re T_m + nu0 (B_m - 3/4 |u_0|^2 - 3/4 |u_m|^2) ]
  Complex A = 0.0;   // sum_{i<=m} u_i* H_i with unit weights
  double B = std::norm(u[0]);
  for (int m = 1; m <= n; ++m) {
    double h_re = 0.5 * nu[m].real();  // u[0] = 1
    double h_im = 0.5 * nu[m].imag();
    for (int j = 1; j < m; ++j) {
      const Complex& k = nu[m - j];
      const Complex& uj = u[j];
      h_re += k.real() * uj.real() - k.imag() * uj.imag();
      h_im += k.real() * uj.imag() + k.imag() * uj.real();
    }
    const Complex H(h_re, h_im);
    const Complex um_conj = std::conj(u[m]);
    const Complex T = A + 0.5 * um_conj * H;
    B += std::norm(u[m]);
    const double D = nu0 * (B - 0.75 * std::norm(u[0]) - 0.75 * std::norm(u[m]));
    v[m] = h2 * (2.0 * T.real() + D);
    if (v[m] < -1e-9)
      throw NumericalError("solve_v: negative noise function (kernel/grid inconsistency)",
                           -v[m]);
    A += um_conj * H;
  }
  return v;
}

std::vector<double> solve_v(const spectral::SpectralDensity& sd, double beta_b,
                            const std::vector<Complex>& u, const TimeGrid& grid,
                            double omega_cap) {
  const auto samples = spectral::sample_kernels(sd, beta_b, grid.times(), omega_cap);
  return solve_v(samples.nu, u, grid);
}

Trajectory solve_trajectory(const spectral::SpectralDensity& sd, double omega0,
                            double beta_b, const TimeGrid& grid, double omega_cap) {
  const auto samples = spectral::sample_kernels(sd, beta_b, grid.times(), omega_cap);
  Trajectory traj{grid, solve_u(samples.mu, omega0, grid), {}, beta_b};
  traj.v = solve_v(samples.nu, traj.u, grid);
  return traj;
}

Trajectory markovian_trajectory(const spectral::SpectralDensity& sd, double omega0,
                                double beta_b, const TimeGrid& grid) {
  if (!(beta_b > 0.0)) throw DomainError("markovian_trajectory: beta_b must be > 0");
  const double kappa = std::numbers::pi * sd.density(omega0);
  const double delta = sd.lamb_shift(omega0);
  const double nbar = spectral::bose_occupation(beta_b, omega0);
  Trajectory traj{grid, {}, {}, beta_b};
  traj.u.resize(grid.n_steps + 1);
  traj.v.resize(grid.n_steps + 1);
  const double h = grid.dt();
  for (int i = 0; i <= grid.n_steps; ++i) {
    const double t = i * h;
    traj.u[i] = std::exp(-kappa * t) * std::polar(1.0, -(omega0 + delta) * t);
    traj.v[i] = nbar * -std::expm1(-2.0 * kappa * t);
  }
  traj.u[0] = 1.0;
  traj.v[0] = 0.0;
  return traj;
}

MasterCoefficients master_coefficients(const Trajectory& traj) {
  const int n = traj.grid.n_steps;
  const double h = traj.grid.dt();
  MasterCoefficients mc;
  mc.times = traj.grid.times();
  mc.omega.resize(n + 1);
  mc.gamma.resize(n + 1);
  mc.gamma_beta.resize(n + 1);

  auto du = [&](int i) -> Complex {
    if (i == 0) return (-3.0 * traj.u[0] + 4.0 * traj.u[1] - traj.u[2]) / (2.0 * h);
    if (i == n) return (3.0 * traj.u[n] - 4.0 * traj.u[n - 1] + traj.u[n - 2]) / (2.0 * h);
    return (traj.u[i + 1] - traj.u[i - 1]) / (2.0 * h);
  };
  auto dv = [&](int i) -> double {
    if (i == 0) return (-3.0 * traj.v[0] + 4.0 * traj.v[1] - traj.v[2]) / (2.0 * h);
    if (i == n) return (3.0 * traj.v[n] - 4.0 * traj.v[n - 1] + traj.v[n - 2]) / (2.0 * h);
    return (traj.v[i + 1] - traj.v[i - 1]) / (2.0 * h);
  };

  for (int i = 0; i <= n; ++i) {
    if (std::abs(traj.u[i]) <= 1e-10)
      throw SolverError("master_coefficients: u crosses zero at index " + std::to_string(i));
    const Complex ratio = du(i) / traj.u[i];
    mc.omega[i] = -ratio.imag();
    mc.gamma[i] = -ratio.real();
    mc.gamma_beta[i] = dv(i) + 2.0 * traj.v[i] * mc.gamma[i];
  }
  return mc;
}

}  // namespace qheat::propagator
