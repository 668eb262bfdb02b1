// propagator.hpp — Volterra dissipation/noise solver and Born–Markov baseline

#pragma once

#include <vector>

#include "qheat/spectral.hpp"
#include "qheat/types.hpp"

namespace qheat::propagator {

// Uniform grid t_i = i * dt, i = 0..n_steps.
struct TimeGrid {
  TimeGrid(double t_end, int n_steps);
  double t_end;
  int n_steps;
  double dt() const { return t_end / n_steps; }
  std::vector<double> times() const;
};

// Dissipation amplitude u(t) and thermal noise v(t) on a grid.
// u[0] = 1 and v[0] = 0 exactly; |u| <= 1 and v >= 0 up to solver tolerance.
struct Trajectory {
  TimeGrid grid;
  std::vector<Complex> u;
  std::vector<double> v;
  double beta_b = 0.0;
};

// Time-local master-equation coefficients: renormalized frequency
// Omega(t) = -Im[du/u], dissipation gamma(t) = -Re[du/u], and noise
// gamma_beta(t) = dv + 2 v gamma.
struct MasterCoefficients {
  std::vector<double> times;
  std::vector<double> omega;
  std::vector<double> gamma;
  std::vector<double> gamma_beta;
};

// du + i w0 u + int_0^t mu(t - t') u(t') dt' = 0, u(0) = 1.
// Trapezoidal memory convolution over pre-tabulated kernel samples; the
// implicit trapezoidal step (the converged corrector) is solved in closed form.
std::vector<Complex> solve_u(const std::vector<Complex>& mu_samples, double omega0,
                             const TimeGrid& grid);
std::vector<Complex> solve_u(const spectral::SpectralDensity& sd, double omega0,
                             const TimeGrid& grid, double omega_cap = 0.0);

// v(t) = int_0^t int_0^t u*(t1) nu(t1 - t2) u(t2) dt1 dt2, evaluated for every
// grid point in O(n^2) total work via one running inner convolution per outer
// step; nu(-t) enters through conjugate symmetry, which makes the double sum
// exactly real.
std::vector<double> solve_v(const std::vector<Complex>& nu_samples,
                            const std::vector<Complex>& u, const TimeGrid& grid);
std::vector<double> solve_v(const spectral::SpectralDensity& sd, double beta_b,
                            const std::vector<Complex>& u, const TimeGrid& grid,
                            double omega_cap = 0.0);

Trajectory solve_trajectory(const spectral::SpectralDensity& sd, double omega0,
                            double beta_b, const TimeGrid& grid, double omega_cap = 0.0);

// Born–Markov closed forms u = e^{-kt - i(w0 + Delta) t},
// v = n(beta_b, w0) (1 - e^{-2kt}) with k = pi J(w0).
Trajectory markovian_trajectory(const spectral::SpectralDensity& sd, double omega0,
                                double beta_b, const TimeGrid& grid);

// Central finite differences (one-sided at the endpoints).
MasterCoefficients master_coefficients(const Trajectory& traj);

}  // namespace qheat::propagator
