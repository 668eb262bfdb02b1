// oracle.hpp — Brute-force ground truth: single-particle propagator and a
// small full-Fock-space two-point-measurement simulation

#pragma once

#include <vector>

#include "qheat/heat.hpp"
#include "qheat/propagator.hpp"
#include "qheat/spectral.hpp"
#include "qheat/types.hpp"

namespace qheat::oracle {

// Oscillator + discrete modes in the single-excitation sector; the Hermitian
// matrix h has h00 = omega0, hkk = omega_k, h0k = g_k.
struct SingleParticleModel {
  double omega0;
  std::vector<spectral::BathMode> modes;
};

// One eigendecomposition of h, then u(t) = [e^{-iht}]_00 and
// v(t) = sum_k n(beta_b, omega_k) |[e^{-iht}]_0k|^2; exact for the discrete
// model up to eigensolver precision.
propagator::Trajectory single_particle_u_v(const SingleParticleModel& model,
                                           double beta_b,
                                           const propagator::TimeGrid& grid);

// Truncated product-Fock model: one system mode plus at most three bath modes,
// every mode capped at n_max quanta.
struct FockModel {
  double omega0;
  std::vector<spectral::BathMode> modes;
  int n_max;
  double beta_s;
  double beta_b;
};

struct TransitionMatrix {
  int levels = 0;  // rows/cols 0..levels
  std::vector<double> p;
  double operator()(int l_prime, int l) const { return p[l_prime * (levels + 1) + l]; }
};

struct FockResult {
  TransitionMatrix transitions;
  heat::HeatDistribution dist;
};

// Builds H_tot in the truncated product basis, exponentiates once through the
// eigendecomposition, and assembles P_{l'l} plus the induced heat distribution
// (initial system state: truncated, renormalized Gibbs at beta_s; bath modes:
// truncated, renormalized Gibbs at beta_b).
FockResult fock_two_point_measurement(const FockModel& model, double tau);

}  // namespace qheat::oracle
