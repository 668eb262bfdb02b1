// spectrum.hpp — Bound states of the total Hamiltonian and asymptotic u, v

#pragma once

#include <vector>

#include "qheat/spectral.hpp"
#include "qheat/types.hpp"

namespace qheat::spectrum {

struct BoundState {
  double energy;  // isolated pole outside the continuum
  double weight;  // residue Z = [1 + int J(w) dw / (E - w)^2]^{-1}, in (0, 1]
};

struct BoundStateSet {
  std::vector<BoundState> states;  // sorted ascending in energy; 0, 1 or 2 entries
  int count() const { return static_cast<int>(states.size()); }
  double total_weight() const;
};

// Long-time decomposition of v: a constant part plus, with two bound states,
// a cross term oscillating at the level splitting.
struct AsymptoticState {
  BoundStateSet bound;
  double v_constant = 0.0;
  double v_cross_amplitude = 0.0;
  double beat_frequency = 0.0;  // |E+ - E-|; 0 unless two bound states
  double v(double t) const;
};

// y(E) - E with y(E) = w0 - int J(w) / (w - E) dw; E must lie strictly
// outside the continuum support.
double pole_function(const spectral::SpectralDensity& sd, double omega0, double E);

// Residue weight at an energy outside the support.
double residue_weight(const spectral::SpectralDensity& sd, double E);

// Root search for y(E) = E. Ohmic: at most one root on E < 0; semicircle:
// independent searches below and above the band, at most one root each.
BoundStateSet find_bound_states(const spectral::SpectralDensity& sd, double omega0);

// Branch-cut background Theta(w) = J(w) / ([w - w0 - Delta(w)]^2 + [pi J(w)]^2);
// zero outside the support.
double background_theta(const spectral::SpectralDensity& sd, double omega0, double omega);

// int Theta(w) dw over the support; completeness gives sum Z + int Theta = 1.
double theta_integral(const spectral::SpectralDensity& sd, double omega0);

// u(t -> inf) = sum_n Z_n e^{-i E_n t}; zero for an empty set.
Complex asymptotic_u(const BoundStateSet& bound, double t);

// v(t -> inf) = int J n [Theta + sum_{nm} Z_m Z_n cos((E_m - E_n) t) /
// ((w - E_m)(w - E_n))] dw, evaluated by quadrature.
double asymptotic_v(const spectral::SpectralDensity& sd, double omega0, double beta_b,
                    const BoundStateSet& bound, double t);

// Precomputed constant/beat decomposition of the asymptotic v.
AsymptoticState asymptotic_state(const spectral::SpectralDensity& sd, double omega0,
                                 double beta_b, const BoundStateSet& bound);

}  // namespace qheat::spectrum
