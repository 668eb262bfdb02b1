// heat.hpp — Two-point-measurement heat statistics and fluctuation-theorem checks

#pragma once

#include <vector>

#include "qheat/spectral.hpp"
#include "qheat/spectrum.hpp"
#include "qheat/types.hpp"

namespace qheat::heat {

// Temperatures, oscillator frequency and the Fock truncation level. The
// constructor rejects an l_max whose Gibbs tail exceeds 1e-10.
struct HeatSetup {
  HeatSetup(double beta_s, double beta_b, double omega0, int l_max);
  double beta_s;
  double beta_b;
  double omega0;
  int l_max;
};

// Probability mass over discrete heat values Q = q * omega0, q in [-l_max, l_max].
struct HeatDistribution {
  double omega0 = 0.0;
  int l_max = 0;
  std::vector<double> probs;  // index q + l_max

  double prob(int q) const { return probs[q + l_max]; }
  double mass() const;
  double mean() const;           // sum Q P(Q)
  double second_moment() const;  // sum Q^2 P(Q)
};

// Z(beta) = 1 / (1 - e^{-beta omega0}).
double partition_function(double beta, double omega0);

// n(beta, tau) = |u|^2 / (e^{beta omega0} - 1) + v.
double nbar(double beta, double omega0, Complex u, double v);

// chi_tau(xi) = Z(beta_s + xi)/Z(beta_s) [1 + (1 - e^{xi omega0}) n(beta_s + xi)]^{-1};
// chi(0) = 1 exactly. Throws outside (-beta_s, xi_zero).
double characteristic_function(double xi, const HeatSetup& setup, Complex u, double v);

// <Q> = omega0 [v + (1 - |u|^2) / (1 - e^{beta_s omega0})], the xi-derivative
// of chi at 0 in closed form.
double mean_heat(const HeatSetup& setup, Complex u, double v);

// beta_eff = ln[1 + (1 - |u|^2)/v] / omega0. Undefined (error) below the
// v floor of 1e-12; the t = 0 limit is 0/0.
double effective_beta(double omega0, Complex u, double v);

// Gibbs weight e^{-beta_s omega0 l} / Z(beta_s).
double initial_level_prob(const HeatSetup& setup, int l);

// P_{l'l} of the Gaussian channel specified by (u, v); binomial products
// accumulate in log space so levels up to a few hundred stay finite.
double transition_probability(Complex u, double v, int l, int l_prime);
double log_transition_probability(Complex u, double v, int l, int l_prime);

// Mass at Q = (l' - l) omega0 is sum P_l(0) P_{l'l}. Throws TruncationError
// when more than 1e-6 of the mass escapes the level window.
HeatDistribution heat_distribution(const HeatSetup& setup, Complex u, double v);

// sum_q P(q omega0) e^{beta_weight q omega0}, log-sum-exp guarded. With
// beta_weight = beta_eff - beta_s this is the generalized fluctuation theorem
// value (equal to one up to truncation error).
double integral_ft_value(const HeatDistribution& dist, double beta_weight);

// Smallest level cap with both the initial Gibbs tail and the evolved thermal
// tail below 1e-10; throws TruncationError beyond `cap`.
int adequate_l_max(double beta_s, double omega0, Complex u, double v, int cap = 512);

// Uniform xi grid spanning the strip where both xi and its permutation image
// beta_eff - beta_s - xi are admissible.
std::vector<double> admissible_xi_grid(const HeatSetup& setup, Complex u, double v,
                                       int n_points = 41);

// chi(xi) evaluated from the (|u|^2, v) closed form
// e^{xi w}(e^{bs w} - 1) / (e^{(bs+xi) w} - 1 + V(xi)(e^{xi w} - 1)),
// V = v (1 - e^{(bs+xi) w}) - |u|^2. Algebraically identical to
// characteristic_function; kept as the independent route for identity tests.
double closed_form_chi(const HeatSetup& setup, double u_abs2, double v, double xi);

struct MarkovianHeatStats {
  std::vector<double> xi;
  std::vector<double> chi;
  double mean_heat = 0.0;
};

// Born–Markov closed forms at time tau.
MarkovianHeatStats markovian_heat_stats(const HeatSetup& setup,
                                        const spectral::SpectralDensity& sd, double tau,
                                        int xi_points = 41);

struct SteadyStateStats {
  double beta_eff = 0.0;
  std::vector<double> xi;
  std::vector<double> chi;
  double mean_heat = 0.0;
};

// Long-time statistics from the bound-state asymptotics; oscillates at the
// beat frequency when two bound states are present.
SteadyStateStats steady_state_stats(const HeatSetup& setup,
                                    const spectrum::AsymptoticState& asym, double t,
                                    int xi_points = 41);

}  // namespace qheat::heat
