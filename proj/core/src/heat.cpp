#include "qheat/heat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qheat/errors.hpp"

namespace qheat::heat {

namespace {

constexpr double kVFloor = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ln k! either from lgamma or from a prebuilt table holding the same values.
double log_factorial(int k, const std::vector<double>* table) {
  return table ? (*table)[k] : std::lgamma(k + 1.0);
}

double log_binomial(int n, int k, const std::vector<double>* table = nullptr) {
  return log_factorial(n, table) - log_factorial(k, table) - log_factorial(n - k, table);
}

double gibbs_tail(double beta, double omega0, int l_max) {
  return std::exp(-beta * omega0 * (l_max + 1)) / -std::expm1(-beta * omega0);
}

}  // namespace

HeatSetup::HeatSetup(double beta_s_, double beta_b_, double omega0_, int l_max_)
    : beta_s(beta_s_), beta_b(beta_b_), omega0(omega0_), l_max(l_max_) {
  if (!(beta_s > 0.0)) throw DomainError("HeatSetup: beta_s must be > 0");
  if (!(beta_b > 0.0)) throw DomainError("HeatSetup: beta_b must be > 0");
  if (!(omega0 > 0.0)) throw DomainError("HeatSetup: omega0 must be > 0");
  if (l_max < 1) throw DomainError("HeatSetup: l_max must be >= 1");
  if (gibbs_tail(beta_s, omega0, l_max) >= 1e-10)
    throw TruncationError("HeatSetup: Gibbs tail above 1e-10; increase l_max");
}

double HeatDistribution::mass() const {
  double sum = 0.0;
  for (double p : probs) sum += p;
  return sum;
}

double HeatDistribution::mean() const {
  double sum = 0.0;
  for (int q = -l_max; q <= l_max; ++q) sum += q * omega0 * prob(q);
  return sum;
}

double HeatDistribution::second_moment() const {
  double sum = 0.0;
  for (int q = -l_max; q <= l_max; ++q) sum += q * q * omega0 * omega0 * prob(q);
  return sum;
}

double partition_function(double beta, double omega0) {
  if (!(beta * omega0 > 0.0))
    throw DomainError("partition_function: beta * omega0 must be > 0 (divergent trace)");
  return 1.0 / -std::expm1(-beta * omega0);
}

double nbar(double beta, double omega0, Complex u, double v) {
  if (!(beta * omega0 > 0.0)) throw DomainError("nbar: beta * omega0 must be > 0");
  return std::norm(u) / std::expm1(beta * omega0) + v;
}

double characteristic_function(double xi, const HeatSetup& setup, Complex u, double v) {
  if (xi <= -setup.beta_s)
    throw DomainError("characteristic_function: partition pole (xi <= -beta_s)");
  const double n = nbar(setup.beta_s + xi, setup.omega0, u, v);
  const double den = 1.0 + (1.0 - std::exp(xi * setup.omega0)) * n;
  if (den <= 0.0)
    throw DomainError("characteristic_function: outside MGF strip (denominator = " +
                      std::to_string(den) + " at xi = " + std::to_string(xi) + ")");
  const double z_ratio = -std::expm1(-setup.beta_s * setup.omega0) /
                         -std::expm1(-(setup.beta_s + xi) * setup.omega0);
  return z_ratio / den;
}

double mean_heat(const HeatSetup& setup, Complex u, double v) {
  return setup.omega0 * (v + (1.0 - std::norm(u)) / -std::expm1(setup.beta_s * setup.omega0));
}

double effective_beta(double omega0, Complex u, double v) {
  if (!(omega0 > 0.0)) throw DomainError("effective_beta: omega0 must be > 0");
  const double u2 = std::norm(u);
  if (u2 > 1.0 + 1e-12) throw DomainError("effective_beta: |u| must be <= 1");
  if (!(v > kVFloor))
    throw DomainError("effective_beta: undefined below the v floor (0/0 at t = 0)");
  return std::log1p(std::max(0.0, 1.0 - u2) / v) / omega0;
}

double initial_level_prob(const HeatSetup& setup, int l) {
  if (l < 0 || l > setup.l_max)
    throw DomainError("initial_level_prob: level outside [0, l_max]");
  return std::exp(-setup.beta_s * setup.omega0 * l) *
         -std::expm1(-setup.beta_s * setup.omega0);
}

namespace {

double log_transition_core(double u2, double v, int l, int l_prime,
                           const std::vector<double>* lnfact) {
  if (v == 0.0) {
    // Lossy beam-splitter limit: P = C(l, l') u2^{l'} (1 - u2)^{l - l'}.
    if (u2 >= 1.0) return l == l_prime ? 0.0 : kNegInf;
    if (l_prime > l) return kNegInf;
    double lp = log_binomial(l, l_prime, lnfact) + (l - l_prime) * std::log1p(-u2);
    if (l_prime > 0) lp += l_prime * std::log(u2);
    return lp;
  }

  const double ln_m = -std::log1p(v);
  const double ln_j2 = std::log(v) - std::log1p(v);
  const double ln_1mj3 = std::log(1.0 + v - u2) - std::log1p(v);
  const double ln_r =
      u2 > 0.0 ? std::log(u2) - std::log(v) - std::log(1.0 + v - u2) : kNegInf;

  const int m_max = std::min(l, l_prime);
  double peak = kNegInf;
  std::vector<double> term(m_max + 1);
  for (int m = 0; m <= m_max; ++m) {
    term[m] = (m == 0) ? 0.0
                       : log_binomial(l, m, lnfact) + log_binomial(l_prime, m, lnfact) +
                             m * ln_r;
    peak = std::max(peak, term[m]);
  }
  double sum = 0.0;
  for (int m = 0; m <= m_max; ++m) sum += std::exp(term[m] - peak);
  return ln_m + l_prime * ln_j2 + l * ln_1mj3 + peak + std::log(sum);
}

}  // namespace

double log_transition_probability(Complex u, double v, int l, int l_prime) {
  if (l < 0 || l_prime < 0)
    throw DomainError("transition_probability: levels must be >= 0");
  if (v < 0.0) throw DomainError("transition_probability: v must be >= 0");
  const double u2 = std::norm(u);
  if (u2 > 1.0 + 1e-12) throw DomainError("transition_probability: |u|^2 must be <= 1");
  return log_transition_core(std::min(u2, 1.0), v, l, l_prime, nullptr);
}

double transition_probability(Complex u, double v, int l, int l_prime) {
  const double lp = log_transition_probability(u, v, l, l_prime);
  return lp == kNegInf ? 0.0 : std::exp(lp);
}

HeatDistribution heat_distribution(const HeatSetup& setup, Complex u, double v) {
  if (v < 0.0) throw DomainError("heat_distribution: v must be >= 0");
  const double u2 = std::norm(u);
  if (u2 > 1.0 + 1e-12) throw DomainError("heat_distribution: |u|^2 must be <= 1");
  const int L = setup.l_max;
  HeatDistribution dist{setup.omega0, L, std::vector<double>(2 * L + 1, 0.0)};
  const double ln_z0 = std::log(-std::expm1(-setup.beta_s * setup.omega0));
  std::vector<double> lnfact(L + 1);
  for (int k = 0; k <= L; ++k) lnfact[k] = std::lgamma(k + 1.0);
  // Every initial level up to l_max participates: the exponential reweighting
  // in the fluctuation-theorem checks magnifies deep Gibbs-tail rows.
  for (int l = 0; l <= L; ++l) {
    const double ln_pl = -setup.beta_s * setup.omega0 * l + ln_z0;
    for (int lp = 0; lp <= L; ++lp) {
      const double ln_t = log_transition_core(std::min(u2, 1.0), v, l, lp, &lnfact);
      if (ln_t == kNegInf) continue;
      dist.probs[lp - l + L] += std::exp(ln_pl + ln_t);
    }
  }
  const double deficit = std::abs(1.0 - dist.mass());
  if (deficit > 1e-6)
    throw TruncationError("heat_distribution: tail mass " + std::to_string(deficit) +
                          " escapes the level window; increase l_max");
  return dist;
}

double integral_ft_value(const HeatDistribution& dist, double beta_weight) {
  double peak = kNegInf;
  for (int q = -dist.l_max; q <= dist.l_max; ++q) {
    const double p = dist.prob(q);
    if (p > 0.0) peak = std::max(peak, std::log(p) + beta_weight * q * dist.omega0);
  }
  if (peak == kNegInf) return 0.0;
  double sum = 0.0;
  for (int q = -dist.l_max; q <= dist.l_max; ++q) {
    const double p = dist.prob(q);
    if (p > 0.0) sum += std::exp(std::log(p) + beta_weight * q * dist.omega0 - peak);
  }
  return std::exp(peak) * sum;
}

int adequate_l_max(double beta_s, double omega0, Complex u, double v, int cap) {
  if (!(beta_s * omega0 > 0.0)) throw DomainError("adequate_l_max: beta_s omega0 must be > 0");
  int level = 1;
  while (level <= cap && gibbs_tail(beta_s, omega0, level) >= 1e-10) ++level;
  const double n_eff = nbar(beta_s, omega0, u, v);
  if (n_eff > 0.0) {
    const double ratio = n_eff / (1.0 + n_eff);
    const int thermal =
        static_cast<int>(std::ceil(-10.0 * std::numbers::ln10 / std::log(ratio)));
    level = std::max(level, thermal);
  }
  level = std::max(level, 8);
  if (level > cap)
    throw TruncationError("adequate_l_max: required level cap " + std::to_string(level) +
                          " exceeds the hard cap " + std::to_string(cap));
  return level;
}

std::vector<double> admissible_xi_grid(const HeatSetup& setup, Complex u, double v,
                                       int n_points) {
  if (n_points < 3) throw DomainError("admissible_xi_grid: need at least 3 points");
  // Upper end of the symmetric strip: the permutation image of xi -> -beta_s
  // is beta_eff, and the MGF denominator stays positive up to (at least) there.
  double upper;
  if (v > kVFloor) {
    upper = effective_beta(setup.omega0, u, v);
  } else {
    // No finite beta_eff; bisect the denominator zero directly, cap generously.
    auto den = [&](double xi) {
      return 1.0 + (1.0 - std::exp(xi * setup.omega0)) * nbar(setup.beta_s + xi, setup.omega0, u, v);
    };
    double hi = 1.0 / setup.omega0;
    const double cap = 200.0 / setup.omega0;
    while (hi < cap && den(hi) > 0.0) hi *= 2.0;
    if (den(hi) > 0.0) {
      upper = std::min(hi, cap);
    } else {
      double lo = 0.0;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (den(mid) > 0.0 ? lo : hi) = mid;
      }
      upper = lo;
    }
  }
  const double span = upper + setup.beta_s;
  const double margin = 0.005 * span;
  std::vector<double> grid(n_points);
  const double step = (span - 2.0 * margin) / (n_points - 1);
  for (int j = 0; j < n_points; ++j) grid[j] = -setup.beta_s + margin + j * step;
  return grid;
}

double closed_form_chi(const HeatSetup& setup, double u_abs2, double v, double xi) {
  const double w = setup.omega0;
  const double big_v = v * -std::expm1((setup.beta_s + xi) * w) - u_abs2;
  const double den = std::expm1((setup.beta_s + xi) * w) + big_v * std::expm1(xi * w);
  if (den <= 0.0)
    throw DomainError("closed_form_chi: outside MGF strip at xi = " + std::to_string(xi));
  return std::exp(xi * w) * std::expm1(setup.beta_s * w) / den;
}

MarkovianHeatStats markovian_heat_stats(const HeatSetup& setup,
                                        const spectral::SpectralDensity& sd, double tau,
                                        int xi_points) {
  const double kappa = std::numbers::pi * sd.density(setup.omega0);
  const double u_abs = std::exp(-kappa * tau);
  const double v = spectral::bose_occupation(setup.beta_b, setup.omega0) *
                   -std::expm1(-2.0 * kappa * tau);
  MarkovianHeatStats out;
  out.xi = admissible_xi_grid(setup, Complex(u_abs, 0.0), v, xi_points);
  out.chi.reserve(out.xi.size());
  for (double xi : out.xi) out.chi.push_back(closed_form_chi(setup, u_abs * u_abs, v, xi));
  out.mean_heat = mean_heat(setup, Complex(u_abs, 0.0), v);
  return out;
}

SteadyStateStats steady_state_stats(const HeatSetup& setup,
                                    const spectrum::AsymptoticState& asym, double t,
                                    int xi_points) {
  const Complex u = spectrum::asymptotic_u(asym.bound, t);
  const double v = asym.v(t);
  SteadyStateStats out;
  out.beta_eff = effective_beta(setup.omega0, u, v);
  out.xi = admissible_xi_grid(setup, u, v, xi_points);
  out.chi.reserve(out.xi.size());
  for (double xi : out.xi) out.chi.push_back(closed_form_chi(setup, std::norm(u), v, xi));
  out.mean_heat = mean_heat(setup, u, v);
  return out;
}

}  // namespace qheat::heat
