#include <cmath>
#include <complex>
#include <doctest.h>
#include <numbers>
#include <random>

#include "qheat/errors.hpp"
#include "qheat/heat.hpp"
#include "qheat/periodogram.hpp"
#include "qheat/propagator.hpp"
#include "qheat/spectral.hpp"
#include "qheat/spectrum.hpp"

using namespace qheat;
using spectral::SpectralDensity;

namespace {
heat::HeatSetup fig2_setup(int l_max = 160) { return heat::HeatSetup(1.2, 0.2, 1.0, l_max); }
}  // namespace

TEST_CASE("partition function") {
  CHECK(heat::partition_function(std::log(2.0), 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(heat::partition_function(60.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(heat::partition_function(1.2, 1.0) == doctest::Approx(1.4310128).epsilon(1e-6));
  CHECK_THROWS_AS(heat::partition_function(-0.5, 1.0), DomainError);
  CHECK_THROWS_AS(heat::partition_function(0.0, 1.0), DomainError);
}

TEST_CASE("nbar: occupation bookkeeping") {
  CHECK(heat::nbar(1.2, 1.0, Complex(1.0, 0.0), 0.0) ==
        doctest::Approx(1.0 / std::expm1(1.2)).epsilon(1e-14));
  CHECK(heat::nbar(1.2, 1.0, Complex(0.0, 0.0), 0.37) == doctest::Approx(0.37));
  CHECK(heat::nbar(0.2, 1.0, Complex(0.0, 0.0), 4.51665) ==
        doctest::Approx(4.51665).epsilon(1e-12));
  // the Bose value itself
  CHECK(1.0 / std::expm1(0.2) == doctest::Approx(4.51665).epsilon(1e-5));
  CHECK_THROWS_AS(heat::nbar(-1.0, 1.0, Complex(0.5, 0.0), 0.1), DomainError);
}

TEST_CASE("characteristic function: normalization and domain") {
  const auto setup = fig2_setup();
  CHECK(heat::characteristic_function(0.0, setup, Complex(0.6, 0.1), 0.8) == 1.0);

  // no evolution, no heat: chi telescopes to 1 for every admissible xi
  for (double xi : {-1.0, -0.3, 0.4, 2.0, 5.0})
    CHECK(std::abs(heat::characteristic_function(xi, setup, Complex(1.0, 0.0), 0.0) - 1.0) <
          1e-13);

  CHECK_THROWS_AS(heat::characteristic_function(-1.2, setup, Complex(0.5, 0.0), 0.5),
                  DomainError);
  CHECK_THROWS_AS(heat::characteristic_function(-2.0, setup, Complex(0.5, 0.0), 0.5),
                  DomainError);
  // far beyond the MGF strip the denominator flips sign
  CHECK_THROWS_AS(heat::characteristic_function(40.0, setup, Complex(0.5, 0.0), 0.5),
                  DomainError);
}

TEST_CASE("mean heat: closed form") {
  const auto setup = fig2_setup();
  CHECK(heat::mean_heat(setup, Complex(1.0, 0.0), 0.0) == doctest::Approx(0.0));
  // long-time Markov limit: w0 [n(beta_b) - n(beta_s)]
  const double nb = 1.0 / std::expm1(0.2);
  const double ns = 1.0 / std::expm1(1.2);
  CHECK(heat::mean_heat(setup, Complex(0.0, 0.0), nb) ==
        doctest::Approx(nb - ns).epsilon(1e-12));
  // frozen value from Bose-function arithmetic: 4.51665 - 0.4310125 = 4.0856375
  CHECK(heat::mean_heat(setup, Complex(0.0, 0.0), 4.51665) ==
        doctest::Approx(4.0856375).epsilon(1e-6));
}

TEST_CASE("mean heat equals the finite-difference derivative of chi") {
  const auto setup = fig2_setup();
  const Complex u(0.55, -0.2);
  const double v = 1.7;
  const double h = 1e-5;
  const double fd = (heat::characteristic_function(h, setup, u, v) -
                     heat::characteristic_function(-h, setup, u, v)) /
                    (2.0 * h);
  CHECK(heat::mean_heat(setup, u, v) == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("effective beta: Markov family pins the bath temperature") {
  const auto sd = SpectralDensity::ohmic(0.05, 1.0, 10.0);
  const propagator::TimeGrid grid(20.0, 20);
  const auto ma = propagator::markovian_trajectory(sd, 1.0, 0.2, grid);
  for (int i = 1; i <= 20; ++i)
    CHECK(std::abs(heat::effective_beta(1.0, ma.u[i], ma.v[i]) - 0.2) <= 1e-12);

  const double nb = 1.0 / std::expm1(0.2);
  CHECK(heat::effective_beta(1.0, Complex(0.0, 0.0), nb) ==
        doctest::Approx(0.2).epsilon(1e-13));

  CHECK_THROWS_AS(heat::effective_beta(1.0, Complex(0.8, 0.0), 0.0), DomainError);
  CHECK_THROWS_AS(heat::effective_beta(1.0, Complex(0.8, 0.0), 1e-13), DomainError);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Complex u = std::polar(uni(rng), 6.28 * uni(rng));
    CHECK(heat::effective_beta(1.0, u, 1e-6 + 8.0 * uni(rng)) >= 0.0);
  }
}

TEST_CASE("initial level probabilities: geometric Gibbs weights") {
  const auto setup = fig2_setup();
  CHECK(heat::initial_level_prob(setup, 0) ==
        doctest::Approx(-std::expm1(-1.2)).epsilon(1e-14));
  for (int l : {0, 3, 17})
    CHECK(heat::initial_level_prob(setup, l + 1) / heat::initial_level_prob(setup, l) ==
          doctest::Approx(std::exp(-1.2)).epsilon(1e-12));
  double mass = 0.0;
  for (int l = 0; l <= setup.l_max; ++l) mass += heat::initial_level_prob(setup, l);
  CHECK(mass >= 1.0 - 1e-10);
  CHECK_THROWS_AS(heat::initial_level_prob(setup, -1), DomainError);
  CHECK_THROWS_AS(heat::initial_level_prob(setup, setup.l_max + 1), DomainError);
}

TEST_CASE("transition probability: vacuum column is geometric") {
  const double v = 1.9;
  double sum = 0.0;
  for (int lp = 0; lp < 400; ++lp) {
    const double p = heat::transition_probability(Complex(0.0, 0.0), v, 0, lp);
    CHECK(p == doctest::Approx(std::pow(v, lp) / std::pow(1.0 + v, lp + 1.0))
                   .epsilon(1e-11));
    sum += p;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("transition probability: identity and beam-splitter limits") {
  for (int l : {0, 2, 9})
    for (int lp : {0, 2, 9})
      CHECK(heat::transition_probability(Complex(1.0, 0.0), 0.0, l, lp) ==
            (l == lp ? 1.0 : 0.0));

  // v = 0, |u| < 1: binomial loss channel
  const Complex u(0.8, 0.3);  // |u|^2 = 0.73
  const double u2 = std::norm(u);
  double sum = 0.0;
  for (int lp = 0; lp <= 12; ++lp) {
    const double p = heat::transition_probability(u, 0.0, 12, lp);
    const double binom = std::exp(std::lgamma(13.0) - std::lgamma(lp + 1.0) -
                                  std::lgamma(13.0 - lp));
    CHECK(p == doctest::Approx(binom * std::pow(u2, lp) * std::pow(1.0 - u2, 12 - lp))
                   .epsilon(1e-10));
    sum += p;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(heat::transition_probability(u, 0.0, 3, 7) == 0.0);

  CHECK_THROWS_AS(heat::transition_probability(u, -0.1, 1, 1), DomainError);
  CHECK_THROWS_AS(heat::transition_probability(Complex(1.1, 0.0), 0.5, 1, 1), DomainError);
  CHECK_THROWS_AS(heat::transition_probability(u, 0.5, -1, 1), DomainError);
}

TEST_CASE("transition probability: detailed balance for random channels") {
  std::mt19937 rng(20240613);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    const Complex u = std::polar(uni(rng), 2.0 * std::numbers::pi * uni(rng));
    const double v = 1e-4 + 10.0 * uni(rng);
    const int l = static_cast<int>(uni(rng) * 41);
    const int lp = static_cast<int>(uni(rng) * 41);
    const double beff = heat::effective_beta(1.0, u, v);
    const double lhs = heat::log_transition_probability(u, v, l, lp) -
                       heat::log_transition_probability(u, v, lp, l);
    const double rhs = -beff * 1.0 * (lp - l);
    CHECK(std::abs(std::expm1(lhs - rhs)) <= 1e-10);
  }
}

TEST_CASE("transition probability: column stochasticity at high levels") {
  const Complex u(0.55, 0.35);
  const double v = 2.3;
  for (int l : {40, 150, 300}) {
    double sum = 0.0;
    for (int lp = 0; lp <= 900; ++lp) sum += heat::transition_probability(u, v, l, lp);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("heat setup and level-cap rule") {
  CHECK_THROWS_AS(heat::HeatSetup(1.2, 0.2, 1.0, 4), TruncationError);
  CHECK_THROWS_AS(heat::HeatSetup(-1.0, 0.2, 1.0, 64), DomainError);
  CHECK_THROWS_AS(heat::HeatSetup(1.2, 0.0, 1.0, 64), DomainError);

  const int l = heat::adequate_l_max(1.2, 1.0, Complex(0.2, 0.1), 4.5);
  CHECK(l >= 100);  // hot-bath occupation needs a deep Fock window
  CHECK(l <= 512);
  // both tails below 1e-10 at the returned level
  CHECK(std::exp(-1.2 * (l + 1)) / -std::expm1(-1.2) < 1e-10);
  const double n_eff = heat::nbar(1.2, 1.0, Complex(0.2, 0.1), 4.5);
  CHECK(std::pow(n_eff / (1.0 + n_eff), l + 1) < 1e-10);
  CHECK_THROWS_AS(heat::adequate_l_max(1.2, 1.0, Complex(0.0, 0.0), 1e6),
                  TruncationError);
}

TEST_CASE("heat distribution: point mass, moments, truncation error") {
  const auto setup = fig2_setup();
  {
    const auto dist = heat::heat_distribution(setup, Complex(1.0, 0.0), 0.0);
    CHECK(dist.prob(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dist.mean() == doctest::Approx(0.0));
  }
  {
    const Complex u(0.5, -0.3);
    const double v = 2.4;
    const auto dist = heat::heat_distribution(setup, u, v);
    CHECK(std::abs(dist.mass() - 1.0) <= 1e-8);
    const double want = heat::mean_heat(setup, u, v);
    CHECK(std::abs(dist.mean() - want) <= 1e-6 * std::abs(want));
    // second moment against the finite-difference curvature of chi
    const double h = 1e-4;
    const double chi_p = heat::characteristic_function(h, setup, u, v);
    const double chi_m = heat::characteristic_function(-h, setup, u, v);
    const double fd2 = (chi_p - 2.0 + chi_m) / (h * h);
    CHECK(std::abs(dist.second_moment() - fd2) <= 1e-5 * fd2);
  }
  // inadequate window: Gibbs tail fine but the evolved occupation spills over
  const heat::HeatSetup small(1.2, 0.2, 1.0, 22);
  CHECK_THROWS_AS(heat::heat_distribution(small, Complex(0.1, 0.0), 4.5),
                  TruncationError);
}

TEST_CASE("heat distribution: detailed fluctuation ratio") {
  const auto setup = fig2_setup();
  const Complex u(0.45, 0.25);
  const double v = 1.8;
  const auto dist = heat::heat_distribution(setup, u, v);
  const double beff = heat::effective_beta(setup.omega0, u, v);
  for (int q = -30; q <= 30; ++q) {
    const double p = dist.prob(q);
    const double pm = dist.prob(-q);
    if (p > 1e-12) {
      CHECK(pm / p == doctest::Approx(std::exp((beff - setup.beta_s) * q * setup.omega0))
                          .epsilon(1e-8));
    }
  }
}

TEST_CASE("integral fluctuation theorem values") {
  const auto setup = fig2_setup();
  const Complex u(0.45, 0.25);
  const double v = 1.8;
  const auto dist = heat::heat_distribution(setup, u, v);
  CHECK(heat::integral_ft_value(dist, 0.0) == doctest::Approx(1.0).epsilon(1e-8));
  const double beff = heat::effective_beta(setup.omega0, u, v);
  CHECK(std::abs(heat::integral_ft_value(dist, beff - setup.beta_s) - 1.0) <= 1e-6);
  // the Jarzynski-Wojcik weight deviates off the Markov family
  CHECK(std::abs(heat::integral_ft_value(dist, setup.beta_b - setup.beta_s) - 1.0) >
        1e-3);
}

TEST_CASE("permutation symmetry holds for beta_eff and fails for beta_b") {
  const auto setup = fig2_setup();
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int k = 0; k < 25; ++k) {
    const Complex u = std::polar(0.98 * uni(rng), 2.0 * std::numbers::pi * uni(rng));
    const double v = 0.05 + 6.0 * uni(rng);
    const double beff = heat::effective_beta(setup.omega0, u, v);
    const auto grid = heat::admissible_xi_grid(setup, u, v, 41);
    double worst = 0.0;
    for (double xi : grid) {
      const double a = heat::characteristic_function(xi, setup, u, v);
      const double b =
          heat::characteristic_function(beff - setup.beta_s - xi, setup, u, v);
      worst = std::max(worst, std::abs(a - b) / a);
    }
    CHECK(worst <= 1e-8);
  }
  {
    // strong-coupling-like (u, v): the Jarzynski-Wojcik symmetry breaks
    const Complex u(0.5, 0.0);
    const double v = 2.0;
    const double xi = 0.1;
    const double a = heat::characteristic_function(xi, setup, u, v);
    const double b = heat::characteristic_function(setup.beta_b - setup.beta_s - xi,
                                                   setup, u, v);
    CHECK(std::abs(a - b) / a > 1e-3);
  }
}

TEST_CASE("admissible xi grid is symmetric under the permutation map") {
  const auto setup = fig2_setup();
  const Complex u(0.6, 0.2);
  const double v = 1.1;
  const double beff = heat::effective_beta(setup.omega0, u, v);
  const auto grid = heat::admissible_xi_grid(setup, u, v, 41);
  REQUIRE(grid.size() == 41);
  for (std::size_t j = 0; j < grid.size(); ++j)
    CHECK(grid[j] == doctest::Approx(beff - setup.beta_s - grid[grid.size() - 1 - j])
                         .epsilon(1e-10));
}

TEST_CASE("Markovian heat stats: closed form equals the generic route") {
  const auto setup = fig2_setup();
  const auto sd = SpectralDensity::ohmic(0.05, 1.0, 10.0);
  for (double tau : {0.0, 1.0, 8.0}) {
    const auto stats = heat::markovian_heat_stats(setup, sd, tau);
    const double kappa = std::numbers::pi * sd.density(1.0);
    const Complex u =
        std::exp(-kappa * tau) * std::polar(1.0, -(1.0 + sd.lamb_shift(1.0)) * tau);
    const double v = spectral::bose_occupation(0.2, 1.0) * -std::expm1(-2.0 * kappa * tau);
    for (std::size_t j = 0; j < stats.xi.size(); j += 5) {
      const double generic = heat::characteristic_function(stats.xi[j], setup, u, v);
      CHECK(std::abs(stats.chi[j] - generic) <= 1e-12 * generic);
    }
    CHECK(stats.mean_heat == doctest::Approx(heat::mean_heat(setup, u, v)).epsilon(1e-13));
  }
  // limits
  CHECK(heat::markovian_heat_stats(setup, sd, 0.0).mean_heat == doctest::Approx(0.0));
  const double q_inf = heat::markovian_heat_stats(setup, sd, 1e4).mean_heat;
  CHECK(q_inf == doctest::Approx(1.0 / std::expm1(0.2) - 1.0 / std::expm1(1.2))
                     .epsilon(1e-10));
}

TEST_CASE("steady-state stats across bound-state regimes") {
  {  // no bound state: Z = 0 plateau
    const auto sd = SpectralDensity::ohmic(0.05, 1.0, 10.0);
    const auto setup = fig2_setup(256);
    const auto bound = spectrum::find_bound_states(sd, 1.0);
    const auto asym = spectrum::asymptotic_state(sd, 1.0, 0.2, bound);
    const auto stats = heat::steady_state_stats(setup, asym, 0.0);
    CHECK(stats.mean_heat ==
          doctest::Approx(asym.v_constant + 1.0 / (1.0 - std::exp(1.2))).epsilon(1e-10));
    CHECK(stats.beta_eff ==
          doctest::Approx(std::log1p(1.0 / asym.v_constant)).epsilon(1e-10));
  }
  {  // one bound state: time independence
    const auto sd = SpectralDensity::ohmic(0.15, 1.0, 10.0);
    const auto setup = fig2_setup(256);
    const auto asym = spectrum::asymptotic_state(sd, 1.0, 0.2,
                                                 spectrum::find_bound_states(sd, 1.0));
    const auto s1 = heat::steady_state_stats(setup, asym, 10.0);
    const auto s2 = heat::steady_state_stats(setup, asym, 47.0);
    CHECK(s1.mean_heat == doctest::Approx(s2.mean_heat).epsilon(1e-12));
    CHECK(s1.beta_eff == doctest::Approx(s2.beta_eff).epsilon(1e-12));
  }
  {  // two bound states: lossless oscillation at the level splitting
    const auto sd = SpectralDensity::semicircle(0.15, 0.03, 1.0);
    const heat::HeatSetup setup(1.0, 5.0, 1.05, 64);
    const auto bound = spectrum::find_bound_states(sd, 1.05);
    REQUIRE(bound.count() == 2);
    const auto asym = spectrum::asymptotic_state(sd, 1.05, 5.0, bound);
    const double beat = asym.beat_frequency;
    const double dt_s = 2.0 * std::numbers::pi / beat / 40.0;
    std::vector<double> series;
    for (int i = 0; i < 400; ++i)
      series.push_back(heat::steady_state_stats(setup, asym, i * dt_s).mean_heat);
    const double peak = signal::dominant_frequency(series, dt_s, 0.2 * beat, 2.5 * beat);
    CHECK(std::abs(peak - beat) <= 0.01 * beat);
  }
}
