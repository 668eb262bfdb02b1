#include <cmath>
#include <complex>
#include <doctest.h>
#include <numbers>

#include "qheat/errors.hpp"
#include "qheat/propagator.hpp"
#include "qheat/quadrature.hpp"
#include "qheat/spectral.hpp"
#include "qheat/spectrum.hpp"

using namespace qheat;
using spectral::SpectralDensity;

TEST_CASE("pole function: bare oscillator and asymptotics") {
  const auto empty = SpectralDensity::discrete({});
  CHECK(spectrum::pole_function(empty, 1.0, 1.0) == doctest::Approx(0.0));
  CHECK(spectrum::pole_function(empty, 1.0, 0.3) == doctest::Approx(0.7));

  const auto ohmic = SpectralDensity::ohmic(0.1, 1.0, 10.0);
  CHECK(spectrum::pole_function(ohmic, 1.0, -1e4) > 1e3);  // -E dominates
  CHECK_THROWS_AS(spectrum::pole_function(ohmic, 1.0, 2.0), DomainError);

  const auto sc = SpectralDensity::semicircle(0.12, 0.03, 1.0);
  CHECK_THROWS_AS(spectrum::pole_function(sc, 1.05, 1.0), DomainError);
}

TEST_CASE("pole function: semicircle closed-form Hilbert transform vs quadrature") {
  const double g = 0.15, zeta = 0.03, Omega = 1.0, w0 = 1.05;
  const auto sc = SpectralDensity::semicircle(g, zeta, Omega);
  for (double E : {0.80, 0.93, 1.08, 1.40}) {
    auto f = [&](double w) { return sc.density(w) / (w - E); };
    const double integral = quad::integrate_doubling(f, sc.support_min(), sc.support_max(),
                                                     {1e-12, 1e-13}, 64, 14);
    const double closed = (g * g / (2.0 * zeta * zeta)) *
                          ((Omega - E) - (E < Omega ? 1.0 : -1.0) *
                                             std::sqrt((Omega - E) * (Omega - E) -
                                                       4.0 * zeta * zeta));
    CHECK(integral == doctest::Approx(closed).epsilon(1e-8));
    CHECK(spectrum::pole_function(sc, w0, E) ==
          doctest::Approx(w0 - integral - E).epsilon(1e-8));
  }
}

TEST_CASE("bound states: Ohmic threshold eta = omega0 / (omega_c Gamma(s))") {
  // below threshold: eta omega_c Gamma(1) = 0.5 < omega0
  const auto weak = SpectralDensity::ohmic(0.05, 1.0, 10.0);
  CHECK(spectrum::find_bound_states(weak, 1.0).count() == 0);

  const auto strong = SpectralDensity::ohmic(0.15, 1.0, 10.0);
  const auto bound = spectrum::find_bound_states(strong, 1.0);
  REQUIRE(bound.count() == 1);
  CHECK(bound.states[0].energy < 0.0);
  CHECK(std::abs(spectrum::pole_function(strong, 1.0, bound.states[0].energy)) <= 1e-12);
  CHECK(bound.states[0].weight > 0.0);
  CHECK(bound.states[0].weight <= 1.0);
}

TEST_CASE("bound states: semicircle thresholds from band-edge sign changes") {
  const double zeta = 0.03, Omega = 1.0, w0 = 1.05;
  // band-edge criteria: upper root iff w0 + g^2/zeta > Omega + 2 zeta,
  // lower root iff w0 - g^2/zeta < Omega - 2 zeta
  const double g_upper = std::sqrt(zeta * (Omega + 2.0 * zeta - w0));
  const double g_lower = std::sqrt(zeta * (w0 - Omega + 2.0 * zeta));
  REQUIRE(g_upper < g_lower);
  int prev = 0;
  for (int i = 0; i <= 120; ++i) {
    const double g = 0.005 + (0.20 - 0.005) * i / 120.0;
    const auto sd = SpectralDensity::semicircle(g, zeta, Omega);
    const auto bound = spectrum::find_bound_states(sd, w0);
    const int expected = g < g_upper ? 0 : (g < g_lower ? 1 : 2);
    if (std::abs(g - g_upper) > 2e-3 && std::abs(g - g_lower) > 2e-3)
      CHECK(bound.count() == expected);
    CHECK(bound.count() >= prev);  // counts only grow with coupling
    prev = bound.count();
    for (const auto& s : bound.states) {
      CHECK(!sd.inside_support(s.energy));
      CHECK(std::abs(spectrum::pole_function(sd, w0, s.energy)) <= 1e-12);
    }
  }
}

TEST_CASE("residue weight: two independent routes agree") {
  auto check_weight = [](const SpectralDensity& sd, double w0) {
    const auto bound = spectrum::find_bound_states(sd, w0);
    REQUIRE(bound.count() >= 1);
    for (const auto& s : bound.states) {
      // numeric derivative of the pole function: Z = 1 / (1 - y'(E))
      const double h = 1e-6 * std::max(1.0, std::abs(s.energy));
      const double yp = (spectrum::pole_function(sd, w0, s.energy + h) -
                         spectrum::pole_function(sd, w0, s.energy - h)) /
                            (2.0 * h) +
                        1.0;  // pole_function = y(E) - E, so y' = slope + 1
      const double z_fd = 1.0 / (1.0 - yp);
      CHECK(std::abs(s.weight - z_fd) <= 1e-8 * std::max(1.0, std::abs(z_fd)));
    }
  };
  check_weight(SpectralDensity::ohmic(0.15, 1.0, 10.0), 1.0);
  check_weight(SpectralDensity::semicircle(0.15, 0.03, 1.0), 1.05);
}

TEST_CASE("background theta: resonance height and sum rule") {
  const auto empty = SpectralDensity::discrete({});
  CHECK(spectrum::background_theta(empty, 1.0, 0.7) == 0.0);

  const double w0 = 1.0;
  const auto sd = SpectralDensity::ohmic(0.05, 1.0, 10.0);
  // resonance: w - w0 - Delta(w) = 0; the Lamb shift is of order -eta wc,
  // so the root sits well below w0
  double lo = 1e-3, hi = 1.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    ((mid - w0 - sd.lamb_shift(mid)) < 0.0 ? lo : hi) = mid;
  }
  const double w_star = 0.5 * (lo + hi);
  const double theta_peak = spectrum::background_theta(sd, w0, w_star);
  CHECK(theta_peak == doctest::Approx(1.0 / (std::numbers::pi * std::numbers::pi *
                                             sd.density(w_star)))
                          .epsilon(1e-8));

  // completeness: sum Z + int Theta = 1
  for (double eta : {0.05, 0.15}) {
    const auto d = SpectralDensity::ohmic(eta, 1.0, 10.0);
    const auto bound = spectrum::find_bound_states(d, w0);
    const double total = bound.total_weight() + spectrum::theta_integral(d, w0);
    CHECK(std::abs(total - 1.0) <= 1e-4);
  }
  {
    const auto sc = SpectralDensity::semicircle(0.15, 0.03, 1.0);
    const auto bound = spectrum::find_bound_states(sc, 1.05);
    REQUIRE(bound.count() == 2);
    const double total = bound.total_weight() + spectrum::theta_integral(sc, 1.05);
    CHECK(std::abs(total - 1.0) <= 1e-4);
    CHECK(bound.total_weight() <= 1.0 + 1e-9);
  }
}

TEST_CASE("asymptotic u: phasor interference") {
  spectrum::BoundStateSet none;
  CHECK(std::abs(spectrum::asymptotic_u(none, 5.0)) == 0.0);

  spectrum::BoundStateSet one{{{-0.3, 0.6}}};
  for (double t : {0.0, 3.0, 11.0})
    CHECK(std::abs(spectrum::asymptotic_u(one, t)) == doctest::Approx(0.6));

  spectrum::BoundStateSet two{{{-0.3, 0.5}, {0.9, 0.3}}};
  const double beat = 1.2;
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < 400; ++i) {
    const double t = i * (2.0 * std::numbers::pi / beat) / 400.0;
    const double m = std::norm(spectrum::asymptotic_u(two, t));
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  CHECK(lo == doctest::Approx(0.04).epsilon(1e-3));  // (0.5 - 0.3)^2
  CHECK(hi == doctest::Approx(0.64).epsilon(1e-3));  // (0.5 + 0.3)^2
}

TEST_CASE("asymptotic v: no bound state matches the trajectory plateau") {
  const auto sd = SpectralDensity::ohmic(0.05, 1.0, 10.0);
  const auto bound = spectrum::find_bound_states(sd, 1.0);
  REQUIRE(bound.count() == 0);
  const double v_inf = spectrum::asymptotic_v(sd, 1.0, 0.2, bound, 0.0);
  CHECK(v_inf > 0.0);

  // t_end past the branch-cut decay (|u(60)| is already below 0.03)
  const propagator::TimeGrid grid(60.0, 6000);
  const auto traj = propagator::solve_trajectory(sd, 1.0, 0.2, grid);
  CHECK(std::abs(traj.v.back() - v_inf) <= 0.02 * v_inf);

  // a bound state adds a strictly positive pole term
  const auto strong = SpectralDensity::ohmic(0.15, 1.0, 10.0);
  const auto bset = spectrum::find_bound_states(strong, 1.0);
  REQUIRE(bset.count() == 1);
  const double with_pole = spectrum::asymptotic_v(strong, 1.0, 0.2, bset, 0.0);
  const double without_pole =
      spectrum::asymptotic_v(strong, 1.0, 0.2, spectrum::BoundStateSet{}, 0.0);
  CHECK(with_pole > without_pole);
}

TEST_CASE("asymptotic v: two-bound-state beat amplitude") {
  const auto sc = SpectralDensity::semicircle(0.15, 0.03, 1.0);
  const auto bound = spectrum::find_bound_states(sc, 1.05);
  REQUIRE(bound.count() == 2);
  const auto asym = spectrum::asymptotic_state(sc, 1.05, 5.0, bound);
  CHECK(asym.beat_frequency ==
        doctest::Approx(bound.states[1].energy - bound.states[0].energy));
  CHECK(asym.v_constant >= 0.0);

  double lo = 1e300, hi = -1e300;
  const double period = 2.0 * std::numbers::pi / asym.beat_frequency;
  for (int i = 0; i < 160; ++i) {
    const double v = spectrum::asymptotic_v(sc, 1.05, 5.0, bound, i * period / 160.0);
    CHECK(v >= 0.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi - lo ==
        doctest::Approx(2.0 * std::abs(asym.v_cross_amplitude)).epsilon(1e-2));
  // the cached decomposition reproduces the direct quadrature
  CHECK(asym.v(0.3 * period) ==
        doctest::Approx(spectrum::asymptotic_v(sc, 1.05, 5.0, bound, 0.3 * period))
            .epsilon(1e-6));
}

TEST_CASE("late-time trajectory approaches the bound-state phasor") {
  const auto sd = SpectralDensity::ohmic(0.15, 1.0, 10.0);
  const auto bound = spectrum::find_bound_states(sd, 1.0);
  REQUIRE(bound.count() == 1);
  const propagator::TimeGrid grid(60.0, 12000);
  const auto u = propagator::solve_u(sd, 1.0, grid);
  const double z = bound.total_weight();
  // amplitude comparison avoids the solver's slow phase drift
  CHECK(std::abs(std::abs(u.back()) - z) <= 0.02 * std::max(z, 0.01));
}

TEST_CASE("bound state search rejects discrete baths") {
  const auto dd = SpectralDensity::discrete({{1.0, 0.2}});
  CHECK_THROWS_AS(spectrum::find_bound_states(dd, 1.0), DomainError);
}
