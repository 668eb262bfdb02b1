#include "qheat/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>

#include "qheat/errors.hpp"
#include "qheat/quadrature.hpp"

namespace qheat::spectrum {

namespace {

constexpr double kPoleTol = 1e-12;

// int J(w) / (E - w)^2 dw for E strictly outside the support.
double inverse_square_moment(const spectral::SpectralDensity& sd, double E) {
  if (const auto* d = std::get_if<spectral::Discrete>(&sd.model())) {
    double sum = 0.0;
    for (const auto& m : d->modes) sum += m.g * m.g / ((E - m.omega) * (E - m.omega));
    return sum;
  }
  if (const auto* sc = std::get_if<spectral::Semicircle>(&sd.model())) {
    // d/dE of the closed-form Hilbert transform.
    const double z = E - sc->big_omega;
    const double a = 2.0 * sc->zeta;
    const double root = std::sqrt(z * z - a * a);
    const double pref = sc->g * sc->g / (2.0 * sc->zeta * sc->zeta);
    return pref * (std::abs(z) / root - 1.0);
  }
  const double hi = sd.support_max();
  auto f = [&](double w) {
    const double d = E - w;
    return sd.density(w) / (d * d);
  };
  return quad::integrate_adaptive(f, 0.0, hi, {1e-10, 0.0});
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double f_lo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) <= kPoleTol || 0.5 * (hi - lo) < 1e-16 * std::max(1.0, std::abs(mid)))
      return mid;
    if ((fm > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double BoundStateSet::total_weight() const {
  double sum = 0.0;
  for (const auto& s : states) sum += s.weight;
  return sum;
}

double AsymptoticState::v(double t) const {
  if (bound.count() < 2) return v_constant;
  return v_constant + v_cross_amplitude * std::cos(beat_frequency * t);
}

double pole_function(const spectral::SpectralDensity& sd, double omega0, double E) {
  if (sd.inside_support(E))
    throw DomainError("pole_function: E lies inside the continuum support");
  // int J / (w - E) = -Delta(E), so y(E) - E = w0 + Delta(E) - E.
  return omega0 + sd.lamb_shift(E) - E;
}

double residue_weight(const spectral::SpectralDensity& sd, double E) {
  if (sd.inside_support(E))
    throw DomainError("residue_weight: E lies inside the continuum support");
  return 1.0 / (1.0 + inverse_square_moment(sd, E));
}

BoundStateSet find_bound_states(const spectral::SpectralDensity& sd, double omega0) {
  BoundStateSet out;
  auto f = [&](double E) { return pole_function(sd, omega0, E); };

  if (sd.is_ohmic()) {
    // y(E) - E decreases monotonically on E < 0; a root exists iff y(0-) < 0.
    const auto& o = std::get<spectral::OhmicFamily>(sd.model());
    const double edge = -1e-12;
    if (f(edge) < 0.0) {
      double lo = -20.0 * o.omega_c;
      double f_lo = f(lo);
      for (int k = 0; k < 8 && f_lo < 0.0; ++k) {
        lo *= 4.0;
        f_lo = f(lo);
      }
      if (f_lo > 0.0)
        out.states.push_back({bisect(f, lo, edge, f_lo), 0.0});
    }
  } else if (sd.is_semicircle()) {
    const auto& sc = std::get<spectral::Semicircle>(sd.model());
    const double band_lo = sc.big_omega - 2.0 * sc.zeta;
    const double band_hi = sc.big_omega + 2.0 * sc.zeta;
    const double margin = std::max(10.0 * sc.g, 1e-6 * sc.big_omega);
    {
      // Below the band: root iff the pole function is negative at the edge.
      const double eps = 1e-13 * std::max(1.0, std::abs(band_lo));
      const double edge = band_lo - eps;
      double f_edge = f(edge);
      if (f_edge < 0.0) {
        double lo = band_lo - margin;
        double f_lo = f(lo);
        for (int k = 0; k < 12 && f_lo < 0.0; ++k) {
          lo -= margin * (1 << k);
          f_lo = f(lo);
        }
        if (f_lo > 0.0) out.states.push_back({bisect(f, lo, edge, f_lo), 0.0});
      }
    }
    {
      // Above the band: root iff the pole function is positive at the edge.
      const double eps = 1e-13 * std::max(1.0, band_hi);
      const double edge = band_hi + eps;
      double f_edge = f(edge);
      if (f_edge > 0.0) {
        double hi = band_hi + margin;
        double f_hi = f(hi);
        for (int k = 0; k < 12 && f_hi > 0.0; ++k) {
          hi += margin * (1 << k);
          f_hi = f(hi);
        }
        if (f_hi < 0.0) out.states.push_back({bisect(f, edge, hi, f_edge), 0.0});
      }
    }
    // Roots numerically glued to the band edge cannot be resolved.
    std::erase_if(out.states, [&](const BoundState& s) {
      const bool degenerate = std::min(std::abs(s.energy - band_lo),
                                       std::abs(s.energy - band_hi)) < 1e-9;
      if (degenerate)
        std::cerr << "qheat: discarding bound-state candidate within 1e-9 of a band edge\n";
      return degenerate;
    });
  } else {
    throw DomainError("find_bound_states: defined for continuum densities only");
  }

  std::sort(out.states.begin(), out.states.end(),
            [](const BoundState& a, const BoundState& b) { return a.energy < b.energy; });
  for (auto& s : out.states) s.weight = residue_weight(sd, s.energy);
  return out;
}

double background_theta(const spectral::SpectralDensity& sd, double omega0, double omega) {
  const double j = sd.density(omega);
  if (j <= 0.0) return 0.0;
  const double detune = omega - omega0 - sd.lamb_shift(omega);
  const double width = std::numbers::pi * j;
  return j / (detune * detune + width * width);
}

double theta_integral(const spectral::SpectralDensity& sd, double omega0) {
  auto f = [&](double w) { return background_theta(sd, omega0, w); };
  return quad::integrate_adaptive(f, sd.support_min(), sd.support_max(), {1e-9, 1e-13});
}

Complex asymptotic_u(const BoundStateSet& bound, double t) {
  Complex sum = 0.0;
  for (const auto& s : bound.states) sum += s.weight * std::polar(1.0, -s.energy * t);
  return sum;
}

double asymptotic_v(const spectral::SpectralDensity& sd, double omega0, double beta_b,
                    const BoundStateSet& bound, double t) {
  if (!(beta_b > 0.0)) throw DomainError("asymptotic_v: beta_b must be > 0");
  // The background enters through the squared propagator Theta / J; the pole
  // terms keep the explicit J weight.
  auto f = [&](double w) {
    const double occ = spectral::bose_occupation(beta_b, w);
    double value = occ * background_theta(sd, omega0, w);
    double poles = 0.0;
    for (const auto& m : bound.states)
      for (const auto& n : bound.states)
        poles += m.weight * n.weight * std::cos((m.energy - n.energy) * t) /
                 ((w - m.energy) * (w - n.energy));
    return value + sd.density(w) * occ * poles;
  };
  return quad::integrate_adaptive(f, sd.support_min(), sd.support_max(), {1e-9, 1e-14});
}

AsymptoticState asymptotic_state(const spectral::SpectralDensity& sd, double omega0,
                                 double beta_b, const BoundStateSet& bound) {
  AsymptoticState out;
  out.bound = bound;
  auto thermal = [&](double w) {
    return sd.density(w) * spectral::bose_occupation(beta_b, w);
  };
  auto constant_part = [&](double w) {
    double poles = 0.0;
    for (const auto& s : bound.states) {
      const double d = w - s.energy;
      poles += s.weight * s.weight / (d * d);
    }
    return spectral::bose_occupation(beta_b, w) * background_theta(sd, omega0, w) +
           thermal(w) * poles;
  };
  out.v_constant = quad::integrate_adaptive(constant_part, sd.support_min(),
                                            sd.support_max(), {1e-9, 1e-14});
  if (bound.count() == 2) {
    const auto& a = bound.states[0];
    const auto& b = bound.states[1];
    out.beat_frequency = std::abs(b.energy - a.energy);
    auto cross = [&](double w) {
      return thermal(w) * 2.0 * a.weight * b.weight /
             ((w - a.energy) * (w - b.energy));
    };
    out.v_cross_amplitude = quad::integrate_adaptive(cross, sd.support_min(),
                                                     sd.support_max(), {1e-9, 1e-14});
  }
  return out;
}

}  // namespace qheat::spectrum
