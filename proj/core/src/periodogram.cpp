#include "qheat/periodogram.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>

#include "qheat/errors.hpp"

namespace qheat::signal {

namespace {

double power(const std::vector<double>& x, double dt, double omega) {
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double ph = omega * dt * static_cast<double>(j);
    re += x[j] * std::cos(ph);
    im -= x[j] * std::sin(ph);
  }
  return re * re + im * im;
}

}  // namespace

double dominant_frequency(const std::vector<double>& samples, double dt,
                          double omega_lo, double omega_hi, int scan_points) {
  if (samples.size() < 8) throw DomainError("dominant_frequency: series too short");
  if (!(dt > 0.0) || !(omega_hi > omega_lo) || !(omega_lo >= 0.0))
    throw DomainError("dominant_frequency: bad scan window");

  // least-squares line removal keeps slow settling drifts from leaking into
  // the low-frequency bins
  const std::size_t n = samples.size();
  double sy = 0.0, sjy = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sy += samples[j];
    sjy += static_cast<double>(j) * samples[j];
  }
  const double nj = static_cast<double>(n);
  const double jbar = 0.5 * (nj - 1.0);
  const double jvar = (nj * nj - 1.0) / 12.0;  // variance of 0..n-1
  const double slope = (sjy / nj - jbar * sy / nj) / jvar;
  const double level = sy / nj - slope * jbar;
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double hann =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * j / (n - 1.0)));
    x[j] = (samples[j] - level - slope * static_cast<double>(j)) * hann;
  }

  const double step = (omega_hi - omega_lo) / (scan_points - 1);
  double best = omega_lo, best_p = -1.0;
  for (int k = 0; k < scan_points; ++k) {
    const double w = omega_lo + k * step;
    const double p = power(x, dt, w);
    if (p > best_p) {
      best_p = p;
      best = w;
    }
  }

  // Golden-section refinement around the scan maximum.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(omega_lo, best - step);
  double b = std::min(omega_hi, best + step);
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double pc = power(x, dt, c), pd = power(x, dt, d);
  for (int it = 0; it < 80; ++it) {
    if (pc > pd) {
      b = d;
      d = c;
      pd = pc;
      c = b - gr * (b - a);
      pc = power(x, dt, c);
    } else {
      a = c;
      c = d;
      pc = pd;
      d = a + gr * (b - a);
      pd = power(x, dt, d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace qheat::signal
