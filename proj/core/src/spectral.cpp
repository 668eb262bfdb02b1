#include "qheat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qheat/errors.hpp"
#include "qheat/quadrature.hpp"

namespace qheat::spectral {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + " must be finite");
}

// Geometric-panel count that pushes the w^{s-1} endpoint remainder below 1e-12.
int graded_panels(double s, double ratio = 0.5) {
  const int n = static_cast<int>(std::ceil(30.0 / (s * std::log(1.0 / ratio)))) + 8;
  return std::min(n, 400);
}

// x e^{-x} Ei(x) without overflow; asymptotic series beyond |x| = 30.
double scaled_expint(double x) {
  if (std::abs(x) <= 30.0) {
    if (x == 0.0) return 0.0;
    return x * std::exp(-x) * std::expint(x);
  }
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 40; ++k) {
    const double next = term * k / x;
    if (std::abs(next) >= std::abs(term)) break;  // asymptotic tail started growing
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Integral of f over [lo, hi] with panel counts sized for the e^{-iwt} phase.
template <typename F>
auto oscillatory_integral(F&& f, double lo, double hi, double t, quad::Tolerance tol) {
  const double phase = (hi - lo) * std::abs(t);
  const int m0 = std::max(8, static_cast<int>(std::ceil(phase / (2.0 * kPi * 4.0))));
  return quad::integrate_doubling(f, lo, hi, tol, m0, 12);
}

// Ohmic-family integral of f over (0, upper]; grades panels near zero when the
// integrand carries a w^{s-1} singularity.
template <typename F>
auto ohmic_integral(F&& f, double s, double upper, double t, quad::Tolerance tol,
                    bool singular_origin) {
  if (!singular_origin) return oscillatory_integral(f, 0.0, upper, t, tol);
  const double split = upper * 1e-3;
  auto head = quad::integrate_graded_lower(f, 0.0, split, graded_panels(s));
  auto tail = oscillatory_integral(f, split, upper, t, tol);
  return head + tail;
}

}  // namespace

SpectralDensity SpectralDensity::ohmic(double eta, double s, double omega_c) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw DomainError("ohmic: eta must be >= 0");
  if (!(s > 0.0)) throw DomainError("ohmic: exponent s must be > 0");
  if (!(omega_c > 0.0)) throw DomainError("ohmic: cutoff omega_c must be > 0");
  return SpectralDensity(Model{OhmicFamily{eta, s, omega_c}});
}

SpectralDensity SpectralDensity::semicircle(double g, double zeta, double big_omega) {
  if (!(g > 0.0)) throw DomainError("semicircle: coupling g must be > 0");
  if (!(zeta > 0.0)) throw DomainError("semicircle: hopping zeta must be > 0");
  if (!(big_omega > 2.0 * zeta))
    throw DomainError("semicircle: band must stay at positive frequencies (Omega > 2 zeta)");
  return SpectralDensity(Model{Semicircle{g, zeta, big_omega}});
}

SpectralDensity SpectralDensity::discrete(std::vector<BathMode> modes) {
  for (const auto& m : modes) {
    if (!(m.omega > 0.0)) throw DomainError("discrete: mode frequencies must be > 0");
    require_finite(m.g, "discrete: coupling");
  }
  return SpectralDensity(Model{Discrete{std::move(modes)}});
}

double SpectralDensity::density(double omega) const {
  require_finite(omega, "density: omega");
  if (const auto* o = std::get_if<OhmicFamily>(&model_)) {
    if (omega <= 0.0) return 0.0;
    return o->eta * std::pow(omega, o->s) * std::pow(o->omega_c, 1.0 - o->s) *
           std::exp(-omega / o->omega_c);
  }
  if (const auto* sc = std::get_if<Semicircle>(&model_)) {
    const double d = omega - sc->big_omega;
    const double arg = 4.0 * sc->zeta * sc->zeta - d * d;
    if (arg <= 0.0) return 0.0;
    return sc->g * sc->g / (2.0 * kPi * sc->zeta * sc->zeta) * std::sqrt(arg);
  }
  return 0.0;  // atoms carry no pointwise density
}

double SpectralDensity::total_weight() const {
  if (const auto* o = std::get_if<OhmicFamily>(&model_))
    return o->eta * o->omega_c * o->omega_c * std::tgamma(o->s + 1.0);
  if (const auto* sc = std::get_if<Semicircle>(&model_)) return sc->g * sc->g;
  const auto& d = std::get<Discrete>(model_);
  double sum = 0.0;
  for (const auto& m : d.modes) sum += m.g * m.g;
  return sum;
}

double SpectralDensity::support_min() const {
  if (is_ohmic()) return 0.0;
  if (const auto* sc = std::get_if<Semicircle>(&model_))
    return sc->big_omega - 2.0 * sc->zeta;
  const auto& d = std::get<Discrete>(model_);
  if (d.modes.empty()) return 0.0;
  double lo = d.modes.front().omega;
  for (const auto& m : d.modes) lo = std::min(lo, m.omega);
  return lo;
}

double SpectralDensity::support_max() const {
  if (const auto* o = std::get_if<OhmicFamily>(&model_))
    return o->omega_c * std::max(40.0, 10.0 / o->s);
  if (const auto* sc = std::get_if<Semicircle>(&model_))
    return sc->big_omega + 2.0 * sc->zeta;
  const auto& d = std::get<Discrete>(model_);
  double hi = 0.0;
  for (const auto& m : d.modes) hi = std::max(hi, m.omega);
  return hi;
}

bool SpectralDensity::inside_support(double omega) const {
  if (is_ohmic()) return omega > 0.0;
  if (const auto* sc = std::get_if<Semicircle>(&model_))
    return omega >= sc->big_omega - 2.0 * sc->zeta &&
           omega <= sc->big_omega + 2.0 * sc->zeta;
  const auto& d = std::get<Discrete>(model_);
  for (const auto& m : d.modes)
    if (omega == m.omega) return true;
  return false;
}

double SpectralDensity::frequency_scale() const {
  if (const auto* o = std::get_if<OhmicFamily>(&model_)) return o->omega_c;
  if (const auto* sc = std::get_if<Semicircle>(&model_))
    return sc->big_omega + 2.0 * sc->zeta;
  const auto& d = std::get<Discrete>(model_);
  double hi = 0.0;
  for (const auto& m : d.modes) hi = std::max(hi, m.omega);
  return hi;
}

Complex SpectralDensity::memory_kernel(double t) const {
  if (!(t >= 0.0)) throw DomainError("memory_kernel: t must be >= 0");
  if (const auto* o = std::get_if<OhmicFamily>(&model_)) {
    // Fourier-Laplace integral of w^s e^{-w/wc}: Gamma(s+1) / (1/wc + it)^{s+1},
    // principal branch (Re > 0), valid for every s > 0.
    const Complex z(1.0, o->omega_c * t);
    return o->eta * o->omega_c * o->omega_c * std::tgamma(o->s + 1.0) /
           std::pow(z, o->s + 1.0);
  }
  if (const auto* sc = std::get_if<Semicircle>(&model_)) {
    const double x = 2.0 * sc->zeta * t;
    double band;  // 2 J1(x)/x
    if (x < 1e-6) {
      band = 1.0 - x * x / 8.0;
    } else {
      band = 2.0 * std::cyl_bessel_j(1.0, x) / x;
    }
    return sc->g * sc->g * band * std::polar(1.0, -sc->big_omega * t);
  }
  const auto& d = std::get<Discrete>(model_);
  Complex sum = 0.0;
  for (const auto& m : d.modes) sum += m.g * m.g * std::polar(1.0, -m.omega * t);
  return sum;
}

Complex SpectralDensity::noise_kernel(double beta_b, double t) const {
  if (!(beta_b > 0.0)) throw DomainError("noise_kernel: beta_b must be > 0");
  if (!(t >= 0.0)) throw DomainError("noise_kernel: t must be >= 0");
  if (const auto* d = std::get_if<Discrete>(&model_)) {
    Complex sum = 0.0;
    for (const auto& m : d->modes)
      sum += m.g * m.g * bose_occupation(beta_b, m.omega) * std::polar(1.0, -m.omega * t);
    return sum;
  }
  const double floor = 1e-14 * total_weight() * std::min(1.0, 1.0 / beta_b);
  const quad::Tolerance tol{1e-11, floor};
  auto f = [&](double w) -> Complex {
    return density(w) * bose_occupation(beta_b, w) * std::polar(1.0, -w * t);
  };
  if (const auto* o = std::get_if<OhmicFamily>(&model_)) {
    const double upper =
        std::min(support_max(), (50.0 + 10.0 * o->s) / (1.0 / o->omega_c + beta_b));
    return ohmic_integral(f, o->s, upper, t, tol, o->s < 1.0);
  }
  return oscillatory_integral(f, support_min(), support_max(), t, tol);
}

double SpectralDensity::lamb_shift(double omega) const {
  require_finite(omega, "lamb_shift: omega");
  if (const auto* d = std::get_if<Discrete>(&model_)) {
    double sum = 0.0;
    for (const auto& m : d->modes) {
      if (omega == m.omega)
        throw DomainError("lamb_shift: evaluation at a discrete mode frequency");
      sum += m.g * m.g / (omega - m.omega);
    }
    return sum;
  }
  if (const auto* sc = std::get_if<Semicircle>(&model_)) {
    // Hilbert transform of the semicircle: linear inside the band,
    // (z -/+ sqrt(z^2 - a^2)) branch outside.
    const double a = 2.0 * sc->zeta;
    const double z = omega - sc->big_omega;
    const double pref = sc->g * sc->g / (2.0 * sc->zeta * sc->zeta);
    if (std::abs(z) <= a) return pref * z;
    const double root = std::sqrt(z * z - a * a);
    return pref * (z > 0.0 ? z - root : z + root);
  }
  const auto& o = std::get<OhmicFamily>(model_);
  if (o.s == 1.0) {
    // P int w' e^{-w'/wc} / (w - w') dw' = wc (x e^{-x} Ei(x) - 1), x = w/wc.
    return o.eta * o.omega_c * (scaled_expint(omega / o.omega_c) - 1.0);
  }
  const double upper = support_max();
  const quad::Tolerance tol{1e-11, 1e-14 * total_weight() / o.omega_c};
  if (omega <= 0.0) {
    auto f = [&](double w) { return density(w) / (omega - w); };
    if (o.s < 1.0) {
      const double split = upper * 1e-3;
      return quad::integrate_graded_lower(f, 0.0, split, graded_panels(o.s)) +
             quad::integrate_doubling(f, split, upper, tol, 8, 14);
    }
    return quad::integrate_doubling(f, 0.0, upper, tol, 8, 14);
  }
  // Principal value via singularity subtraction:
  //   int [J(w') - J(w)] / (w - w') dw' + J(w) log(|w - lo| / |hi - w|).
  const double jw = density(omega);
  auto reg = [&](double w) { return (density(w) - jw) / (omega - w); };
  double value = jw * std::log(std::abs(omega - 0.0) / std::abs(upper - omega));
  if (omega < upper) {
    value += quad::integrate_doubling(reg, 0.0, omega, tol, 8, 14);
    value += quad::integrate_doubling(reg, omega, upper, tol, 8, 14);
  } else {
    value += quad::integrate_doubling(reg, 0.0, upper, tol, 8, 14);
  }
  return value;
}

Discrete SpectralDensity::discretize(int n_modes, double omega_max) const {
  if (n_modes < 1) throw DomainError("discretize: n_modes must be >= 1");
  if (const auto* d = std::get_if<Discrete>(&model_)) return *d;
  double lo = 0.0, hi = omega_max;
  if (const auto* sc = std::get_if<Semicircle>(&model_)) {
    lo = sc->big_omega - 2.0 * sc->zeta;
    hi = sc->big_omega + 2.0 * sc->zeta;
  }
  if (!(hi > lo)) throw DomainError("discretize: omega_max must exceed the support minimum");
  const double dw = (hi - lo) / n_modes;
  Discrete out;
  out.modes.reserve(n_modes);
  for (int k = 0; k < n_modes; ++k) {
    const double w = lo + (k + 0.5) * dw;
    out.modes.push_back({w, std::sqrt(density(w) * dw)});
  }
  return out;
}

double bose_occupation(double beta, double omega) {
  return 1.0 / std::expm1(beta * omega);
}

namespace {

// Fixed quadrature nodes shared by every sample time; density scales with the
// largest phase omega * t_max so one pass covers the whole grid.
struct NodeSet {
  std::vector<double> x;
  std::vector<double> w;
};

NodeSet build_nodes(const SpectralDensity& sd, double lo, double hi, double t_max) {
  const auto& rule = quad::gl32();
  NodeSet out;
  auto add_panel = [&](double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int q = 0; q < rule.order(); ++q) {
      out.x.push_back(mid + half * rule.nodes()[q]);
      out.w.push_back(half * rule.weights()[q]);
    }
  };
  // geometric grading from `from` toward the endpoint `edge`
  auto grade_toward = [&](double from, double edge, int n_geo) {
    double prev = from;
    for (int k = 1; k <= n_geo; ++k) {
      const double next = edge + (from - edge) * std::pow(0.5, k);
      add_panel(std::min(prev, next), std::max(prev, next));
      prev = next;
    }
    add_panel(std::min(prev, edge), std::max(prev, edge));
  };

  double start = lo, stop = hi;
  if (const auto* o = std::get_if<OhmicFamily>(&sd.model()); o && o->s < 1.0 && lo == 0.0) {
    start = hi * 1e-3;
    grade_toward(start, 0.0, graded_panels(o->s));
  }
  if (sd.is_semicircle()) {
    // sqrt band edges converge slowly under uniform panels
    const double margin = 0.05 * (hi - lo);
    start = lo + margin;
    stop = hi - margin;
    grade_toward(start, lo, 48);
    grade_toward(stop, hi, 48);
  }
  const double phase = (stop - start) * t_max;
  const int uniform = std::max(16, static_cast<int>(std::ceil(phase / (2.0 * kPi * 4.0))) + 4);
  if (static_cast<std::size_t>(uniform) * rule.order() > 4'000'000)
    throw NumericalError("kernel tabulation: node budget exceeded (t_end * support too large)");
  const double h = (stop - start) / uniform;
  for (int k = 0; k < uniform; ++k) add_panel(start + k * h, start + (k + 1) * h);
  return out;
}

std::vector<Complex> fourier_sum(const NodeSet& nodes, const std::vector<double>& f,
                                 const std::vector<double>& times) {
  std::vector<Complex> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    double re = 0.0, im = 0.0;
    for (std::size_t q = 0; q < nodes.x.size(); ++q) {
      const double ph = nodes.x[q] * t;
      re += f[q] * std::cos(ph);
      im -= f[q] * std::sin(ph);
    }
    out[i] = Complex(re, im);
  }
  return out;
}

}  // namespace

KernelSamples sample_kernels(const SpectralDensity& sd, double beta_b,
                             const std::vector<double>& times, double omega_cap) {
  if (!(beta_b > 0.0)) throw DomainError("sample_kernels: beta_b must be > 0");
  KernelSamples out;
  out.times = times;
  out.beta_b = beta_b;
  if (sd.is_discrete()) {
    // exact sums; a support cap just drops modes above it
    const SpectralDensity* src = &sd;
    SpectralDensity capped = sd;
    if (omega_cap > 0.0) {
      std::vector<BathMode> kept;
      for (const auto& m : std::get<Discrete>(sd.model()).modes)
        if (m.omega <= omega_cap) kept.push_back(m);
      capped = SpectralDensity::discrete(std::move(kept));
      src = &capped;
    }
    out.mu.reserve(times.size());
    out.nu.reserve(times.size());
    for (double t : times) {
      out.mu.push_back(src->memory_kernel(t));
      out.nu.push_back(src->noise_kernel(beta_b, t));
    }
    return out;
  }

  const double lo = sd.support_min();
  double hi = sd.support_max();
  double hi_nu = hi;
  if (const auto* o = std::get_if<OhmicFamily>(&sd.model()))
    hi_nu = std::min(hi, (50.0 + 10.0 * o->s) / (1.0 / o->omega_c + beta_b));
  if (omega_cap > 0.0) {
    hi = std::min(hi, omega_cap);
    hi_nu = std::min(hi_nu, omega_cap);
  }
  const double t_max = times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());

  const bool mu_closed = omega_cap == 0.0;
  if (mu_closed) {
    out.mu.reserve(times.size());
    for (double t : times) out.mu.push_back(sd.memory_kernel(t));
  } else {
    const NodeSet nodes = build_nodes(sd, lo, hi, t_max);
    std::vector<double> f(nodes.x.size());
    for (std::size_t q = 0; q < f.size(); ++q)
      f[q] = nodes.w[q] * sd.density(nodes.x[q]);
    out.mu = fourier_sum(nodes, f, times);
  }

  {
    const NodeSet nodes = build_nodes(sd, lo, hi_nu, t_max);
    std::vector<double> f(nodes.x.size());
    for (std::size_t q = 0; q < f.size(); ++q)
      f[q] = nodes.w[q] * sd.density(nodes.x[q]) * bose_occupation(beta_b, nodes.x[q]);
    out.nu = fourier_sum(nodes, f, times);

    // Probe the tabulation against direct per-point quadrature.
    if (!times.empty()) {
      const double scale = std::abs(out.nu.front()) + 1e-300;
      auto integrand = [&](double w) -> Complex {
        return sd.density(w) * bose_occupation(beta_b, w);
      };
      const Complex direct = quad::integrate_doubling(integrand, lo, hi_nu,
                                                      {1e-11, 1e-13 * scale}, 8, 14);
      if (std::abs(direct - out.nu.front()) > 1e-7 * scale)
        throw NumericalError("kernel tabulation drifted from direct quadrature",
                             std::abs(direct - out.nu.front()));
    }
  }
  return out;
}

}  // namespace qheat::spectral
