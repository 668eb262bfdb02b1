// spectral.hpp — Bath spectral-density models, memory/noise kernels, Lamb shift

#pragma once

#include <variant>
#include <vector>

#include "qheat/types.hpp"

namespace qheat::spectral {

// J(w) = eta w^s wc^{1-s} e^{-w/wc} on (0, inf).
struct OhmicFamily {
  double eta;
  double s;
  double omega_c;
};

// J(w) = g^2/(2 pi zeta^2) sqrt(4 zeta^2 - (w - Omega)^2) on the band
// [Omega - 2 zeta, Omega + 2 zeta]; the area under the band is exactly g^2.
struct Semicircle {
  double g;
  double zeta;
  double big_omega;
};

struct BathMode {
  double omega;
  double g;
};

// Explicit modes; all kernels become exact finite sums.
struct Discrete {
  std::vector<BathMode> modes;
};

class SpectralDensity {
 public:
  using Model = std::variant<OhmicFamily, Semicircle, Discrete>;

  static SpectralDensity ohmic(double eta, double s, double omega_c);
  static SpectralDensity semicircle(double g, double zeta, double big_omega);
  static SpectralDensity discrete(std::vector<BathMode> modes);

  // J(w); zero outside the support.
  double density(double omega) const;

  // mu(t) = int_0^inf J(w) e^{-iwt} dw. Closed forms: Gamma-function form for
  // the Ohmic family, Bessel J1 for the semicircle, exact sum for Discrete.
  Complex memory_kernel(double t) const;

  // nu(t) = int_0^inf J(w) e^{-iwt} / (e^{beta w} - 1) dw.
  Complex noise_kernel(double beta_b, double t) const;

  // Delta(w) = P int_0^inf J(w') / (w - w') dw'; principal value inside the
  // support, ordinary integral outside.
  double lamb_shift(double omega) const;

  // Midpoint-rule modes on (0, omega_max] (the exact band for Semicircle)
  // with g_k^2 = J(w_k) dw.
  Discrete discretize(int n_modes, double omega_max) const;

  // int J(w) dw = mu(0); closed form per model.
  double total_weight() const;

  // Effective integration support. Ohmic upper edge is
  // omega_c * max(40, 10/s), where the integrand tail is < 1e-16 of its peak.
  double support_min() const;
  double support_max() const;
  bool inside_support(double omega) const;

  // Characteristic kernel oscillation frequency (grid-sizing heuristic).
  double frequency_scale() const;

  bool is_ohmic() const { return std::holds_alternative<OhmicFamily>(model_); }
  bool is_semicircle() const { return std::holds_alternative<Semicircle>(model_); }
  bool is_discrete() const { return std::holds_alternative<Discrete>(model_); }
  const Model& model() const { return model_; }

 private:
  explicit SpectralDensity(Model m) : model_(std::move(m)) {}
  Model model_;
};

// n(beta, w) = 1 / (e^{beta w} - 1).
double bose_occupation(double beta, double omega);

// Kernel samples on a shared time grid; nu(-t) is obtained from the stored
// t >= 0 samples via conjugate symmetry.
struct KernelSamples {
  std::vector<double> times;
  std::vector<Complex> mu;
  std::vector<Complex> nu;
  double beta_b = 0.0;
};

// Tabulates both kernels for every t in `times` (one pass of dense
// fixed-node quadrature for the continuum models). A positive omega_cap
// truncates the support to [0, omega_cap] and forces the numeric path on
// both kernels, which keeps a truncated-bath comparison support-matched.
KernelSamples sample_kernels(const SpectralDensity& sd, double beta_b,
                             const std::vector<double>& times,
                             double omega_cap = 0.0);

}  // namespace qheat::spectral
