#include "qheat/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "qheat/errors.hpp"

namespace qheat::oracle {

propagator::Trajectory single_particle_u_v(const SingleParticleModel& model,
                                           double beta_b,
                                           const propagator::TimeGrid& grid) {
  if (!(beta_b > 0.0)) throw DomainError("single_particle_u_v: beta_b must be > 0");
  const int n = static_cast<int>(model.modes.size());
  const int dim = n + 1;

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  h(0, 0) = model.omega0;
  for (int k = 0; k < n; ++k) {
    h(k + 1, k + 1) = model.modes[k].omega;
    h(0, k + 1) = h(k + 1, 0) = model.modes[k].g;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success)
    throw NumericalError("single_particle_u_v: eigendecomposition failed");
  const Eigen::MatrixXd& vec = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Eigen::VectorXd row0 = vec.row(0);

  std::vector<double> occupation(n);
  for (int k = 0; k < n; ++k)
    occupation[k] = spectral::bose_occupation(beta_b, model.modes[k].omega);

  propagator::Trajectory traj{grid, {}, {}, beta_b};
  const int steps = grid.n_steps;
  traj.u.resize(steps + 1);
  traj.v.resize(steps + 1);
  const double dt = grid.dt();

  Eigen::VectorXd wr(dim), wi(dim);
  for (int i = 0; i <= steps; ++i) {
    const double t = i * dt;
    for (int a = 0; a < dim; ++a) {
      const double ph = lam(a) * t;
      wr(a) = row0(a) * std::cos(ph);
      wi(a) = -row0(a) * std::sin(ph);
    }
    // column 0 of e^{-iht}: amplitudes from the initial system excitation
    const Eigen::VectorXd cr = vec * wr;
    const Eigen::VectorXd ci = vec * wi;
    traj.u[i] = Complex(cr(0), ci(0));
    double v = 0.0;
    for (int k = 0; k < n; ++k)
      v += occupation[k] * (cr(k + 1) * cr(k + 1) + ci(k + 1) * ci(k + 1));
    traj.v[i] = v;
  }
  return traj;
}

namespace {

double truncated_gibbs_tail(double beta, double omega, int n_max) {
  return std::exp(-beta * omega * (n_max + 1)) / -std::expm1(-beta * omega);
}

}  // namespace

FockResult fock_two_point_measurement(const FockModel& model, double tau) {
  const int m = static_cast<int>(model.modes.size());
  if (m < 1 || m > 3)
    throw ConfigError("fock_two_point_measurement: 1 to 3 bath modes supported");
  if (model.n_max < 1) throw DomainError("fock_two_point_measurement: n_max must be >= 1");
  if (!(model.beta_s > 0.0) || !(model.beta_b > 0.0))
    throw DomainError("fock_two_point_measurement: temperatures must be positive");
  if (!std::isfinite(tau)) throw DomainError("fock_two_point_measurement: tau must be finite");

  const int d = model.n_max + 1;
  long dim = 1;
  for (int j = 0; j <= m; ++j) dim *= d;
  if (dim > 65536)
    throw ConfigError("fock_two_point_measurement: dimension " + std::to_string(dim) +
                      " exceeds the 65536 cap");
  for (const auto& mode : model.modes)
    if (truncated_gibbs_tail(model.beta_b, mode.omega, model.n_max) >= 1e-8)
      throw DomainError("fock_two_point_measurement: bath thermal tail above 1e-8");

  // Mixed-radix basis: idx = ((l d + n_1) d + n_2) ...; stride of mode j is
  // d^{m-1-j}, the system stride is d^m.
  std::vector<long> stride(m + 1);
  stride[0] = dim / d;  // system
  for (int j = 1; j <= m; ++j) stride[j] = stride[j - 1] / d;

  auto occ = [&](long idx, int slot) { return static_cast<int>((idx / stride[slot]) % d); };

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (long idx = 0; idx < dim; ++idx) {
    double diag = model.omega0 * occ(idx, 0);
    for (int j = 0; j < m; ++j) diag += model.modes[j].omega * occ(idx, j + 1);
    h(idx, idx) = diag;
    const int l = occ(idx, 0);
    for (int j = 0; j < m; ++j) {
      const int nj = occ(idx, j + 1);
      if (l + 1 <= model.n_max && nj >= 1) {
        const long idx2 = idx + stride[0] - stride[j + 1];  // a^dag b_j
        const double amp = model.modes[j].g * std::sqrt((l + 1.0) * nj);
        h(idx2, idx) += amp;
        h(idx, idx2) += amp;
      }
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success)
    throw NumericalError("fock_two_point_measurement: eigendecomposition failed");
  const Eigen::MatrixXd& vec = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();

  Eigen::MatrixXcd phase = Eigen::MatrixXcd::Zero(dim, dim);
  for (long a = 0; a < dim; ++a) phase(a, a) = std::polar(1.0, -lam(a) * tau);
  const Eigen::MatrixXcd evolution = vec * phase * vec.transpose();

  // Truncated, renormalized single-mode Gibbs weights.
  auto gibbs_weights = [&](double beta, double omega) {
    std::vector<double> w(d);
    double z = 0.0;
    for (int k = 0; k < d; ++k) z += (w[k] = std::exp(-beta * omega * k));
    for (double& x : w) x /= z;
    return w;
  };
  std::vector<std::vector<double>> bath_w(m);
  for (int j = 0; j < m; ++j) bath_w[j] = gibbs_weights(model.beta_b, model.modes[j].omega);

  TransitionMatrix trans;
  trans.levels = model.n_max;
  trans.p.assign(static_cast<std::size_t>(d) * d, 0.0);
  for (long col = 0; col < dim; ++col) {
    const int l = occ(col, 0);
    double pb = 1.0;
    for (int j = 0; j < m; ++j) pb *= bath_w[j][occ(col, j + 1)];
    for (long row = 0; row < dim; ++row) {
      const int lp = occ(row, 0);
      trans.p[static_cast<std::size_t>(lp) * d + l] += pb * std::norm(evolution(row, col));
    }
  }

  const std::vector<double> sys_w = gibbs_weights(model.beta_s, model.omega0);
  heat::HeatDistribution dist{model.omega0, model.n_max,
                              std::vector<double>(2 * model.n_max + 1, 0.0)};
  for (int l = 0; l < d; ++l)
    for (int lp = 0; lp < d; ++lp)
      dist.probs[lp - l + model.n_max] += sys_w[l] * trans(lp, l);

  return FockResult{std::move(trans), std::move(dist)};
}

}  // namespace qheat::oracle
