#include "fivreg/simgen.hpp"

#include <cmath>
#include <stdexcept>

namespace fivreg {

void ScenarioConfig::validate() const {
  if (n < 2) throw std::invalid_argument("ScenarioConfig: n must be at least 2");
  if (k0 < 4) throw std::invalid_argument("ScenarioConfig: k0 must be at least 4 (cubic splines)");
  if (q0 < 1) throw std::invalid_argument("ScenarioConfig: q0 must be positive");
  if (p0 < 1) throw std::invalid_argument("ScenarioConfig: p0 must be positive");
  if (sigma < 0.0) throw std::invalid_argument("ScenarioConfig: sigma must be nonnegative");
  if (!(l > 0.0)) throw std::invalid_argument("ScenarioConfig: l must be positive");
  if (sigma_e < 0.0) throw std::invalid_argument("ScenarioConfig: sigma_e must be nonnegative");
  if (replicates < 1) throw std::invalid_argument("ScenarioConfig: replicates must be positive");
  if (grid_size < 3) throw std::invalid_argument("ScenarioConfig: grid_size must be at least 3");
}

CurvePanel sample_gp_sqexp(int n, double sigma, double l, const Grid& grid, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_gp_sqexp: n must be positive");
  if (sigma < 0.0) throw std::invalid_argument("sample_gp_sqexp: sigma must be nonnegative");
  if (!(l > 0.0)) throw std::invalid_argument("sample_gp_sqexp: l must be positive");
  Eigen::Index m = grid.size();
  if (sigma == 0.0) return CurvePanel(grid, Eigen::MatrixXd::Zero(n, m));

  Eigen::MatrixXd cov(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      double d = grid.points()[i] - grid.points()[j];
      double v = sigma * std::exp(-d * d / (2.0 * l * l));
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  cov.diagonal().array() += 1e-10;  // jitter, the squared-exponential kernel is near-singular
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("sample_gp_sqexp: covariance factorization failed");
  Eigen::MatrixXd chol = llt.matrixL();

  Eigen::MatrixXd z(n, m);
  for (int i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) z(i, j) = rng.normal();
  return CurvePanel(grid, z * chol.transpose());
}

CurvePanel sample_brownian(int n, const Grid& grid, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_brownian: n must be positive");
  Eigen::Index m = grid.size();
  Eigen::MatrixXd paths(n, m);
  for (int i = 0; i < n; ++i) {
    paths(i, 0) = 0.0;
    for (Eigen::Index j = 1; j < m; ++j) {
      double dt = grid.points()[j] - grid.points()[j - 1];
      paths(i, j) = paths(i, j - 1) + std::sqrt(dt) * rng.normal();
    }
  }
  return CurvePanel(grid, std::move(paths));
}

SimulatedDataset generate_scenario(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  Grid grid = make_grid(cfg.grid_size);

  BasisPtr zbasis = BasisSystem::bspline(cfg.k0, grid);
  BasisPtr theta_basis = BasisSystem::monomial(cfg.q0, grid);
  BasisPtr beta_basis = BasisSystem::fourier(cfg.p0, grid);

  Eigen::VectorXd theta_coefs(cfg.q0);
  for (int j = 0; j < cfg.q0; ++j) theta_coefs[j] = static_cast<double>(j + 1) / cfg.q0;
  Eigen::VectorXd beta_coefs(cfg.p0);
  for (int j = 0; j < cfg.p0; ++j) beta_coefs[j] = cfg.delta / (j + 1);
  CoefVector true_theta{theta_basis, theta_coefs};
  CoefVector true_beta{beta_basis, beta_coefs};

  // Draw order is fixed: instrument coefficients, measurement error, then
  // regression noise, each subject-major.
  Eigen::MatrixXd zc(cfg.n, cfg.k0);
  for (int i = 0; i < cfg.n; ++i)
    for (int j = 0; j < cfg.k0; ++j) zc(i, j) = rng.normal();
  FunctionalSample z(zbasis, std::move(zc));

  Eigen::VectorXd theta_grid = true_theta.on_grid();
  Eigen::MatrixXd xvals =
      (z.values().array().rowwise() * theta_grid.transpose().array()).matrix();

  CurvePanel meas = sample_gp_sqexp(cfg.n, cfg.sigma, cfg.l, grid, rng);
  Eigen::MatrixXd wvals = xvals + meas.values;

  Eigen::VectorXd beta_grid = true_beta.on_grid();
  Eigen::VectorXd wq = grid.weights().array() * beta_grid.array();
  Eigen::VectorXd y = xvals * wq;
  double sd = std::sqrt(cfg.sigma_e);
  for (int i = 0; i < cfg.n; ++i) y[i] += sd * rng.normal();

  BasisPtr nodal = BasisSystem::nodal(grid);
  return SimulatedDataset{std::move(y),
                          FunctionalSample(nodal, std::move(wvals)),
                          std::move(z),
                          FunctionalSample(nodal, std::move(xvals)),
                          std::move(true_beta),
                          std::move(true_theta)};
}

double estimation_error(const CoefVector& estimate, const CoefVector& truth, const Grid& grid) {
  if (!estimate.basis || !truth.basis)
    throw std::invalid_argument("estimation_error: missing basis");
  if (!estimate.basis->grid().same_as(grid) || !truth.basis->grid().same_as(grid))
    throw std::invalid_argument("estimation_error: all grids must match");
  Eigen::VectorXd diff = estimate.on_grid() - truth.on_grid();
  return inner_product(diff, diff, grid);
}

}  // namespace fivreg
