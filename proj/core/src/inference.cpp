#include "fivreg/inference.hpp"

#include <cmath>
#include <stdexcept>

#include "fivreg/normal.hpp"

namespace fivreg {

namespace {

double quadratic_form(const RegressionFit& fit) {
  if (fit.gamma_hat.size() == 0)
    throw std::runtime_error("inference: constant response, the test statistic is undefined");
  Eigen::VectorXd b(fit.p + 1);
  b[0] = fit.beta0;
  b.tail(fit.p) = fit.beta_coefs;
  double q = static_cast<double>(fit.n()) * b.dot(fit.gamma_hat * b);
  if (q < 0.0) throw std::runtime_error("inference: gamma_hat is not positive semidefinite");
  return q;
}

TestResult standardized(const RegressionFit& fit, double centering) {
  double q = quadratic_form(fit);
  double stat = (q - centering) / std::sqrt(2.0 * centering);
  double p_value = 2.0 * (1.0 - normal_cdf(std::abs(stat)));
  return TestResult{stat, p_value, fit.p, fit.method};
}

}  // namespace

TestResult test_calibrated(const RegressionFit& fit) {
  if (fit.method != FitMethod::Calibrated)
    throw std::invalid_argument("test_calibrated: fit was not produced by the calibrated path");
  return standardized(fit, fit.p + 1.0);
}

TestResult test_naive(const RegressionFit& fit) {
  if (fit.method != FitMethod::Naive)
    throw std::invalid_argument("test_naive: fit was not produced by the naive path");
  return standardized(fit, static_cast<double>(fit.p));
}

ConfidenceBand confidence_band(const RegressionFit& fit, double alpha, const Grid& grid) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("confidence_band: alpha must lie in (0, 1)");
  if (!fit.beta_basis) throw std::logic_error("confidence_band: empty fit");
  if (fit.gamma_hat.size() == 0)
    throw std::runtime_error("confidence_band: constant response, the band is undefined");

  // Slope basis evaluated on the requested grid, plus the constant function
  // for the intercept coordinate.
  Eigen::MatrixXd psi;
  if (fit.beta_basis->grid().same_as(grid)) {
    psi = fit.beta_basis->eval();
  } else {
    psi = fit.beta_basis->rebase(grid)->eval();  // throws for empirical bases
  }
  Eigen::Index m = grid.size();
  Eigen::MatrixXd full(fit.p + 1, m);
  full.row(0).setOnes();
  full.bottomRows(fit.p) = psi;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fit.gamma_hat);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("confidence_band: eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  double lmax = ev[fit.p];
  if (!(lmax > 0.0) || ev[0] <= lmax * 1e-12)
    throw std::runtime_error(
        "confidence_band: gamma_hat is rank deficient, the band is undefined");

  double n = static_cast<double>(fit.n());
  double z = normal_quantile(1.0 - alpha);
  double c = (fit.p + 1.0 + std::sqrt(2.0 * (fit.p + 1.0)) * z) / n;

  // Deterministic eigenpair orientation (first nonzero entry positive); the
  // band is sign-invariant, this just pins the decomposition down.
  Eigen::MatrixXd vecs = es.eigenvectors();
  for (int k = 0; k <= fit.p; ++k) {
    for (Eigen::Index l = 0; l <= fit.p; ++l) {
      if (vecs(l, k) != 0.0) {
        if (vecs(l, k) < 0.0) vecs.col(k) = -vecs.col(k);
        break;
      }
    }
  }

  // omega_k(t) rows; half width from sum_k omega_k(t)^2 / lambda_k.
  Eigen::MatrixXd omega = vecs.transpose() * full;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
  for (int k = 0; k <= fit.p; ++k)
    acc += omega.row(k).transpose().array().square().matrix() / ev[k];
  Eigen::VectorXd half = (c * acc.array()).sqrt();

  Eigen::VectorXd center = psi.transpose() * fit.beta_coefs;
  return ConfidenceBand{grid.points(), center, center - half, center + half, alpha};
}

}  // namespace fivreg
