#pragma once

#include "fivreg/regress.hpp"

namespace fivreg {

/// Asymptotic test of H0: beta = 0 (no functional effect). The p-value is
/// two-sided against the standard normal reference.
struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int p_used = 0;
  FitMethod method = FitMethod::Calibrated;
};

/// Standardized quadratic score for a calibrated fit:
/// (n b' Gamma b - (p+1)) / sqrt(2 (p+1)) with b the full coefficient vector
/// including the intercept. Under the null this is asymptotically standard
/// normal; values far from zero in either direction reject.
TestResult test_calibrated(const RegressionFit& fit);

/// Same quadratic form for the naive fit, centered at p.
TestResult test_naive(const RegressionFit& fit);

/// Simultaneous confidence region for the slope function evaluated on a grid.
struct ConfidenceBand {
  Eigen::VectorXd t;           // grid points
  Eigen::VectorXd center;      // fitted beta(t)
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  double alpha = 0.05;
};

/// Band from the spectral decomposition of gamma_hat: with eigenpairs
/// (lambda_k, e_k) and omega_k(t) = sum_l psi_l(t) e_kl (psi_0 == 1 paired
/// with the intercept coordinate), the half width at t is
/// sqrt(c(alpha) * sum_k omega_k(t)^2 / lambda_k), c(alpha) = (p+1 +
/// sqrt(2(p+1)) z_{1-alpha}) / n. Throws when gamma_hat is unavailable or
/// rank deficient. The grid must match the fit's grid unless the slope basis
/// is analytic, in which case it is re-evaluated.
ConfidenceBand confidence_band(const RegressionFit& fit, double alpha, const Grid& grid);

}  // namespace fivreg
