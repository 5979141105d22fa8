#pragma once

#include <vector>

#include "fivreg/calibrate.hpp"
#include "fivreg/funcdata.hpp"
#include "fivreg/rng.hpp"

namespace fivreg {

enum class FitMethod { Calibrated, Naive };

/// A fitted scalar-on-function linear model. The slope function is
/// beta(t) = sum_j beta_coefs[j] psi_j(t) against beta_basis; the design has
/// a leading intercept column followed by the p functional scores.
struct RegressionFit {
  FitMethod method = FitMethod::Calibrated;
  double beta0 = 0.0;
  BasisPtr beta_basis;           // p functions on the working grid
  Eigen::VectorXd beta_coefs;    // length p
  int p = 0;
  Eigen::MatrixXd design_scores; // n x (p+1), leading column of ones
  Eigen::MatrixXd gamma_hat;     // scores' scores / (yvar * n); empty when yvar = 0
  double y_var = 0.0;            // sample variance of y, n-1 denominator
  Eigen::VectorXd residuals;

  Eigen::Index n() const { return design_scores.rows(); }
  Eigen::VectorXd beta_on_grid() const;
  CoefVector beta_function() const { return CoefVector{beta_basis, beta_coefs}; }
};

/// Second-stage fit on calibrated predictors: scores are quadrature inner
/// products of each vhat curve with the leading p eigenfunctions of the vhat
/// sample (uncentered scores against centered-covariance eigenfunctions).
RegressionFit fit_calibrated(const Eigen::VectorXd& y, const FunctionalSample& vhat, int p);

/// Same fit with p chosen as the smallest dimension explaining `fve` of the
/// predictor variance.
RegressionFit fit_calibrated_fve(const Eigen::VectorXd& y, const FunctionalSample& vhat,
                                 double fve = 0.99);

/// Benchmark fit that ignores measurement error: identical machinery with the
/// observed curves scored against the first p Fourier functions.
RegressionFit fit_naive(const Eigen::VectorXd& y, const FunctionalSample& w, int p);

/// k-fold cross-validation of the score dimension p by held-out squared
/// prediction error. Candidates that exceed the feasible rank in any training
/// fold score infinity; exact ties break toward the smaller p.
CvResult cross_validate_p(const Eigen::VectorXd& y, const FunctionalSample& vhat,
                          const std::vector<int>& candidates, int folds, Rng& rng);

/// Predicted responses for new curves on the same grid.
Eigen::VectorXd predict(const RegressionFit& fit, const FunctionalSample& curves);

}  // namespace fivreg
