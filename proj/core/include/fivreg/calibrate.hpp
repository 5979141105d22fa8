#pragma once

#include <vector>

#include "fivreg/funcdata.hpp"
#include "fivreg/rng.hpp"

namespace fivreg {

/// Result of the concurrent calibration fit w(t) ~ theta(t) z(t).
struct CalibrationFit {
  CoefVector theta;         // fitted slope function in its working basis
  FunctionalSample vhat;    // calibrated predictors theta(t) z_i(t), nodal
  Eigen::MatrixXd gram;     // pooled instrument Gram in the theta basis, / n
  double objective = 0.0;   // sum_i integral (w_i - theta z_i)^2

  const BasisPtr& theta_basis() const { return theta.basis; }
  Eigen::VectorXd theta_on_grid() const { return theta.on_grid(); }
};

/// Pooled least squares for the concurrent model: minimizes
/// sum_i integral (w_i(t) - theta(t) z_i(t))^2 dt over theta in the span of
/// theta_basis. w and z must live on the same grid.
CalibrationFit fit_concurrent(const FunctionalSample& w, const FunctionalSample& z,
                              BasisPtr theta_basis);

/// Result of the integral-operator calibration fit
/// w(t) ~ integral alpha(s, t) z(s) ds with alpha(s, t) = sum alpha_km phi_k(t) psi_m(s).
struct KernelFit {
  Eigen::MatrixXd alpha;    // K x M coefficient matrix
  BasisPtr phi;             // t-side basis (K)
  BasisPtr psi;             // s-side basis (M)
  FunctionalSample vhat;    // fitted predictors, nodal
  double objective = 0.0;
};

KernelFit fit_kernel(const FunctionalSample& w, const FunctionalSample& z, BasisPtr phi,
                     BasisPtr psi);

/// Outcome of a k-fold dimension search. scores aligns with the candidate
/// list; chosen is the (smallest) minimizer.
struct CvResult {
  int chosen = 0;
  std::vector<double> scores;
};

/// k-fold cross-validation of the theta-basis dimension (cubic B-splines).
/// Score is the held-out calibration objective; ties break toward the
/// smaller dimension. The rng drives the fold shuffle.
CvResult cross_validate_q(const FunctionalSample& w, const FunctionalSample& z,
                          const std::vector<int>& candidates, int folds, Rng& rng);

/// Fold assignment shared by the cross-validation searches: a shuffled
/// 0..n-1 dealt round-robin into `folds` groups.
std::vector<std::vector<int>> make_folds(int n, int folds, Rng& rng);

}  // namespace fivreg
