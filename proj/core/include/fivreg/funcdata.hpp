#pragma once

#include <vector>

#include "fivreg/basis.hpp"

namespace fivreg {

/// Raw discretely observed curves: one row per subject, one column per grid
/// point. All subjects share the grid (complete panels only).
struct CurvePanel {
  Grid grid;
  Eigen::MatrixXd values;  // n x m

  CurvePanel(Grid g, Eigen::MatrixXd v);
  Eigen::Index n() const { return values.rows(); }
};

/// A sample of n curves stored as basis coefficients.
class FunctionalSample {
 public:
  FunctionalSample(BasisPtr basis, Eigen::MatrixXd coefs);

  Eigen::Index n() const { return coefs_.rows(); }
  const BasisPtr& basis() const { return basis_; }
  const Grid& grid() const { return basis_->grid(); }
  const Eigen::MatrixXd& coefs() const { return coefs_; }

  /// Pointwise reconstructions, n x m.
  Eigen::MatrixXd values() const {
    return basis_->is_identity() ? coefs_ : coefs_ * basis_->eval();
  }
  Eigen::VectorXd curve(Eigen::Index i) const;

  FunctionalSample subset(const std::vector<int>& rows) const;

 private:
  BasisPtr basis_;
  Eigen::MatrixXd coefs_;  // n x size
};

/// Penalized least-squares smoothing of every curve in the panel:
/// ||y_i - B'c_i||^2 + lambda c_i' P c_i with P the quadrature Gram of the
/// basis second derivatives. lambda = 0 is plain least squares.
FunctionalSample smooth_panel(const CurvePanel& raw, BasisPtr basis, double lambda);

/// Pooled GCV score for one lambda.
double gcv_score(const CurvePanel& raw, const BasisSystem& basis, double lambda);

/// Minimizer of gcv_score over a log-spaced ladder (default 1e-8 .. 1e2).
double choose_lambda_gcv(const CurvePanel& raw, const BasisSystem& basis,
                         const std::vector<double>& ladder = {});

/// Pointwise sample mean as a coefficient vector in the sample's basis.
CoefVector mean_function(const FunctionalSample& fs);

/// Functional PCA of a sample, computed on the grid discretization of the
/// centered sample covariance (1/n). Eigenfunctions come back as an
/// Empirical basis, orthonormal under the grid quadrature, with the sign
/// pinned so each function's first entry of largest magnitude is positive.
struct Fpca {
  CoefVector mean;
  BasisPtr eigenfunctions;      // k x m Empirical basis
  Eigen::VectorXd eigenvalues;  // descending, clamped at zero
  Eigen::MatrixXd scores;       // n x k, centered
};

Fpca fpca(const FunctionalSample& fs, int k);

/// Smallest k whose eigenvalues explain at least fve of total variance.
Fpca fpca_fve(const FunctionalSample& fs, double fve);

/// Number of numerically nonzero covariance eigenvalues of the sample.
int fpca_rank(const FunctionalSample& fs);

}  // namespace fivreg
