#include "fivreg/regress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fivreg {

Eigen::VectorXd RegressionFit::beta_on_grid() const {
  if (!beta_basis) throw std::logic_error("RegressionFit: empty fit");
  return beta_basis->eval().transpose() * beta_coefs;
}

namespace {

// Uncentered quadrature scores of each curve against the rows of basis_eval.
Eigen::MatrixXd score_matrix(const Eigen::MatrixXd& values, const BasisSystem& basis) {
  return values *
         (basis.eval().array().rowwise() * basis.grid().weights().transpose().array())
             .matrix()
             .transpose();
}

RegressionFit solve_with_design(FitMethod method, const Eigen::VectorXd& y,
                                const Eigen::MatrixXd& scores, BasisPtr beta_basis) {
  Eigen::Index n = y.size();
  int p = static_cast<int>(scores.cols());
  Eigen::MatrixXd design(n, p + 1);
  design.col(0).setOnes();
  design.rightCols(p) = scores;

  Eigen::MatrixXd dtd = design.transpose() * design;
  dtd = 0.5 * (dtd + dtd.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dtd);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("regression: eigendecomposition failed");
  double lmax = es.eigenvalues()[p];
  if (!(lmax > 0.0) || es.eigenvalues()[0] <= lmax * 1e-12)
    throw std::runtime_error(
        "regression: score design is rank deficient; reduce p or supply richer predictors");
  Eigen::VectorXd coef = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                         es.eigenvectors().transpose() * (design.transpose() * y);

  double ybar = y.mean();
  double yvar = n > 1 ? (y.array() - ybar).square().sum() / static_cast<double>(n - 1) : 0.0;

  RegressionFit fit;
  fit.method = method;
  fit.beta0 = coef[0];
  fit.beta_basis = std::move(beta_basis);
  fit.beta_coefs = coef.tail(p);
  fit.p = p;
  fit.design_scores = std::move(design);
  fit.y_var = yvar;
  if (yvar > 0.0) fit.gamma_hat = dtd / (yvar * static_cast<double>(n));
  fit.residuals = y - fit.design_scores * coef;
  return fit;
}

void check_response(const Eigen::VectorXd& y, const FunctionalSample& curves, int p) {
  if (y.size() != curves.n())
    throw std::invalid_argument("regression: response length must match the sample size");
  if (!y.allFinite()) throw std::invalid_argument("regression: non-finite responses");
  if (p < 1) throw std::invalid_argument("regression: p must be positive");
  if (p + 1 > y.size())
    throw std::invalid_argument("regression: p + 1 coefficients exceed the sample size");
}

}  // namespace

RegressionFit fit_calibrated(const Eigen::VectorXd& y, const FunctionalSample& vhat, int p) {
  check_response(y, vhat, p);
  Fpca f = fpca(vhat, p);
  Eigen::MatrixXd scores = score_matrix(vhat.values(), *f.eigenfunctions);
  return solve_with_design(FitMethod::Calibrated, y, scores, f.eigenfunctions);
}

RegressionFit fit_calibrated_fve(const Eigen::VectorXd& y, const FunctionalSample& vhat,
                                 double fve) {
  Fpca f = fpca_fve(vhat, fve);
  check_response(y, vhat, static_cast<int>(f.eigenvalues.size()));
  Eigen::MatrixXd scores = score_matrix(vhat.values(), *f.eigenfunctions);
  return solve_with_design(FitMethod::Calibrated, y, scores, f.eigenfunctions);
}

RegressionFit fit_naive(const Eigen::VectorXd& y, const FunctionalSample& w, int p) {
  check_response(y, w, p);
  BasisPtr fb = BasisSystem::fourier(p, w.grid());
  Eigen::MatrixXd scores = score_matrix(w.values(), *fb);
  return solve_with_design(FitMethod::Naive, y, scores, fb);
}

CvResult cross_validate_p(const Eigen::VectorXd& y, const FunctionalSample& vhat,
                          const std::vector<int>& candidates, int folds, Rng& rng) {
  if (candidates.empty()) throw std::invalid_argument("cross_validate_p: empty candidate list");
  if (y.size() != vhat.n())
    throw std::invalid_argument("cross_validate_p: response length must match the sample size");
  int n = static_cast<int>(vhat.n());
  auto fold_idx = make_folds(n, folds, rng);

  int pmax = *std::max_element(candidates.begin(), candidates.end());
  CvResult res;
  res.scores.assign(candidates.size(), 0.0);

  for (std::size_t f = 0; f < fold_idx.size(); ++f) {
    std::vector<int> train;
    for (std::size_t g = 0; g < fold_idx.size(); ++g)
      if (g != f) train.insert(train.end(), fold_idx[g].begin(), fold_idx[g].end());

    FunctionalSample vtrain = vhat.subset(train);
    FunctionalSample vtest = vhat.subset(fold_idx[f]);
    Eigen::VectorXd ytrain(train.size()), ytest(fold_idx[f].size());
    for (std::size_t i = 0; i < train.size(); ++i) ytrain[i] = y[train[i]];
    for (std::size_t i = 0; i < fold_idx[f].size(); ++i) ytest[i] = y[fold_idx[f][i]];

    // One decomposition at the largest feasible dimension serves every
    // candidate: eigenfunctions are nested in order.
    int cap = std::min<int>({pmax, fpca_rank(vtrain), static_cast<int>(vtrain.n()) - 1});
    if (cap < 1) {
      for (double& s : res.scores) s = std::numeric_limits<double>::infinity();
      break;
    }
    Fpca dec = fpca(vtrain, cap);
    Eigen::MatrixXd strain = score_matrix(vtrain.values(), *dec.eigenfunctions);
    Eigen::MatrixXd stest = score_matrix(vtest.values(), *dec.eigenfunctions);

    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
      int p = candidates[ci];
      if (p < 1 || p > cap || p + 1 > static_cast<int>(train.size())) {
        res.scores[ci] = std::numeric_limits<double>::infinity();
        continue;
      }
      if (!std::isfinite(res.scores[ci])) continue;
      Eigen::MatrixXd design(train.size(), p + 1);
      design.col(0).setOnes();
      design.rightCols(p) = strain.leftCols(p);
      Eigen::MatrixXd dtd = design.transpose() * design;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(0.5 * (dtd + dtd.transpose()));
      if (ldlt.info() != Eigen::Success) {
        res.scores[ci] = std::numeric_limits<double>::infinity();
        continue;
      }
      Eigen::VectorXd coef = ldlt.solve(design.transpose() * ytrain);
      Eigen::VectorXd pred =
          Eigen::VectorXd::Constant(ytest.size(), coef[0]) + stest.leftCols(p) * coef.tail(p);
      res.scores[ci] += (ytest - pred).squaredNorm();
    }
  }

  for (double& s : res.scores)
    if (std::isfinite(s)) s /= n;

  std::size_t pick = 0;
  for (std::size_t ci = 1; ci < candidates.size(); ++ci) {
    if (res.scores[ci] < res.scores[pick] ||
        (res.scores[ci] == res.scores[pick] && candidates[ci] < candidates[pick]))
      pick = ci;
  }
  if (!std::isfinite(res.scores[pick]))
    throw std::runtime_error("cross_validate_p: no candidate dimension was feasible");
  res.chosen = candidates[pick];
  return res;
}

Eigen::VectorXd predict(const RegressionFit& fit, const FunctionalSample& curves) {
  if (!fit.beta_basis) throw std::logic_error("predict: empty fit");
  if (!curves.grid().same_as(fit.beta_basis->grid()))
    throw std::invalid_argument("predict: curves must live on the fit's grid");
  Eigen::MatrixXd scores = score_matrix(curves.values(), *fit.beta_basis);
  return Eigen::VectorXd::Constant(curves.n(), fit.beta0) + scores * fit.beta_coefs;
}

}  // namespace fivreg
