#include "fivreg/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fivreg {

namespace {

void check_shared_grid(const FunctionalSample& w, const FunctionalSample& z) {
  if (w.n() != z.n()) throw std::invalid_argument("calibration: w and z sample sizes differ");
  if (!w.grid().same_as(z.grid()))
    throw std::invalid_argument("calibration: w and z must share a grid");
}

// Spectral solve of a symmetric positive definite system with a conditioning
// guard; the pooled design can degenerate when the instrument has too little
// variation for the requested basis dimension.
Eigen::VectorXd spd_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const char* ctx) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error(std::string(ctx) + ": eigendecomposition failed");
  double lmax = es.eigenvalues()[a.rows() - 1];
  if (!(lmax > 0.0) || es.eigenvalues()[0] <= lmax * 1e-12)
    throw std::runtime_error(std::string(ctx) +
                             ": pooled Gram matrix is numerically singular; the instrument does "
                             "not identify a slope of this dimension");
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose() * b;
}

}  // namespace

CalibrationFit fit_concurrent(const FunctionalSample& w, const FunctionalSample& z,
                              BasisPtr theta_basis) {
  if (!theta_basis) throw std::invalid_argument("fit_concurrent: missing theta basis");
  check_shared_grid(w, z);
  if (!theta_basis->grid().same_as(w.grid()))
    throw std::invalid_argument("fit_concurrent: theta basis must live on the data grid");

  const Grid& grid = w.grid();
  Eigen::MatrixXd wv = w.values();
  Eigen::MatrixXd zv = z.values();
  Eigen::Index n = wv.rows();

  // Pointwise pooled moments: s(t) = sum_i z_i(t)^2, r(t) = sum_i w_i z_i.
  Eigen::VectorXd s = zv.array().square().colwise().sum().transpose();
  Eigen::VectorXd r = (wv.array() * zv.array()).colwise().sum().transpose();

  const Eigen::MatrixXd& phi = theta_basis->eval();
  Eigen::VectorXd ws = grid.weights().array() * s.array();
  Eigen::MatrixXd gram_n = phi * ws.asDiagonal() * phi.transpose();
  gram_n = 0.5 * (gram_n + gram_n.transpose());
  Eigen::VectorXd rhs = phi * (grid.weights().array() * r.array()).matrix();

  Eigen::VectorXd theta_coefs = spd_solve(gram_n, rhs, "fit_concurrent");

  Eigen::VectorXd theta_grid = phi.transpose() * theta_coefs;
  Eigen::MatrixXd vvals = zv.array().rowwise() * theta_grid.transpose().array();
  double objective =
      ((wv - vvals).array().square().rowwise() * grid.weights().transpose().array()).sum();

  return CalibrationFit{CoefVector{std::move(theta_basis), std::move(theta_coefs)},
                        FunctionalSample(BasisSystem::nodal(grid), std::move(vvals)),
                        gram_n / static_cast<double>(n), objective};
}

KernelFit fit_kernel(const FunctionalSample& w, const FunctionalSample& z, BasisPtr phi,
                     BasisPtr psi) {
  if (!phi || !psi) throw std::invalid_argument("fit_kernel: missing basis");
  check_shared_grid(w, z);
  if (!phi->grid().same_as(w.grid()) || !psi->grid().same_as(w.grid()))
    throw std::invalid_argument("fit_kernel: kernel bases must live on the data grid");

  const Grid& grid = w.grid();
  Eigen::Index n = w.n();
  int kk = phi->size();
  int mm = psi->size();
  if (static_cast<Eigen::Index>(kk) * mm > n)
    throw std::invalid_argument("fit_kernel: K*M unknowns exceed the sample size");

  Eigen::MatrixXd wv = w.values();
  Eigen::MatrixXd zv = z.values();

  // c(i, m) = integral psi_m(s) z_i(s) ds
  Eigen::MatrixXd c =
      zv * (psi->eval().array().rowwise() * grid.weights().transpose().array()).matrix().transpose();
  // t(i, k) = integral phi_k(t) w_i(t) dt
  Eigen::MatrixXd tw =
      wv * (phi->eval().array().rowwise() * grid.weights().transpose().array()).matrix().transpose();

  Eigen::MatrixXd gphi = phi->gram();
  Eigen::MatrixXd ctc = c.transpose() * c;

  // Normal equations over vec(alpha) with index a = k * M + m.
  Eigen::MatrixXd a(kk * mm, kk * mm);
  for (int k1 = 0; k1 < kk; ++k1)
    for (int k2 = 0; k2 < kk; ++k2)
      a.block(k1 * mm, k2 * mm, mm, mm) = gphi(k1, k2) * ctc;
  Eigen::MatrixXd rhs_km = tw.transpose() * c;  // K x M
  Eigen::VectorXd rhs(kk * mm);
  for (int k1 = 0; k1 < kk; ++k1) rhs.segment(k1 * mm, mm) = rhs_km.row(k1).transpose();

  Eigen::VectorXd sol = spd_solve(0.5 * (a + a.transpose()), rhs, "fit_kernel");
  Eigen::MatrixXd alpha(kk, mm);
  for (int k1 = 0; k1 < kk; ++k1) alpha.row(k1) = sol.segment(k1 * mm, mm).transpose();

  Eigen::MatrixXd vvals = (c * alpha.transpose()) * phi->eval();
  double objective =
      ((wv - vvals).array().square().rowwise() * grid.weights().transpose().array()).sum();

  return KernelFit{std::move(alpha), std::move(phi), std::move(psi),
                   FunctionalSample(BasisSystem::nodal(grid), std::move(vvals)), objective};
}

std::vector<std::vector<int>> make_folds(int n, int folds, Rng& rng) {
  if (folds < 2) throw std::invalid_argument("make_folds: need at least two folds");
  if (n < folds) throw std::invalid_argument("make_folds: more folds than observations");
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  rng.shuffle(idx);
  std::vector<std::vector<int>> out(static_cast<std::size_t>(folds));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i % folds)].push_back(idx[i]);
  return out;
}

CvResult cross_validate_q(const FunctionalSample& w, const FunctionalSample& z,
                          const std::vector<int>& candidates, int folds, Rng& rng) {
  if (candidates.empty()) throw std::invalid_argument("cross_validate_q: empty candidate list");
  check_shared_grid(w, z);
  int n = static_cast<int>(w.n());
  auto fold_idx = make_folds(n, folds, rng);

  const Grid& grid = w.grid();
  CvResult res;
  res.scores.assign(candidates.size(), 0.0);

  std::vector<std::vector<int>> train_idx(fold_idx.size());
  for (std::size_t f = 0; f < fold_idx.size(); ++f) {
    for (std::size_t g = 0; g < fold_idx.size(); ++g)
      if (g != f)
        train_idx[f].insert(train_idx[f].end(), fold_idx[g].begin(), fold_idx[g].end());
  }

  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    int q = candidates[ci];
    double score = 0.0;
    bool feasible = true;
    for (std::size_t f = 0; f < fold_idx.size() && feasible; ++f) {
      try {
        BasisPtr qb = BasisSystem::bspline(q, grid);
        CalibrationFit fit = fit_concurrent(w.subset(train_idx[f]), z.subset(train_idx[f]), qb);
        Eigen::VectorXd tg = fit.theta_on_grid();
        FunctionalSample wt = w.subset(fold_idx[f]);
        FunctionalSample zt = z.subset(fold_idx[f]);
        Eigen::MatrixXd pred = zt.values().array().rowwise() * tg.transpose().array();
        score += ((wt.values() - pred).array().square().rowwise() *
                  grid.weights().transpose().array())
                     .sum();
      } catch (const std::exception&) {
        feasible = false;
      }
    }
    res.scores[ci] = feasible ? score / n : std::numeric_limits<double>::infinity();
  }

  // Smallest score wins; exact ties go to the smaller dimension.
  std::size_t pick = 0;
  for (std::size_t ci = 1; ci < candidates.size(); ++ci) {
    if (res.scores[ci] < res.scores[pick] ||
        (res.scores[ci] == res.scores[pick] && candidates[ci] < candidates[pick]))
      pick = ci;
  }
  if (!std::isfinite(res.scores[pick]))
    throw std::runtime_error("cross_validate_q: no candidate dimension was feasible");
  res.chosen = candidates[pick];
  return res;
}

}  // namespace fivreg
