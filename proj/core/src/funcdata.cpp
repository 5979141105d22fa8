#include "fivreg/funcdata.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fivreg {

CurvePanel::CurvePanel(Grid g, Eigen::MatrixXd v) : grid(std::move(g)), values(std::move(v)) {
  if (values.rows() < 1) throw std::invalid_argument("CurvePanel: need at least one curve");
  if (values.cols() != grid.size())
    throw std::invalid_argument("CurvePanel: column count must match grid size");
  if (!values.allFinite()) throw std::invalid_argument("CurvePanel: non-finite values");
}

FunctionalSample::FunctionalSample(BasisPtr basis, Eigen::MatrixXd coefs)
    : basis_(std::move(basis)), coefs_(std::move(coefs)) {
  if (!basis_) throw std::invalid_argument("FunctionalSample: missing basis");
  if (coefs_.rows() < 1) throw std::invalid_argument("FunctionalSample: need at least one curve");
  if (coefs_.cols() != basis_->size())
    throw std::invalid_argument("FunctionalSample: coefficient width must match basis size");
  if (!coefs_.allFinite()) throw std::invalid_argument("FunctionalSample: non-finite coefficients");
}

Eigen::VectorXd FunctionalSample::curve(Eigen::Index i) const {
  if (i < 0 || i >= n()) throw std::out_of_range("FunctionalSample::curve: index out of range");
  return basis_->eval().transpose() * coefs_.row(i).transpose();
}

FunctionalSample FunctionalSample::subset(const std::vector<int>& rows) const {
  if (rows.empty()) throw std::invalid_argument("FunctionalSample::subset: empty selection");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), coefs_.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] < 0 || rows[r] >= n())
      throw std::out_of_range("FunctionalSample::subset: index out of range");
    out.row(static_cast<Eigen::Index>(r)) = coefs_.row(rows[r]);
  }
  return FunctionalSample(basis_, std::move(out));
}

namespace {

// Shared pieces for penalized smoothing of one panel against one basis.
struct SmoothWork {
  const CurvePanel& raw;
  Eigen::MatrixXd bbt;      // B B', s x s
  Eigen::MatrixXd penalty;  // D2 W D2', s x s (empty when unavailable)
  Eigen::MatrixXd rhs;      // B Y', s x n

  SmoothWork(const CurvePanel& panel, const BasisSystem& basis) : raw(panel) {
    if (!basis.grid().same_as(panel.grid))
      throw std::invalid_argument("smooth_panel: basis grid must match panel grid");
    const Eigen::MatrixXd& b = basis.eval();
    bbt = b * b.transpose();
    if (basis.has_second_derivative()) {
      const Eigen::MatrixXd& d2 = basis.second_derivative();
      penalty = d2 * basis.grid().weights().asDiagonal() * d2.transpose();
      penalty = 0.5 * (penalty + penalty.transpose());
    }
    rhs = b * panel.values.transpose();
  }

  Eigen::MatrixXd system(double lambda) const {
    if (lambda < 0.0) throw std::invalid_argument("smooth_panel: lambda must be nonnegative");
    if (lambda == 0.0) return bbt;
    if (penalty.size() == 0)
      throw std::invalid_argument("smooth_panel: roughness penalty needs second derivatives");
    return bbt + lambda * penalty;
  }

  // Coefficients (n x s) for a given lambda, with a conditioning guard.
  Eigen::MatrixXd solve(double lambda) const {
    Eigen::MatrixXd a = system(lambda);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("smooth_panel: eigendecomposition failed");
    double lmax = es.eigenvalues()[a.rows() - 1];
    if (!(lmax > 0.0) || es.eigenvalues()[0] <= lmax * 1e-12)
      throw std::runtime_error(
          "smooth_panel: normal equations are numerically singular (basis too rich for this grid?)");
    return (es.eigenvectors() *
            es.eigenvalues().cwiseInverse().asDiagonal() *
            es.eigenvectors().transpose() * rhs)
        .transpose();
  }

  double gcv(double lambda, const BasisSystem& basis) const {
    Eigen::Index m = raw.grid.size();
    Eigen::Index n = raw.n();
    Eigen::MatrixXd a = system(lambda);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() != Eigen::Success)
      return std::numeric_limits<double>::infinity();
    double dof = ldlt.solve(bbt).trace();
    if (!(dof > 0.0) || dof >= static_cast<double>(m))
      return std::numeric_limits<double>::infinity();
    Eigen::MatrixXd coefs = ldlt.solve(rhs).transpose();  // n x s
    double rss = (raw.values - coefs * basis.eval()).squaredNorm();
    double denom = 1.0 - dof / static_cast<double>(m);
    return (rss / static_cast<double>(n * m)) / (denom * denom);
  }
};

}  // namespace

FunctionalSample smooth_panel(const CurvePanel& raw, BasisPtr basis, double lambda) {
  if (!basis) throw std::invalid_argument("smooth_panel: missing basis");
  SmoothWork work(raw, *basis);
  Eigen::MatrixXd coefs = work.solve(lambda);
  return FunctionalSample(std::move(basis), std::move(coefs));
}

double gcv_score(const CurvePanel& raw, const BasisSystem& basis, double lambda) {
  SmoothWork work(raw, basis);
  return work.gcv(lambda, basis);
}

double choose_lambda_gcv(const CurvePanel& raw, const BasisSystem& basis,
                         const std::vector<double>& ladder) {
  std::vector<double> grid = ladder;
  if (grid.empty()) {
    for (int e = -16; e <= 4; ++e) grid.push_back(std::pow(10.0, 0.5 * e));  // 1e-8 .. 1e2
  }
  SmoothWork work(raw, basis);
  double best = grid.front();
  double best_score = std::numeric_limits<double>::infinity();
  for (double lam : grid) {
    double s = work.gcv(lam, basis);
    if (s < best_score) {
      best_score = s;
      best = lam;
    }
  }
  if (!std::isfinite(best_score))
    throw std::runtime_error("choose_lambda_gcv: no ladder value gave a finite score");
  return best;
}

CoefVector mean_function(const FunctionalSample& fs) {
  return CoefVector{fs.basis(), fs.coefs().colwise().mean().transpose()};
}

namespace {

// Eigendecomposition of the quadrature-weighted centered covariance; shared
// by fpca, fpca_fve and fpca_rank.
struct FpcaWork {
  Eigen::VectorXd mu;          // pointwise mean, m
  Eigen::MatrixXd half;        // centered values scaled by sqrt(w), n x m
  Eigen::VectorXd eigvals;     // descending
  Eigen::MatrixXd eigvecs;     // m x m, column j pairs with eigvals[j]
  int rank = 0;

  explicit FpcaWork(const FunctionalSample& fs) {
    Eigen::MatrixXd vals = fs.values();
    mu = vals.colwise().mean().transpose();
    Eigen::MatrixXd centered = vals.rowwise() - mu.transpose();
    Eigen::VectorXd sw = fs.grid().weights().array().sqrt();
    half = centered.array().rowwise() * sw.transpose().array();
    Eigen::MatrixXd cov = half.transpose() * half / static_cast<double>(fs.n());
    cov = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) throw std::runtime_error("fpca: eigendecomposition failed");
    Eigen::Index m = cov.rows();
    eigvals.resize(m);
    eigvecs.resize(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      eigvals[j] = es.eigenvalues()[m - 1 - j];
      eigvecs.col(j) = es.eigenvectors().col(m - 1 - j);
    }
    double lmax = std::max(eigvals[0], 0.0);
    double tol = lmax * 1e-10;
    for (Eigen::Index j = 0; j < m; ++j)
      if (eigvals[j] > tol) ++rank;
  }
};

Fpca assemble(const FunctionalSample& fs, const FpcaWork& work, int k) {
  Eigen::Index m = fs.grid().size();
  Eigen::VectorXd isw = fs.grid().weights().array().rsqrt();
  Eigen::MatrixXd efun(k, m);
  Eigen::MatrixXd scores(fs.n(), k);
  Eigen::VectorXd lambda(k);
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXd v = work.eigvecs.col(j);
    Eigen::VectorXd fn = v.array() * isw.array();
    // Pin the sign on the function, not the weighted eigenvector, and treat
    // near-ties as equal so symmetric extrema resolve to the earliest one.
    double mx = fn.cwiseAbs().maxCoeff();
    Eigen::Index imax = 0;
    for (Eigen::Index i = 0; i < fn.size(); ++i)
      if (std::abs(fn[i]) >= mx * (1.0 - 1e-12)) {
        imax = i;
        break;
      }
    if (fn[imax] < 0.0) {
      v = -v;
      fn = -fn;
    }
    efun.row(j) = fn.transpose();
    scores.col(j) = work.half * v;
    lambda[j] = std::max(work.eigvals[j], 0.0);
  }
  BasisPtr basis = BasisSystem::empirical(std::move(efun), fs.grid());
  return Fpca{CoefVector{fs.basis(), Eigen::VectorXd(fs.coefs().colwise().mean().transpose())},
              std::move(basis), std::move(lambda), std::move(scores)};
}

}  // namespace

Fpca fpca(const FunctionalSample& fs, int k) {
  int kmax = static_cast<int>(std::min<Eigen::Index>(fs.n() - 1, fs.basis()->size()));
  if (k < 1 || k > kmax)
    throw std::invalid_argument("fpca: k must lie in [1, min(n-1, basis size)]");
  FpcaWork work(fs);
  if (k > work.rank) throw std::runtime_error("fpca: k exceeds the available covariance rank");
  return assemble(fs, work, k);
}

Fpca fpca_fve(const FunctionalSample& fs, double fve) {
  if (!(fve > 0.0 && fve <= 1.0)) throw std::invalid_argument("fpca_fve: fve must lie in (0, 1]");
  FpcaWork work(fs);
  if (work.rank == 0) throw std::runtime_error("fpca: sample has zero variance");
  double total = 0.0;
  for (Eigen::Index j = 0; j < work.eigvals.size(); ++j) total += std::max(work.eigvals[j], 0.0);
  double run = 0.0;
  int k = work.rank;
  for (int j = 0; j < work.rank; ++j) {
    run += std::max(work.eigvals[j], 0.0);
    if (run >= fve * total) {
      k = j + 1;
      break;
    }
  }
  return assemble(fs, work, k);
}

int fpca_rank(const FunctionalSample& fs) { return FpcaWork(fs).rank; }

}  // namespace fivreg
