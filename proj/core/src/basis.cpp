#include "fivreg/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fivreg {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

}  // namespace

Grid::Grid(Eigen::VectorXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.size() < 2) throw std::invalid_argument("Grid: need at least two points");
  if (points_.size() != weights_.size())
    throw std::invalid_argument("Grid: points/weights length mismatch");
  check_finite(points_, "Grid points");
  check_finite(weights_, "Grid weights");
  if (points_[0] != 0.0 || points_[points_.size() - 1] != 1.0)
    throw std::invalid_argument("Grid: points must start at 0 and end at 1");
  for (Eigen::Index i = 1; i < points_.size(); ++i) {
    if (!(points_[i] > points_[i - 1]))
      throw std::invalid_argument("Grid: points must be strictly increasing");
  }
  if ((weights_.array() <= 0.0).any())
    throw std::invalid_argument("Grid: weights must be positive");
  double total = weights_.sum();
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::invalid_argument("Grid: weight sum must be positive");
  weights_ /= total;
}

Grid Grid::trapezoid(const Eigen::VectorXd& points) {
  Eigen::Index m = points.size();
  if (m < 2) throw std::invalid_argument("Grid::trapezoid: need at least two points");
  Eigen::VectorXd w(m);
  w[0] = (points[1] - points[0]) / 2.0;
  w[m - 1] = (points[m - 1] - points[m - 2]) / 2.0;
  for (Eigen::Index i = 1; i < m - 1; ++i) w[i] = (points[i + 1] - points[i - 1]) / 2.0;
  return Grid(points, std::move(w));
}

double Grid::integrate(const Eigen::VectorXd& values) const {
  if (values.size() != points_.size())
    throw std::invalid_argument("Grid::integrate: length mismatch");
  return weights_.dot(values);
}

bool Grid::same_as(const Grid& other) const {
  return points_.size() == other.points_.size() &&
         (points_.array() == other.points_.array()).all() &&
         (weights_.array() == other.weights_.array()).all();
}

Grid make_grid(int m, QuadRule rule) {
  if (m < 3) throw std::invalid_argument("make_grid: m must be at least 3");
  Eigen::VectorXd pts(m);
  for (int i = 0; i < m; ++i) pts[i] = static_cast<double>(i) / (m - 1);
  if (rule == QuadRule::Trapezoid) return Grid::trapezoid(pts);
  if (m % 2 == 0) throw std::invalid_argument("make_grid: Simpson rule needs odd m");
  Eigen::VectorXd w(m);
  for (int i = 0; i < m; ++i) w[i] = (i == 0 || i == m - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
  return Grid(std::move(pts), std::move(w));
}

const Eigen::MatrixXd& BasisSystem::second_derivative() const {
  if (!has_second_derivative())
    throw std::logic_error("BasisSystem: no second derivative for this basis kind");
  return d2_;
}

Eigen::MatrixXd BasisSystem::gram() const {
  Eigen::MatrixXd g = eval_ * grid_.weights().asDiagonal() * eval_.transpose();
  return 0.5 * (g + g.transpose());
}

std::shared_ptr<const BasisSystem> BasisSystem::fourier(int size, const Grid& grid) {
  if (size < 1) throw std::invalid_argument("BasisSystem::fourier: size must be positive");
  Eigen::Index m = grid.size();
  Eigen::MatrixXd eval(size, m), d2(size, m);
  const double rt2 = std::sqrt(2.0);
  for (Eigen::Index c = 0; c < m; ++c) {
    double t = grid.points()[c];
    for (int j = 0; j < size; ++j) {
      if (j == 0) {
        eval(j, c) = 1.0;
        d2(j, c) = 0.0;
      } else {
        int h = (j + 1) / 2;
        double om = kTwoPi * h;
        double v = (j % 2 == 1) ? std::sin(om * t) : std::cos(om * t);
        eval(j, c) = rt2 * v;
        d2(j, c) = -om * om * rt2 * v;
      }
    }
  }
  return std::shared_ptr<const BasisSystem>(
      new BasisSystem(BasisKind::Fourier, grid, std::move(eval), std::move(d2), 0));
}

/**
 * B-splines of the given order on equispaced interior knots, clamped at 0 and
 * 1. Values and derivatives come from the Cox-de Boor recursion, built order
 * by order so the derivative recursions can reuse the lower-order tables:
 *
 *   N[j,k](t)   = f_a N[j,k-1] + f_b N[j+1,k-1]
 *   N'[j,k](t)  = (k-1) (N[j,k-1]/a - N[j+1,k-1]/b)
 *   N''[j,k](t) = (k-1) (N'[j,k-1]/a - N'[j+1,k-1]/b)
 *
 * with a = u[j+k-1]-u[j], b = u[j+k]-u[j+1] and 0/0 read as 0. The final
 * half-open interval is closed so t = 1 is supported.
 */
std::shared_ptr<const BasisSystem> BasisSystem::bspline(int size, const Grid& grid, int order) {
  if (order < 1) throw std::invalid_argument("BasisSystem::bspline: order must be positive");
  if (size < order)
    throw std::invalid_argument("BasisSystem::bspline: size must be at least the order");

  int ninterior = size - order;
  std::vector<double> knots;
  knots.reserve(static_cast<std::size_t>(size + order));
  for (int i = 0; i < order; ++i) knots.push_back(0.0);
  for (int j = 1; j <= ninterior; ++j)
    knots.push_back(static_cast<double>(j) / (ninterior + 1));
  for (int i = 0; i < order; ++i) knots.push_back(1.0);
  const double last = knots.back();

  Eigen::Index m = grid.size();
  Eigen::MatrixXd eval = Eigen::MatrixXd::Zero(size, m);
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(size, m);

  int nfun1 = static_cast<int>(knots.size()) - 1;  // order-1 functions
  std::vector<double> vprev(nfun1), dprev(nfun1), vcur(nfun1), dcur(nfun1), d2cur(nfun1);

  for (Eigen::Index c = 0; c < m; ++c) {
    double t = grid.points()[c];
    for (int j = 0; j < nfun1; ++j) {
      bool in = (t >= knots[j] && t < knots[j + 1]) ||
                (t == last && knots[j + 1] == last && knots[j] < knots[j + 1]);
      vprev[j] = in ? 1.0 : 0.0;
      dprev[j] = 0.0;
    }
    for (int k = 2; k <= order; ++k) {
      int nfun = static_cast<int>(knots.size()) - k;
      for (int j = 0; j < nfun; ++j) {
        double a = knots[j + k - 1] - knots[j];
        double b = knots[j + k] - knots[j + 1];
        double va = a > 0.0 ? vprev[j] / a : 0.0;
        double vb = b > 0.0 ? vprev[j + 1] / b : 0.0;
        double da = a > 0.0 ? dprev[j] / a : 0.0;
        double db = b > 0.0 ? dprev[j + 1] / b : 0.0;
        vcur[j] = (a > 0.0 ? (t - knots[j]) * va : 0.0) +
                  (b > 0.0 ? (knots[j + k] - t) * vb : 0.0);
        dcur[j] = (k - 1) * (va - vb);
        d2cur[j] = (k - 1) * (da - db);
      }
      std::swap(vprev, vcur);
      std::swap(dprev, dcur);
      if (k == order) {
        for (int j = 0; j < size; ++j) {
          eval(j, c) = vprev[j];
          d2(j, c) = d2cur[j];
        }
      }
    }
    if (order == 1) {
      for (int j = 0; j < size; ++j) eval(j, c) = vprev[j];
    }
  }

  return std::shared_ptr<const BasisSystem>(
      new BasisSystem(BasisKind::BSpline, grid, std::move(eval), std::move(d2), order));
}

std::shared_ptr<const BasisSystem> BasisSystem::monomial(int size, const Grid& grid) {
  if (size < 1) throw std::invalid_argument("BasisSystem::monomial: size must be positive");
  Eigen::Index m = grid.size();
  Eigen::MatrixXd eval(size, m), d2(size, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    double t = grid.points()[c];
    for (int j = 0; j < size; ++j) {
      eval(j, c) = std::pow(t, j);
      d2(j, c) = j >= 2 ? j * (j - 1) * std::pow(t, j - 2) : 0.0;
    }
  }
  return std::shared_ptr<const BasisSystem>(
      new BasisSystem(BasisKind::Monomial, grid, std::move(eval), std::move(d2), 0));
}

std::shared_ptr<const BasisSystem> BasisSystem::empirical(Eigen::MatrixXd values, const Grid& grid) {
  if (values.rows() < 1) throw std::invalid_argument("BasisSystem::empirical: need at least one row");
  if (values.cols() != grid.size())
    throw std::invalid_argument("BasisSystem::empirical: column count must match grid size");
  check_finite(values, "BasisSystem::empirical");
  return std::shared_ptr<const BasisSystem>(new BasisSystem(
      BasisKind::Empirical, grid, std::move(values), Eigen::MatrixXd(), 0));
}

std::shared_ptr<const BasisSystem> BasisSystem::nodal(const Grid& grid) {
  return empirical(Eigen::MatrixXd::Identity(grid.size(), grid.size()), grid);
}

std::shared_ptr<const BasisSystem> BasisSystem::rebase(const Grid& grid) const {
  switch (kind_) {
    case BasisKind::Fourier: return fourier(size(), grid);
    case BasisKind::BSpline: return bspline(size(), grid, order_);
    case BasisKind::Monomial: return monomial(size(), grid);
    case BasisKind::Empirical:
      throw std::logic_error("BasisSystem::rebase: empirical basis is tied to its grid");
  }
  throw std::logic_error("BasisSystem::rebase: unknown kind");
}

BasisPtr make_basis(BasisKind kind, int size, const Grid& grid) {
  switch (kind) {
    case BasisKind::Fourier: return BasisSystem::fourier(size, grid);
    case BasisKind::BSpline: return BasisSystem::bspline(size, grid);
    case BasisKind::Monomial: return BasisSystem::monomial(size, grid);
    case BasisKind::Empirical:
      throw std::invalid_argument("make_basis: empirical bases are built from data, use BasisSystem::empirical");
  }
  throw std::invalid_argument("make_basis: unknown kind");
}

double inner_product(const Eigen::VectorXd& f, const Eigen::VectorXd& g, const Grid& grid) {
  if (f.size() != grid.size() || g.size() != grid.size())
    throw std::invalid_argument("inner_product: length mismatch with grid");
  return (f.array() * g.array() * grid.weights().array()).sum();
}

double inner_product(const CoefVector& f, const CoefVector& g) {
  if (!f.basis || !g.basis) throw std::invalid_argument("inner_product: missing basis");
  if (!f.basis->grid().same_as(g.basis->grid()))
    throw std::invalid_argument("inner_product: grids differ");
  return inner_product(f.on_grid(), g.on_grid(), f.basis->grid());
}

namespace {

// Shared solve path for expansions: spectral inverse of the Gram matrix with
// an explicit conditioning guard.
Eigen::MatrixXd gram_solve(const BasisSystem& basis, const Eigen::MatrixXd& rhs_rows) {
  Eigen::MatrixXd g = basis.gram();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("expand: Gram eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  double lmax = ev[ev.size() - 1];
  if (!(lmax > 0.0) || ev[0] <= lmax * 1e-12)
    throw std::runtime_error("expand: basis Gram matrix is numerically singular on this grid");
  return rhs_rows * es.eigenvectors() * ev.cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

CoefVector expand(const Eigen::VectorXd& samples, BasisPtr basis) {
  if (!basis) throw std::invalid_argument("expand: missing basis");
  Eigen::MatrixXd coefs = expand_rows(samples.transpose(), *basis);
  return CoefVector{std::move(basis), coefs.row(0).transpose()};
}

Eigen::MatrixXd expand_rows(const Eigen::MatrixXd& samples, const BasisSystem& basis) {
  if (samples.cols() != basis.grid().size())
    throw std::invalid_argument("expand: sample length must match basis grid");
  check_finite(samples, "expand samples");
  Eigen::MatrixXd rhs =
      (samples.array().rowwise() * basis.grid().weights().transpose().array()).matrix() *
      basis.eval().transpose();
  if (basis.kind() == BasisKind::Fourier) return rhs;
  return gram_solve(basis, rhs);
}

}  // namespace fivreg
