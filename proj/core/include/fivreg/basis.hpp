#pragma once

#include <Eigen/Dense>
#include <memory>

namespace fivreg {

enum class QuadRule { Trapezoid, Simpson };

/// Quadrature grid on [0, 1]: strictly increasing points with positive
/// weights normalized to sum to one, so integrate() returns averages over the
/// unit interval and inner products stay on the same scale for every m.
class Grid {
 public:
  Grid(Eigen::VectorXd points, Eigen::VectorXd weights);

  /// Trapezoid weights on arbitrary strictly increasing points in [0, 1].
  static Grid trapezoid(const Eigen::VectorXd& points);

  Eigen::Index size() const { return points_.size(); }
  const Eigen::VectorXd& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  double integrate(const Eigen::VectorXd& values) const;
  bool same_as(const Grid& other) const;

 private:
  Eigen::VectorXd points_;
  Eigen::VectorXd weights_;
};

/// Uniform grid of m points on [0, 1] with the requested quadrature rule.
/// Simpson requires odd m; everything else accepts m >= 3.
Grid make_grid(int m, QuadRule rule = QuadRule::Trapezoid);

enum class BasisKind { Fourier, BSpline, Monomial, Empirical };

/// A finite basis evaluated on a fixed grid. Rows of eval() are basis
/// functions, columns are grid points. Analytic kinds also carry second
/// derivatives for roughness penalties; Empirical does not.
class BasisSystem {
 public:
  static std::shared_ptr<const BasisSystem> fourier(int size, const Grid& grid);
  static std::shared_ptr<const BasisSystem> bspline(int size, const Grid& grid, int order = 4);
  static std::shared_ptr<const BasisSystem> monomial(int size, const Grid& grid);
  static std::shared_ptr<const BasisSystem> empirical(Eigen::MatrixXd values, const Grid& grid);
  /// Identity system on the grid: function j is the interpolant pinned to
  /// node j, so coefficients and point values coincide.
  static std::shared_ptr<const BasisSystem> nodal(const Grid& grid);

  BasisKind kind() const { return kind_; }
  int size() const { return static_cast<int>(eval_.rows()); }
  const Grid& grid() const { return grid_; }
  const Eigen::MatrixXd& eval() const { return eval_; }

  bool has_second_derivative() const { return d2_.size() > 0; }
  const Eigen::MatrixXd& second_derivative() const;

  /// True when eval() is the identity (nodal systems): coefficients equal
  /// point values, which lets reconstructions skip the matrix product.
  bool is_identity() const { return identity_; }

  /// Quadrature Gram matrix, size x size.
  Eigen::MatrixXd gram() const;

  int bspline_order() const { return order_; }

  /// Same analytic family evaluated on another grid (coefficient vectors
  /// carry over). Throws for Empirical, which has no off-grid definition.
  std::shared_ptr<const BasisSystem> rebase(const Grid& grid) const;

 private:
  BasisSystem(BasisKind kind, Grid grid, Eigen::MatrixXd eval, Eigen::MatrixXd d2, int order)
      : kind_(kind), grid_(std::move(grid)), eval_(std::move(eval)), d2_(std::move(d2)),
        order_(order) {
    identity_ = kind_ == BasisKind::Empirical && eval_.rows() == eval_.cols() &&
                eval_.isIdentity(0.0);
  }

  BasisKind kind_;
  Grid grid_;
  Eigen::MatrixXd eval_;  // size x m
  Eigen::MatrixXd d2_;    // size x m, empty for Empirical
  int order_;             // B-spline order, 0 otherwise
  bool identity_ = false;
};

using BasisPtr = std::shared_ptr<const BasisSystem>;

BasisPtr make_basis(BasisKind kind, int size, const Grid& grid);

/// A single function as coefficients against a basis.
struct CoefVector {
  BasisPtr basis;
  Eigen::VectorXd coefs;

  Eigen::VectorXd on_grid() const { return basis->eval().transpose() * coefs; }
};

double inner_product(const Eigen::VectorXd& f, const Eigen::VectorXd& g, const Grid& grid);
double inner_product(const CoefVector& f, const CoefVector& g);

/// Least-squares expansion of grid samples in a basis (Gram-weighted normal
/// equations under the grid's quadrature). Orthonormal Fourier short-circuits
/// to plain inner products.
CoefVector expand(const Eigen::VectorXd& samples, BasisPtr basis);

/// Row-wise expansion of many curves with one Gram factorization.
Eigen::MatrixXd expand_rows(const Eigen::MatrixXd& samples, const BasisSystem& basis);

}  // namespace fivreg
