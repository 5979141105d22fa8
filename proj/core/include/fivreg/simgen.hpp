#pragma once

#include <cstdint>

#include "fivreg/funcdata.hpp"
#include "fivreg/rng.hpp"

namespace fivreg {

/// Parameters of the synthetic data-generating process. Defaults follow the
/// simulation design used throughout the test suite.
struct ScenarioConfig {
  int n = 500;           // subjects
  int k0 = 5;            // B-spline dimension of the instrument curves
  int q0 = 3;            // monomial dimension of the true concurrent slope
  int p0 = 3;            // Fourier dimension of the true regression function
  double sigma = 0.1;    // measurement-error GP scale
  double l = 0.05;       // measurement-error GP length-scale
  double delta = 1.0;    // signal multiplier; 0 gives the global null
  double sigma_e = 0.1;  // regression error variance
  int replicates = 100;
  std::uint64_t seed = kDefaultSeed;
  int grid_size = 101;

  void validate() const;
};

/// One synthetic dataset: observed (y, w, z) plus the latent x and the truth
/// that generated it.
struct SimulatedDataset {
  Eigen::VectorXd y;
  FunctionalSample w;
  FunctionalSample z;
  FunctionalSample x;
  CoefVector true_beta;
  CoefVector true_theta;
};

/// n draws from a mean-zero GP with covariance sigma * exp(-(s-t)^2 / (2 l^2)),
/// sampled on the grid through a jittered Cholesky factor.
CurvePanel sample_gp_sqexp(int n, double sigma, double l, const Grid& grid, Rng& rng);

/// n standard Brownian motion paths on the grid (B(0) = 0).
CurvePanel sample_brownian(int n, const Grid& grid, Rng& rng);

/// Full draw of the data-generating process for one replicate.
SimulatedDataset generate_scenario(const ScenarioConfig& cfg, Rng& rng);

/// Squared L2 distance between an estimate and the truth, by quadrature on
/// the given grid.
double estimation_error(const CoefVector& estimate, const CoefVector& truth, const Grid& grid);

}  // namespace fivreg
