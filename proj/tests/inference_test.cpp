#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "fivreg/calibrate.hpp"
#include "fivreg/inference.hpp"
#include "fivreg/normal.hpp"
#include "fivreg/simgen.hpp"

using namespace fivreg;

namespace {

RegressionFit blank_fit(FitMethod method, int p, int n, const Eigen::MatrixXd& gamma) {
  Grid g = make_grid(11);
  RegressionFit fit;
  fit.method = method;
  fit.beta0 = 0.0;
  fit.beta_basis = BasisSystem::empirical(Eigen::MatrixXd::Random(p, 11), g);
  fit.beta_coefs = Eigen::VectorXd::Zero(p);
  fit.p = p;
  fit.design_scores = Eigen::MatrixXd::Ones(n, p + 1);
  fit.gamma_hat = gamma;
  fit.y_var = 1.0;
  fit.residuals = Eigen::VectorXd::Zero(n);
  return fit;
}

}  // namespace

TEST_CASE("normal cdf and quantile reference values") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_cdf(-1.0) + normal_cdf(1.0) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-12));
  CHECK(normal_quantile(0.05) == doctest::Approx(-1.6448536269514722).epsilon(1e-12));

  for (double x : {-3.0, -1.3, -0.2, 0.4, 1.7, 2.9}) {
    CHECK(normal_quantile(normal_cdf(x)) == doctest::Approx(x).epsilon(1e-9));
  }
  CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
  CHECK_THROWS_AS(normal_quantile(-0.1), std::invalid_argument);
}

TEST_CASE("zero coefficients give the frozen statistic") {
  // q = 0, so the statistic is -(p+1)/sqrt(2(p+1)) = -sqrt((p+1)/2)
  RegressionFit fit = blank_fit(FitMethod::Calibrated, 3, 50,
                                Eigen::MatrixXd::Identity(4, 4));
  TestResult r = test_calibrated(fit);
  CHECK(r.statistic == doctest::Approx(-1.4142135623730951).epsilon(1e-14));
  CHECK(r.p_value == doctest::Approx(0.15729920705028499).epsilon(1e-12));
  CHECK(r.p_used == 3);
  CHECK(r.method == FitMethod::Calibrated);

  RegressionFit naive = blank_fit(FitMethod::Naive, 2, 50, Eigen::MatrixXd::Identity(3, 3));
  TestResult rn = test_naive(naive);
  CHECK(rn.statistic == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(rn.method == FitMethod::Naive);
}

TEST_CASE("p-value is the two-sided normal tail of the statistic") {
  ScenarioConfig cfg;
  cfg.n = 80;
  cfg.grid_size = 41;
  cfg.delta = 0.0;
  Rng rng(15, 0);
  SimulatedDataset data = generate_scenario(cfg, rng);
  CalibrationFit cal = fit_concurrent(data.w, data.z, BasisSystem::bspline(6, data.w.grid()));
  RegressionFit fit = fit_calibrated(data.y, cal.vhat, 3);
  TestResult r = test_calibrated(fit);
  CHECK(r.p_value ==
        doctest::Approx(2.0 * (1.0 - normal_cdf(std::abs(r.statistic)))).epsilon(1e-15));
  CHECK(r.p_value > 0.0);
  CHECK(r.p_value < 1.0);
}

TEST_CASE("method mismatch is rejected") {
  RegressionFit cal = blank_fit(FitMethod::Calibrated, 2, 10, Eigen::MatrixXd::Identity(3, 3));
  RegressionFit nai = blank_fit(FitMethod::Naive, 2, 10, Eigen::MatrixXd::Identity(3, 3));
  CHECK_THROWS_AS(test_naive(cal), std::invalid_argument);
  CHECK_THROWS_AS(test_calibrated(nai), std::invalid_argument);
}

TEST_CASE("constant responses make the test undefined") {
  RegressionFit fit = blank_fit(FitMethod::Calibrated, 2, 10, Eigen::MatrixXd());
  CHECK_THROWS_AS(test_calibrated(fit), std::runtime_error);
  CHECK_THROWS_AS(confidence_band(fit, 0.05, fit.beta_basis->grid()), std::runtime_error);
}

TEST_CASE("statistic is invariant to subject permutations") {
  ScenarioConfig cfg;
  cfg.n = 60;
  cfg.grid_size = 41;
  Rng rng(29, 0);
  SimulatedDataset data = generate_scenario(cfg, rng);
  auto qb = BasisSystem::bspline(6, data.w.grid());

  auto run = [&](const std::vector<int>& order) {
    FunctionalSample w = data.w.subset(order);
    FunctionalSample z = data.z.subset(order);
    Eigen::VectorXd y(order.size());
    for (size_t i = 0; i < order.size(); ++i) y(static_cast<Eigen::Index>(i)) = data.y(order[i]);
    CalibrationFit cal = fit_concurrent(w, z, qb);
    return test_calibrated(fit_calibrated(y, cal.vhat, 3)).statistic;
  };

  std::vector<int> identity(60), reversed(60);
  std::iota(identity.begin(), identity.end(), 0);
  reversed = identity;
  std::reverse(reversed.begin(), reversed.end());
  std::swap(reversed[7], reversed[31]);

  double a = run(identity);
  double b = run(reversed);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("hand-computed band for a diagonal gamma") {
  Grid g = make_grid(11);
  RegressionFit fit;
  fit.method = FitMethod::Calibrated;
  fit.beta0 = 0.3;
  Eigen::MatrixXd psi(1, 11);
  psi.row(0) = g.points().transpose();  // single slope function psi(t) = t
  fit.beta_basis = BasisSystem::empirical(psi, g);
  fit.beta_coefs = Eigen::VectorXd::Constant(1, 2.0);
  fit.p = 1;
  fit.design_scores = Eigen::MatrixXd::Ones(100, 2);
  fit.gamma_hat = Eigen::Vector2d(0.5, 0.25).asDiagonal();
  fit.y_var = 1.0;
  fit.residuals = Eigen::VectorXd::Zero(100);

  ConfidenceBand band = confidence_band(fit, 0.05, g);
  REQUIRE(band.t.size() == 11);
  CHECK(band.alpha == 0.05);
  CHECK((band.t - g.points()).cwiseAbs().maxCoeff() == 0.0);

  // c(0.05) = (2 + sqrt(4) * z_{0.95}) / 100 with z_{0.95} = 1.6448536...
  const double c = 0.052897072539029444;
  for (int j = 0; j < 11; ++j) {
    double t = g.points()(j);
    double half = std::sqrt(c * (1.0 / 0.5 + t * t / 0.25));
    CHECK(band.center(j) == doctest::Approx(2.0 * t).epsilon(1e-12));
    CHECK(band.upper(j) - band.center(j) == doctest::Approx(half).epsilon(1e-10));
    CHECK(band.center(j) - band.lower(j) == doctest::Approx(half).epsilon(1e-10));
  }
}

TEST_CASE("band width shrinks with alpha and with n") {
  Grid g = make_grid(21);
  auto make = [&](int n) {
    RegressionFit fit;
    fit.method = FitMethod::Calibrated;
    fit.beta0 = 0.0;
    Eigen::MatrixXd psi(2, 21);
    psi.row(0) = Eigen::RowVectorXd::Ones(21);
    psi.row(1) = g.points().transpose();
    fit.beta_basis = BasisSystem::empirical(psi, g);
    fit.beta_coefs = Eigen::Vector2d(1.0, -1.0);
    fit.p = 2;
    fit.design_scores = Eigen::MatrixXd::Ones(n, 3);
    fit.gamma_hat = Eigen::Vector3d(1.0, 0.5, 0.25).asDiagonal();
    fit.y_var = 1.0;
    fit.residuals = Eigen::VectorXd::Zero(n);
    return fit;
  };

  ConfidenceBand wide = confidence_band(make(100), 0.01, g);
  ConfidenceBand mid = confidence_band(make(100), 0.05, g);
  ConfidenceBand thin = confidence_band(make(400), 0.05, g);
  for (int j = 0; j < 21; ++j) {
    double w_wide = wide.upper(j) - wide.lower(j);
    double w_mid = mid.upper(j) - mid.lower(j);
    double w_thin = thin.upper(j) - thin.lower(j);
    CHECK(w_wide > w_mid);
    CHECK(w_thin < w_mid);
  }
  CHECK_THROWS_AS(confidence_band(make(100), 0.0, g), std::invalid_argument);
  CHECK_THROWS_AS(confidence_band(make(100), 1.0, g), std::invalid_argument);
}

TEST_CASE("band is invariant to the eigenvector sign convention") {
  // gamma with off-diagonal structure exercises the spectral path; the band
  // must not depend on arbitrary eigenvector signs, so flipping the slope
  // parametrization while keeping gamma fixed leaves widths unchanged.
  Grid g = make_grid(15);
  RegressionFit fit;
  fit.method = FitMethod::Calibrated;
  fit.beta0 = 0.1;
  Eigen::MatrixXd psi(1, 15);
  psi.row(0) = (2.0 * g.points().array()).sin().matrix().transpose();
  fit.beta_basis = BasisSystem::empirical(psi, g);
  fit.beta_coefs = Eigen::VectorXd::Constant(1, 1.0);
  fit.p = 1;
  fit.design_scores = Eigen::MatrixXd::Ones(50, 2);
  Eigen::Matrix2d gamma;
  gamma << 1.0, 0.3, 0.3, 0.5;
  fit.gamma_hat = gamma;
  fit.y_var = 1.0;
  fit.residuals = Eigen::VectorXd::Zero(50);

  ConfidenceBand band = confidence_band(fit, 0.05, g);
  ConfidenceBand again = confidence_band(fit, 0.05, g);
  CHECK((band.upper - again.upper).cwiseAbs().maxCoeff() == 0.0);
  for (int j = 0; j < 15; ++j) CHECK(band.upper(j) > band.lower(j));
}

TEST_CASE("rank-deficient gamma is refused") {
  RegressionFit fit = blank_fit(FitMethod::Calibrated, 1, 30, Eigen::MatrixXd::Ones(2, 2));
  CHECK_THROWS_AS(confidence_band(fit, 0.05, fit.beta_basis->grid()), std::runtime_error);
}

TEST_CASE("analytic slope bases re-evaluate on a new grid") {
  ScenarioConfig cfg;
  cfg.n = 70;
  cfg.grid_size = 41;
  Rng rng(52, 0);
  SimulatedDataset data = generate_scenario(cfg, rng);
  RegressionFit fit = fit_naive(data.y, data.w, 3);

  Grid fine = make_grid(161);
  ConfidenceBand band = confidence_band(fit, 0.05, fine);
  REQUIRE(band.t.size() == 161);
  auto rebased = fit.beta_basis->rebase(fine);
  Eigen::VectorXd center = rebased->eval().transpose() * fit.beta_coefs;
  CHECK((band.center - center).cwiseAbs().maxCoeff() < 1e-12);

  // empirical slope bases cannot leave their grid
  CalibrationFit cal = fit_concurrent(data.w, data.z, BasisSystem::bspline(6, data.w.grid()));
  RegressionFit efit = fit_calibrated(data.y, cal.vhat, 2);
  CHECK_THROWS_AS(confidence_band(efit, 0.05, fine), std::logic_error);
  CHECK_NOTHROW(confidence_band(efit, 0.05, data.w.grid()));
}

TEST_CASE("alternative pushes the statistic to the right") {
  ScenarioConfig null_cfg, alt_cfg;
  null_cfg.n = alt_cfg.n = 400;
  null_cfg.grid_size = alt_cfg.grid_size = 51;
  null_cfg.delta = 0.0;
  alt_cfg.delta = 1.0;

  auto stat = [](const ScenarioConfig& cfg, int rep) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(rep));
    SimulatedDataset data = generate_scenario(cfg, rng);
    CalibrationFit cal =
        fit_concurrent(data.w, data.z, BasisSystem::bspline(6, data.w.grid()));
    return test_calibrated(fit_calibrated(data.y, cal.vhat, 3)).statistic;
  };

  double null_mean = 0.0, alt_mean = 0.0;
  for (int r = 0; r < 5; ++r) {
    null_mean += stat(null_cfg, r) / 5.0;
    alt_mean += stat(alt_cfg, r) / 5.0;
  }
  CHECK(alt_mean > null_mean + 2.0);
}
