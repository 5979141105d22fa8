#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fivreg/inference.hpp"
#include "fivreg/io.hpp"

namespace fivreg {

/// Knobs shared by the simulation entry points.
struct SimulateOptions {
  double alpha = 0.05;
  int folds = 5;
  std::vector<int> q_candidates = {4, 6, 8, 10};
  std::vector<int> p_candidates = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  // Fraction of variance explained that sets the significance-test dimension.
  // The test is computed at a truncation chosen from the calibrated curves
  // alone; reusing the response-driven CV dimension would let selection leak
  // into the null distribution and inflate the size of the test.
  double test_fve = 0.99;
  bool with_naive = true;
};

/// Per-replicate outcome of the simulation harness. Errors are squared L2
/// distances to the truth; rejections are at the configured alpha.
/// stat_calibrated and p_calibrated come from the FVE-dimension fit used for
/// testing; p_chosen is the cross-validated dimension used for estimation.
struct ReplicateResult {
  int replicate = 0;
  int q_chosen = 0;
  int p_chosen = 0;
  double theta_err = 0.0;
  double beta_err = 0.0;
  double naive_err = 0.0;
  double stat_calibrated = 0.0;
  double p_calibrated = 1.0;
  double stat_naive = 0.0;
  double p_naive = 1.0;
  bool reject_calibrated = false;
  bool reject_naive = false;
};

struct SimulationSummary {
  ScenarioConfig config;
  SimulateOptions options;
  std::vector<ReplicateResult> replicates;

  double mean_theta_err = 0.0;
  double mean_beta_err = 0.0;
  double mean_naive_err = 0.0;
  double var_theta_err = 0.0;
  double var_beta_err = 0.0;
  double var_naive_err = 0.0;
  double reject_rate_calibrated = 0.0;
  double reject_rate_naive = 0.0;
  double mean_q = 0.0;
  double mean_p = 0.0;
};

/// One full replicate: draw the scenario, cross-validate both dimensions,
/// fit, test. Each replicate runs on its own counter stream, so results do
/// not depend on execution order.
ReplicateResult run_replicate(const ScenarioConfig& cfg, int replicate,
                              const SimulateOptions& opt);

SimulationSummary run_simulate(const ScenarioConfig& cfg, const SimulateOptions& opt = {});

/// Writes replicates.csv, summary.csv and config.txt into dir.
void write_simulation_outputs(const std::string& dir, const SimulationSummary& summary);

/// One cell of the convergence study: the true dimensions q0 and p0 both
/// track dim and the full cross-validated pipeline is rerun per replicate.
/// Replicate streams are shared across cells, so error curves over n use
/// common draws.
struct ConvergenceRow {
  int dim = 0;
  int n = 0;
  int replicates = 0;
  double mean_theta_err = 0.0;
  double median_theta_err = 0.0;
  double se_theta_err = 0.0;
  double mean_beta_err = 0.0;
  double median_beta_err = 0.0;
  double se_beta_err = 0.0;
};

std::vector<ConvergenceRow> run_convergence(const ScenarioConfig& base,
                                            const std::vector<int>& dims,
                                            const std::vector<int>& sizes);

void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows);

/// Knobs for fitting observed data.
struct FitOptions {
  double alpha = 0.05;
  int folds = 5;
  int grid_size = 101;
  bool log_response = false;
  bool standardize = false;
  bool smooth = true;      // false: use the raw panel values as-is
  int smooth_basis = 15;   // B-spline dimension before capping at the raw grid size
  double lambda = -1.0;    // smoothing penalty; negative selects by GCV
  std::vector<int> q_candidates = {4, 6, 8, 10};
  std::vector<int> p_candidates = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  double test_fve = 0.99;  // see SimulateOptions::test_fve
  std::uint64_t seed = kDefaultSeed;
};

/// Everything the fit pipeline produced, in plain serializable form.
struct RunReport {
  std::vector<std::pair<std::string, std::string>> settings;
  std::uint64_t seed = 0;
  int n = 0;
  int q_chosen = 0;
  int p_chosen = 0;
  int p_test = 0;  // truncation the significance test was computed at
  double alpha = 0.05;
  double beta0 = 0.0;
  Eigen::VectorXd beta_coefs;
  Eigen::VectorXd t;
  Eigen::VectorXd theta_hat;
  Eigen::VectorXd beta_hat;
  Eigen::VectorXd band_lower;
  Eigen::VectorXd band_upper;
  double stat_calibrated = 0.0;
  double p_calibrated = 1.0;
  int naive_p = 0;
  double naive_beta0 = 0.0;
  Eigen::VectorXd naive_beta_hat;
  double stat_naive = 0.0;
  double p_naive = 1.0;
  double elapsed_seconds = 0.0;
};

/// Field-for-field equality, elapsed time excluded.
bool same_report(const RunReport& a, const RunReport& b);

/// Full pipeline on observed tables: subject alignment, optional log /
/// standardization, time rescale to [0, 1], smoothing, covariate
/// residualization, both cross-validations, both fits, tests and band.
RunReport run_fit(const PanelTable& w, const PanelTable& z, const ResponseTable& response,
                  const FitOptions& opt);

RunReport run_fit_files(const std::string& w_path, const std::string& z_path,
                        const std::string& response_path, const FitOptions& opt);

/// report.txt (every field, full precision) plus beta_grid.csv and
/// theta_grid.csv sidecars for plotting.
void write_report(const std::string& dir, const RunReport& report);
RunReport read_report(const std::string& report_txt_path);

}  // namespace fivreg
