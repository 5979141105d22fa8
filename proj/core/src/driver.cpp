#include "fivreg/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fivreg {

namespace {

std::string join_vector(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

Eigen::VectorXd split_vector(const std::string& s, const std::string& ctx) {
  std::vector<double> vals;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) vals.push_back(parse_double(cur, ctx));
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

double sample_mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = sample_mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double sample_median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

ReplicateResult run_replicate(const ScenarioConfig& cfg, int replicate,
                              const SimulateOptions& opt) {
  if (replicate < 0) throw std::invalid_argument("run_replicate: replicate must be nonnegative");
  Rng rng(cfg.seed, static_cast<std::uint64_t>(replicate));
  SimulatedDataset data = generate_scenario(cfg, rng);
  const Grid& grid = data.w.grid();

  ReplicateResult res;
  res.replicate = replicate;

  CvResult cvq = cross_validate_q(data.w, data.z, opt.q_candidates, opt.folds, rng);
  res.q_chosen = cvq.chosen;
  CalibrationFit cal =
      fit_concurrent(data.w, data.z, BasisSystem::bspline(cvq.chosen, grid));
  res.theta_err = estimation_error(cal.theta, data.true_theta, grid);

  CvResult cvp = cross_validate_p(data.y, cal.vhat, opt.p_candidates, opt.folds, rng);
  res.p_chosen = cvp.chosen;
  RegressionFit fit = fit_calibrated(data.y, cal.vhat, cvp.chosen);
  res.beta_err = estimation_error(fit.beta_function(), data.true_beta, grid);

  RegressionFit tfit = fit_calibrated_fve(data.y, cal.vhat, opt.test_fve);
  TestResult test = test_calibrated(tfit);
  res.stat_calibrated = test.statistic;
  res.p_calibrated = test.p_value;
  res.reject_calibrated = test.p_value < opt.alpha;

  if (opt.with_naive) {
    RegressionFit naive = fit_naive(data.y, data.w, cvp.chosen);
    res.naive_err = estimation_error(naive.beta_function(), data.true_beta, grid);
    TestResult ntest = test_naive(naive);
    res.stat_naive = ntest.statistic;
    res.p_naive = ntest.p_value;
    res.reject_naive = ntest.p_value < opt.alpha;
  } else {
    res.naive_err = std::numeric_limits<double>::quiet_NaN();
    res.stat_naive = std::numeric_limits<double>::quiet_NaN();
    res.p_naive = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

SimulationSummary run_simulate(const ScenarioConfig& cfg, const SimulateOptions& opt) {
  cfg.validate();
  SimulationSummary s;
  s.config = cfg;
  s.options = opt;
  s.replicates.reserve(static_cast<std::size_t>(cfg.replicates));
  for (int r = 0; r < cfg.replicates; ++r) s.replicates.push_back(run_replicate(cfg, r, opt));

  std::vector<double> te, be, ne, qs, ps;
  int rej_c = 0, rej_n = 0;
  for (const auto& rep : s.replicates) {
    te.push_back(rep.theta_err);
    be.push_back(rep.beta_err);
    if (opt.with_naive) ne.push_back(rep.naive_err);
    qs.push_back(rep.q_chosen);
    ps.push_back(rep.p_chosen);
    rej_c += rep.reject_calibrated ? 1 : 0;
    rej_n += rep.reject_naive ? 1 : 0;
  }
  s.mean_theta_err = sample_mean(te);
  s.var_theta_err = sample_var(te);
  s.mean_beta_err = sample_mean(be);
  s.var_beta_err = sample_var(be);
  if (opt.with_naive) {
    s.mean_naive_err = sample_mean(ne);
    s.var_naive_err = sample_var(ne);
    s.reject_rate_naive = static_cast<double>(rej_n) / cfg.replicates;
  } else {
    s.mean_naive_err = std::numeric_limits<double>::quiet_NaN();
    s.var_naive_err = std::numeric_limits<double>::quiet_NaN();
    s.reject_rate_naive = std::numeric_limits<double>::quiet_NaN();
  }
  s.reject_rate_calibrated = static_cast<double>(rej_c) / cfg.replicates;
  s.mean_q = sample_mean(qs);
  s.mean_p = sample_mean(ps);
  return s;
}

void write_simulation_outputs(const std::string& dir, const SimulationSummary& s) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/replicates.csv");
    if (!out) throw std::runtime_error(dir + "/replicates.csv: cannot open for writing");
    out << "replicate,theta_err,prop_err,naive_err,q_chosen,p_chosen,T_hat,T_w,"
           "reject_prop,reject_naive\n";
    for (const auto& r : s.replicates) {
      out << r.replicate << ',' << format_double(r.theta_err) << ','
          << format_double(r.beta_err) << ',' << format_double(r.naive_err) << ','
          << r.q_chosen << ',' << r.p_chosen << ',' << format_double(r.stat_calibrated) << ','
          << format_double(r.stat_naive) << ',' << (r.reject_calibrated ? 1 : 0) << ','
          << (r.reject_naive ? 1 : 0) << '\n';
    }
  }
  {
    std::ofstream out(dir + "/summary.csv");
    if (!out) throw std::runtime_error(dir + "/summary.csv: cannot open for writing");
    out << "n,k0,q0,p0,sigma,l,delta,sigma_e,replicates,seed,grid_size,alpha,"
           "mean_theta_err,var_theta_err,mean_beta_err,var_beta_err,mean_naive_err,"
           "var_naive_err,reject_rate_calibrated,reject_rate_naive,mean_q,mean_p\n";
    const ScenarioConfig& c = s.config;
    out << c.n << ',' << c.k0 << ',' << c.q0 << ',' << c.p0 << ',' << format_double(c.sigma)
        << ',' << format_double(c.l) << ',' << format_double(c.delta) << ','
        << format_double(c.sigma_e) << ',' << c.replicates << ',' << c.seed << ','
        << c.grid_size << ',' << format_double(s.options.alpha) << ','
        << format_double(s.mean_theta_err) << ',' << format_double(s.var_theta_err) << ','
        << format_double(s.mean_beta_err) << ',' << format_double(s.var_beta_err) << ','
        << format_double(s.mean_naive_err) << ',' << format_double(s.var_naive_err) << ','
        << format_double(s.reject_rate_calibrated) << ',' << format_double(s.reject_rate_naive)
        << ',' << format_double(s.mean_q) << ',' << format_double(s.mean_p) << '\n';
  }
  write_config(dir + "/config.txt", s.config);
}

std::vector<ConvergenceRow> run_convergence(const ScenarioConfig& base,
                                            const std::vector<int>& dims,
                                            const std::vector<int>& sizes) {
  if (dims.empty() || sizes.empty())
    throw std::invalid_argument("run_convergence: dims and sizes must be nonempty");
  std::vector<ConvergenceRow> rows;
  SimulateOptions opt;
  opt.with_naive = false;
  for (int dim : dims) {
    for (int n : sizes) {
      ScenarioConfig cfg = base;
      cfg.q0 = dim;
      cfg.p0 = dim;
      cfg.n = n;
      cfg.validate();

      std::vector<double> te, be;
      for (int r = 0; r < cfg.replicates; ++r) {
        ReplicateResult rep = run_replicate(cfg, r, opt);
        te.push_back(rep.theta_err);
        be.push_back(rep.beta_err);
      }
      ConvergenceRow row;
      row.dim = dim;
      row.n = n;
      row.replicates = cfg.replicates;
      row.mean_theta_err = sample_mean(te);
      row.median_theta_err = sample_median(te);
      row.se_theta_err = std::sqrt(sample_var(te) / cfg.replicates);
      row.mean_beta_err = sample_mean(be);
      row.median_beta_err = sample_median(be);
      row.se_beta_err = std::sqrt(sample_var(be) / cfg.replicates);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "dim,n,replicates,mean_theta_err,median_theta_err,se_theta_err,"
         "mean_beta_err,median_beta_err,se_beta_err\n";
  for (const auto& r : rows) {
    out << r.dim << ',' << r.n << ',' << r.replicates << ',' << format_double(r.mean_theta_err)
        << ',' << format_double(r.median_theta_err) << ',' << format_double(r.se_theta_err)
        << ',' << format_double(r.mean_beta_err) << ',' << format_double(r.median_beta_err)
        << ',' << format_double(r.se_beta_err) << '\n';
  }
}

namespace {

// Reorder a panel's rows to match the response's subject order; every subject
// must appear in both, and the panels may not contain extras.
Eigen::MatrixXd align_panel(const PanelTable& panel, const std::vector<std::string>& subjects,
                            const char* label) {
  std::map<std::string, Eigen::Index> index;
  for (std::size_t i = 0; i < panel.subjects.size(); ++i)
    index[panel.subjects[i]] = static_cast<Eigen::Index>(i);
  if (index.size() != panel.subjects.size())
    throw std::runtime_error(std::string(label) + " panel: duplicate subjects");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(subjects.size()), panel.values.cols());
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    auto it = index.find(subjects[i]);
    if (it == index.end())
      throw std::runtime_error("subject '" + subjects[i] + "' from the response table is missing in the " +
                               label + " panel");
    out.row(static_cast<Eigen::Index>(i)) = panel.values.row(it->second);
  }
  if (panel.subjects.size() != subjects.size()) {
    for (const auto& s : panel.subjects)
      if (std::find(subjects.begin(), subjects.end(), s) == subjects.end())
        throw std::runtime_error("subject '" + s + "' in the " + label +
                                 " panel has no response row");
  }
  return out;
}

Eigen::VectorXd rescale_times(const Eigen::VectorXd& t) {
  double t0 = t[0], t1 = t[t.size() - 1];
  if (!(t1 > t0)) throw std::runtime_error("panel times must span a positive range");
  return (t.array() - t0) / (t1 - t0);
}

double standardize_constant(double maxabs) {
  if (maxabs <= 0.0) return 1.0;
  double c = std::pow(10.0, std::floor(std::log10(maxabs)) + 1.0);
  while (c <= maxabs) c *= 10.0;
  while (c / 10.0 > maxabs) c /= 10.0;
  return c;
}

// Smooth one aligned panel and carry the coefficients to the working grid.
FunctionalSample smooth_to_grid(const Eigen::MatrixXd& values, const Eigen::VectorXd& raw_times,
                                const Grid& working, const FitOptions& opt, double& lambda_used) {
  Grid raw = Grid::trapezoid(rescale_times(raw_times));
  int size = std::min<int>(opt.smooth_basis, static_cast<int>(raw.size()));
  if (size < 4)
    throw std::runtime_error("smoothing needs at least 4 observation times per subject");
  BasisPtr basis = BasisSystem::bspline(size, raw);
  CurvePanel panel(raw, values);
  lambda_used = opt.lambda >= 0.0 ? opt.lambda : choose_lambda_gcv(panel, *basis);
  FunctionalSample fitted = smooth_panel(panel, basis, lambda_used);
  return FunctionalSample(basis->rebase(working), fitted.coefs());
}

}  // namespace

RunReport run_fit(const PanelTable& w, const PanelTable& z, const ResponseTable& response,
                  const FitOptions& opt) {
  auto t_start = std::chrono::steady_clock::now();
  if (!(opt.alpha > 0.0 && opt.alpha < 1.0))
    throw std::invalid_argument("run_fit: alpha must lie in (0, 1)");
  if (opt.grid_size < 3) throw std::invalid_argument("run_fit: grid_size must be at least 3");

  Eigen::Index n = static_cast<Eigen::Index>(response.subjects.size());
  Eigen::MatrixXd wvals = align_panel(w, response.subjects, "W");
  Eigen::MatrixXd zvals = align_panel(z, response.subjects, "Z");

  Eigen::VectorXd y = response.y;
  if (opt.log_response) {
    if ((y.array() <= 0.0).any())
      throw std::runtime_error("run_fit: --log-response requires strictly positive responses");
    y = y.array().log();
  }

  double scale = 1.0;
  if (opt.standardize) {
    double maxabs = std::max(wvals.cwiseAbs().maxCoeff(), zvals.cwiseAbs().maxCoeff());
    scale = standardize_constant(maxabs);
    wvals /= scale;
    zvals /= scale;
  }

  double lambda_w = 0.0, lambda_z = 0.0;
  FunctionalSample ws = [&] {
    if (opt.smooth) {
      Grid working = make_grid(opt.grid_size);
      return smooth_to_grid(wvals, w.times, working, opt, lambda_w);
    }
    Grid raw = Grid::trapezoid(rescale_times(w.times));
    return FunctionalSample(BasisSystem::nodal(raw), wvals);
  }();
  FunctionalSample zs = [&] {
    if (opt.smooth) {
      return smooth_to_grid(zvals, z.times, ws.grid(), opt, lambda_z);
    }
    Eigen::VectorXd zt = rescale_times(z.times);
    Eigen::VectorXd wt = rescale_times(w.times);
    if (zt.size() != wt.size() || !(zt.array() == wt.array()).all())
      throw std::runtime_error(
          "run_fit: without smoothing, W and Z must share the same observation times");
    return FunctionalSample(BasisSystem::nodal(ws.grid()), zvals);
  }();
  const Grid& working = ws.grid();

  if (response.covariates.cols() > 0) {
    Eigen::MatrixXd xmat(n, response.covariates.cols() + 1);
    xmat.col(0).setOnes();
    xmat.rightCols(response.covariates.cols()) = response.covariates;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xmat);
    if (qr.rank() < xmat.cols())
      throw std::runtime_error("run_fit: covariate matrix is rank deficient");
    y = y - xmat * qr.solve(y);
  }

  Rng rng_q(opt.seed, 1);
  CvResult cvq = cross_validate_q(ws, zs, opt.q_candidates, opt.folds, rng_q);
  CalibrationFit cal = fit_concurrent(ws, zs, BasisSystem::bspline(cvq.chosen, working));

  Rng rng_p(opt.seed, 2);
  CvResult cvp = cross_validate_p(y, cal.vhat, opt.p_candidates, opt.folds, rng_p);
  RegressionFit fit = fit_calibrated(y, cal.vhat, cvp.chosen);
  RegressionFit naive = fit_naive(y, ws, cvp.chosen);

  RegressionFit tfit = fit_calibrated_fve(y, cal.vhat, opt.test_fve);
  TestResult tc = test_calibrated(tfit);
  TestResult tn = test_naive(naive);
  ConfidenceBand band = confidence_band(fit, opt.alpha, working);

  RunReport rep;
  rep.seed = opt.seed;
  rep.n = static_cast<int>(n);
  rep.q_chosen = cvq.chosen;
  rep.p_chosen = cvp.chosen;
  rep.p_test = static_cast<int>(tfit.beta_coefs.size());
  rep.alpha = opt.alpha;
  rep.beta0 = fit.beta0;
  rep.beta_coefs = fit.beta_coefs;
  rep.t = working.points();
  rep.theta_hat = cal.theta_on_grid();
  rep.beta_hat = fit.beta_on_grid();
  rep.band_lower = band.lower;
  rep.band_upper = band.upper;
  rep.stat_calibrated = tc.statistic;
  rep.p_calibrated = tc.p_value;
  rep.naive_p = naive.p;
  rep.naive_beta0 = naive.beta0;
  rep.naive_beta_hat = naive.beta_on_grid();
  rep.stat_naive = tn.statistic;
  rep.p_naive = tn.p_value;

  rep.settings = {
      {"alpha", format_double(opt.alpha)},
      {"folds", std::to_string(opt.folds)},
      {"grid_size", std::to_string(opt.grid_size)},
      {"log_response", opt.log_response ? "true" : "false"},
      {"standardize", opt.standardize ? "true" : "false"},
      {"standardize_constant", format_double(scale)},
      {"smooth", opt.smooth ? "true" : "false"},
      {"smooth_basis", std::to_string(opt.smooth_basis)},
      {"lambda_w", format_double(lambda_w)},
      {"lambda_z", format_double(lambda_z)},
      {"q_candidates", join_ints(opt.q_candidates)},
      {"p_candidates", join_ints(opt.p_candidates)},
  };

  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

RunReport run_fit_files(const std::string& w_path, const std::string& z_path,
                        const std::string& response_path, const FitOptions& opt) {
  PanelTable w = read_panel_csv(w_path);
  PanelTable z = read_panel_csv(z_path);
  ResponseTable resp = read_response_csv(response_path);
  return run_fit(w, z, resp, opt);
}

bool same_report(const RunReport& a, const RunReport& b) {
  auto veq = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return x.size() == y.size() && (x.array() == y.array()).all();
  };
  return a.settings == b.settings && a.seed == b.seed && a.n == b.n &&
         a.q_chosen == b.q_chosen && a.p_chosen == b.p_chosen && a.p_test == b.p_test &&
         a.alpha == b.alpha &&
         a.beta0 == b.beta0 && veq(a.beta_coefs, b.beta_coefs) && veq(a.t, b.t) &&
         veq(a.theta_hat, b.theta_hat) && veq(a.beta_hat, b.beta_hat) &&
         veq(a.band_lower, b.band_lower) && veq(a.band_upper, b.band_upper) &&
         a.stat_calibrated == b.stat_calibrated && a.p_calibrated == b.p_calibrated &&
         a.naive_p == b.naive_p && a.naive_beta0 == b.naive_beta0 &&
         veq(a.naive_beta_hat, b.naive_beta_hat) && a.stat_naive == b.stat_naive &&
         a.p_naive == b.p_naive;
}

void write_report(const std::string& dir, const RunReport& rep) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/report.txt");
    if (!out) throw std::runtime_error(dir + "/report.txt: cannot open for writing");
    out << "seed = " << rep.seed << '\n'
        << "n = " << rep.n << '\n'
        << "q_chosen = " << rep.q_chosen << '\n'
        << "p_chosen = " << rep.p_chosen << '\n'
        << "p_test = " << rep.p_test << '\n'
        << "alpha = " << format_double(rep.alpha) << '\n'
        << "beta0 = " << format_double(rep.beta0) << '\n'
        << "beta_coefs = " << join_vector(rep.beta_coefs) << '\n'
        << "t = " << join_vector(rep.t) << '\n'
        << "theta_hat = " << join_vector(rep.theta_hat) << '\n'
        << "beta_hat = " << join_vector(rep.beta_hat) << '\n'
        << "band_lower = " << join_vector(rep.band_lower) << '\n'
        << "band_upper = " << join_vector(rep.band_upper) << '\n'
        << "stat_calibrated = " << format_double(rep.stat_calibrated) << '\n'
        << "p_calibrated = " << format_double(rep.p_calibrated) << '\n'
        << "naive_p = " << rep.naive_p << '\n'
        << "naive_beta0 = " << format_double(rep.naive_beta0) << '\n'
        << "naive_beta_hat = " << join_vector(rep.naive_beta_hat) << '\n'
        << "stat_naive = " << format_double(rep.stat_naive) << '\n'
        << "p_naive = " << format_double(rep.p_naive) << '\n'
        << "elapsed_seconds = " << format_double(rep.elapsed_seconds) << '\n';
    for (const auto& [k, v] : rep.settings) out << "setting." << k << " = " << v << '\n';
    if (!out) throw std::runtime_error(dir + "/report.txt: write failed");
  }
  {
    std::ofstream out(dir + "/beta_grid.csv");
    out << "t,beta_hat,band_lower,band_upper\n";
    for (Eigen::Index i = 0; i < rep.t.size(); ++i)
      out << format_double(rep.t[i]) << ',' << format_double(rep.beta_hat[i]) << ','
          << format_double(rep.band_lower[i]) << ',' << format_double(rep.band_upper[i]) << '\n';
  }
  {
    std::ofstream out(dir + "/theta_grid.csv");
    out << "t,theta_hat\n";
    for (Eigen::Index i = 0; i < rep.t.size(); ++i)
      out << format_double(rep.t[i]) << ',' << format_double(rep.theta_hat[i]) << '\n';
  }
}

RunReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  RunReport rep;
  std::map<std::string, bool> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    while (!val.empty() && val.front() == ' ') val.erase(val.begin());
    std::string ctx = path + " key '" + key + "'";
    seen[key] = true;
    if (key == "seed") rep.seed = static_cast<std::uint64_t>(parse_integer(val, ctx));
    else if (key == "n") rep.n = static_cast<int>(parse_integer(val, ctx));
    else if (key == "q_chosen") rep.q_chosen = static_cast<int>(parse_integer(val, ctx));
    else if (key == "p_chosen") rep.p_chosen = static_cast<int>(parse_integer(val, ctx));
    else if (key == "alpha") rep.alpha = parse_double(val, ctx);
    else if (key == "beta0") rep.beta0 = parse_double(val, ctx);
    else if (key == "beta_coefs") rep.beta_coefs = split_vector(val, ctx);
    else if (key == "t") rep.t = split_vector(val, ctx);
    else if (key == "theta_hat") rep.theta_hat = split_vector(val, ctx);
    else if (key == "beta_hat") rep.beta_hat = split_vector(val, ctx);
    else if (key == "band_lower") rep.band_lower = split_vector(val, ctx);
    else if (key == "band_upper") rep.band_upper = split_vector(val, ctx);
    else if (key == "stat_calibrated") rep.stat_calibrated = parse_double(val, ctx);
    else if (key == "p_calibrated") rep.p_calibrated = parse_double(val, ctx);
    else if (key == "naive_p") rep.naive_p = static_cast<int>(parse_integer(val, ctx));
    else if (key == "naive_beta0") rep.naive_beta0 = parse_double(val, ctx);
    else if (key == "naive_beta_hat") rep.naive_beta_hat = split_vector(val, ctx);
    else if (key == "stat_naive") rep.stat_naive = parse_double(val, ctx);
    else if (key == "p_naive") rep.p_naive = parse_double(val, ctx);
    else if (key == "elapsed_seconds") rep.elapsed_seconds = parse_double(val, ctx);
    else if (key.rfind("setting.", 0) == 0) rep.settings.emplace_back(key.substr(8), val);
    else throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  for (const char* k : {"seed", "n", "q_chosen", "p_chosen", "alpha", "beta0", "beta_coefs", "t",
                        "theta_hat", "beta_hat", "band_lower", "band_upper", "stat_calibrated",
                        "p_calibrated", "naive_p", "naive_beta0", "naive_beta_hat", "stat_naive",
                        "p_naive"}) {
    if (!seen.count(k)) throw std::runtime_error(path + ": missing key '" + std::string(k) + "'");
  }
  return rep;
}

}  // namespace fivreg
