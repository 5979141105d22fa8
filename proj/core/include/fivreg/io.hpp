#pragma once

#include <string>
#include <vector>

#include "fivreg/simgen.hpp"

namespace fivreg {

/// Long-format functional observations consolidated into a rectangular panel:
/// one row per subject in first-appearance order, columns sorted by time.
/// Every subject must be observed at exactly the same time points.
struct PanelTable {
  std::vector<std::string> subjects;
  Eigen::VectorXd times;   // sorted, strictly increasing
  Eigen::MatrixXd values;  // n x m
};

/// Columns: subject_id, t, value.
PanelTable read_panel_csv(const std::string& path);
void write_panel_csv(const std::string& path, const PanelTable& table);

/// Scalar responses with optional numeric covariates.
/// Columns: subject_id, y[, covariate...].
struct ResponseTable {
  std::vector<std::string> subjects;
  Eigen::VectorXd y;
  Eigen::MatrixXd covariates;  // n x c, c may be 0
  std::vector<std::string> covariate_names;
};

ResponseTable read_response_csv(const std::string& path);
void write_response_csv(const std::string& path, const ResponseTable& table);

/// key = value scenario files; '#' starts a comment, unknown keys are errors.
ScenarioConfig read_config(const std::string& path);
void write_config(const std::string& path, const ScenarioConfig& cfg);

/// Full-precision decimal rendering that round-trips a double exactly.
std::string format_double(double v);
double parse_double(const std::string& token, const std::string& context);
long long parse_integer(const std::string& token, const std::string& context);

}  // namespace fivreg
