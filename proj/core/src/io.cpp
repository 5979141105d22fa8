#include "fivreg/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fivreg {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& token, const std::string& context) {
  if (token.empty()) throw std::runtime_error(context + ": empty numeric field");
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || errno == ERANGE || !std::isfinite(v))
    throw std::runtime_error(context + ": '" + token + "' is not a finite number");
  return v;
}

long long parse_integer(const std::string& token, const std::string& context) {
  if (token.empty()) throw std::runtime_error(context + ": empty integer field");
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(token.c_str(), &end, 10);
  if (end != token.c_str() + token.size() || errno == ERANGE)
    throw std::runtime_error(context + ": '" + token + "' is not an integer");
  return v;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string loc(const std::string& path, std::size_t line1) {
  return path + ":" + std::to_string(line1);
}

}  // namespace

PanelTable read_panel_csv(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty file");
  auto header = split_csv(lines[0]);
  if (header.size() != 3 || header[0] != "subject_id" || header[1] != "t" || header[2] != "value")
    throw std::runtime_error(path + ": expected header 'subject_id,t,value'");

  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<double, double>>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto f = split_csv(lines[i]);
    if (f.size() != 3) throw std::runtime_error(loc(path, i + 1) + ": expected 3 fields");
    if (f[0].empty()) throw std::runtime_error(loc(path, i + 1) + ": empty subject_id");
    double t = parse_double(f[1], loc(path, i + 1) + " column t");
    double v = parse_double(f[2], loc(path, i + 1) + " column value");
    auto it = rows.find(f[0]);
    if (it == rows.end()) {
      order.push_back(f[0]);
      it = rows.emplace(f[0], std::vector<std::pair<double, double>>{}).first;
    }
    it->second.emplace_back(t, v);
  }
  if (order.empty()) throw std::runtime_error(path + ": no observations");

  for (auto& [subject, obs] : rows) {
    std::sort(obs.begin(), obs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < obs.size(); ++i) {
      if (obs[i].first == obs[i - 1].first)
        throw std::runtime_error(path + ": subject '" + subject + "' has duplicate time " +
                                 format_double(obs[i].first));
    }
  }

  const auto& ref = rows[order[0]];
  Eigen::Index m = static_cast<Eigen::Index>(ref.size());
  if (m < 2) throw std::runtime_error(path + ": need at least two time points per subject");
  PanelTable table;
  table.subjects = order;
  table.times.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) table.times[j] = ref[j].first;
  table.values.resize(static_cast<Eigen::Index>(order.size()), m);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& obs = rows[order[i]];
    if (static_cast<Eigen::Index>(obs.size()) != m)
      throw std::runtime_error(path + ": subject '" + order[i] + "' has " +
                               std::to_string(obs.size()) + " observations, expected " +
                               std::to_string(m));
    for (Eigen::Index j = 0; j < m; ++j) {
      if (obs[j].first != ref[j].first)
        throw std::runtime_error(path + ": subject '" + order[i] +
                                 "' is observed on a different time grid than subject '" +
                                 order[0] + "'");
      table.values(static_cast<Eigen::Index>(i), j) = obs[j].second;
    }
  }
  return table;
}

void write_panel_csv(const std::string& path, const PanelTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "subject_id,t,value\n";
  for (std::size_t i = 0; i < table.subjects.size(); ++i) {
    for (Eigen::Index j = 0; j < table.times.size(); ++j) {
      out << table.subjects[i] << ',' << format_double(table.times[j]) << ','
          << format_double(table.values(static_cast<Eigen::Index>(i), j)) << '\n';
    }
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

ResponseTable read_response_csv(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty file");
  auto header = split_csv(lines[0]);
  if (header.size() < 2 || header[0] != "subject_id" || header[1] != "y")
    throw std::runtime_error(path + ": expected header 'subject_id,y[,covariate...]'");

  ResponseTable table;
  table.covariate_names.assign(header.begin() + 2, header.end());
  Eigen::Index c = static_cast<Eigen::Index>(table.covariate_names.size());

  std::vector<double> ys;
  std::vector<Eigen::VectorXd> covs;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto f = split_csv(lines[i]);
    if (f.size() != header.size())
      throw std::runtime_error(loc(path, i + 1) + ": expected " + std::to_string(header.size()) +
                               " fields");
    if (f[0].empty()) throw std::runtime_error(loc(path, i + 1) + ": empty subject_id");
    if (std::find(table.subjects.begin(), table.subjects.end(), f[0]) != table.subjects.end())
      throw std::runtime_error(loc(path, i + 1) + ": duplicate subject '" + f[0] + "'");
    table.subjects.push_back(f[0]);
    ys.push_back(parse_double(f[1], loc(path, i + 1) + " column y"));
    Eigen::VectorXd row(c);
    for (Eigen::Index j = 0; j < c; ++j)
      row[j] = parse_double(f[2 + j], loc(path, i + 1) + " column " + table.covariate_names[j]);
    covs.push_back(std::move(row));
  }
  if (table.subjects.empty()) throw std::runtime_error(path + ": no observations");

  table.y = Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  table.covariates.resize(static_cast<Eigen::Index>(covs.size()), c);
  for (std::size_t i = 0; i < covs.size(); ++i)
    table.covariates.row(static_cast<Eigen::Index>(i)) = covs[i].transpose();
  return table;
}

void write_response_csv(const std::string& path, const ResponseTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "subject_id,y";
  for (const auto& name : table.covariate_names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < table.subjects.size(); ++i) {
    out << table.subjects[i] << ',' << format_double(table.y[static_cast<Eigen::Index>(i)]);
    for (Eigen::Index j = 0; j < table.covariates.cols(); ++j)
      out << ',' << format_double(table.covariates(static_cast<Eigen::Index>(i), j));
    out << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

ScenarioConfig read_config(const std::string& path) {
  auto lines = read_lines(path);
  ScenarioConfig cfg;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(loc(path, i + 1) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    std::string ctx = loc(path, i + 1) + " key '" + key + "'";
    if (key == "n") cfg.n = static_cast<int>(parse_integer(val, ctx));
    else if (key == "k0") cfg.k0 = static_cast<int>(parse_integer(val, ctx));
    else if (key == "q0") cfg.q0 = static_cast<int>(parse_integer(val, ctx));
    else if (key == "p0") cfg.p0 = static_cast<int>(parse_integer(val, ctx));
    else if (key == "sigma") cfg.sigma = parse_double(val, ctx);
    else if (key == "l") cfg.l = parse_double(val, ctx);
    else if (key == "delta") cfg.delta = parse_double(val, ctx);
    else if (key == "sigma_e") cfg.sigma_e = parse_double(val, ctx);
    else if (key == "replicates") cfg.replicates = static_cast<int>(parse_integer(val, ctx));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_integer(val, ctx));
    else if (key == "grid_size") cfg.grid_size = static_cast<int>(parse_integer(val, ctx));
    else throw std::runtime_error(loc(path, i + 1) + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

void write_config(const std::string& path, const ScenarioConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "n = " << cfg.n << '\n'
      << "k0 = " << cfg.k0 << '\n'
      << "q0 = " << cfg.q0 << '\n'
      << "p0 = " << cfg.p0 << '\n'
      << "sigma = " << format_double(cfg.sigma) << '\n'
      << "l = " << format_double(cfg.l) << '\n'
      << "delta = " << format_double(cfg.delta) << '\n'
      << "sigma_e = " << format_double(cfg.sigma_e) << '\n'
      << "replicates = " << cfg.replicates << '\n'
      << "seed = " << cfg.seed << '\n'
      << "grid_size = " << cfg.grid_size << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace fivreg
