#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "pandarl/train/harness.hpp"

namespace pandarl::train {

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile: empty input");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[lo + 1] - values[lo]) * frac;
}

std::vector<AggregateRow> aggregate_curves(const std::vector<std::vector<MetricsRow>>& runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate: no runs");
  const std::size_t checkpoints = runs.front().size();
  for (const auto& run : runs) {
    if (run.size() != checkpoints) {
      throw std::runtime_error("aggregate: runs have different checkpoint counts");
    }
    for (std::size_t i = 0; i < checkpoints; ++i) {
      if (run[i].total_env_steps != runs.front()[i].total_env_steps) {
        throw std::runtime_error("aggregate: eval checkpoints are not aligned");
      }
    }
  }
  std::vector<AggregateRow> rows(checkpoints);
  for (std::size_t i = 0; i < checkpoints; ++i) {
    std::vector<double> rates;
    rates.reserve(runs.size());
    for (const auto& run : runs) rates.push_back(run[i].success_rate);
    rows[i].total_env_steps = runs.front()[i].total_env_steps;
    rows[i].median = percentile(rates, 0.5);
    rows[i].q25 = percentile(rates, 0.25);
    rows[i].q75 = percentile(rates, 0.75);
  }
  return rows;
}

std::vector<MetricsRow> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open metrics file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty metrics file: " + path);
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    MetricsRow row;
    std::istringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');
    row.total_env_steps = std::stoull(field);
    std::getline(ss, field, ',');
    row.success_rate = std::stod(field);
    if (std::getline(ss, field, ',')) row.wall_time_s = std::stod(field);
    rows.push_back(row);
  }
  return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<std::string>& run_dirs) {
  std::vector<std::vector<MetricsRow>> runs;
  runs.reserve(run_dirs.size());
  for (const std::string& dir : run_dirs) {
    runs.push_back(read_metrics_csv(dir + "/metrics.csv"));
  }
  return aggregate_curves(runs);
}

void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "total_env_steps,median,q25,q75\n";
  for (const AggregateRow& row : rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%llu,%.6f,%.6f,%.6f",
                  static_cast<unsigned long long>(row.total_env_steps), row.median, row.q25,
                  row.q75);
    out << buf << "\n";
  }
}

std::vector<std::string> write_plot_data(const std::vector<std::string>& run_dirs,
                                         const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::map<std::string, std::vector<std::string>> groups;
  for (const std::string& dir : run_dirs) {
    std::ifstream manifest_in(dir + "/manifest.json");
    if (!manifest_in) throw std::runtime_error("missing manifest.json in " + dir);
    const nlohmann::json manifest = nlohmann::json::parse(manifest_in);
    const std::string key = manifest.at("env").get<std::string>() + "_" +
                            manifest.at("algorithm").get<std::string>();
    groups[key].push_back(dir);
  }
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  for (const auto& [key, dirs] : groups) {
    const std::vector<AggregateRow> rows = aggregate(dirs);
    const std::string path = out_dir + "/" + key + ".dat";
    std::ofstream out(path);
    out << "timestep med lowq highq\n";
    for (const AggregateRow& row : rows) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%llu %.6f %.6f %.6f",
                    static_cast<unsigned long long>(row.total_env_steps), row.median, row.q25,
                    row.q75);
      out << buf << "\n";
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace pandarl::train
