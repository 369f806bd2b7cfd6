#ifndef WAVE3D_EXPERIMENTS_HPP
#define WAVE3D_EXPERIMENTS_HPP

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wave3d/config.hpp"

namespace wave3d {

struct CheckRow {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct Report {
  std::string subcommand;
  std::string fingerprint;
  std::vector<CheckRow> rows;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

// Runs the named experiment, writes CSV tables, report.json and manifest.json
// into the config's output directory, and returns the report.
Report run_subcommand(const ExperimentConfig& config);

// Deterministic replica-parallel map: fn(i) runs on a pool, results are for
// the caller to store by index; the pool guarantees nothing about order.
void parallel_replicas(int count, int workers, const std::function<void(int)>& fn);

// Formats a double so CSV bodies are byte-stable across runs.
std::string csv_double(double v);

}  // namespace wave3d

#endif
