#ifndef WAVE3D_CONFIG_HPP
#define WAVE3D_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wave3d/analysis.hpp"
#include "wave3d/coefficients.hpp"
#include "wave3d/drive.hpp"
#include "wave3d/grid.hpp"

namespace wave3d {

// One JSON document drives every experiment; defaults are embedded per
// subcommand and deep-merged with the user's overrides.
struct ExperimentConfig {
  std::string subcommand;
  nlohmann::json doc;  // merged document

  TorusGrid grid;
  double beta = 1.0;
  double alpha = 1.5;
  std::uint64_t seed = 0;
  int noise_truncation = -1;
  Coefficient sigma;
  Coefficient drift;
  bool dealias = false;
  std::vector<int> levels;
  HolderWindow window;
  int replicas = 1;
  int workers = 0;  // 0: pick from WAVE3D_WORKERS or hardware
  std::string output = "out";
  nlohmann::json experiment;  // per-subcommand knobs

  std::string fingerprint;  // SHA-256 over the semantic keys

  static nlohmann::json defaults(const std::string& subcommand);
  static ExperimentConfig from_json(const nlohmann::json& user, const std::string& subcommand);

  Control parse_control(const nlohmann::json& arr) const;
  int resolved_workers() const;
};

extern const std::vector<std::string> kSubcommands;

}  // namespace wave3d

#endif
