// wave3d command line front end; links only the public C API.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "wave3d/wave3d.h"

namespace {

int run_one(const std::string& subcommand, const std::string& config_path,
            bool has_seed, std::uint64_t seed, int workers, const std::string& out_dir,
            bool print_config) {
  wave3d_run* run = wave3d_run_create();
  int exit_code = 0;

  if (!config_path.empty()) {
    std::ifstream is(config_path);
    if (!is) {
      std::fprintf(stderr,
                   "{\"error\":{\"kind\":\"io\",\"message\":\"cannot read %s\"}}\n",
                   config_path.c_str());
      wave3d_run_destroy(run);
      return 4;
    }
    std::stringstream ss;
    ss << is.rdbuf();
    if (wave3d_run_set_config_json(run, ss.str().c_str()) != WAVE3D_OK) {
      std::fprintf(stderr, "%s\n", wave3d_run_error_json(run));
      wave3d_run_destroy(run);
      return 2;
    }
  }
  if (has_seed) wave3d_run_set_seed(run, seed);
  if (workers > 0) wave3d_run_set_workers(run, workers);
  if (!out_dir.empty()) wave3d_run_set_output_dir(run, out_dir.c_str());

  if (print_config) {
    // Dry merge: execute is skipped; show defaults merged with the overrides.
    char* defaults = wave3d_default_config_json(subcommand.c_str());
    if (!defaults) {
      std::fprintf(stderr,
                   "{\"error\":{\"kind\":\"config\",\"message\":\"unknown subcommand\"}}\n");
      wave3d_run_destroy(run);
      return 2;
    }
    auto doc = nlohmann::json::parse(defaults);
    wave3d_string_free(defaults);
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      std::stringstream ss;
      ss << is.rdbuf();
      doc.merge_patch(nlohmann::json::parse(ss.str()));
    }
    if (has_seed) doc["noise"]["seed"] = seed;
    if (workers > 0) doc["workers"] = workers;
    if (!out_dir.empty()) doc["output"] = out_dir;
    std::printf("%s\n", doc.dump(2).c_str());
    wave3d_run_destroy(run);
    return 0;
  }

  const wave3d_status st = wave3d_run_execute(run, subcommand.c_str());
  switch (st) {
    case WAVE3D_OK:
    case WAVE3D_ERR_CHECK_FAILED: {
      const auto report = nlohmann::json::parse(wave3d_run_report_json(run));
      for (const auto& row : report.at("rows")) {
        const double value =
            row.at("value").is_number() ? row.at("value").get<double>() : std::nan("");
        std::printf("%s %-36s value=%-12.6g threshold=%-12.6g %s\n",
                    row.at("pass").get<bool>() ? "PASS" : "FAIL",
                    row.at("name").get<std::string>().c_str(), value,
                    row.at("threshold").get<double>(),
                    row.at("note").get<std::string>().c_str());
      }
      std::printf("%s: %s\n", subcommand.c_str(),
                  report.at("all_pass").get<bool>() ? "all checks passed" : "CHECKS FAILED");
      exit_code = st == WAVE3D_OK ? 0 : 1;
      break;
    }
    case WAVE3D_ERR_CONFIG:
      std::fprintf(stderr, "%s\n", wave3d_run_error_json(run));
      exit_code = 2;
      break;
    case WAVE3D_ERR_NUMERICAL:
      std::fprintf(stderr, "%s\n", wave3d_run_error_json(run));
      exit_code = 3;
      break;
    default:
      std::fprintf(stderr, "%s\n", wave3d_run_error_json(run));
      exit_code = 4;
      break;
  }
  wave3d_run_destroy(run);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral experiments for a correlated-noise wave equation"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  bool has_seed = false;
  int workers = 0;
  bool print_config = false;

  app.add_option("--config", config_path, "JSON config file merged over defaults");
  auto* seed_opt = app.add_option("--seed", seed, "master seed override");
  app.add_option("--workers", workers, "worker threads (fallback: WAVE3D_WORKERS)");
  app.add_option("--out", out_dir, "output directory override");
  app.add_flag("--print-config", print_config, "print the merged config and exit");

  const char* names[] = {"noise-check", "green-check", "simulate", "wz-converge",
                         "regularity",  "support",     "oracle"};
  const char* descs[] = {
      "correlation-model invariants and covariance fidelity",
      "kernel mass, power law, equivariance",
      "single or ensemble solve with export and moment checks",
      "coupled regularized-driver convergence study",
      "increment-scaling exponents across beta",
      "limit diagnostics for the control-driven fields",
      "fixed-point reference cross-check"};
  for (int i = 0; i < 7; ++i) app.add_subcommand(names[i], descs[i]);

  CLI11_PARSE(app, argc, argv);
  has_seed = seed_opt->count() > 0;

  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    std::printf("%s\n", app.help().c_str());
    return 2;
  }
  return run_one(subs[0]->get_name(), config_path, has_seed, seed, workers, out_dir,
                 print_config);
}
