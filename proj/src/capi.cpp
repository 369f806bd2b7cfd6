#include "wave3d/wave3d.h"

#include <cstring>
#include <string>

#include "json.hpp"
#include "wave3d/config.hpp"
#include "wave3d/errors.hpp"
#include "wave3d/experiments.hpp"

using nlohmann::json;

struct wave3d_run {
  json config_override = nullptr;
  std::string output_dir;
  bool has_seed = false;
  std::uint64_t seed = 0;
  int workers = 0;

  std::string report_json;
  std::string config_json;
  std::string error_message;
  std::string error_record;
  bool passed = false;

  void set_error(const std::string& kind, const std::string& msg) {
    error_message = msg;
    error_record = json{{"error", {{"kind", kind}, {"message", msg}}}}.dump();
  }
  void clear_error() {
    error_message.clear();
    error_record = "{}";
  }
};

extern "C" {

const char* wave3d_version(void) { return "1.0.0"; }

char* wave3d_default_config_json(const char* subcommand) {
  if (!subcommand) return nullptr;
  try {
    const std::string s = wave3d::ExperimentConfig::defaults(subcommand).dump(2);
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
  } catch (...) {
    return nullptr;
  }
}

void wave3d_string_free(char* s) { delete[] s; }

wave3d_run* wave3d_run_create(void) { return new wave3d_run(); }

void wave3d_run_destroy(wave3d_run* run) { delete run; }

wave3d_status wave3d_run_set_config_json(wave3d_run* run, const char* config_json) {
  if (!run) return WAVE3D_ERR_ARGUMENT;
  if (!config_json) {
    run->config_override = nullptr;
    return WAVE3D_OK;
  }
  try {
    run->config_override = json::parse(config_json);
    return WAVE3D_OK;
  } catch (const std::exception& e) {
    run->set_error("config", std::string("config JSON parse failed: ") + e.what());
    return WAVE3D_ERR_CONFIG;
  }
}

wave3d_status wave3d_run_set_output_dir(wave3d_run* run, const char* dir) {
  if (!run || !dir) return WAVE3D_ERR_ARGUMENT;
  run->output_dir = dir;
  return WAVE3D_OK;
}

wave3d_status wave3d_run_set_seed(wave3d_run* run, uint64_t seed) {
  if (!run) return WAVE3D_ERR_ARGUMENT;
  run->has_seed = true;
  run->seed = seed;
  return WAVE3D_OK;
}

wave3d_status wave3d_run_set_workers(wave3d_run* run, int workers) {
  if (!run || workers < 0) return WAVE3D_ERR_ARGUMENT;
  run->workers = workers;
  return WAVE3D_OK;
}

wave3d_status wave3d_run_execute(wave3d_run* run, const char* subcommand) {
  if (!run || !subcommand) return WAVE3D_ERR_ARGUMENT;
  run->clear_error();
  run->report_json.clear();
  run->passed = false;
  try {
    json over = run->config_override.is_null() ? json::object() : run->config_override;
    if (run->has_seed) over["noise"]["seed"] = run->seed;
    if (run->workers > 0) over["workers"] = run->workers;
    if (!run->output_dir.empty()) over["output"] = run->output_dir;
    const auto config = wave3d::ExperimentConfig::from_json(over, subcommand);
    run->config_json = config.doc.dump(2);
    const wave3d::Report rep = wave3d::run_subcommand(config);
    run->report_json = rep.to_json().dump(2);
    run->passed = rep.all_pass();
    return run->passed ? WAVE3D_OK : WAVE3D_ERR_CHECK_FAILED;
  } catch (const wave3d::NumericalBlowupError& e) {
    run->set_error(e.kind(), e.what());
    return WAVE3D_ERR_NUMERICAL;
  } catch (const wave3d::ConfigError& e) {
    run->set_error(e.kind(), e.what());
    return WAVE3D_ERR_CONFIG;
  } catch (const wave3d::IoError& e) {
    run->set_error(e.kind(), e.what());
    return WAVE3D_ERR_IO;
  } catch (const wave3d::Error& e) {
    run->set_error(e.kind(), e.what());
    return WAVE3D_ERR_CONFIG;
  } catch (const std::exception& e) {
    run->set_error("internal", e.what());
    return WAVE3D_ERR_INTERNAL;
  }
}

const char* wave3d_run_report_json(const wave3d_run* run) {
  return run ? run->report_json.c_str() : "";
}

const char* wave3d_run_config_json(const wave3d_run* run) {
  return run ? run->config_json.c_str() : "";
}

int wave3d_run_passed(const wave3d_run* run) { return run && run->passed ? 1 : 0; }

const char* wave3d_run_error(const wave3d_run* run) {
  return run ? run->error_message.c_str() : "";
}

const char* wave3d_run_error_json(const wave3d_run* run) {
  return run ? run->error_record.c_str() : "{}";
}

}  // extern "C"
