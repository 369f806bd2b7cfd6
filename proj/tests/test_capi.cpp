// Exercises the shared library strictly through the C header.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "wave3d/wave3d.h"

TEST_CASE("version and default configs") {
  CHECK(std::strlen(wave3d_version()) > 0);

  char* cfg = wave3d_default_config_json("wz-converge");
  REQUIRE(cfg != nullptr);
  const auto doc = nlohmann::json::parse(cfg);
  CHECK(doc.at("levels").size() == 5);
  wave3d_string_free(cfg);

  CHECK(wave3d_default_config_json("nonsense") == nullptr);
  CHECK(wave3d_default_config_json(nullptr) == nullptr);
}

TEST_CASE("error paths surface machine-readable records") {
  wave3d_run* run = wave3d_run_create();
  REQUIRE(run != nullptr);

  CHECK(wave3d_run_set_config_json(run, "{not json") == WAVE3D_ERR_CONFIG);
  CHECK(std::strlen(wave3d_run_error(run)) > 0);
  const auto rec = nlohmann::json::parse(wave3d_run_error_json(run));
  CHECK(rec.at("error").at("kind") == "config");

  CHECK(wave3d_run_set_config_json(run, "{\"noise\": {\"beta\": 5.0}}") == WAVE3D_OK);
  CHECK(wave3d_run_execute(run, "green-check") == WAVE3D_ERR_CONFIG);

  CHECK(wave3d_run_execute(run, nullptr) == WAVE3D_ERR_ARGUMENT);
  CHECK(wave3d_run_set_workers(run, -1) == WAVE3D_ERR_ARGUMENT);

  wave3d_run_destroy(run);
  wave3d_run_destroy(nullptr);  // must be a no-op
}

TEST_CASE("numerical blow-up surfaces as a status code") {
  wave3d_run* run = wave3d_run_create();
  const char* cfg = R"json({
    "grid": {"N": 8, "steps": 16},
    "replicas": 1,
    "solver": {"sigma": "zero", "b": "affine(1e160,1e160)"},
    "experiment": {"isometry_check": false, "export_trajectory": false}
  })json";
  CHECK(wave3d_run_set_config_json(run, cfg) == WAVE3D_OK);
  wave3d_run_set_output_dir(run,
                            (std::filesystem::temp_directory_path() / "w3d_blow").c_str());
  CHECK(wave3d_run_execute(run, "simulate") == WAVE3D_ERR_NUMERICAL);
  const auto rec = nlohmann::json::parse(wave3d_run_error_json(run));
  CHECK(rec.at("error").at("kind") == "numerical_blowup");
  CHECK(rec.at("error").at("message").get<std::string>().find("step") != std::string::npos);
  wave3d_run_destroy(run);
  std::filesystem::remove_all(std::filesystem::temp_directory_path() / "w3d_blow");
}

TEST_CASE("a full run through the C surface") {
  namespace fs = std::filesystem;
  const auto out = fs::temp_directory_path() / "w3d_capi";
  fs::remove_all(out);

  wave3d_run* run = wave3d_run_create();
  CHECK(wave3d_run_set_config_json(run, "{\"grid\": {\"N\": 32}}") == WAVE3D_OK);
  CHECK(wave3d_run_set_output_dir(run, out.string().c_str()) == WAVE3D_OK);
  CHECK(wave3d_run_set_seed(run, 777) == WAVE3D_OK);
  CHECK(wave3d_run_set_workers(run, 2) == WAVE3D_OK);

  CHECK(wave3d_run_execute(run, "green-check") == WAVE3D_OK);
  CHECK(wave3d_run_passed(run) == 1);

  const auto report = nlohmann::json::parse(wave3d_run_report_json(run));
  CHECK(report.at("all_pass").get<bool>());
  CHECK(report.at("rows").size() > 5);

  const auto cfg = nlohmann::json::parse(wave3d_run_config_json(run));
  CHECK(cfg.at("noise").at("seed").get<std::uint64_t>() == 777);
  CHECK(cfg.at("grid").at("N").get<int>() == 32);

  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "manifest.json"));
  wave3d_run_destroy(run);
  fs::remove_all(out);
}
