#include "wave3d/config.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "wave3d/errors.hpp"
#include "wave3d/sha256.hpp"

namespace wave3d {

using nlohmann::json;

const std::vector<std::string> kSubcommands = {
    "noise-check", "green-check", "simulate", "wz-converge",
    "regularity",  "support",     "oracle"};

namespace {

json base_defaults() {
  return json{
      {"grid", {{"L", 4.0}, {"N", 16}, {"T", 1.0}, {"steps", 64}}},
      {"noise", {{"beta", 1.0}, {"alpha", 1.5}, {"seed", 20240901}, {"truncation", -1}}},
      {"solver", {{"sigma", "constant(1)"}, {"b", "zero"}, {"dealias", false}}},
      {"levels", json::array()},
      {"window", {{"rho", 0.35}, {"t0", 0.5}, {"K_half", 0.5}}},
      {"replicas", 1},
      {"workers", 0},
      {"output", "out"},
      {"experiment", json::object()},
  };
}

void deep_merge(json& base, const json& over) {
  if (!over.is_object()) {
    base = over;
    return;
  }
  if (!base.is_object()) base = json::object();
  for (auto it = over.begin(); it != over.end(); ++it) {
    if (it->is_object() && base.contains(it.key())) {
      deep_merge(base[it.key()], *it);
    } else {
      base[it.key()] = *it;
    }
  }
}

}  // namespace

json ExperimentConfig::defaults(const std::string& sub) {
  json d = base_defaults();
  if (sub == "noise-check") {
    d["grid"]["N"] = 8;
    d["replicas"] = 1;
    d["experiment"] = json{{"hnorm_fields", 20},
                           {"covariance_samples", 10000},
                           {"covariance_N", 16},
                           {"localization_tableaux", 10000},
                           {"localization_levels", {3, 4, 5, 6, 7, 8}},
                           {"basis_check_dirs", 32},
                           {"tableau_variance_samples", 100000}};
  } else if (sub == "green-check") {
    d["grid"]["N"] = 64;
    d["experiment"] = json{{"mass_pairs", 20},
                           {"quad_polar", 16},
                           {"quad_azimuth", 32},
                           {"power_t_lo", 0.1},
                           {"power_t_hi", 1.0},
                           {"power_points", 13},
                           {"power_xi_lo", 1e-4},
                           {"power_xi_hi", 2000.0},
                           {"radial_points", 64},
                           {"betas", {0.5, 1.0, 1.5}}};
  } else if (sub == "simulate") {
    d["replicas"] = 2000;
    d["experiment"] = json{{"isometry_check", true},
                           {"isometry_times", {0.25, 0.5, 1.0}},
                           {"stationarity_shifts", {{4, 0, 0}, {0, 4, 0}, {2, 2, 2}}},
                           {"export_trajectory", true}};
  } else if (sub == "wz-converge") {
    d["grid"]["L"] = 3.0;
    d["grid"]["steps"] = 128;
    d["solver"]["sigma"] = "tanh(2)";
    d["solver"]["b"] = "constant(0.25)";
    d["levels"] = {3, 4, 5, 6, 7};
    d["window"]["K_half"] = 0.25;
    d["replicas"] = 256;
    d["experiment"] = json{{"p", 1.0},
                           {"lag_times", {0.5, 0.625, 0.75, 0.875, 1.0}},
                           {"lag_p", 2.0},
                           {"decrease_required", true}};
  } else if (sub == "regularity") {
    d["replicas"] = 1000;
    d["experiment"] = json{{"betas", {0.5, 1.0, 1.5}},
                           {"p", 2.0},
                           {"band", {1, 2, 3, 4, 6, 8}},
                           {"t_eval", 1.0}};
  } else if (sub == "support") {
    d["grid"]["L"] = 3.0;
    d["grid"]["steps"] = 128;
    d["solver"]["sigma"] = "tanh(2)";
    d["solver"]["b"] = "constant(0.25)";
    d["levels"] = {3, 4, 5, 6, 7};
    d["window"]["K_half"] = 0.25;
    d["replicas"] = 128;
    d["experiment"] = json{{"p", 1.0}, {"control", json::array()}};
  } else if (sub == "oracle") {
    d["grid"]["N"] = 8;
    d["grid"]["steps"] = 16;
    d["solver"]["sigma"] = "tanh(1)";
    d["solver"]["b"] = "constant(1)";
    d["replicas"] = 5;
    d["experiment"] = json{{"iterations", 12}, {"rel_rms_tol", 0.05}};
  } else {
    throw ConfigError("unknown subcommand '" + sub + "'");
  }
  return d;
}

ExperimentConfig ExperimentConfig::from_json(const json& user, const std::string& sub) {
  json doc = defaults(sub);
  if (!user.is_null()) deep_merge(doc, user);

  ExperimentConfig c;
  c.subcommand = sub;
  c.doc = doc;
  try {
    c.grid = TorusGrid(doc.at("grid").at("L").get<double>(), doc.at("grid").at("N").get<int>(),
                       doc.at("grid").at("T").get<double>(),
                       doc.at("grid").at("steps").get<int>());
    c.beta = doc.at("noise").at("beta").get<double>();
    c.alpha = doc.at("noise").at("alpha").get<double>();
    c.seed = doc.at("noise").at("seed").get<std::uint64_t>();
    c.noise_truncation = doc.at("noise").at("truncation").get<int>();
    c.sigma = Coefficient::parse(doc.at("solver").at("sigma").get<std::string>());
    c.drift = Coefficient::parse(doc.at("solver").at("b").get<std::string>());
    c.dealias = doc.at("solver").at("dealias").get<bool>();
    c.levels = doc.at("levels").get<std::vector<int>>();
    c.window.rho = doc.at("window").at("rho").get<double>();
    c.window.t0 = doc.at("window").at("t0").get<double>();
    c.window.K_half = doc.at("window").at("K_half").get<double>();
    c.replicas = doc.at("replicas").get<int>();
    c.workers = doc.at("workers").get<int>();
    c.output = doc.at("output").get<std::string>();
    c.experiment = doc.at("experiment");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (!(c.beta > 0.0 && c.beta < 2.0)) throw ConfigError("config: beta must lie in (0,2)");
  if (!(c.alpha > std::sqrt(2.0 * std::log(2.0))))
    throw ConfigError("config: alpha must exceed sqrt(2 ln 2)");
  if (c.replicas < 1) throw ConfigError("config: replicas must be >= 1");
  const double diamK = 2.0 * std::sqrt(3.0) * c.window.K_half;
  if (c.grid.L < diamK + 2.0 * c.grid.T)
    throw ConfigError("config: need L >= diam(K) + 2T to keep the window wraparound-safe");
  if (!c.levels.empty()) {
    for (std::size_t i = 0; i < c.levels.size(); ++i) {
      if (c.levels[i] < 1) throw ConfigError("config: levels must be >= 1");
      if (i && c.levels[i] <= c.levels[i - 1])
        throw ConfigError("config: levels must be strictly increasing");
    }
    const int lmax = c.levels.back();
    if (c.grid.steps % (1 << lmax) != 0)
      throw ConfigError("config: dt must divide 2^-max(level) T");
  }
  if ((c.grid.steps & (c.grid.steps - 1)) != 0)
    throw ConfigError("config: steps must be a power of two");

  // Fingerprint over semantic keys only (worker count and output location do
  // not affect results).
  json sem = doc;
  sem.erase("workers");
  sem.erase("output");
  c.fingerprint = sha256_hex(sem.dump());
  return c;
}

Control ExperimentConfig::parse_control(const json& arr) const {
  Control h;
  if (arr.is_null()) return h;
  for (const auto& item : arr) {
    ControlComponent comp;
    comp.dir_j = item.at("dir").get<std::size_t>();
    const std::string kind = item.at("kind").get<std::string>();
    if (kind == "constant") {
      comp.kind = ControlComponent::Kind::Constant;
    } else if (kind == "pulse") {
      comp.kind = ControlComponent::Kind::Pulse;
    } else if (kind == "sine") {
      comp.kind = ControlComponent::Kind::Sine;
    } else {
      throw ConfigError("config: unknown control kind '" + kind + "'");
    }
    comp.amplitude = item.at("amplitude").get<double>();
    comp.param = item.value("param", 0.0);
    h.components.push_back(comp);
  }
  return h;
}

int ExperimentConfig::resolved_workers() const {
  if (workers > 0) return workers;
  if (const char* env = std::getenv("WAVE3D_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 2;
}

}  // namespace wave3d
