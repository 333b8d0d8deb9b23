#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "qasfg/experiments.hpp"

namespace qasfg::config {

// All dimensioned fields carry their unit in the key name. Unknown keys and
// wrongly typed values are rejected with InputError.
struct MaterialConfig {
  std::string dispersion{materials::kDefaultDispersion};
  double temperature_C = 25.0;
  double d33_pm_per_V = 25.0;
  double chi2_per_d33 = 1.0;
  double duty_cycle = 0.5;
  std::string epsilon0 = "rounded"; // "rounded" | "codata"
  double lambda_signal_um = 3.0;
  double lambda_pump_um = 1.064;
};

struct DesignConfig {
  double L_mm = 1.0;
  std::string target = "deltak";
  std::optional<double> kappa_per_cm;     // fixed κ; skips the optimizer
  std::optional<double> kappa_min_per_cm; // default 1.05·π/L
  double kappa_max_per_cm = 300.0;
  std::size_t grid_nodes = 4001;
  std::size_t scan_points = 400;
};

struct SimulationConfig {
  std::size_t steps = 20000;
  std::string mode = "undepleted"; // "undepleted" | "depleted"
  double signal_pump_ratio = 1.0;
  std::size_t record_stride = 10;
};

struct BandwidthSweepConfig {
  double lambda_min_um = 2.6;
  double lambda_max_um = 3.6;
  std::size_t samples = 201;
};

struct PerturbationSweepConfig {
  double min_percent;
  double max_percent;
  std::size_t samples;
  double threshold;
};

struct LengthSweepConfig {
  double min_mm = 0.1;
  double max_mm = 4.0;
  std::size_t samples = 79;
};

struct SignalSweepConfig {
  double min_ratio = 0.0;
  double max_ratio = 1.0;
  std::size_t samples = 41;
};

struct SweepConfig {
  BandwidthSweepConfig bandwidth{};
  PerturbationSweepConfig period{-20.0, 20.0, 81, 0.99};
  PerturbationSweepConfig pump{-25.0, 25.0, 81, 0.80};
  LengthSweepConfig length{};
  SignalSweepConfig signal{};
};

struct RunConfig {
  MaterialConfig material{};
  DesignConfig design{};
  SimulationConfig simulation{};
  SweepConfig sweeps{};
  std::string output_directory = "out";
  std::size_t workers = 0; // 0 = hardware concurrency

  experiments::MaterialSetup material_setup() const;
  experiments::DesignOptions design_options(std::size_t workers) const;
  propagation::SimulationOptions simulation_options(bool record) const;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

// Fully populated config (defaults included) with sorted keys.
nlohmann::json to_json(const RunConfig& config);

// FNV-1a 64-bit hash of the canonical config JSON, as 16 hex digits.
std::string config_hash(const RunConfig& config);

} // namespace qasfg::config
