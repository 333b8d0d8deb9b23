#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qasfg/config.hpp"

namespace qasfg::cli {

struct Context {
  config::RunConfig config;
  std::filesystem::path out_dir;
  std::size_t workers = 1;
  std::optional<std::filesystem::path> design_path; // design.json for simulate/sweep
  std::optional<bool> depleted;                     // overrides simulation.mode
  std::optional<double> ratio;                      // overrides signal_pump_ratio
};

inline const std::vector<std::string> kSweepNames{"bandwidth", "period", "pump",
                                                  "length",    "signal", "kappa-trace"};

void cmd_design(const Context& ctx);
void cmd_simulate(const Context& ctx);
void cmd_sweep(const Context& ctx, const std::string& name);
void cmd_optimize(const Context& ctx);

// Full command line entry point: 0 success, 1 numeric failure, 2 usage or
// configuration error.
int run(int argc, const char* const* argv);

} // namespace qasfg::cli
