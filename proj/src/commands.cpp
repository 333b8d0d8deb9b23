#include "qasfg/commands.hpp"

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "qasfg/error.hpp"
#include "qasfg/export.hpp"
#include "qasfg/parallel.hpp"

namespace qasfg::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

io::Provenance provenance(const Context& ctx) { return {config::config_hash(ctx.config)}; }

json design_summary(const experiments::CrystalDesign& d) {
  return json{{"kappa_per_cm", d.kappa / 100.0},
              {"L_mm", d.length * 1e3},
              {"target", sensitivity::to_string(d.target)},
              {"origin", d.origin},
              {"dispersion", d.dispersion_name},
              {"chi2_pm_per_V", d.nonlinear.chi2 * 1e12},
              {"pump_intensity_MW_per_cm2", d.pump_intensity * 1e-10}};
}

io::LoadedDesign resolve_design(const Context& ctx) {
  if (ctx.design_path) return io::load_design(*ctx.design_path);
  io::LoadedDesign out{.design = {}, .material = ctx.config.material_setup()};
  out.design = experiments::build_design(ctx.config.design_options(ctx.workers), out.material);
  return out;
}

sensitivity::KappaSearch search_from(const Context& ctx) {
  const auto o = ctx.config.design_options(ctx.workers);
  sensitivity::KappaSearch s;
  s.length = o.length;
  s.target = o.target;
  s.kappa_min = o.kappa_min;
  s.kappa_max = o.kappa_max;
  s.scan_points = o.scan_points;
  s.nodes = o.nodes;
  s.workers = ctx.workers;
  return s;
}

experiments::Range percent_range(const config::PerturbationSweepConfig& c) {
  return {c.min_percent / 100.0, c.max_percent / 100.0, c.samples};
}

void write_sweep(const Context& ctx, const std::string& name,
                 const experiments::SweepResult& r, const experiments::CrystalDesign& d) {
  const auto p = provenance(ctx);
  io::write_csv(ctx.out_dir / ("sweep_" + name + ".csv"), io::sweep_table(r), p);
  json doc = io::sweep_json(r);
  doc["sweep"] = name;
  doc["design"] = design_summary(d);
  io::write_json(ctx.out_dir / ("sweep_" + name + ".json"), std::move(doc), p);
}

void write_trace(const Context& ctx, const sensitivity::KappaOptimum& opt,
                 const std::string& stem, const sensitivity::KappaSearch& s) {
  const auto p = provenance(ctx);
  io::write_csv(ctx.out_dir / (stem + ".csv"), io::trace_table(opt), p);
  io::write_json(ctx.out_dir / (stem + ".json"),
                 json{{"target", sensitivity::to_string(s.target)},
                      {"L_mm", s.length * 1e3},
                      {"kappa_per_cm", opt.kappa / 100.0},
                      {"q_value", opt.q},
                      {"scan_points", opt.trace.size()},
                      {"trace_file", stem + ".csv"}},
                 p);
}

} // namespace

void cmd_design(const Context& ctx) {
  const auto material = ctx.config.material_setup();
  const auto design = experiments::build_design(ctx.config.design_options(ctx.workers), material);
  const auto angles =
      trajectory::build_angles({design.kappa, design.length, design.nodes});
  const auto report = trajectory::boundary_check(angles, design.mismatch);

  const auto p = provenance(ctx);
  io::write_csv(ctx.out_dir / "design.csv", io::design_table(design), p);
  io::write_csv(ctx.out_dir / "profile.csv", io::profile_table(angles, design.mismatch), p);
  io::write_json(ctx.out_dir / "design.json", io::design_json(design, material), p);
  io::write_json(ctx.out_dir / "boundary_check.json", io::boundary_json(report), p);
  if (!report.passed() && !report.near_degenerate)
    throw NumericError("design: boundary conditions failed, see boundary_check.json");
}

void cmd_simulate(const Context& ctx) {
  const auto loaded = resolve_design(ctx);
  const auto& cfg = ctx.config.simulation;
  const bool depleted = ctx.depleted.value_or(cfg.mode == "depleted");
  const double ratio = ctx.ratio.value_or(cfg.signal_pump_ratio);
  if (!(ratio > 0.0)) throw InputError("simulate: signal/pump ratio must be positive");
  const auto sim = ctx.config.simulation_options(true);

  const auto tr = depleted ? experiments::simulate_design_depleted(loaded.design, ratio, sim)
                           : experiments::simulate_design(loaded.design, sim);
  const auto p = provenance(ctx);
  io::write_csv(ctx.out_dir / "trajectory.csv", io::field_table(tr), p);
  json doc{{"eta", tr.efficiency},
           {"mode", depleted ? "depleted" : "undepleted"},
           {"steps", sim.steps},
           {"design", design_summary(loaded.design)},
           {"trajectory_file", "trajectory.csv"}};
  if (depleted) doc["signal_pump_ratio"] = ratio;
  io::write_json(ctx.out_dir / "simulate.json", std::move(doc), p);
}

void cmd_sweep(const Context& ctx, const std::string& name) {
  if (std::find(kSweepNames.begin(), kSweepNames.end(), name) == kSweepNames.end()) {
    std::string options;
    for (const auto& n : kSweepNames) options += (options.empty() ? "" : ", ") + n;
    throw InputError("unknown sweep '" + name + "'; valid sweeps: " + options);
  }
  if (name == "kappa-trace") {
    const auto s = search_from(ctx);
    write_trace(ctx, sensitivity::optimize_kappa(s), "sweep_kappa-trace", s);
    return;
  }

  const auto loaded = resolve_design(ctx);
  const auto& d = loaded.design;
  const auto& sw = ctx.config.sweeps;
  const auto sim = ctx.config.simulation_options(false);
  const std::size_t w = ctx.workers;

  if (name == "bandwidth") {
    const experiments::Range r{sw.bandwidth.lambda_min_um * 1e-6, sw.bandwidth.lambda_max_um * 1e-6,
                               sw.bandwidth.samples};
    write_sweep(ctx, name, experiments::bandwidth_sweep(d, loaded.material, r, sim, w), d);
  } else if (name == "period") {
    write_sweep(ctx, name,
                experiments::robustness_period_sweep(d, percent_range(sw.period),
                                                     sw.period.threshold, sim, w),
                d);
  } else if (name == "pump") {
    write_sweep(ctx, name,
                experiments::robustness_pump_sweep(d, percent_range(sw.pump), sw.pump.threshold,
                                                   sim, w),
                d);
  } else if (name == "signal") {
    const experiments::Range r{sw.signal.min_ratio, sw.signal.max_ratio, sw.signal.samples};
    write_sweep(ctx, name, experiments::signal_intensity_sweep(d, r, sim, w), d);
  } else { // length
    const auto lengths = experiments::Range{sw.length.min_mm * 1e-3, sw.length.max_mm * 1e-3,
                                            sw.length.samples}.values();
    const auto r = experiments::efficiency_vs_length(d, loaded.material, lengths, sim, w);
    const auto p = provenance(ctx);
    io::write_csv(ctx.out_dir / "sweep_length.csv", io::length_table(r), p);
    json doc{{"sweep", name},
             {"parameter", "L_mm"},
             {"unit", "mm"},
             {"samples", lengths.size()},
             {"quasi_adiabatic", io::sweep_json(r.quasi_adiabatic)},
             {"linear_chirp", io::sweep_json(r.linear_chirp)},
             {"design", design_summary(d)}};
    json first = nullptr;
    for (const auto& s : r.linear_chirp.samples)
      if (s.eta >= 0.9) {
        first = s.parameter;
        break;
      }
    doc["linear_chirp"]["first_L_mm_with_eta_ge_0.9"] = first;
    io::write_json(ctx.out_dir / "sweep_length.json", std::move(doc), p);
  }
}

void cmd_optimize(const Context& ctx) {
  const auto s = search_from(ctx);
  write_trace(ctx, sensitivity::optimize_kappa(s), "optimize", s);
}

namespace {

std::size_t parse_workers(const std::string& text, const std::string& source) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty() || text.front() == '-')
    throw InputError(source + " must be a non-negative integer, got '" + text + "'");
  return v;
}

} // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Quasi-adiabatic sum-frequency crystal design tool", "qasfg"};
  app.set_version_flag("--version", std::string(io::tool_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string workers_flag;
  std::string design_path;
  std::string sweep_name;
  bool depleted = false;
  double ratio = 0.0;

  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides output.directory)");
  app.add_option("--workers", workers_flag, "worker threads (0 = hardware)");

  auto* design = app.add_subcommand("design", "optimize kappa and write the poling design");
  auto* simulate = app.add_subcommand("simulate", "propagate fields through a design");
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  auto* optimize = app.add_subcommand("optimize", "scan and minimize the error sensitivity");
  for (auto* sub : {design, simulate, sweep, optimize}) sub->fallthrough();
  for (auto* sub : {simulate, sweep})
    sub->add_option("--design", design_path, "design.json written by 'design'");
  simulate->add_flag("--depleted", depleted, "evolve the pump as well");
  auto* ratio_opt = simulate->add_option("--ratio", ratio, "signal/pump amplitude ratio");
  sweep->add_option("name", sweep_name, "bandwidth | period | pump | length | signal | kappa-trace")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Context ctx;
    ctx.config = config_path.empty() ? config::RunConfig{} : config::load_config(config_path);
    ctx.out_dir = out_dir.empty() ? fs::path(ctx.config.output_directory) : fs::path(out_dir);
    std::size_t workers = ctx.config.workers;
    if (!workers_flag.empty()) workers = parse_workers(workers_flag, "--workers");
    else if (const char* env = std::getenv("QASFG_WORKERS"); env && *env)
      workers = parse_workers(env, "QASFG_WORKERS");
    ctx.workers = workers == 0 ? default_workers() : workers;
    if (!design_path.empty()) ctx.design_path = fs::path(design_path);
    if (depleted) ctx.depleted = true;
    if (*ratio_opt) ctx.ratio = ratio;

    if (app.got_subcommand("design")) cmd_design(ctx);
    else if (app.got_subcommand("simulate")) cmd_simulate(ctx);
    else if (app.got_subcommand("sweep")) cmd_sweep(ctx, sweep_name);
    else cmd_optimize(ctx);
    return 0;
  } catch (const InputError& e) {
    std::cerr << "qasfg: InputError: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "qasfg: NumericError: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "qasfg: InputError: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qasfg: error: " << e.what() << '\n';
    return 1;
  }
}

} // namespace qasfg::cli
