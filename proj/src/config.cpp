#include "qasfg/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "qasfg/error.hpp"

namespace qasfg::config {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InputError("config: '" + where + "' must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!keys.count(key)) {
      std::ostringstream msg;
      msg << "config: unknown key '" << where << (where.empty() ? "" : ".") << key
          << "'; allowed:";
      for (const auto& k : keys) msg << ' ' << k;
      throw InputError(msg.str());
    }
  }
}

std::string path_of(const std::string& where, const char* key) {
  return where.empty() ? key : where + "." + key;
}

void read(const json& obj, const std::string& where, const char* key, double& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_number())
    throw InputError("config: '" + path_of(where, key) + "' must be a number");
  out = v.get<double>();
}

void read(const json& obj, const std::string& where, const char* key, std::optional<double>& out) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  double v = 0.0;
  read(obj, where, key, v);
  out = v;
}

void read(const json& obj, const std::string& where, const char* key, std::size_t& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw InputError("config: '" + path_of(where, key) + "' must be a non-negative integer");
  out = v.get<std::size_t>();
}

void read(const json& obj, const std::string& where, const char* key, std::string& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw InputError("config: '" + path_of(where, key) + "' must be a string");
  out = v.get<std::string>();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw InputError("config: " + message);
}

void parse_perturbation(const json& obj, const std::string& where, PerturbationSweepConfig& c) {
  reject_unknown(obj, where, {"min_percent", "max_percent", "samples", "threshold"});
  read(obj, where, "min_percent", c.min_percent);
  read(obj, where, "max_percent", c.max_percent);
  read(obj, where, "samples", c.samples);
  read(obj, where, "threshold", c.threshold);
  require(c.samples >= 1, where + ".samples must be >= 1");
  require(c.max_percent > c.min_percent || c.samples == 1, where + ": max_percent must exceed min_percent");
  require(c.min_percent <= 0.0 && c.max_percent >= 0.0, where + ": range must contain 0");
}

} // namespace

RunConfig parse_config(const json& doc) {
  reject_unknown(doc, "", {"material", "design", "simulation", "sweeps", "output", "workers"});
  RunConfig c;

  if (doc.contains("material")) {
    const auto& m = doc.at("material");
    const std::string w = "material";
    reject_unknown(m, w, {"dispersion", "temperature_C", "d33_pm_per_V", "chi2_per_d33",
                          "duty_cycle", "epsilon0", "lambda_signal_um", "lambda_pump_um"});
    read(m, w, "dispersion", c.material.dispersion);
    read(m, w, "temperature_C", c.material.temperature_C);
    read(m, w, "d33_pm_per_V", c.material.d33_pm_per_V);
    read(m, w, "chi2_per_d33", c.material.chi2_per_d33);
    read(m, w, "duty_cycle", c.material.duty_cycle);
    read(m, w, "epsilon0", c.material.epsilon0);
    read(m, w, "lambda_signal_um", c.material.lambda_signal_um);
    read(m, w, "lambda_pump_um", c.material.lambda_pump_um);
  }
  require(c.material.epsilon0 == "rounded" || c.material.epsilon0 == "codata",
          "material.epsilon0 must be \"rounded\" or \"codata\"");
  require(c.material.d33_pm_per_V > 0.0 && c.material.chi2_per_d33 > 0.0,
          "material.d33_pm_per_V and material.chi2_per_d33 must be positive");
  require(c.material.duty_cycle > 0.0 && c.material.duty_cycle < 1.0,
          "material.duty_cycle must lie in (0, 1)");
  require(c.material.lambda_signal_um > 0.0 && c.material.lambda_pump_um > 0.0,
          "material wavelengths must be positive");

  if (doc.contains("design")) {
    const auto& d = doc.at("design");
    const std::string w = "design";
    reject_unknown(d, w, {"L_mm", "target", "kappa_per_cm", "kappa_min_per_cm",
                          "kappa_max_per_cm", "grid_nodes", "scan_points"});
    read(d, w, "L_mm", c.design.L_mm);
    read(d, w, "target", c.design.target);
    read(d, w, "kappa_per_cm", c.design.kappa_per_cm);
    read(d, w, "kappa_min_per_cm", c.design.kappa_min_per_cm);
    read(d, w, "kappa_max_per_cm", c.design.kappa_max_per_cm);
    read(d, w, "grid_nodes", c.design.grid_nodes);
    read(d, w, "scan_points", c.design.scan_points);
  }
  require(c.design.L_mm > 0.0, "design.L_mm must be positive");
  (void)sensitivity::parse_target(c.design.target);
  require(c.design.grid_nodes >= 1001 && c.design.grid_nodes % 2 == 1,
          "design.grid_nodes must be odd and >= 1001");
  require(c.design.scan_points >= 400, "design.scan_points must be >= 400");

  if (doc.contains("simulation")) {
    const auto& s = doc.at("simulation");
    const std::string w = "simulation";
    reject_unknown(s, w, {"steps", "mode", "signal_pump_ratio", "record_stride"});
    read(s, w, "steps", c.simulation.steps);
    read(s, w, "mode", c.simulation.mode);
    read(s, w, "signal_pump_ratio", c.simulation.signal_pump_ratio);
    read(s, w, "record_stride", c.simulation.record_stride);
  }
  require(c.simulation.steps > 0, "simulation.steps must be positive");
  require(c.simulation.mode == "undepleted" || c.simulation.mode == "depleted",
          "simulation.mode must be \"undepleted\" or \"depleted\"");
  require(c.simulation.signal_pump_ratio > 0.0, "simulation.signal_pump_ratio must be positive");

  if (doc.contains("sweeps")) {
    const auto& s = doc.at("sweeps");
    reject_unknown(s, "sweeps", {"bandwidth", "period", "pump", "length", "signal"});
    if (s.contains("bandwidth")) {
      const auto& b = s.at("bandwidth");
      const std::string w = "sweeps.bandwidth";
      reject_unknown(b, w, {"lambda_min_um", "lambda_max_um", "samples"});
      read(b, w, "lambda_min_um", c.sweeps.bandwidth.lambda_min_um);
      read(b, w, "lambda_max_um", c.sweeps.bandwidth.lambda_max_um);
      read(b, w, "samples", c.sweeps.bandwidth.samples);
    }
    if (s.contains("period")) parse_perturbation(s.at("period"), "sweeps.period", c.sweeps.period);
    if (s.contains("pump")) parse_perturbation(s.at("pump"), "sweeps.pump", c.sweeps.pump);
    if (s.contains("length")) {
      const auto& l = s.at("length");
      const std::string w = "sweeps.length";
      reject_unknown(l, w, {"min_mm", "max_mm", "samples"});
      read(l, w, "min_mm", c.sweeps.length.min_mm);
      read(l, w, "max_mm", c.sweeps.length.max_mm);
      read(l, w, "samples", c.sweeps.length.samples);
    }
    if (s.contains("signal")) {
      const auto& g = s.at("signal");
      const std::string w = "sweeps.signal";
      reject_unknown(g, w, {"min_ratio", "max_ratio", "samples"});
      read(g, w, "min_ratio", c.sweeps.signal.min_ratio);
      read(g, w, "max_ratio", c.sweeps.signal.max_ratio);
      read(g, w, "samples", c.sweeps.signal.samples);
    }
  }
  require(c.sweeps.bandwidth.samples >= 2 &&
              c.sweeps.bandwidth.lambda_max_um > c.sweeps.bandwidth.lambda_min_um,
          "sweeps.bandwidth needs lambda_max_um > lambda_min_um and samples >= 2");
  require(c.sweeps.length.samples >= 1 && c.sweeps.length.min_mm > 0.0 &&
              c.sweeps.length.max_mm >= c.sweeps.length.min_mm,
          "sweeps.length needs 0 < min_mm <= max_mm and samples >= 1");
  require(c.sweeps.signal.samples >= 1 && c.sweeps.signal.min_ratio >= 0.0 &&
              c.sweeps.signal.max_ratio >= c.sweeps.signal.min_ratio,
          "sweeps.signal needs 0 <= min_ratio <= max_ratio and samples >= 1");

  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    reject_unknown(o, "output", {"directory"});
    read(o, "output", "directory", c.output_directory);
  }
  read(doc, "", "workers", c.workers);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  auto perturbation = [](const PerturbationSweepConfig& p) {
    return json{{"min_percent", p.min_percent}, {"max_percent", p.max_percent},
                {"samples", p.samples}, {"threshold", p.threshold}};
  };
  return json{
      {"material",
       {{"dispersion", c.material.dispersion},
        {"temperature_C", c.material.temperature_C},
        {"d33_pm_per_V", c.material.d33_pm_per_V},
        {"chi2_per_d33", c.material.chi2_per_d33},
        {"duty_cycle", c.material.duty_cycle},
        {"epsilon0", c.material.epsilon0},
        {"lambda_signal_um", c.material.lambda_signal_um},
        {"lambda_pump_um", c.material.lambda_pump_um}}},
      {"design",
       {{"L_mm", c.design.L_mm},
        {"target", c.design.target},
        {"kappa_per_cm", opt(c.design.kappa_per_cm)},
        {"kappa_min_per_cm", opt(c.design.kappa_min_per_cm)},
        {"kappa_max_per_cm", c.design.kappa_max_per_cm},
        {"grid_nodes", c.design.grid_nodes},
        {"scan_points", c.design.scan_points}}},
      {"simulation",
       {{"steps", c.simulation.steps},
        {"mode", c.simulation.mode},
        {"signal_pump_ratio", c.simulation.signal_pump_ratio},
        {"record_stride", c.simulation.record_stride}}},
      {"sweeps",
       {{"bandwidth",
         {{"lambda_min_um", c.sweeps.bandwidth.lambda_min_um},
          {"lambda_max_um", c.sweeps.bandwidth.lambda_max_um},
          {"samples", c.sweeps.bandwidth.samples}}},
        {"period", perturbation(c.sweeps.period)},
        {"pump", perturbation(c.sweeps.pump)},
        {"length",
         {{"min_mm", c.sweeps.length.min_mm},
          {"max_mm", c.sweeps.length.max_mm},
          {"samples", c.sweeps.length.samples}}},
        {"signal",
         {{"min_ratio", c.sweeps.signal.min_ratio},
          {"max_ratio", c.sweeps.signal.max_ratio},
          {"samples", c.sweeps.signal.samples}}}}},
      {"output", {{"directory", c.output_directory}}},
      {"workers", c.workers}};
}

std::string config_hash(const RunConfig& config) {
  // Worker count and output location do not change results.
  json canonical = to_json(config);
  canonical.erase("workers");
  canonical.erase("output");
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canonical.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

experiments::MaterialSetup RunConfig::material_setup() const {
  experiments::MaterialSetup m;
  m.dispersion = materials::DispersionModel::by_name(material.dispersion, material.temperature_C);
  m.nonlinear.chi2 = material.d33_pm_per_V * 1e-12 * material.chi2_per_d33;
  m.nonlinear.duty_cycle = material.duty_cycle;
  m.signal_wavelength = material.lambda_signal_um * 1e-6;
  m.pump_wavelength = material.lambda_pump_um * 1e-6;
  m.epsilon0 = material.epsilon0 == "codata" ? materials::kEpsilon0Codata
                                              : materials::kEpsilon0Rounded;
  return m;
}

experiments::DesignOptions RunConfig::design_options(std::size_t n_workers) const {
  experiments::DesignOptions o;
  o.length = design.L_mm * 1e-3;
  o.target = sensitivity::parse_target(design.target);
  o.kappa_min = design.kappa_min_per_cm ? *design.kappa_min_per_cm * 100.0 : 0.0;
  o.kappa_max = design.kappa_max_per_cm * 100.0;
  o.scan_points = design.scan_points;
  o.nodes = design.grid_nodes;
  o.workers = n_workers;
  if (design.kappa_per_cm) o.kappa = *design.kappa_per_cm * 100.0;
  return o;
}

propagation::SimulationOptions RunConfig::simulation_options(bool record) const {
  return {simulation.steps, record ? simulation.record_stride : 0};
}

} // namespace qasfg::config
