#include "qasfg/export.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "qasfg/error.hpp"
#include "qasfg/quadrature.hpp"

#ifndef QASFG_VERSION
#define QASFG_VERSION "0.0.0"
#endif

namespace qasfg::io {

using nlohmann::json;

std::string_view tool_version() { return QASFG_VERSION; }

std::string format_number(double value) {
  if (!std::isfinite(value)) throw NumericError("refusing to export a non-finite value");
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw NumericError("number formatting failed");
  return {buf, end};
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::initializer_list<double> values) {
  add_row(std::vector<double>(values));
}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != columns_.size()) throw NumericError("csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_number(values[i]);
  }
  body_ += '\n';
  ++rows_;
}

std::string CsvTable::render(const Provenance& p) const {
  std::string out = "# tool=";
  out += kToolName;
  out += " version=";
  out += tool_version();
  out += " config_hash=" + p.config_hash + "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  out += body_;
  return out;
}

std::vector<double> CsvData::column(std::string_view name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] != name) continue;
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
  }
  throw InputError("csv: missing column '" + std::string(name) + "'");
}

CsvData read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  CsvData data;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!header) {
      data.columns = std::move(cells);
      header = true;
      continue;
    }
    if (cells.size() != data.columns.size())
      throw InputError("csv '" + path.string() + "': row width mismatch");
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc{} || ptr != c.data() + c.size())
        throw InputError("csv '" + path.string() + "': bad number '" + c + "'");
      row.push_back(v);
    }
    data.rows.push_back(std::move(row));
  }
  if (!header) throw InputError("csv '" + path.string() + "' has no header");
  return data;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InputError("write failed for '" + path.string() + "'");
}

void write_csv(const std::filesystem::path& path, const CsvTable& table, const Provenance& p) {
  write_text(path, table.render(p));
}

void write_json(const std::filesystem::path& path, json doc, const Provenance& p) {
  doc["tool"] = kToolName;
  doc["tool_version"] = tool_version();
  doc["config_hash"] = p.config_hash;
  write_text(path, doc.dump(2) + "\n");
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

CsvTable profile_table(const trajectory::AngleProfiles& a, const trajectory::MismatchProfile& m) {
  CsvTable t({"z_m", "theta_rad", "beta_rad", "alpha_rad", "deltak_rad_per_m", "phi_rad"});
  for (std::size_t i = 0; i < a.z.size(); ++i)
    t.add_row({a.z[i], a.theta[i], a.beta[i], a.alpha[i], m.delta_k[i], m.phase[i]});
  return t;
}

CsvTable design_table(const experiments::CrystalDesign& d) {
  CsvTable t({"z_m", "deltak_rad_per_m", "Lambda_m"});
  for (std::size_t i = 0; i < d.mismatch.z.size(); ++i)
    t.add_row({d.mismatch.z[i], d.mismatch.delta_k[i], d.period[i]});
  return t;
}

CsvTable field_table(const propagation::FieldTrajectory& tr) {
  std::vector<std::string> cols{"z_m", "re_A1", "im_A1", "re_A3", "im_A3"};
  if (tr.depleted) {
    cols.emplace_back("re_A2");
    cols.emplace_back("im_A2");
  }
  CsvTable t(std::move(cols));
  for (std::size_t i = 0; i < tr.z.size(); ++i) {
    const auto& s = tr.states[i];
    std::vector<double> row{tr.z[i], s.signal.real(), s.signal.imag(), s.upconverted.real(),
                            s.upconverted.imag()};
    if (tr.depleted) {
      row.push_back(s.pump.real());
      row.push_back(s.pump.imag());
    }
    t.add_row(row);
  }
  return t;
}

CsvTable trace_table(const sensitivity::KappaOptimum& opt) {
  CsvTable t({"kappa_per_cm", "q_value"});
  for (const auto& p : opt.trace) t.add_row({p.kappa / 100.0, p.q});
  return t;
}

CsvTable sweep_table(const experiments::SweepResult& r) {
  const bool overlay = !r.perturbative.empty();
  std::vector<std::string> cols{r.parameter, "eta"};
  if (overlay) cols.emplace_back("eta_perturbative");
  CsvTable t(std::move(cols));
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    if (overlay) t.add_row({r.samples[i].parameter, r.samples[i].eta, r.perturbative[i]});
    else t.add_row({r.samples[i].parameter, r.samples[i].eta});
  }
  return t;
}

CsvTable length_table(const experiments::LengthSweep& r) {
  CsvTable t({"L_mm", "eta_qa", "eta_lz"});
  for (std::size_t i = 0; i < r.quasi_adiabatic.samples.size(); ++i)
    t.add_row({r.quasi_adiabatic.samples[i].parameter, r.quasi_adiabatic.samples[i].eta,
               r.linear_chirp.samples[i].eta});
  return t;
}

namespace {

std::string_view protocol_name(experiments::Protocol p) {
  return p == experiments::Protocol::QuasiAdiabatic ? "quasi-adiabatic" : "linear-chirp";
}

experiments::Protocol parse_protocol(const std::string& name) {
  if (name == "quasi-adiabatic") return experiments::Protocol::QuasiAdiabatic;
  if (name == "linear-chirp") return experiments::Protocol::LinearChirp;
  throw InputError("design: unknown protocol '" + name + "'");
}

template <typename T>
T field(const json& doc, const char* key, const std::string& source) {
  if (!doc.contains(key)) throw InputError(source + ": missing key '" + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(source + ": key '" + key + "' has the wrong type");
  }
}

} // namespace

json design_json(const experiments::CrystalDesign& d, const experiments::MaterialSetup& m) {
  const auto& w = d.waves;
  return json{
      {"kappa_rad_per_m", d.kappa},
      {"kappa_per_cm", d.kappa / 100.0},
      {"L_m", d.length},
      {"L_mm", d.length * 1e3},
      {"target", sensitivity::to_string(d.target)},
      {"protocol", protocol_name(d.protocol)},
      {"origin", d.origin},
      {"grid_nodes", d.mismatch.z.size()},
      {"q_deltak_m2", d.sensitivity.q_delta_k},
      {"q_kappa", d.sensitivity.q_kappa},
      {"pump_amplitude_V_per_m", d.pump_amplitude},
      {"pump_intensity_W_per_m2", d.pump_intensity},
      {"pump_intensity_MW_per_cm2", d.pump_intensity * 1e-10},
      {"deltak_start_rad_per_m", d.mismatch.delta_k.front()},
      {"deltak_end_rad_per_m", d.mismatch.delta_k.back()},
      {"Lambda_start_um", d.period.front() * 1e6},
      {"Lambda_end_um", d.period.back() * 1e6},
      {"waves",
       {{"lambda_um", {w.wavelength[0] * 1e6, w.wavelength[1] * 1e6, w.wavelength[2] * 1e6}},
        {"index", {w.index[0], w.index[1], w.index[2]}},
        {"k_rad_per_m", {w.wavevector[0], w.wavevector[1], w.wavevector[2]}},
        {"material_mismatch_rad_per_m", w.material_mismatch()}}},
      {"material",
       {{"dispersion", d.dispersion_name},
        {"temperature_C", d.temperature_c},
        {"chi2_pm_per_V", d.nonlinear.chi2 * 1e12},
        {"duty_cycle", d.nonlinear.duty_cycle},
        {"epsilon0_F_per_m", d.epsilon0},
        {"lambda_signal_um", m.signal_wavelength * 1e6},
        {"lambda_pump_um", m.pump_wavelength * 1e6}}},
      {"samples_file", "design.csv"}};
}

json boundary_json(const trajectory::BoundaryReport& r) {
  json conditions = json::array();
  for (const auto& c : r.conditions)
    conditions.push_back(
        {{"name", c.name}, {"value", c.value}, {"expected", c.expected}, {"passed", c.passed}});
  return json{{"passed", r.passed()}, {"near_degenerate", r.near_degenerate},
              {"conditions", conditions}};
}

json sweep_json(const experiments::SweepResult& r) {
  json doc{{"parameter", r.parameter},
           {"unit", r.unit},
           {"samples", r.samples.size()},
           {"peak_eta", r.peak},
           {"peak_at", r.peak_at}};
  if (!r.samples.empty()) {
    double lo = r.samples.front().eta;
    for (const auto& s : r.samples) lo = std::min(lo, s.eta);
    doc["min_eta"] = lo;
  }
  if (r.fwhm) {
    doc["fwhm_nm"] = r.fwhm->width;
    doc["fwhm_truncated"] = r.fwhm->truncated;
  }
  if (r.threshold) {
    doc["threshold"] = *r.threshold;
    doc["tolerance_interval"] =
        r.tolerance ? json{r.tolerance->lower, r.tolerance->upper} : json(nullptr);
  }
  return doc;
}

LoadedDesign load_design(const std::filesystem::path& path) {
  const std::string src = "design file '" + path.string() + "'";
  if (!std::filesystem::exists(path)) throw InputError(src + " does not exist");
  const json doc = read_json(path);
  if (!doc.is_object()) throw InputError(src + " must hold a JSON object");
  if (!doc.contains("material") || !doc.at("material").is_object())
    throw InputError(src + ": missing material block");
  const json& mat = doc.at("material");

  LoadedDesign out;
  auto& m = out.material;
  m.dispersion = materials::DispersionModel::by_name(field<std::string>(mat, "dispersion", src),
                                                     field<double>(mat, "temperature_C", src));
  m.nonlinear.chi2 = field<double>(mat, "chi2_pm_per_V", src) * 1e-12;
  m.nonlinear.duty_cycle = field<double>(mat, "duty_cycle", src);
  m.nonlinear.validate();
  m.epsilon0 = field<double>(mat, "epsilon0_F_per_m", src);
  m.signal_wavelength = field<double>(mat, "lambda_signal_um", src) * 1e-6;
  m.pump_wavelength = field<double>(mat, "lambda_pump_um", src) * 1e-6;

  auto& d = out.design;
  d.kappa = field<double>(doc, "kappa_rad_per_m", src);
  d.length = field<double>(doc, "L_m", src);
  if (!(d.kappa > 0.0) || !(d.length > 0.0)) throw InputError(src + ": kappa and L must be positive");
  d.target = sensitivity::parse_target(field<std::string>(doc, "target", src));
  d.protocol = parse_protocol(field<std::string>(doc, "protocol", src));
  d.origin = "loaded";
  d.sensitivity = {field<double>(doc, "q_deltak_m2", src), field<double>(doc, "q_kappa", src),
                   d.kappa, d.length};
  d.pump_amplitude = field<double>(doc, "pump_amplitude_V_per_m", src);
  d.waves = m.waves();
  d.nonlinear = m.nonlinear;
  d.dispersion_name = m.dispersion.name();
  d.temperature_c = m.dispersion.temperature_c();
  d.epsilon0 = m.epsilon0;
  d.pump_intensity = materials::pump_intensity(d.pump_amplitude, d.waves.index[1], d.epsilon0);

  const auto samples = path.parent_path() / field<std::string>(doc, "samples_file", src);
  const CsvData csv = read_csv(samples);
  auto z = csv.column("z_m");
  auto dk = csv.column("deltak_rad_per_m");
  d.period = csv.column("Lambda_m");
  if (z.size() < 3 || z.size() % 2 == 0)
    throw InputError(src + ": samples file needs an odd number (>= 3) of rows");
  d.nodes = z.size();
  d.mismatch.phase = quadrature::cumulative_simpson<double>(dk, z[1] - z[0]);
  d.mismatch.z = std::move(z);
  d.mismatch.delta_k = std::move(dk);
  experiments::validate_design(d);
  return out;
}

} // namespace qasfg::io
