#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qasfg/experiments.hpp"

namespace qasfg::io {

inline constexpr std::string_view kToolName = "qasfg";
std::string_view tool_version();

// Shortest decimal that round-trips, independent of locale.
std::string format_number(double value);

// Stamp written at the top of every output file.
struct Provenance {
  std::string config_hash;
};

class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> columns);
  void add_row(std::initializer_list<double> values);
  void add_row(const std::vector<double>& values);
  std::size_t rows() const { return rows_; }
  std::string render(const Provenance& provenance) const;

private:
  std::vector<std::string> columns_;
  std::string body_;
  std::size_t rows_ = 0;
};

// Parsed CSV: '#' lines skipped, first remaining line is the header.
struct CsvData {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<double> column(std::string_view name) const;
};

CsvData read_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view text);
void write_csv(const std::filesystem::path& path, const CsvTable& table,
               const Provenance& provenance);
// Adds tool/tool_version/config_hash keys.
void write_json(const std::filesystem::path& path, nlohmann::json doc,
                const Provenance& provenance);
nlohmann::json read_json(const std::filesystem::path& path);

CsvTable profile_table(const trajectory::AngleProfiles& angles,
                       const trajectory::MismatchProfile& mismatch);
CsvTable design_table(const experiments::CrystalDesign& design);
CsvTable field_table(const propagation::FieldTrajectory& trajectory);
CsvTable trace_table(const sensitivity::KappaOptimum& optimum);
CsvTable sweep_table(const experiments::SweepResult& result);
CsvTable length_table(const experiments::LengthSweep& result);

nlohmann::json design_json(const experiments::CrystalDesign& design,
                           const experiments::MaterialSetup& material);
nlohmann::json boundary_json(const trajectory::BoundaryReport& report);
nlohmann::json sweep_json(const experiments::SweepResult& result);

// Rebuilds a design from design.json plus the samples file it names.
// Throws InputError when either file is missing or inconsistent.
struct LoadedDesign {
  experiments::CrystalDesign design;
  experiments::MaterialSetup material;
};
LoadedDesign load_design(const std::filesystem::path& design_json_path);

} // namespace qasfg::io
