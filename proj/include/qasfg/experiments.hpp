#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qasfg/materials.hpp"
#include "qasfg/propagation.hpp"
#include "qasfg/sensitivity.hpp"
#include "qasfg/trajectory.hpp"

namespace qasfg::experiments {

using sensitivity::Target;

struct MaterialSetup {
  materials::DispersionModel dispersion =
      materials::DispersionModel::by_name(materials::kDefaultDispersion);
  materials::NonlinearConstants nonlinear{};
  double signal_wavelength = 3.0e-6; // m
  double pump_wavelength = 1.064e-6; // m
  double epsilon0 = materials::kEpsilon0Rounded;

  materials::WaveTriplet waves() const;
};

struct DesignOptions {
  double length = 1e-3;
  Target target = Target::DeltaK;
  double kappa_min = 0.0; // rad/m, 0 = 1.05·π/L
  double kappa_max = 30000.0;
  std::size_t scan_points = 400;
  std::size_t nodes = 4001;
  std::size_t workers = 1;
  std::optional<double> kappa; // skip optimization and use this κ
};

enum class Protocol { QuasiAdiabatic, LinearChirp };

// The fabricated artifact: a poling-period profile plus the pump that drives it.
struct CrystalDesign {
  double kappa = 0.0;  // rad/m
  double length = 0.0; // m
  Target target = Target::DeltaK;
  Protocol protocol = Protocol::QuasiAdiabatic;
  std::string origin; // "optimized", "fixed", "scaled", "lz-baseline", "loaded"
  std::size_t nodes = 0;
  sensitivity::SensitivityResult sensitivity{};
  trajectory::MismatchProfile mismatch;
  std::vector<double> period; // Λ(z), m
  double pump_amplitude = 0.0; // V/m
  double pump_intensity = 0.0; // W/m²
  materials::WaveTriplet waves{};
  materials::NonlinearConstants nonlinear{};
  std::string dispersion_name;
  double temperature_c = 25.0;
  double epsilon0 = materials::kEpsilon0Rounded;
};

// optimize_kappa → trajectory → Δk(z) → Λ(z), A2 and intensity.
CrystalDesign build_design(const DesignOptions& options, const MaterialSetup& material);

// Design at a given κ without optimization.
CrystalDesign design_for_kappa(double kappa, double length, Target target,
                               const MaterialSetup& material, std::size_t nodes = 4001,
                               std::string origin = "fixed");

// κ*(L) = κ*(L_ref)·L_ref/L; exact because both sensitivities depend on κL only.
CrystalDesign scaled_design(const CrystalDesign& reference, double length,
                            const MaterialSetup& material);

// Linear chirp with the reference κ and Δk running from Δk_ref(0) to −Δk_ref(0).
CrystalDesign lz_baseline(const CrystalDesign& reference, double length,
                          const MaterialSetup& material);

// Rebuilds Δk and φ from stored Λ(z) samples (used for loaded designs).
trajectory::MismatchProfile mismatch_from_period(std::span<const double> z,
                                                 std::span<const double> period,
                                                 const materials::WaveTriplet& waves);

// Throws InputError unless Λ and Δk agree through the period relation at every
// sample and A2 reproduces κ.
void validate_design(const CrystalDesign& design);

struct Range {
  double min = 0.0;
  double max = 0.0;
  std::size_t samples = 0;
  std::vector<double> values() const;
};

struct SweepSample {
  double parameter;
  double eta;
};

struct Interval {
  double lower;
  double upper;
};

struct FwhmResult {
  double width;
  bool truncated; // half-maximum not crossed inside the sweep on at least one side
};

struct SweepResult {
  std::string parameter; // column name, e.g. "lambda1_um"
  std::string unit;
  std::vector<SweepSample> samples;
  double peak = 0.0;
  double peak_at = 0.0;
  std::optional<FwhmResult> fwhm;
  std::optional<double> threshold;
  std::optional<Interval> tolerance;
  std::vector<double> perturbative; // second-order estimate per sample, if available
};

// Outermost half-maximum crossings, linearly interpolated.
std::optional<FwhmResult> fwhm(std::span<const SweepSample> samples);

// Closed interval around `center` where η >= threshold, edges linearly
// interpolated. Empty when η(center) < threshold.
std::optional<Interval> tolerance_interval(std::span<const SweepSample> samples,
                                           double threshold, double center = 0.0);

// Λ(z) and A2 frozen; per signal wavelength rebuild the triplet, κ and the
// material mismatch. Parameter axis in μm.
SweepResult bandwidth_sweep(const CrystalDesign& design, const MaterialSetup& material,
                            const Range& signal_wavelength_m,
                            const propagation::SimulationOptions& sim = {},
                            std::size_t workers = 1);

// Λ(z) → Λ(z)(1 + δΛ/Λ). Parameter axis is the relative error.
SweepResult robustness_period_sweep(const CrystalDesign& design, const Range& relative_error,
                                    double threshold,
                                    const propagation::SimulationOptions& sim = {},
                                    std::size_t workers = 1);

// A2 → A2 √(1 + δI/I). Parameter axis is the relative intensity error.
SweepResult robustness_pump_sweep(const CrystalDesign& design, const Range& relative_error,
                                  double threshold,
                                  const propagation::SimulationOptions& sim = {},
                                  std::size_t workers = 1);

struct LengthSweep {
  SweepResult quasi_adiabatic;
  SweepResult linear_chirp;
};

// η(L) for scaled QA designs and the matched-extremes linear chirp. Axis in mm.
LengthSweep efficiency_vs_length(const CrystalDesign& reference, const MaterialSetup& material,
                                 std::span<const double> lengths_m,
                                 const propagation::SimulationOptions& sim = {},
                                 std::size_t workers = 1);

// Depleted-pump η versus photon-flux amplitude ratio |a1(0)|/|a2(0)|. The
// ratio 0 point is the undepleted limit.
SweepResult signal_intensity_sweep(const CrystalDesign& design, const Range& ratio,
                                   const propagation::SimulationOptions& sim = {},
                                   std::size_t workers = 1);

// Single-design simulations at the center wavelength.
propagation::FieldTrajectory simulate_design(const CrystalDesign& design,
                                             const propagation::SimulationOptions& sim = {});
propagation::FieldTrajectory simulate_design_depleted(
    const CrystalDesign& design, double signal_ratio,
    const propagation::SimulationOptions& sim = {});

} // namespace qasfg::experiments
