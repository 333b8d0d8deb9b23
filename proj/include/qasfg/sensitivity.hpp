#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "qasfg/materials.hpp"
#include "qasfg/trajectory.hpp"

namespace qasfg::sensitivity {

enum class Target { DeltaK, Kappa };

std::string_view to_string(Target target);
Target parse_target(std::string_view name); // "deltak" | "kappa"

struct SensitivityResult {
  double q_delta_k; // m²
  double q_kappa;   // dimensionless
  double kappa;     // rad/m
  double length;    // m
};

// ¼ |∫ e^{im} sin θ dz|²
double q_deltak(const trajectory::AngleProfiles& angles);
// ¼ |∫ e^{im} 2 θ̇ sin²θ dz|²
double q_kappa(const trajectory::AngleProfiles& angles);
SensitivityResult sensitivities(const trajectory::AngleProfiles& angles);

// Value of the selected sensitivity for a fresh trajectory at (κ, L).
double sensitivity_at(double kappa, double length, Target target, std::size_t nodes = 4001);

// η_Δk in rad/m; η_κ as the relative coupling error δκ/κ = δA2/A2.
struct ErrorAmplitudes {
  double delta_k = 0.0;
  double kappa = 0.0;
};

struct PerturbedEfficiency {
  double full;      // 1 − ¼|∫ e^{im}(iη_Δ sin θ + 2η_κ θ̇ sin²θ)|², clamped to [0, 1]
  double quadratic; // 1 − η_κ² q_κ − η_Δk² q_Δk, clamped to [0, 1]
};

PerturbedEfficiency perturbed_efficiency_estimate(const trajectory::AngleProfiles& angles,
                                                  const ErrorAmplitudes& eta);

// η_Δk = −2π δΛ/Λ² for a relative period error δΛ/Λ at local period Λ.
double eta_from_period_error(double relative_error, double period_m);

// Absolute coupling error produced by a pump amplitude error δA2.
double kappa_error_from_pump_error(double pump_amplitude_error,
                                   const materials::WaveTriplet& waves,
                                   const materials::NonlinearConstants& nl);

// η_κ = δκ/κ.
double eta_from_pump_error(double pump_amplitude_error, double kappa,
                           const materials::WaveTriplet& waves,
                           const materials::NonlinearConstants& nl);

struct KappaSearch {
  double length = 1e-3;
  Target target = Target::DeltaK;
  double kappa_min = 0.0;     // rad/m; 0 selects 1.05·π/L
  double kappa_max = 30000.0; // rad/m (300 cm⁻¹)
  std::size_t scan_points = 400;
  double tolerance = 0.1;     // rad/m (1e-3 cm⁻¹)
  std::size_t nodes = 4001;
  std::size_t workers = 1;
};

struct TracePoint {
  double kappa;
  double q;
};

struct KappaOptimum {
  double kappa;
  double q;
  std::vector<TracePoint> trace; // coarse scan, ascending κ
};

// Coarse uniform scan followed by golden-section refinement of every interior
// local minimum. Minima whose value is within 1e-9·max(scan) of the best are
// treated as equivalent and the smallest such κ is returned. Throws
// InputError for an invalid range and NumericError when the minimum sits on
// a range boundary.
KappaOptimum optimize_kappa(const KappaSearch& search);

} // namespace qasfg::sensitivity
