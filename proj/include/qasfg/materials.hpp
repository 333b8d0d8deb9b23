#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qasfg::materials {

inline constexpr double kSpeedOfLight = 299'792'458.0; // m/s
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kMu0 = 4.0e-7 * kPi;           // H/m
inline constexpr double kEpsilon0Rounded = 8.82e-12;     // F/m, three-digit value
inline constexpr double kEpsilon0Codata = 8.8541878128e-12;

// Temperature-dependent extended Sellmeier form
//   n² = a1 + b1 f + (a2 + b2 f)/(λ² − (a3 + b3 f)²) + (a4 + b4 f)/(λ² − a5²) − a6 λ²
// with f = (T − 24.5)(T + 570.82), T in °C and λ in μm.
struct SellmeierCoefficients {
  double a1, a2, a3, a4, a5, a6;
  double b1, b2, b3, b4;
};

class DispersionModel {
public:
  DispersionModel(std::string name, SellmeierCoefficients coefficients,
                  double min_wavelength_um, double max_wavelength_um,
                  double temperature_c);

  // Registered sets, looked up by name. Throws InputError for unknown names.
  static DispersionModel by_name(std::string_view name, double temperature_c = 25.0);
  static std::vector<std::string> available();

  // Refractive index at a vacuum wavelength in metres. Throws InputError
  // outside [min_wavelength, max_wavelength].
  double refractive_index(double wavelength_m) const;

  bool in_range(double wavelength_m) const;

  const std::string& name() const { return name_; }
  double temperature_c() const { return temperature_c_; }
  double min_wavelength_m() const { return min_um_ * 1e-6; }
  double max_wavelength_m() const { return max_um_ * 1e-6; }

private:
  std::string name_;
  SellmeierCoefficients c_;
  double min_um_;
  double max_um_;
  double temperature_c_;
};

inline constexpr std::string_view kDefaultDispersion = "gayer2008_mgo_cln_e";

// Index 0 = signal, 1 = pump, 2 = upconverted.
struct WaveTriplet {
  double wavelength[3]; // m
  double omega[3];      // rad/s
  double index[3];
  double wavevector[3]; // rad/m

  // k1 + k2 − k3: the bulk phase mismatch before any grating contribution.
  double material_mismatch() const {
    return wavevector[0] + wavevector[1] - wavevector[2];
  }
};

WaveTriplet make_wave_triplet(double signal_wavelength_m, double pump_wavelength_m,
                              const DispersionModel& model);

struct NonlinearConstants {
  double chi2 = 25e-12; // m/V
  double duty_cycle = 0.5;

  // First-order QPM coefficient (2/π) sin(πD) χ⁽²⁾.
  double chi1() const;
  void validate() const;
};

double refractive_index(double wavelength_m, const DispersionModel& model);

// κ = 4π ω1 ω3 χ1 A2 / (c² √(k1 k3)), rad/m.
double coupling_coefficient(double pump_amplitude, const WaveTriplet& waves,
                            const NonlinearConstants& nl);

// Inverse of coupling_coefficient.
double pump_amplitude_for_kappa(double kappa, const WaveTriplet& waves,
                                const NonlinearConstants& nl);

// I = 2 n2 √(ε0/μ0) |A2|², W/m².
double pump_intensity(double pump_amplitude, double pump_index,
                      double epsilon0 = kEpsilon0Rounded);

// Local poling period Λ = 2π/(Δk − k1 − k2 + k3). Sign is the poling
// orientation. Throws NumericError when the denominator vanishes.
double poling_period(double delta_k, const WaveTriplet& waves);

// Δk realized by a period Λ: Δk = k1 + k2 − k3 + 2π/Λ.
double mismatch_for_period(double period_m, const WaveTriplet& waves);

} // namespace qasfg::materials
