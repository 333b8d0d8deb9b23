#include "qasfg/materials.hpp"

#include <cmath>
#include <sstream>

#include "qasfg/error.hpp"

namespace qasfg::materials {

namespace {

struct NamedSet {
  std::string_view name;
  SellmeierCoefficients coefficients;
  double min_um;
  double max_um;
};

// 5 mol% MgO-doped congruent LiNbO3, extraordinary polarization
// (Gayer et al., Appl. Phys. B 91, 343 (2008)).
constexpr NamedSet kRegistry[] = {
    {kDefaultDispersion,
     {5.756, 0.0983, 0.2020, 189.32, 12.52, 1.32e-2, 2.860e-6, 4.700e-8, 6.113e-8, 1.516e-4},
     0.5,
     4.0},
};

} // namespace

DispersionModel::DispersionModel(std::string name, SellmeierCoefficients coefficients,
                                 double min_wavelength_um, double max_wavelength_um,
                                 double temperature_c)
    : name_(std::move(name)), c_(coefficients), min_um_(min_wavelength_um),
      max_um_(max_wavelength_um), temperature_c_(temperature_c) {
  if (!(min_um_ > 0.0 && max_um_ > min_um_))
    throw InputError("dispersion model '" + name_ + "': invalid wavelength range");
}

DispersionModel DispersionModel::by_name(std::string_view name, double temperature_c) {
  for (const auto& set : kRegistry)
    if (set.name == name)
      return DispersionModel(std::string(set.name), set.coefficients, set.min_um,
                             set.max_um, temperature_c);
  std::ostringstream msg;
  msg << "unknown dispersion set '" << name << "'; available:";
  for (const auto& set : kRegistry) msg << ' ' << set.name;
  throw InputError(msg.str());
}

std::vector<std::string> DispersionModel::available() {
  std::vector<std::string> names;
  for (const auto& set : kRegistry) names.emplace_back(set.name);
  return names;
}

bool DispersionModel::in_range(double wavelength_m) const {
  const double um = wavelength_m * 1e6;
  return um >= min_um_ && um <= max_um_;
}

double DispersionModel::refractive_index(double wavelength_m) const {
  if (!std::isfinite(wavelength_m) || !in_range(wavelength_m)) {
    std::ostringstream msg;
    msg << "wavelength " << wavelength_m * 1e6 << " um outside the valid range ["
        << min_um_ << ", " << max_um_ << "] um of '" << name_ << "'";
    throw InputError(msg.str());
  }
  const double l2 = std::pow(wavelength_m * 1e6, 2);
  const double f = (temperature_c_ - 24.5) * (temperature_c_ + 570.82);
  const double pole = c_.a3 + c_.b3 * f;
  const double n2 = c_.a1 + c_.b1 * f + (c_.a2 + c_.b2 * f) / (l2 - pole * pole) +
                    (c_.a4 + c_.b4 * f) / (l2 - c_.a5 * c_.a5) - c_.a6 * l2;
  return std::sqrt(n2);
}

double refractive_index(double wavelength_m, const DispersionModel& model) {
  return model.refractive_index(wavelength_m);
}

WaveTriplet make_wave_triplet(double signal_wavelength_m, double pump_wavelength_m,
                              const DispersionModel& model) {
  if (!(signal_wavelength_m > 0.0) || !(pump_wavelength_m > 0.0))
    throw InputError("wavelengths must be positive");
  WaveTriplet w{};
  w.wavelength[0] = signal_wavelength_m;
  w.wavelength[1] = pump_wavelength_m;
  w.wavelength[2] = 1.0 / (1.0 / signal_wavelength_m + 1.0 / pump_wavelength_m);
  for (int i = 0; i < 3; ++i) {
    w.index[i] = model.refractive_index(w.wavelength[i]);
    w.omega[i] = 2.0 * kPi * kSpeedOfLight / w.wavelength[i];
    w.wavevector[i] = 2.0 * kPi * w.index[i] / w.wavelength[i];
  }
  return w;
}

double NonlinearConstants::chi1() const {
  return 2.0 / kPi * std::sin(kPi * duty_cycle) * chi2;
}

void NonlinearConstants::validate() const {
  if (!(duty_cycle > 0.0 && duty_cycle < 1.0))
    throw InputError("duty cycle must lie in (0, 1)");
  if (!(chi2 > 0.0) || !std::isfinite(chi2))
    throw InputError("chi2 must be positive and finite");
}

namespace {

// κ per unit pump amplitude.
double coupling_per_amplitude(const WaveTriplet& w, const NonlinearConstants& nl) {
  return 4.0 * kPi * w.omega[0] * w.omega[2] * nl.chi1() /
         (kSpeedOfLight * kSpeedOfLight * std::sqrt(w.wavevector[0] * w.wavevector[2]));
}

} // namespace

double coupling_coefficient(double pump_amplitude, const WaveTriplet& waves,
                            const NonlinearConstants& nl) {
  if (!(pump_amplitude >= 0.0)) throw InputError("pump amplitude must be >= 0");
  return coupling_per_amplitude(waves, nl) * pump_amplitude;
}

double pump_amplitude_for_kappa(double kappa, const WaveTriplet& waves,
                                const NonlinearConstants& nl) {
  if (!(kappa >= 0.0)) throw InputError("coupling coefficient must be >= 0");
  return kappa / coupling_per_amplitude(waves, nl);
}

double pump_intensity(double pump_amplitude, double pump_index, double epsilon0) {
  if (!(pump_amplitude >= 0.0)) throw InputError("pump amplitude must be >= 0");
  return 2.0 * pump_index * std::sqrt(epsilon0 / kMu0) * pump_amplitude * pump_amplitude;
}

double poling_period(double delta_k, const WaveTriplet& waves) {
  const double grating = delta_k - waves.material_mismatch();
  if (grating == 0.0 || !std::isfinite(grating))
    throw NumericError("poling period undefined: delta_k cancels the material mismatch "
                       "(unpoled point)");
  return 2.0 * kPi / grating;
}

double mismatch_for_period(double period_m, const WaveTriplet& waves) {
  if (period_m == 0.0 || !std::isfinite(period_m))
    throw NumericError("poling period must be finite and nonzero");
  return waves.material_mismatch() + 2.0 * kPi / period_m;
}

} // namespace qasfg::materials
