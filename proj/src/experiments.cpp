#include "qasfg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qasfg/error.hpp"
#include "qasfg/parallel.hpp"
#include "qasfg/quadrature.hpp"

namespace qasfg::experiments {

using materials::WaveTriplet;
using trajectory::MismatchProfile;

WaveTriplet MaterialSetup::waves() const {
  return materials::make_wave_triplet(signal_wavelength, pump_wavelength, dispersion);
}

namespace {

void fill_drive(CrystalDesign& d, const MaterialSetup& material) {
  d.waves = material.waves();
  d.nonlinear = material.nonlinear;
  d.dispersion_name = material.dispersion.name();
  d.temperature_c = material.dispersion.temperature_c();
  d.epsilon0 = material.epsilon0;
  d.pump_amplitude = materials::pump_amplitude_for_kappa(d.kappa, d.waves, d.nonlinear);
  d.pump_intensity = materials::pump_intensity(d.pump_amplitude, d.waves.index[1], d.epsilon0);
  d.period.resize(d.mismatch.delta_k.size());
  for (std::size_t i = 0; i < d.period.size(); ++i)
    d.period[i] = materials::poling_period(d.mismatch.delta_k[i], d.waves);
}

MismatchProfile with_delta_k(std::vector<double> z, std::vector<double> delta_k) {
  MismatchProfile p;
  const double h = z[1] - z[0];
  p.phase = quadrature::cumulative_simpson<double>(delta_k, h);
  p.z = std::move(z);
  p.delta_k = std::move(delta_k);
  return p;
}

void summarize_peak(SweepResult& r) {
  if (r.samples.empty()) return;
  auto it = std::max_element(r.samples.begin(), r.samples.end(),
                             [](const SweepSample& a, const SweepSample& b) { return a.eta < b.eta; });
  r.peak = it->eta;
  r.peak_at = it->parameter;
}

void require_valid_range(const Range& range, const char* what) {
  if (range.samples == 0) throw InputError(std::string(what) + ": sample count must be positive");
  if (range.samples > 1 && !(range.max > range.min))
    throw InputError(std::string(what) + ": range max must exceed min");
}

} // namespace

CrystalDesign design_for_kappa(double kappa, double length, Target target,
                               const MaterialSetup& material, std::size_t nodes,
                               std::string origin) {
  const trajectory::TrajectorySpec spec{kappa, length, nodes};
  const auto angles = trajectory::build_angles(spec);
  CrystalDesign d;
  d.kappa = kappa;
  d.length = length;
  d.target = target;
  d.protocol = Protocol::QuasiAdiabatic;
  d.origin = std::move(origin);
  d.nodes = nodes;
  d.sensitivity = sensitivity::sensitivities(angles);
  d.mismatch = trajectory::delta_k_profile(angles);
  fill_drive(d, material);
  return d;
}

CrystalDesign build_design(const DesignOptions& options, const MaterialSetup& material) {
  material.nonlinear.validate();
  if (options.kappa) {
    // Surface the κL > π constraint before anything else.
    trajectory::TrajectorySpec{*options.kappa, options.length, options.nodes}.validate();
    return design_for_kappa(*options.kappa, options.length, options.target, material,
                            options.nodes, "fixed");
  }
  sensitivity::KappaSearch search;
  search.length = options.length;
  search.target = options.target;
  search.kappa_min = options.kappa_min;
  search.kappa_max = options.kappa_max;
  search.scan_points = options.scan_points;
  search.nodes = options.nodes;
  search.workers = options.workers;
  const auto optimum = sensitivity::optimize_kappa(search);
  return design_for_kappa(optimum.kappa, options.length, options.target, material,
                          options.nodes, "optimized");
}

CrystalDesign scaled_design(const CrystalDesign& reference, double length,
                            const MaterialSetup& material) {
  if (!(length > 0.0)) throw InputError("scaled_design: length must be positive");
  const double kappa = reference.kappa * reference.length / length;
  return design_for_kappa(kappa, length, reference.target, material, reference.nodes, "scaled");
}

CrystalDesign lz_baseline(const CrystalDesign& reference, double length,
                          const MaterialSetup& material) {
  const double start = reference.mismatch.delta_k.front();
  CrystalDesign d;
  d.kappa = reference.kappa;
  d.length = length;
  d.target = reference.target;
  d.protocol = Protocol::LinearChirp;
  d.origin = "lz-baseline";
  d.nodes = reference.nodes;
  d.sensitivity = {0.0, 0.0, d.kappa, length};
  d.mismatch = propagation::lz_linear_chirp(start, -start, length, reference.nodes);
  fill_drive(d, material);
  return d;
}

MismatchProfile mismatch_from_period(std::span<const double> z, std::span<const double> period,
                                     const WaveTriplet& waves) {
  if (z.size() != period.size() || z.size() < 3)
    throw InputError("period profile needs matching z and Lambda samples (>= 3)");
  std::vector<double> dk(period.size());
  for (std::size_t i = 0; i < period.size(); ++i)
    dk[i] = materials::mismatch_for_period(period[i], waves);
  return with_delta_k({z.begin(), z.end()}, std::move(dk));
}

void validate_design(const CrystalDesign& d) {
  const std::size_t n = d.mismatch.z.size();
  if (n < 3 || d.period.size() != n || d.mismatch.delta_k.size() != n)
    throw InputError("design: sample arrays are missing or inconsistent");
  const double h = d.mismatch.step();
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(d.mismatch.z[i] - d.mismatch.z[i - 1] - h) > 1e-6 * h)
      throw InputError("design: z grid is not uniform");
  if (std::abs(d.mismatch.z.back() - d.length) > 1e-9 * d.length)
    throw InputError("design: z grid does not end at the crystal length");
  const double scale = std::abs(d.waves.material_mismatch());
  for (std::size_t i = 0; i < n; ++i) {
    const double dk = materials::mismatch_for_period(d.period[i], d.waves);
    if (std::abs(dk - d.mismatch.delta_k[i]) > 1e-9 * scale) {
      std::ostringstream msg;
      msg << "design: Lambda and delta_k disagree at sample " << i;
      throw InputError(msg.str());
    }
  }
  const double kappa = materials::coupling_coefficient(d.pump_amplitude, d.waves, d.nonlinear);
  if (std::abs(kappa - d.kappa) > 1e-9 * d.kappa)
    throw InputError("design: pump amplitude does not reproduce kappa");
}

std::vector<double> Range::values() const {
  std::vector<double> out(samples);
  if (samples == 1) {
    out[0] = min;
    return out;
  }
  const double step = (max - min) / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i)
    out[i] = (i + 1 == samples) ? max : min + step * static_cast<double>(i);
  return out;
}

std::optional<FwhmResult> fwhm(std::span<const SweepSample> s) {
  if (s.size() < 2) return std::nullopt;
  double peak = 0.0;
  for (const auto& p : s) peak = std::max(peak, p.eta);
  if (!(peak > 0.0)) return std::nullopt;
  const double half = 0.5 * peak;
  std::size_t first = 0;
  while (s[first].eta < half) ++first;
  std::size_t last = s.size() - 1;
  while (s[last].eta < half) --last;

  auto cross = [half](const SweepSample& a, const SweepSample& b) {
    return a.parameter + (half - a.eta) * (b.parameter - a.parameter) / (b.eta - a.eta);
  };
  bool truncated = false;
  double left = s.front().parameter, right = s.back().parameter;
  if (first > 0) left = cross(s[first - 1], s[first]);
  else truncated = true;
  if (last + 1 < s.size()) right = cross(s[last], s[last + 1]);
  else truncated = true;
  return FwhmResult{right - left, truncated};
}

std::optional<Interval> tolerance_interval(std::span<const SweepSample> s, double threshold,
                                           double center) {
  if (s.empty()) return std::nullopt;
  std::size_t c = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::abs(s[i].parameter - center) < std::abs(s[c].parameter - center)) c = i;
  if (s[c].eta < threshold) return std::nullopt;

  auto cross = [threshold](const SweepSample& in, const SweepSample& out) {
    return in.parameter +
           (threshold - in.eta) * (out.parameter - in.parameter) / (out.eta - in.eta);
  };
  std::size_t lo = c, hi = c;
  while (lo > 0 && s[lo - 1].eta >= threshold) --lo;
  while (hi + 1 < s.size() && s[hi + 1].eta >= threshold) ++hi;
  Interval iv{s[lo].parameter, s[hi].parameter};
  if (lo > 0) iv.lower = cross(s[lo], s[lo - 1]);
  if (hi + 1 < s.size()) iv.upper = cross(s[hi], s[hi + 1]);
  return iv;
}

propagation::FieldTrajectory simulate_design(const CrystalDesign& design,
                                             const propagation::SimulationOptions& sim) {
  return propagation::simulate_undepleted(design.mismatch, design.kappa, sim);
}

propagation::FieldTrajectory simulate_design_depleted(const CrystalDesign& design,
                                                      double signal_ratio,
                                                      const propagation::SimulationOptions& sim) {
  if (!(signal_ratio > 0.0) || !std::isfinite(signal_ratio))
    throw InputError("depleted simulation: signal/pump ratio must be positive");
  propagation::FieldState input{{signal_ratio, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
  return propagation::simulate_depleted(design.mismatch, design.kappa, input, sim);
}

SweepResult bandwidth_sweep(const CrystalDesign& design, const MaterialSetup& material,
                            const Range& wavelengths, const propagation::SimulationOptions& sim,
                            std::size_t workers) {
  require_valid_range(wavelengths, "bandwidth sweep");
  const auto lambdas = wavelengths.values();
  for (double l : {lambdas.front(), lambdas.back()})
    (void)materials::make_wave_triplet(l, material.pump_wavelength, material.dispersion);

  const auto etas = parallel_map(lambdas.size(), workers, [&](std::size_t i) {
    const auto waves =
        materials::make_wave_triplet(lambdas[i], material.pump_wavelength, material.dispersion);
    const double kappa =
        materials::coupling_coefficient(design.pump_amplitude, waves, design.nonlinear);
    const auto mismatch = mismatch_from_period(design.mismatch.z, design.period, waves);
    return propagation::simulate_undepleted(mismatch, kappa, sim).efficiency;
  });

  SweepResult r;
  r.parameter = "lambda1_um";
  r.unit = "um";
  for (std::size_t i = 0; i < lambdas.size(); ++i) r.samples.push_back({lambdas[i] * 1e6, etas[i]});
  summarize_peak(r);
  r.fwhm = fwhm(r.samples);
  if (r.fwhm) r.fwhm->width *= 1e3; // μm → nm
  return r;
}

SweepResult robustness_period_sweep(const CrystalDesign& design, const Range& relative_error,
                                    double threshold, const propagation::SimulationOptions& sim,
                                    std::size_t workers) {
  require_valid_range(relative_error, "period sweep");
  const auto errors = relative_error.values();
  for (double e : errors)
    if (!(e > -1.0)) throw InputError("period sweep: relative error must exceed -100%");

  const auto etas = parallel_map(errors.size(), workers, [&](std::size_t i) {
    std::vector<double> scaled(design.period);
    for (double& p : scaled) p *= 1.0 + errors[i];
    const auto mismatch = mismatch_from_period(design.mismatch.z, scaled, design.waves);
    return propagation::simulate_undepleted(mismatch, design.kappa, sim).efficiency;
  });

  SweepResult r;
  r.parameter = "dLambda_rel";
  r.unit = "1";
  for (std::size_t i = 0; i < errors.size(); ++i) r.samples.push_back({errors[i], etas[i]});
  summarize_peak(r);
  r.threshold = threshold;
  r.tolerance = tolerance_interval(r.samples, threshold);

  if (design.protocol == Protocol::QuasiAdiabatic) {
    const auto angles = trajectory::build_angles({design.kappa, design.length, design.nodes});
    const double mid_period = design.period[design.period.size() / 2];
    for (double e : errors) {
      const double eta = sensitivity::eta_from_period_error(e, mid_period);
      r.perturbative.push_back(
          sensitivity::perturbed_efficiency_estimate(angles, {eta, 0.0}).full);
    }
  }
  return r;
}

SweepResult robustness_pump_sweep(const CrystalDesign& design, const Range& relative_error,
                                  double threshold, const propagation::SimulationOptions& sim,
                                  std::size_t workers) {
  require_valid_range(relative_error, "pump sweep");
  const auto errors = relative_error.values();
  for (double e : errors)
    if (!(e >= -1.0)) throw InputError("pump sweep: relative intensity error must be >= -100%");

  const auto etas = parallel_map(errors.size(), workers, [&](std::size_t i) {
    const double kappa = design.kappa * std::sqrt(1.0 + errors[i]);
    return propagation::simulate_undepleted(design.mismatch, kappa, sim).efficiency;
  });

  SweepResult r;
  r.parameter = "dI_rel";
  r.unit = "1";
  for (std::size_t i = 0; i < errors.size(); ++i) r.samples.push_back({errors[i], etas[i]});
  summarize_peak(r);
  r.threshold = threshold;
  r.tolerance = tolerance_interval(r.samples, threshold);

  if (design.protocol == Protocol::QuasiAdiabatic) {
    const auto angles = trajectory::build_angles({design.kappa, design.length, design.nodes});
    for (double e : errors)
      r.perturbative.push_back(sensitivity::perturbed_efficiency_estimate(
                                   angles, {0.0, std::sqrt(1.0 + e) - 1.0})
                                   .full);
  }
  return r;
}

LengthSweep efficiency_vs_length(const CrystalDesign& reference, const MaterialSetup& material,
                                 std::span<const double> lengths,
                                 const propagation::SimulationOptions& sim, std::size_t workers) {
  if (lengths.empty()) throw InputError("length sweep: no lengths given");
  struct Pair {
    double qa;
    double lz;
  };
  const auto etas = parallel_map(lengths.size(), workers, [&](std::size_t i) {
    const auto qa = scaled_design(reference, lengths[i], material);
    const auto lz = lz_baseline(reference, lengths[i], material);
    return Pair{simulate_design(qa, sim).efficiency, simulate_design(lz, sim).efficiency};
  });

  LengthSweep out;
  out.quasi_adiabatic.parameter = out.linear_chirp.parameter = "L_mm";
  out.quasi_adiabatic.unit = out.linear_chirp.unit = "mm";
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    out.quasi_adiabatic.samples.push_back({lengths[i] * 1e3, etas[i].qa});
    out.linear_chirp.samples.push_back({lengths[i] * 1e3, etas[i].lz});
  }
  summarize_peak(out.quasi_adiabatic);
  summarize_peak(out.linear_chirp);
  return out;
}

SweepResult signal_intensity_sweep(const CrystalDesign& design, const Range& ratio,
                                   const propagation::SimulationOptions& sim,
                                   std::size_t workers) {
  require_valid_range(ratio, "signal sweep");
  const auto ratios = ratio.values();
  for (double r : ratios)
    if (!(r >= 0.0)) throw InputError("signal sweep: amplitude ratio must be >= 0");

  const auto etas = parallel_map(ratios.size(), workers, [&](std::size_t i) {
    if (ratios[i] == 0.0) return simulate_design(design, sim).efficiency;
    return simulate_design_depleted(design, ratios[i], sim).efficiency;
  });

  SweepResult r;
  r.parameter = "signal_pump_ratio";
  r.unit = "1";
  for (std::size_t i = 0; i < ratios.size(); ++i) r.samples.push_back({ratios[i], etas[i]});
  summarize_peak(r);
  return r;
}

} // namespace qasfg::experiments
