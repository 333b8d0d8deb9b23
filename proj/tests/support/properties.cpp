#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "qasfg/export.hpp"
#include "qasfg/quadrature.hpp"

namespace qasfg::probe {

using materials::kPi;

double max_flux_drift(const experiments::CrystalDesign& design, std::size_t steps) {
  const auto tr = propagation::simulate_undepleted(design.mismatch, design.kappa, {steps, 1});
  double worst = 0.0;
  for (const auto& s : tr.states)
    worst = std::max(worst, std::abs(std::norm(s.signal) + std::norm(s.upconverted) - 1.0));
  return worst;
}

namespace {

double phase_matched_error(double kappa_length, std::size_t steps) {
  const double length = 1e-3;
  const double kappa = kappa_length / length;
  const auto tr = propagation::simulate_undepleted([](double) { return 0.0; }, length, 0.0, kappa,
                                                   {steps, 0});
  const auto& end = tr.states.back();
  const double half = 0.5 * kappa_length;
  const std::complex<double> a1{std::cos(half), 0.0};
  const std::complex<double> a3{0.0, -std::sin(half)};
  return std::abs(end.signal - a1) + std::abs(end.upconverted - a3);
}

} // namespace

double rk4_order(double kappa_length, std::size_t steps) {
  return std::log2(phase_matched_error(kappa_length, steps) /
                   phase_matched_error(kappa_length, 2 * steps));
}

double frame_difference(double delta_k, double kappa, double length) {
  const std::size_t nodes = 4001;
  trajectory::MismatchProfile grid;
  grid.z.resize(nodes);
  grid.delta_k.assign(nodes, delta_k);
  grid.phase.resize(nodes);
  const double h = length / static_cast<double>(nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) grid.z[i] = h * static_cast<double>(i);
  // Accumulate through the same quadrature the designs use.
  grid.phase = quadrature::cumulative_simpson<double>(grid.delta_k, h);

  const propagation::SimulationOptions sim{20000, 0};
  const auto a = propagation::simulate_undepleted(grid, kappa, sim);
  const auto b = propagation::simulate_undepleted([delta_k](double z) { return delta_k * z; },
                                                  length, std::abs(delta_k), kappa, sim);
  return std::abs(a.states.back().signal - b.states.back().signal) +
         std::abs(a.states.back().upconverted - b.states.back().upconverted);
}

IdentityResiduals identity_residuals(const trajectory::TrajectorySpec& spec) {
  const auto angles = trajectory::build_angles(spec);
  const auto mismatch = trajectory::delta_k_profile(angles);
  const double kappa = spec.kappa;
  const double h = spec.step();
  const std::size_t n = angles.z.size();

  IdentityResiduals r{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i)
    r.theta_dot = std::max(r.theta_dot,
                           std::abs(angles.theta_dot[i] + kappa * std::sin(angles.beta[i])) / kappa);

  const double scale = mismatch.max_abs_delta_k();
  const auto& b = angles.beta;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double beta_dot = (b[i - 2] - 8.0 * b[i - 1] + 8.0 * b[i + 1] - b[i + 2]) / (12.0 * h);
    const double th = angles.theta[i];
    const double residual =
        beta_dot + kappa * std::cos(th) / std::sin(th) * std::cos(b[i]) + mismatch.delta_k[i];
    r.beta_dot = std::max(r.beta_dot, std::abs(residual) / scale);
  }
  return r;
}

namespace {

// Δk = θ̈/(κ cos β) − κ cot θ cos β from the closed-form polynomial.
double direct_delta_k(const trajectory::TrajectorySpec& spec, double z) {
  const double kappa = spec.kappa, length = spec.length;
  const double a = kappa * length - kPi;
  const double s = z / length;
  const double theta = kappa * z - a * s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
  const double theta_dot = kappa - 30.0 * a * s * s * (1.0 - s) * (1.0 - s) / length;
  const double theta_ddot = -60.0 * a * s * (1.0 - s) * (1.0 - 2.0 * s) / (length * length);
  const double r = theta_dot / kappa;
  const double cos_beta = std::sqrt(std::max(0.0, 1.0 - r * r));
  return theta_ddot / (kappa * cos_beta) - kappa * std::cos(theta) / std::sin(theta) * cos_beta;
}

} // namespace

MismatchEnds mismatch_ends(const trajectory::TrajectorySpec& spec) {
  const auto mismatch = trajectory::delta_k_profile(trajectory::build_angles(spec));
  const auto& dk = mismatch.delta_k;
  const std::size_t n = dk.size();
  const double scale = mismatch.max_abs_delta_k();
  MismatchEnds e{};
  for (std::size_t i = 0; i < n; ++i)
    e.antisymmetry = std::max(e.antisymmetry, std::abs(dk[i] + dk[n - 1 - i]) / scale);
  const double eps = 1e-6 * spec.length;
  e.start_limit = std::abs(dk.front() - direct_delta_k(spec, eps)) / std::abs(dk.front());
  e.end_limit = std::abs(dk.back() - direct_delta_k(spec, spec.length - eps)) / std::abs(dk.back());
  e.midpoint = std::abs(dk[n / 2]) / scale;
  return e;
}

double kappa_length_spread(sensitivity::Target target, const double* lengths_m, std::size_t count) {
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sensitivity::KappaSearch s;
    s.length = lengths_m[i];
    s.target = target;
    const double kl = sensitivity::optimize_kappa(s).kappa * lengths_m[i];
    lo = i == 0 ? kl : std::min(lo, kl);
    hi = i == 0 ? kl : std::max(hi, kl);
  }
  return hi / lo - 1.0;
}

DeficitRatio perturbation_agreement(double kappa, double length, double deficit) {
  const auto angles = trajectory::build_angles({kappa, length, 4001});
  const auto q = sensitivity::sensitivities(angles);
  const auto mismatch = trajectory::delta_k_profile(angles);
  const propagation::SimulationOptions sim{20000, 0};

  const double eta_dk = std::sqrt(deficit / q.q_delta_k);
  auto shifted = mismatch;
  for (std::size_t i = 0; i < shifted.z.size(); ++i) {
    shifted.delta_k[i] += eta_dk;
    shifted.phase[i] += eta_dk * shifted.z[i];
  }
  const double sim_dk = 1.0 - propagation::simulate_undepleted(shifted, kappa, sim).efficiency;

  const double eta_k = std::sqrt(deficit / q.q_kappa);
  const double sim_k =
      1.0 - propagation::simulate_undepleted(mismatch, kappa * (1.0 + eta_k), sim).efficiency;
  return {sim_dk / deficit, sim_k / deficit};
}

bool bit_identical_rerun() {
  auto render = [](std::size_t workers) {
    experiments::MaterialSetup material;
    experiments::DesignOptions options;
    options.workers = workers;
    const auto design = experiments::build_design(options, material);
    const auto sweep = experiments::bandwidth_sweep(design, material, {2.6e-6, 3.6e-6, 21},
                                                    {20000, 0}, workers);
    const io::Provenance p{"0"};
    return io::design_table(design).render(p) + io::sweep_table(sweep).render(p);
  };
  return render(1) == render(3);
}

} // namespace qasfg::probe
