#include "qasfg/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qasfg/error.hpp"
#include "qasfg/materials.hpp"
#include "qasfg/quadrature.hpp"

namespace qasfg::trajectory {

using materials::kPi;

void TrajectorySpec::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw InputError("coupling coefficient must be positive and finite");
  if (!(length > 0.0) || !std::isfinite(length))
    throw InputError("crystal length must be positive and finite");
  if (!(kappa * length > kPi)) {
    std::ostringstream msg;
    msg << "no real trajectory: requires kappa*L > pi (got kappa*L = " << kappa * length << ")";
    throw InputError(msg.str());
  }
  if (nodes < 1001 || nodes % 2 == 0)
    throw InputError("grid size must be odd and >= 1001");
}

double MismatchProfile::max_abs_delta_k() const {
  double m = 0.0;
  for (double v : delta_k) m = std::max(m, std::abs(v));
  return m;
}

double delta_k_start(const TrajectorySpec& spec) {
  const double excess = spec.kappa * spec.length - kPi;
  return -2.0 * std::sqrt(60.0 * excess / (spec.kappa * std::pow(spec.length, 3)));
}

AngleSample sample_angles(const TrajectorySpec& spec, double z) {
  const double k = spec.kappa;
  const double L = spec.length;
  const double a = k * L - kPi;
  const double s = z / L;
  const double t = 1.0 - s;

  AngleSample out{};
  if (s <= 0.0) out.theta = 0.0;
  else if (s >= 1.0) out.theta = kPi;
  else out.theta = k * z - a * s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
  out.theta_dot = k - 30.0 * a * s * s * t * t / L;
  out.theta_ddot = -60.0 * a * s * t * (1.0 - 2.0 * s) / (L * L);

  // 1 − θ̇/κ computed directly so cos β keeps full precision near the ends.
  const double d = 30.0 * a * s * s * t * t / (k * L);
  const double sin_beta = d - 1.0;
  out.cos_beta = std::sqrt(std::max(0.0, d * (2.0 - d)));
  out.beta = std::atan2(sin_beta, out.cos_beta);

  // Endpoint rate √(2c) with c = 30(κL − π)/(κL³).
  const double edge_rate = std::sqrt(60.0 * a / (k * L * L * L));
  const double sin_theta = std::sin(out.theta);
  if (s <= 0.0) {
    out.beta_dot = edge_rate;
    out.phase_rate = 0.0;
    out.delta_k = -2.0 * edge_rate;
  } else if (s >= 1.0) {
    out.beta_dot = -edge_rate;
    out.phase_rate = -edge_rate;
    out.delta_k = 2.0 * edge_rate;
  } else {
    out.beta_dot = -out.theta_ddot / (k * out.cos_beta);
    // θ̇ cot β = −κ cos β because sin β = −θ̇/κ; this form has no pole where θ̇ = 0.
    const double ratio = out.cos_beta / sin_theta;
    out.phase_rate = 0.5 * (out.beta_dot - k * ratio);
    out.delta_k = -out.beta_dot - k * std::cos(out.theta) * ratio;
  }
  return out;
}

AngleProfiles theta_profile(const TrajectorySpec& spec) {
  spec.validate();
  AngleProfiles p;
  p.spec = spec;
  const std::size_t n = spec.nodes;
  const double h = spec.step();
  p.z.resize(n);
  p.theta.resize(n);
  p.theta_dot.resize(n);
  p.theta_ddot.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (i + 1 == n) ? spec.length : static_cast<double>(i) * h;
    const AngleSample s = sample_angles(spec, z);
    p.z[i] = z;
    p.theta[i] = s.theta;
    p.theta_dot[i] = s.theta_dot;
    p.theta_ddot[i] = s.theta_ddot;
  }
  return p;
}

AngleProfiles beta_profile(AngleProfiles p) {
  const double k = p.spec.kappa;
  const std::size_t n = p.z.size();
  p.beta.resize(n);
  p.beta_dot.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(p.theta_dot[i]) > k * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "|theta_dot| exceeds kappa at z = " << p.z[i] << " m (kappa*L <= pi?)";
      throw InputError(msg.str());
    }
    const AngleSample s = sample_angles(p.spec, p.z[i]);
    p.beta[i] = s.beta;
    p.beta_dot[i] = s.beta_dot;
  }
  return p;
}

AngleProfiles lr_phase(AngleProfiles p) {
  const std::size_t n = p.z.size();
  std::vector<double> rate(n);
  for (std::size_t i = 0; i < n; ++i) {
    rate[i] = sample_angles(p.spec, p.z[i]).phase_rate;
    if (!std::isfinite(rate[i])) {
      std::ostringstream msg;
      msg << "non-finite invariant phase integrand at z = " << p.z[i] << " m";
      throw NumericError(msg.str());
    }
  }
  p.alpha = quadrature::cumulative_simpson<double>(rate, p.spec.step());
  p.m.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.m[i] = 2.0 * p.alpha[i] - p.beta[i];
  return p;
}

AngleProfiles build_angles(const TrajectorySpec& spec) {
  return lr_phase(beta_profile(theta_profile(spec)));
}

MismatchProfile delta_k_profile(const AngleProfiles& angles) {
  angles.spec.validate();
  MismatchProfile out;
  out.z = angles.z;
  out.delta_k.resize(angles.z.size());
  for (std::size_t i = 0; i < angles.z.size(); ++i)
    out.delta_k[i] = sample_angles(angles.spec, angles.z[i]).delta_k;
  out.phase = quadrature::cumulative_simpson<double>(out.delta_k, angles.spec.step());
  return out;
}

bool BoundaryReport::passed() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const BoundaryCondition& c) { return c.passed; });
}

BoundaryReport boundary_check(const AngleProfiles& angles, const MismatchProfile& mismatch) {
  BoundaryReport report;
  const double k = angles.spec.kappa;
  const double L = angles.spec.length;
  auto check = [&](std::string name, double value, double expected, double tol) {
    report.conditions.push_back(
        {std::move(name), value, expected, std::abs(value - expected) <= tol});
  };
  if (angles.theta.empty() || mismatch.delta_k.empty())
    throw InputError("boundary_check: profiles are empty");

  check("theta(0) = 0", angles.theta.front(), 0.0, 1e-12);
  check("theta(L) = pi", angles.theta.back(), kPi, 1e-12);
  check("theta_dot(0) = kappa", angles.theta_dot.front(), k, 1e-12 * k);
  check("theta_dot(L) = kappa", angles.theta_dot.back(), k, 1e-12 * k);
  check("theta_ddot(0) = 0", angles.theta_ddot.front(), 0.0, 1e-12 * k / L);
  check("theta_ddot(L) = 0", angles.theta_ddot.back(), 0.0, 1e-12 * k / L);
  const double d0 = mismatch.delta_k.front();
  const double d1 = mismatch.delta_k.back();
  report.conditions.push_back({"delta_k(0) finite", d0, d0, std::isfinite(d0)});
  report.conditions.push_back({"delta_k(L) finite", d1, d1, std::isfinite(d1)});
  report.near_degenerate = (k * L - kPi) < 1e-3 * kPi;
  return report;
}

} // namespace qasfg::trajectory
