#include "qasfg/propagation.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "qasfg/error.hpp"
#include "qasfg/materials.hpp"

namespace qasfg::propagation {

using materials::kPi;

PhaseInterpolant::PhaseInterpolant(const trajectory::MismatchProfile& profile)
    : profile_(&profile), step_(profile.step()), length_(profile.length()) {
  const std::size_t n = profile.z.size();
  if (n < 2 || profile.delta_k.size() != n || profile.phase.size() != n)
    throw InputError("mismatch profile needs matching z, delta_k and phase samples");
  if (!(step_ > 0.0)) throw InputError("mismatch profile grid must be increasing");
}

double PhaseInterpolant::operator()(double z) const {
  const auto& p = *profile_;
  const std::size_t last = p.z.size() - 1;
  double x = z / step_;
  if (x <= 0.0) return p.phase.front();
  std::size_t i = static_cast<std::size_t>(x);
  if (i >= last) {
    if (z >= length_) return p.phase.back();
    i = last - 1;
  }
  const double t = x - static_cast<double>(i);
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * p.phase[i] + h10 * step_ * p.delta_k[i] + h01 * p.phase[i + 1] +
         h11 * step_ * p.delta_k[i + 1];
}

void validate_steps(std::size_t steps, double max_rate, double length) {
  if (steps == 0) throw InputError("integration step count must be positive");
  const double rotations = max_rate * length / (2.0 * kPi);
  const double required = 10.0 * rotations;
  if (static_cast<double>(steps) < required) {
    std::ostringstream msg;
    msg << "integration step count " << steps << " too small: need at least "
        << static_cast<std::size_t>(std::ceil(required))
        << " (10 steps per 2*pi of phase rotation)";
    throw InputError(msg.str());
  }
}

namespace {

template <std::size_t N, typename Rhs>
FieldTrajectory integrate(const std::function<double(double)>& phase, double length,
                          std::array<Complex, N> y, const SimulationOptions& options,
                          Rhs&& rhs, auto&& to_state) {
  const std::size_t steps = options.steps;
  const double h = length / static_cast<double>(steps);
  FieldTrajectory traj;
  auto record = [&](double z) {
    traj.z.push_back(z);
    traj.states.push_back(to_state(y));
  };
  record(0.0);

  auto axpy = [](const std::array<Complex, N>& a, double s, const std::array<Complex, N>& b) {
    std::array<Complex, N> r;
    for (std::size_t j = 0; j < N; ++j) r[j] = a[j] + s * b[j];
    return r;
  };

  Complex e0 = std::polar(1.0, phase(0.0));
  for (std::size_t n = 0; n < steps; ++n) {
    const double z = static_cast<double>(n) * h;
    const double z1 = (n + 1 == steps) ? length : z + h;
    const Complex em = std::polar(1.0, phase(z + 0.5 * h));
    const Complex e1 = std::polar(1.0, phase(z1));
    const auto k1 = rhs(y, e0);
    const auto k2 = rhs(axpy(y, 0.5 * h, k1), em);
    const auto k3 = rhs(axpy(y, 0.5 * h, k2), em);
    const auto k4 = rhs(axpy(y, h, k3), e1);
    for (std::size_t j = 0; j < N; ++j)
      y[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    e0 = e1;
    const bool last = n + 1 == steps;
    if (last || (options.record_stride != 0 && (n + 1) % options.record_stride == 0))
      record(z1);
  }
  return traj;
}

constexpr Complex kMinusI{0.0, -1.0};

FieldTrajectory run_undepleted(const std::function<double(double)>& phase, double length,
                               double kappa, const SimulationOptions& options,
                               const FieldState& initial) {
  const double g = 0.5 * kappa;
  auto rhs = [g](const std::array<Complex, 2>& a, Complex e) {
    return std::array<Complex, 2>{kMinusI * g * a[1] * std::conj(e), kMinusI * g * a[0] * e};
  };
  auto to_state = [](const std::array<Complex, 2>& a) {
    return FieldState{a[0], a[1], Complex{}};
  };
  FieldTrajectory traj = integrate<2>(phase, length, {initial.signal, initial.upconverted},
                                      options, rhs, to_state);
  if (std::abs(initial.signal) > 0.0) traj.efficiency = conversion_efficiency(traj);
  return traj;
}

} // namespace

FieldTrajectory simulate_undepleted(const std::function<double(double)>& phase, double length,
                                    double max_rate, double kappa,
                                    const SimulationOptions& options, const FieldState& initial) {
  if (!(length > 0.0)) throw InputError("simulation length must be positive");
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw InputError("coupling coefficient must be finite and >= 0");
  validate_steps(options.steps, std::abs(max_rate) + kappa, length);
  return run_undepleted(phase, length, kappa, options, initial);
}

FieldTrajectory simulate_undepleted(const trajectory::MismatchProfile& mismatch, double kappa,
                                    const SimulationOptions& options, const FieldState& initial) {
  const PhaseInterpolant phase(mismatch);
  return simulate_undepleted(std::cref(phase), mismatch.length(), mismatch.max_abs_delta_k(),
                             kappa, options, initial);
}

FieldTrajectory simulate_depleted(const trajectory::MismatchProfile& mismatch, double kappa,
                                  const FieldState& initial, const SimulationOptions& options) {
  const PhaseInterpolant phase(mismatch);
  const double length = mismatch.length();
  for (Complex c : {initial.signal, initial.upconverted, initial.pump})
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw InputError("depleted simulation: initial amplitudes must be finite");
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw InputError("coupling coefficient must be finite and >= 0");
  const double scale = std::abs(initial.signal) + std::abs(initial.pump) +
                       std::abs(initial.upconverted);
  validate_steps(options.steps, mismatch.max_abs_delta_k() + kappa * scale, length);

  const double g = 0.5 * kappa;
  auto rhs = [g](const std::array<Complex, 3>& a, Complex e) {
    const Complex ec = std::conj(e);
    return std::array<Complex, 3>{kMinusI * g * std::conj(a[1]) * a[2] * ec,
                                  kMinusI * g * std::conj(a[0]) * a[2] * ec,
                                  kMinusI * g * a[0] * a[1] * e};
  };
  auto to_state = [](const std::array<Complex, 3>& a) { return FieldState{a[0], a[2], a[1]}; };
  FieldTrajectory traj =
      integrate<3>(std::cref(phase), length, {initial.signal, initial.pump, initial.upconverted},
                   options, rhs, to_state);
  traj.depleted = true;
  if (std::abs(initial.signal) > 0.0) traj.efficiency = conversion_efficiency(traj);
  return traj;
}

double conversion_efficiency(const FieldTrajectory& trajectory) {
  if (trajectory.states.empty()) throw InputError("conversion_efficiency: empty trajectory");
  const double input = std::norm(trajectory.states.front().signal);
  if (!(input > 0.0)) throw InputError("conversion_efficiency: zero input signal");
  return std::norm(trajectory.states.back().upconverted) / input;
}

trajectory::MismatchProfile lz_linear_chirp(double delta_k_start, double delta_k_end,
                                            double length, std::size_t nodes) {
  if (!(length > 0.0)) throw InputError("chirp length must be positive");
  if (nodes < 2) throw InputError("chirp grid needs at least 2 nodes");
  trajectory::MismatchProfile p;
  p.z.resize(nodes);
  p.delta_k.resize(nodes);
  p.phase.resize(nodes);
  const double rate = (delta_k_end - delta_k_start) / length;
  const double h = length / static_cast<double>(nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double z = (i + 1 == nodes) ? length : static_cast<double>(i) * h;
    p.z[i] = z;
    p.delta_k[i] = delta_k_start + rate * z;
    p.phase[i] = delta_k_start * z + 0.5 * rate * z * z;
  }
  return p;
}

} // namespace qasfg::propagation
