#include "qasfg/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "qasfg/error.hpp"
#include "qasfg/parallel.hpp"
#include "qasfg/quadrature.hpp"

namespace qasfg::sensitivity {

using materials::kPi;
using cd = std::complex<double>;

std::string_view to_string(Target target) {
  return target == Target::DeltaK ? "deltak" : "kappa";
}

Target parse_target(std::string_view name) {
  if (name == "deltak") return Target::DeltaK;
  if (name == "kappa") return Target::Kappa;
  throw InputError("unknown optimization target '" + std::string(name) +
                   "'; valid: deltak, kappa");
}

namespace {

void require_phase(const trajectory::AngleProfiles& a) {
  if (a.m.size() != a.z.size() || a.z.size() < 3)
    throw InputError("sensitivity: angle profiles lack the invariant phase m(z)");
}

// The two complex overlap integrals ∫ e^{im} sin θ and ∫ e^{im} 2θ̇ sin²θ.
struct Overlaps {
  cd detuning;
  cd coupling;
};

Overlaps overlaps(const trajectory::AngleProfiles& a) {
  require_phase(a);
  const std::size_t n = a.z.size();
  std::vector<cd> fd(n), fk(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cd phase = std::polar(1.0, a.m[i]);
    const double st = std::sin(a.theta[i]);
    fd[i] = phase * st;
    fk[i] = phase * (2.0 * a.theta_dot[i] * st * st);
  }
  const double h = a.spec.step();
  return {quadrature::simpson<cd>(fd, h), quadrature::simpson<cd>(fk, h)};
}

} // namespace

double q_deltak(const trajectory::AngleProfiles& angles) {
  return 0.25 * std::norm(overlaps(angles).detuning);
}

double q_kappa(const trajectory::AngleProfiles& angles) {
  return 0.25 * std::norm(overlaps(angles).coupling);
}

SensitivityResult sensitivities(const trajectory::AngleProfiles& angles) {
  const Overlaps o = overlaps(angles);
  return {0.25 * std::norm(o.detuning), 0.25 * std::norm(o.coupling), angles.spec.kappa,
          angles.spec.length};
}

double sensitivity_at(double kappa, double length, Target target, std::size_t nodes) {
  const auto angles = trajectory::build_angles({kappa, length, nodes});
  return target == Target::DeltaK ? q_deltak(angles) : q_kappa(angles);
}

PerturbedEfficiency perturbed_efficiency_estimate(const trajectory::AngleProfiles& angles,
                                                  const ErrorAmplitudes& eta) {
  const Overlaps o = overlaps(angles);
  const cd total = cd(0.0, eta.delta_k) * o.detuning + eta.kappa * o.coupling;
  const double full = 1.0 - 0.25 * std::norm(total);
  const double quadratic = 1.0 - eta.kappa * eta.kappa * 0.25 * std::norm(o.coupling) -
                           eta.delta_k * eta.delta_k * 0.25 * std::norm(o.detuning);
  return {std::clamp(full, 0.0, 1.0), std::clamp(quadratic, 0.0, 1.0)};
}

double eta_from_period_error(double relative_error, double period_m) {
  if (!(std::abs(relative_error) < 1.0))
    throw InputError("relative period error must satisfy |dLambda/Lambda| < 1");
  if (period_m == 0.0 || !std::isfinite(period_m))
    throw InputError("poling period must be finite and nonzero");
  const double delta = relative_error * period_m;
  return -2.0 * kPi * delta / (period_m * period_m);
}

double kappa_error_from_pump_error(double pump_amplitude_error,
                                   const materials::WaveTriplet& waves,
                                   const materials::NonlinearConstants& nl) {
  const double sign = pump_amplitude_error < 0.0 ? -1.0 : 1.0;
  return sign * materials::coupling_coefficient(std::abs(pump_amplitude_error), waves, nl);
}

double eta_from_pump_error(double pump_amplitude_error, double kappa,
                           const materials::WaveTriplet& waves,
                           const materials::NonlinearConstants& nl) {
  if (!(kappa > 0.0)) throw InputError("eta_from_pump_error: kappa must be positive");
  return kappa_error_from_pump_error(pump_amplitude_error, waves, nl) / kappa;
}

namespace {

struct Minimum {
  double kappa;
  double q;
};

Minimum golden_section(double lo, double hi, double tol, const auto& f) {
  constexpr double inv_phi = 0.61803398874989484820;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? Minimum{x1, f1} : Minimum{x2, f2};
}

} // namespace

KappaOptimum optimize_kappa(const KappaSearch& search) {
  if (!(search.length > 0.0)) throw InputError("optimize_kappa: length must be positive");
  const double floor = kPi / search.length;
  const double lo = search.kappa_min > 0.0 ? search.kappa_min : 1.05 * floor;
  const double hi = search.kappa_max;
  if (!(lo > floor)) {
    std::ostringstream msg;
    msg << "kappa search range must lie above pi/L = " << floor
        << " rad/m (kappa*L > pi required)";
    throw InputError(msg.str());
  }
  if (!(hi > lo)) throw InputError("kappa search range is empty");
  if (search.scan_points < 400) throw InputError("kappa scan needs at least 400 points");
  if (!(search.tolerance > 0.0)) throw InputError("kappa tolerance must be positive");

  auto q = [&](double kappa) {
    return sensitivity_at(kappa, search.length, search.target, search.nodes);
  };

  const std::size_t n = search.scan_points;
  const double dk = (hi - lo) / static_cast<double>(n - 1);
  auto kappa_at = [&](std::size_t i) { return i + 1 == n ? hi : lo + dk * static_cast<double>(i); };
  const std::vector<double> values =
      parallel_map(n, search.workers, [&](std::size_t i) { return q(kappa_at(i)); });

  KappaOptimum out{};
  out.trace.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.trace.push_back({kappa_at(i), values[i]});
  const double q_max = *std::max_element(values.begin(), values.end());

  std::vector<Minimum> refined;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (values[i] <= values[i - 1] && values[i] <= values[i + 1])
      refined.push_back(golden_section(kappa_at(i - 1), kappa_at(i + 1), search.tolerance, q));
  }
  if (refined.empty())
    throw NumericError("sensitivity minimum lies on the search-range boundary "
                       "(no interior local minimum)");

  double q_best = refined.front().q;
  for (const auto& m : refined) q_best = std::min(q_best, m.q);
  const double tie = q_best + 1e-9 * q_max;

  const double edge = std::min(values.front(), values.back());
  if (edge < q_best && edge > tie) {
    std::ostringstream msg;
    msg << "sensitivity minimum lies on the search-range boundary (q = " << edge
        << " at the edge vs " << q_best << " inside)";
    throw NumericError(msg.str());
  }

  for (const auto& m : refined) {
    if (m.q <= tie) {
      if (m.kappa - lo < search.tolerance || hi - m.kappa < search.tolerance)
        throw NumericError("sensitivity minimum lies on the search-range boundary");
      out.kappa = m.kappa;
      out.q = m.q;
      return out;
    }
  }
  throw NumericError("optimize_kappa: no minimum selected"); // unreachable
}

} // namespace qasfg::sensitivity
