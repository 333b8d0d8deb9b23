#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qasfg::trajectory {

// Constant coupling κ over a crystal of length L, sampled on N uniform nodes.
struct TrajectorySpec {
  double kappa = 0.0;  // rad/m
  double length = 0.0; // m
  std::size_t nodes = 4001;

  // Throws InputError unless κ, L > 0, κL > π and N is odd and >= 1001.
  void validate() const;
  double step() const { return length / static_cast<double>(nodes - 1); }
};

// Closed-form values of the trajectory at one position. Endpoint 0/0 forms
// are replaced by their analytic limits.
struct AngleSample {
  double theta;       // rad
  double theta_dot;   // rad/m
  double theta_ddot;  // rad/m²
  double beta;        // rad
  double beta_dot;    // rad/m
  double cos_beta;
  double phase_rate;  // dα₊/dz, rad/m
  double delta_k;     // rad/m
};

AngleSample sample_angles(const TrajectorySpec& spec, double z);

// Sampled profiles. Filled progressively: theta_profile sets z/θ/θ̇/θ̈,
// beta_profile adds β and β̇, lr_phase adds α₊ and m = 2α₊ − β.
struct AngleProfiles {
  TrajectorySpec spec;
  std::vector<double> z;
  std::vector<double> theta;
  std::vector<double> theta_dot;
  std::vector<double> theta_ddot;
  std::vector<double> beta;
  std::vector<double> beta_dot;
  std::vector<double> alpha;
  std::vector<double> m;
};

struct MismatchProfile {
  std::vector<double> z;       // uniform grid, m
  std::vector<double> delta_k; // rad/m
  std::vector<double> phase;   // φ(z) = ∫₀ᶻ Δk, rad

  double length() const { return z.empty() ? 0.0 : z.back(); }
  double step() const { return z.size() < 2 ? 0.0 : z[1] - z[0]; }
  double max_abs_delta_k() const;
};

// Quintic interpolation θ(z) = κz − (κL − π) s³ (10 − 15 s + 6 s²), s = z/L.
AngleProfiles theta_profile(const TrajectorySpec& spec);

// β = arcsin(−θ̇/κ) on the cos β >= 0 branch. Throws NumericError if
// |θ̇| > κ anywhere.
AngleProfiles beta_profile(AngleProfiles angles);

// α₊(z) = ½ ∫ (β̇ + θ̇ cot β / sin θ) by cumulative Simpson, and m = 2α₊ − β.
AngleProfiles lr_phase(AngleProfiles angles);

// theta_profile → beta_profile → lr_phase.
AngleProfiles build_angles(const TrajectorySpec& spec);

// Δk = θ̈/(κ cos β) − κ cot θ cos β, with φ accumulated by quadrature.
MismatchProfile delta_k_profile(const AngleProfiles& angles);

// Closed-form Δk(0); Δk(L) is its negative.
double delta_k_start(const TrajectorySpec& spec);

struct BoundaryCondition {
  std::string name;
  double value;
  double expected;
  bool passed;
};

struct BoundaryReport {
  std::vector<BoundaryCondition> conditions;
  bool near_degenerate = false; // κL within 1e-3·π of π
  bool passed() const;
};

BoundaryReport boundary_check(const AngleProfiles& angles, const MismatchProfile& mismatch);

} // namespace qasfg::trajectory
