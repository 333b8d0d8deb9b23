#pragma once

#include <cstddef>

#include "qasfg/experiments.hpp"

namespace qasfg::probe {

// Largest | |A1|² + |A3|² − 1 | over every RK4 step.
double max_flux_drift(const experiments::CrystalDesign& design, std::size_t steps = 20000);

// log2(e(N)/e(2N)) of the final amplitude error on the phase-matched case.
double rk4_order(double kappa_length, std::size_t steps);

// Grid-built φ versus the literal Δk·z phase for a constant mismatch.
double frame_difference(double delta_k, double kappa, double length);

struct IdentityResiduals {
  double theta_dot; // max |θ̇ + κ sin β| / κ
  double beta_dot;  // max |β̇_fd + κ cot θ cos β + Δk| / max|Δk|, interior nodes
};
IdentityResiduals identity_residuals(const trajectory::TrajectorySpec& spec);

struct MismatchEnds {
  double antisymmetry;  // max |Δk(z) + Δk(L − z)| / max|Δk|
  double start_limit;   // |limit − direct(1e-6 L)| / |limit|
  double end_limit;
  double midpoint;      // |Δk(L/2)| / max|Δk|
};
MismatchEnds mismatch_ends(const trajectory::TrajectorySpec& spec);

// max/min − 1 of κ*·L over the given lengths.
double kappa_length_spread(sensitivity::Target target, const double* lengths_m, std::size_t count);

struct DeficitRatio {
  double delta_k; // simulated / predicted deficit
  double kappa;
};
// Error amplitudes chosen so the quadratic prediction is `deficit`.
DeficitRatio perturbation_agreement(double kappa, double length, double deficit);

// Two fresh design+sweep runs (1 and 3 workers) render identical bytes.
bool bit_identical_rerun();

} // namespace qasfg::probe
