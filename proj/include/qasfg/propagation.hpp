#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "qasfg/trajectory.hpp"

namespace qasfg::propagation {

using Complex = std::complex<double>;

// Normalized amplitudes. The pump is only evolved in depleted mode; in
// undepleted mode it is ignored.
struct FieldState {
  Complex signal{1.0, 0.0};
  Complex upconverted{0.0, 0.0};
  Complex pump{0.0, 0.0};
};

struct FieldTrajectory {
  std::vector<double> z;
  std::vector<FieldState> states;
  double efficiency = 0.0;
  bool depleted = false;
};

struct SimulationOptions {
  std::size_t steps = 20000;
  // Store every k-th step; 0 keeps only the input and output states.
  std::size_t record_stride = 0;
};

// φ(z) between grid nodes by cubic Hermite interpolation on (φ, Δk).
class PhaseInterpolant {
public:
  explicit PhaseInterpolant(const trajectory::MismatchProfile& profile);
  double operator()(double z) const;
  double length() const { return length_; }

private:
  const trajectory::MismatchProfile* profile_;
  double step_;
  double length_;
};

// Rejects step counts below 10 per 2π of the fastest phase rotation.
void validate_steps(std::size_t steps, double max_rate, double length);

// Two-wave system with a constant pump, in the form dA/dz = −i H0 A with
// H0 = ½[[−Δk, κ], [κ, Δk]] written in the lab frame:
//   dÃ1/dz = −i (κ/2) Ã3 e^{−iφ(z)},  dÃ3/dz = −i (κ/2) Ã1 e^{+iφ(z)}.
// Classical fixed-step RK4.
FieldTrajectory simulate_undepleted(const trajectory::MismatchProfile& mismatch, double kappa,
                                    const SimulationOptions& options = {},
                                    const FieldState& initial = {});

// Same integrator driven by an arbitrary phase function over [0, length];
// max_rate bounds |dφ/dz| for the step check.
FieldTrajectory simulate_undepleted(const std::function<double(double)>& phase, double length,
                                    double max_rate, double kappa,
                                    const SimulationOptions& options = {},
                                    const FieldState& initial = {});

// Three-wave SFG with pump depletion in photon-flux amplitudes:
//   da1/dz = −i g a2* a3 e^{−iφ},  da2/dz = −i g a1* a3 e^{−iφ},
//   da3/dz = −i g a1 a2 e^{+iφ},   g = κ/2,
// where κ is the coupling at unit pump amplitude. Conserves |a1|² + |a3|²
// and |a2|² + |a3|².
FieldTrajectory simulate_depleted(const trajectory::MismatchProfile& mismatch, double kappa,
                                  const FieldState& initial,
                                  const SimulationOptions& options = {});

// η = |A3(L)|² / |A1(0)|². Throws InputError for an empty trajectory or zero
// input signal.
double conversion_efficiency(const FieldTrajectory& trajectory);

// Linear chirp Δk(z) from start to end over [0, L] with closed-form φ.
trajectory::MismatchProfile lz_linear_chirp(double delta_k_start, double delta_k_end,
                                            double length, std::size_t nodes = 4001);

} // namespace qasfg::propagation
