#include <doctest.h>

#include <cmath>

#include "../support/properties.hpp"
#include "qasfg/error.hpp"
#include "qasfg/experiments.hpp"

using namespace qasfg;
using namespace qasfg::propagation;
using materials::kPi;

namespace {

const experiments::CrystalDesign& deltak_design() {
  static const auto d = experiments::design_for_kappa(7615.756571346405, 1e-3,
                                                      sensitivity::Target::DeltaK, {});
  return d;
}

FieldTrajectory matched(double kappa_length, std::size_t steps = 2000) {
  return simulate_undepleted([](double) { return 0.0; }, 1e-3, 0.0, kappa_length / 1e-3,
                             {steps, 0});
}

} // namespace

TEST_SUITE("propagation") {

TEST_CASE("decoupled fields do not convert") {
  const auto tr = matched(0.0);
  CHECK(tr.efficiency == 0.0);
  CHECK(tr.states.back().signal == Complex(1.0, 0.0));
}

TEST_CASE("phase-matched closed form") {
  CHECK(matched(kPi).efficiency == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(matched(kPi / 2).efficiency == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(matched(1.3).efficiency == doctest::Approx(std::pow(std::sin(0.65), 2)).epsilon(1e-12));
}

TEST_CASE("conversion efficiency contract") {
  FieldTrajectory tr;
  CHECK_THROWS_AS(conversion_efficiency(tr), InputError);
  tr.z = {0.0, 1.0};
  tr.states = {FieldState{}, FieldState{{0.0, 0.0}, std::polar(1.0, 0.7), {}}};
  CHECK(conversion_efficiency(tr) == doctest::Approx(1.0));
  tr.states[1] = tr.states[0];
  CHECK(conversion_efficiency(tr) == 0.0);
  tr.states[0].signal = 0.0;
  CHECK_THROWS_AS(conversion_efficiency(tr), InputError);
}

TEST_CASE("designed profile converts completely") {
  const auto tr = experiments::simulate_design(deltak_design());
  CHECK(tr.efficiency >= 0.99);
  CHECK(tr.efficiency <= 1.0 + 1e-6);
}

TEST_CASE("flux conservation along the trajectory") {
  CHECK(probe::max_flux_drift(deltak_design()) < 1e-8);
}

TEST_CASE("RK4 convergence order") {
  CHECK(probe::rk4_order(3.0, 16) >= 3.8);
  CHECK(probe::rk4_order(3.0, 32) >= 3.8);
}

TEST_CASE("grid phase equals the literal rotating factor") {
  CHECK(probe::frame_difference(3000.0, 5000.0, 1e-3) < 1e-9);
  CHECK(probe::frame_difference(-8000.0, 7000.0, 1e-3) < 1e-9);
}

TEST_CASE("phase interpolation is exact at nodes and cubic between") {
  const auto m = propagation::lz_linear_chirp(-1e4, 1e4, 1e-3, 1001);
  const PhaseInterpolant phi(m);
  for (std::size_t i = 0; i < m.z.size(); i += 100) CHECK(phi(m.z[i]) == doctest::Approx(m.phase[i]));
  const double z = 0.123456e-3;
  CHECK(phi(z) == doctest::Approx(-1e4 * z + 1e4 * z * z / 1e-3).epsilon(1e-12));
}

TEST_CASE("step count check") {
  CHECK_THROWS_AS(simulate_undepleted(deltak_design().mismatch, deltak_design().kappa, {0, 0}),
                  InputError);
  CHECK_THROWS_AS(simulate_undepleted(deltak_design().mismatch, deltak_design().kappa, {20, 0}),
                  InputError);
}

TEST_CASE("linear chirp profile") {
  const auto m = lz_linear_chirp(-2e4, 1e4, 2e-3, 2001);
  CHECK(m.delta_k.front() == -2e4);
  CHECK(m.delta_k.back() == doctest::Approx(1e4));
  CHECK(m.delta_k[1000] == doctest::Approx(-5e3));
  const auto flat = lz_linear_chirp(0.0, 0.0, 1e-3, 1001);
  for (double p : flat.phase) CHECK(p == 0.0);
}

TEST_CASE("depleted pump conserves photon flux") {
  const auto& d = deltak_design();
  const FieldState in{{0.8, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
  const auto tr = simulate_depleted(d.mismatch, d.kappa, in, {20000, 1});
  for (const auto& s : tr.states) {
    const double a = std::norm(s.signal) + std::norm(s.upconverted);
    const double b = std::norm(s.pump) + std::norm(s.upconverted);
    if (std::abs(a - 0.64) > 1e-8 || std::abs(b - 1.0) > 1e-8) FAIL("Manley-Rowe drift");
  }
  CHECK(tr.depleted);
}

TEST_CASE("depleted pump reduces to the undepleted limit") {
  const auto& d = deltak_design();
  const double undepleted = experiments::simulate_design(d).efficiency;
  const double small = experiments::simulate_design_depleted(d, 1e-3).efficiency;
  CHECK(std::abs(small - undepleted) < 1e-3);
  const double r05 = experiments::simulate_design_depleted(d, 0.05).efficiency;
  CHECK(std::abs(r05 - undepleted) < 0.01);
}

TEST_CASE("no pump gives no conversion") {
  const auto& d = deltak_design();
  const FieldState in{{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
  CHECK(simulate_depleted(d.mismatch, d.kappa, in).efficiency == 0.0);
}

}
