#include <doctest.h>

#include <cmath>

#include "../support/properties.hpp"
#include "qasfg/error.hpp"
#include "qasfg/sensitivity.hpp"

using namespace qasfg;
using namespace qasfg::sensitivity;
using materials::kPi;

TEST_SUITE("sensitivity") {

TEST_CASE("targets parse") {
  CHECK(parse_target("deltak") == Target::DeltaK);
  CHECK(parse_target("kappa") == Target::Kappa);
  CHECK(to_string(Target::Kappa) == "kappa");
  CHECK_THROWS_AS(parse_target("dk"), InputError);
}

TEST_CASE("sensitivities are non-negative and follow kappa*L scaling") {
  const auto a = sensitivities(trajectory::build_angles({10000.0, 1e-3, 4001}));
  const auto b = sensitivities(trajectory::build_angles({5000.0, 2e-3, 4001}));
  CHECK(a.q_delta_k > 0.0);
  CHECK(a.q_kappa > 0.0);
  CHECK(b.q_delta_k / a.q_delta_k == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(b.q_kappa == doctest::Approx(a.q_kappa).epsilon(1e-6));
}

TEST_CASE("sensitivities converge under grid doubling") {
  const auto a = sensitivities(trajectory::build_angles({10000.0, 1e-3, 4001}));
  const auto b = sensitivities(trajectory::build_angles({10000.0, 1e-3, 8001}));
  CHECK(a.q_delta_k == doctest::Approx(b.q_delta_k).epsilon(1e-4));
  CHECK(a.q_kappa == doctest::Approx(b.q_kappa).epsilon(1e-4));
}

TEST_CASE("global phase invariance") {
  auto angles = trajectory::build_angles({10000.0, 1e-3, 4001});
  const auto before = sensitivities(angles);
  for (double& v : angles.m) v += 1.234;
  const auto after = sensitivities(angles);
  CHECK(after.q_delta_k == doctest::Approx(before.q_delta_k).epsilon(1e-12));
  CHECK(after.q_kappa == doctest::Approx(before.q_kappa).epsilon(1e-12));
}

TEST_CASE("perturbed efficiency estimate") {
  const auto angles = trajectory::build_angles({10000.0, 1e-3, 4001});
  const auto q = sensitivities(angles);
  const auto zero = perturbed_efficiency_estimate(angles, {0.0, 0.0});
  CHECK(zero.full == 1.0);
  CHECK(zero.quadratic == 1.0);

  const auto dk = perturbed_efficiency_estimate(angles, {50.0, 0.0});
  CHECK(1.0 - dk.full == doctest::Approx(2500.0 * q.q_delta_k).epsilon(1e-2));
  CHECK(1.0 - dk.quadratic == doctest::Approx(2500.0 * q.q_delta_k).epsilon(1e-12));

  const auto k = perturbed_efficiency_estimate(angles, {0.0, 0.01});
  CHECK(1.0 - k.full == doctest::Approx(1e-4 * q.q_kappa).epsilon(1e-2));

  const auto huge = perturbed_efficiency_estimate(angles, {1e6, 10.0});
  CHECK(huge.full >= 0.0);
  CHECK(huge.quadratic == 0.0);
}

TEST_CASE("error amplitude conversions") {
  CHECK(eta_from_period_error(0.0, 20e-6) == 0.0);
  CHECK(eta_from_period_error(0.01, 20e-6) < 0.0);
  CHECK(eta_from_period_error(0.01, 20e-6) == doctest::Approx(-3141.5926535897932).epsilon(1e-12));
}

TEST_CASE("optimizer finds the delta-k minimum") {
  KappaSearch s;
  const auto a = optimize_kappa(s);
  CHECK(a.kappa / 100.0 == doctest::Approx(76.23).epsilon(2.0 / 76.23));
  CHECK(a.trace.size() == 400);
  for (std::size_t i = 1; i < a.trace.size(); ++i) CHECK(a.trace[i].kappa > a.trace[i - 1].kappa);
  const auto b = optimize_kappa(s);
  CHECK(a.kappa == b.kappa);
  CHECK(a.q == b.q);
}

TEST_CASE("optimizer finds the kappa minimum") {
  KappaSearch s;
  s.target = Target::Kappa;
  const auto a = optimize_kappa(s);
  CHECK(a.kappa / 100.0 == doctest::Approx(61.33).epsilon(2.0 / 61.33));
}

TEST_CASE("optimizer result is independent of worker count") {
  KappaSearch s;
  s.target = Target::Kappa;
  const auto a = optimize_kappa(s);
  s.workers = 3;
  const auto b = optimize_kappa(s);
  CHECK(a.kappa == b.kappa);
}

TEST_CASE("optimizer scaling law") {
  const double lengths[] = {0.5e-3, 1e-3, 2e-3, 5e-3};
  CHECK(probe::kappa_length_spread(Target::DeltaK, lengths, 4) < 5e-3);
  CHECK(probe::kappa_length_spread(Target::Kappa, lengths, 4) < 5e-3);
}

TEST_CASE("optimizer rejects bad ranges") {
  KappaSearch s;
  s.kappa_min = 2000.0;
  CHECK_THROWS_AS(optimize_kappa(s), InputError);
  s.kappa_min = 20000.0;
  s.kappa_max = 10000.0;
  CHECK_THROWS_AS(optimize_kappa(s), InputError);
}

TEST_CASE("minimum on the range boundary is flagged") {
  KappaSearch s;
  s.kappa_min = 7700.0;
  s.kappa_max = 7900.0;
  CHECK_THROWS_AS(optimize_kappa(s), NumericError);
}

TEST_CASE("quadratic prediction matches simulation at small deficit") {
  const auto r = probe::perturbation_agreement(10000.0, 1e-3, 1e-3);
  CHECK(r.delta_k == doctest::Approx(1.0).epsilon(0.1));
  CHECK(r.kappa == doctest::Approx(1.0).epsilon(0.1));
}

}
