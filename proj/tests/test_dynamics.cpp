#include <doctest.h>

#include <cmath>
#include <numbers>

#include "listing_oracle.hpp"
#include "tqs/analytics.hpp"
#include "tqs/dynamics.hpp"
#include "tqs/emission.hpp"

using namespace tqs;

namespace {

ValidatedConfig with_field(FieldSpec f, double tau = 0.025) {
  auto cfg = reference_config();
  cfg.field = f;
  cfg.tau = tau;
  return validate_config(cfg);
}

ParticleState at_angle_deg(double deg) { return point_source_state(Geometry{}, 12.0, deg_to_rad(deg)); }

}  // namespace

TEST_CASE("one step inside the band") {
  const ParticleState s{{0.0, 0.0}, {12.0, 0.0}, 0};
  const auto n = step(s, field::BandConstant{}, 0.025, 1.0);
  CHECK(n.vel.x == doctest::Approx(11.842920367320511).epsilon(1e-14));
  CHECK(n.vel.y == 0.0);
  // Position moves with the old velocity.
  CHECK(n.pos.x == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(n.step == 1);
  const auto heavy = step(s, field::BandConstant{}, 0.025, 2.0);
  CHECK(heavy.vel.x == doctest::Approx(12.0 - std::numbers::pi * 0.025).epsilon(1e-14));
}

TEST_CASE("step rejects non-finite results") {
  const ParticleState s{{0.0, 0.0}, {std::numeric_limits<double>::infinity(), 0.0}, 0};
  CHECK_THROWS_AS(step(s, field::Zero{}, 0.025, 1.0), NonFiniteState);
}

TEST_CASE("free flight reaches the detector on the straight line") {
  const auto cfg = with_field(field::Zero{});
  for (double deg : {-40.0, -10.0, 0.0, 3.3, 10.0, 45.0}) {
    const auto hit = propagate_to_detector(at_angle_deg(deg), cfg, 7);
    CHECK(hit.y_impact == doctest::Approx(15.0 * std::tan(deg_to_rad(deg))).epsilon(1e-12));
    CHECK(hit.emission_index == 7);
  }
  CHECK(propagate_to_detector(at_angle_deg(10.0), cfg).y_impact == doctest::Approx(2.644905).epsilon(1e-6));
}

TEST_CASE("axial particle lands on the axis") {
  const auto cfg = validate_config(reference_config());
  const auto hit = propagate_to_detector(at_angle_deg(0.0), cfg);
  CHECK(hit.y_impact == 0.0);
  CHECK(hit.steps_taken > 50);
}

TEST_CASE("every reference particle reaches the detector") {
  const auto cfg = validate_config(reference_config());
  const EmissionStream stream(cfg);
  for (std::uint64_t k = 0; k < stream.total(); ++k) {
    const auto p = try_propagate(stream.emit(k), cfg, k);
    REQUIRE(p.reached);
    REQUIRE(std::isfinite(p.impact.y_impact));
  }
}

TEST_CASE("reference impacts agree with the transcribed listing") {
  const auto cfg = validate_config(reference_config());
  const EmissionStream stream(cfg);
  const auto table = listing::sweep_table();
  double worst = 0.0;
  for (std::uint64_t k = 0; k < stream.total(); ++k) {
    const double y = propagate_to_detector(stream.emit(k), cfg).y_impact;
    worst = std::max(worst, std::abs(y - table[k]));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("trajectory points sit on step circles before the band") {
  const auto cfg = validate_config(reference_config());
  for (double deg : {-30.0, 5.0, 17.5}) {
    const auto t = record_trajectory(at_angle_deg(deg), cfg);
    const auto hit = propagate_to_detector(at_angle_deg(deg), cfg);
    CHECK(t.points.size() == hit.steps_taken + 1);
    CHECK(t.points.back().x > 10.0);
    CHECK(t.points[t.points.size() - 2].x <= 10.0);
    for (std::size_t k = 0; k < t.points.size() && t.points[k].x < -0.5; ++k) {
      const Vec2 rel = t.points[k] - Vec2{-5.0, 0.0};
      CHECK(rel.norm() == doctest::Approx(0.3 * static_cast<double>(k)).epsilon(1e-12));
    }
  }
  // On axis the lattice is -5 + 0.3 k.
  const auto axial = record_trajectory(at_angle_deg(0.0), cfg);
  for (std::size_t k = 0; k < 10; ++k)
    CHECK(axial.points[k].x == doctest::Approx(-5.0 + 0.3 * static_cast<double>(k)).epsilon(1e-14));
}

TEST_CASE("mirrored launches give mirrored impacts") {
  for (FieldSpec f : {FieldSpec{field::BandConstant{}}, FieldSpec{field::HalfPlaneConstant{3.0}},
                      FieldSpec{field::GaussianBand{}}}) {
    const auto cfg = with_field(f);
    for (double deg = 0.37; deg < 45.0; deg += 2.9) {
      const double up = propagate_to_detector(at_angle_deg(deg), cfg).y_impact;
      const double down = propagate_to_detector(at_angle_deg(-deg), cfg).y_impact;
      CHECK(up == -down);
    }
  }
}

TEST_CASE("reflected particles exhaust the step budget") {
  auto raw = reference_config();
  raw.field = field::HalfPlaneConstant{-1000.0};
  const auto cfg = validate_config(raw);
  const auto p = try_propagate(at_angle_deg(1.0), cfg);
  CHECK_FALSE(p.reached);
  CHECK(p.failure == FailureKind::MaxStepsExceeded);
  CHECK(p.steps == cfg.max_steps());
  try {
    propagate_to_detector(at_angle_deg(1.0), cfg);
    FAIL("expected PropagationError");
  } catch (const PropagationError& e) {
    CHECK(e.kind() == FailureKind::MaxStepsExceeded);
    CHECK(e.steps() == 200);
  }
  Trajectory partial;
  trace(at_angle_deg(1.0), cfg, 0, partial);
  CHECK(partial.points.size() == 201);
}

TEST_CASE("explicit small budget") {
  auto raw = reference_config();
  raw.max_steps = 10;
  const auto p = try_propagate(at_angle_deg(0.0), validate_config(raw));
  CHECK(p.failure == FailureKind::MaxStepsExceeded);
  CHECK(p.steps == 10);
}

TEST_CASE("finite slit absorbs wide particles") {
  auto raw = reference_config();
  raw.slit_half_width = 0.1;
  const auto cfg = validate_config(raw);
  const auto wide = try_propagate(at_angle_deg(10.0), cfg);
  CHECK_FALSE(wide.reached);
  CHECK(wide.failure == FailureKind::Absorbed);
  CHECK(try_propagate(at_angle_deg(0.0), cfg).reached);
  // 5 tan(1 deg) = 0.087 passes.
  CHECK(try_propagate(at_angle_deg(1.0), cfg).reached);
  CHECK(try_propagate(at_angle_deg(-1.2), cfg).failure == FailureKind::Absorbed);
}

TEST_CASE("discretization error is bounded by a multiple of tau") {
  const Geometry g{};
  for (FieldSpec f : {FieldSpec{field::HalfPlaneConstant{}}, FieldSpec{field::BandConstant{}}}) {
    // Well away from grazing incidence, where the coefficient blows up.
    for (double deg : {-10.0, 5.0, 10.0}) {
      const auto init = at_angle_deg(deg);
      const double exact = classical_reference(init, f, g, 1.0);
      for (double tau = 0.025; tau > 0.025 / 100; tau /= 2) {
        const double y = propagate_to_detector(init, with_field(f, tau)).y_impact;
        // One step of v0 tau can misplace the impact by O(tau) in either direction.
        CHECK(std::abs(y - exact) <= 10.0 * tau);
      }
    }
  }
}
