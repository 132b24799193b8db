#include "tqs/dynamics.hpp"

#include <cassert>
#include <cmath>

#include "tqs/fields.hpp"

namespace tqs {

std::string to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::MaxStepsExceeded: return "MaxStepsExceeded";
    case FailureKind::Absorbed: return "Absorbed";
    case FailureKind::NonFiniteState: return "NonFiniteState";
  }
  return "Unknown";
}

PropagationError::PropagationError(FailureKind kind, std::uint64_t steps)
    : std::runtime_error("particle did not reach the detector: " + to_string(kind) + " after " +
                         std::to_string(steps) + " steps"),
      kind_(kind),
      steps_(steps) {}

namespace {

inline ParticleState advance(const ParticleState& s, const FieldSpec& field, double tau, double mass) {
  const Vec2 force = eval_field(field, s.pos);
  return ParticleState{s.pos + s.vel * tau, s.vel + force * (tau / mass), s.step + 1};
}

inline bool finite(const ParticleState& s) { return s.pos.finite() && s.vel.finite(); }

// Called on every step of the walk; returns false to stop with a failure.
template <typename OnPoint>
Propagation walk(const ParticleState& initial, const ValidatedConfig& cfg, std::uint64_t index,
                 OnPoint&& on_point) {
  const double l = cfg.geometry().l;
  const auto& field = cfg.field();
  const auto slit = cfg.config().slit_half_width;
  const auto budget = cfg.max_steps();

  Propagation out;
  ParticleState s = initial;
  ParticleState prev = s;
  std::uint64_t taken = 0;
  on_point(s.pos);
  while (s.pos.x <= l) {
    if (taken == budget) {
      out.failure = FailureKind::MaxStepsExceeded;
      out.steps = taken;
      return out;
    }
    prev = s;
    s = advance(s, field, cfg.tau(), cfg.mass());
    ++taken;
    if (!finite(s)) {
      out.failure = FailureKind::NonFiniteState;
      out.steps = taken;
      return out;
    }
    on_point(s.pos);
    if (slit && prev.pos.x < 0.0 && s.pos.x >= 0.0) {
      const double y0 = prev.pos.y + (s.pos.y - prev.pos.y) * (-prev.pos.x) / (s.pos.x - prev.pos.x);
      if (std::abs(y0) > *slit) {
        out.failure = FailureKind::Absorbed;
        out.steps = taken;
        return out;
      }
    }
  }
  // Exit implies prev.x <= l < x, so the segment is never degenerate.
  assert(s.pos.x > prev.pos.x);
  const double y = (s.pos.y - prev.pos.y) * (l - prev.pos.x) / (s.pos.x - prev.pos.x) + prev.pos.y;
  out.reached = true;
  out.steps = taken;
  out.impact = ImpactRecord{y, index, taken};
  return out;
}

}  // namespace

ParticleState step(const ParticleState& state, const FieldSpec& field, double tau, double mass) {
  auto next = advance(state, field, tau, mass);
  if (!finite(next)) throw NonFiniteState("non-finite particle state after step " + std::to_string(next.step));
  return next;
}

Propagation try_propagate(const ParticleState& initial, const ValidatedConfig& cfg,
                          std::uint64_t emission_index) {
  return walk(initial, cfg, emission_index, [](const Vec2&) {});
}

ImpactRecord propagate_to_detector(const ParticleState& initial, const ValidatedConfig& cfg,
                                   std::uint64_t emission_index) {
  auto p = try_propagate(initial, cfg, emission_index);
  if (!p.reached) throw PropagationError(p.failure, p.steps);
  return p.impact;
}

Propagation trace(const ParticleState& initial, const ValidatedConfig& cfg, std::uint64_t emission_index,
                  Trajectory& out) {
  return walk(initial, cfg, emission_index, [&out](const Vec2& pos) { out.points.push_back(pos); });
}

Trajectory record_trajectory(const ParticleState& initial, const ValidatedConfig& cfg) {
  Trajectory t;
  auto p = trace(initial, cfg, 0, t);
  if (!p.reached) throw PropagationError(p.failure, p.steps);
  return t;
}

}  // namespace tqs
