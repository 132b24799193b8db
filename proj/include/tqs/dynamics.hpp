#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tqs/emission.hpp"
#include "tqs/model.hpp"

namespace tqs {

struct ImpactRecord {
  double y_impact{0.0};
  std::uint64_t emission_index{0};
  std::uint64_t steps_taken{0};

  bool operator==(const ImpactRecord&) const = default;
};

struct Trajectory {
  /// Initial position first, then one point per step; the last point is past the detector.
  std::vector<Vec2> points;
};

enum class FailureKind {
  MaxStepsExceeded,  ///< never crossed x = l within the step budget
  Absorbed,          ///< hit the opaque part of S1 (only with a finite slit)
  NonFiniteState,
};

std::string to_string(FailureKind kind);

class NonFiniteState : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class PropagationError : public std::runtime_error {
 public:
  PropagationError(FailureKind kind, std::uint64_t steps);
  [[nodiscard]] FailureKind kind() const { return kind_; }
  [[nodiscard]] std::uint64_t steps() const { return steps_; }

 private:
  FailureKind kind_;
  std::uint64_t steps_;
};

/// One tau-step. The force is taken at the old position and the position is
/// advanced with the old velocity:
///   r' = r + v tau,  v' = v + F(r) tau / m.
/// Throws NonFiniteState if the result is not finite.
ParticleState step(const ParticleState& state, const FieldSpec& field, double tau, double mass);

/// Non-throwing propagation outcome.
struct Propagation {
  bool reached{false};
  ImpactRecord impact{};
  FailureKind failure{FailureKind::MaxStepsExceeded};
  std::uint64_t steps{0};
};

/// Steps while x <= l, then interpolates the last segment linearly onto x = l.
Propagation try_propagate(const ParticleState& initial, const ValidatedConfig& cfg,
                          std::uint64_t emission_index = 0);

/// As try_propagate but throws PropagationError on failure.
ImpactRecord propagate_to_detector(const ParticleState& initial, const ValidatedConfig& cfg,
                                   std::uint64_t emission_index = 0);

/// try_propagate that also appends every visited position to `out`, whether or
/// not the particle reaches the detector.
Propagation trace(const ParticleState& initial, const ValidatedConfig& cfg, std::uint64_t emission_index,
                  Trajectory& out);

/// Same loop as propagate_to_detector, keeping every position.
/// points.size() == steps_taken + 1.
Trajectory record_trajectory(const ParticleState& initial, const ValidatedConfig& cfg);

}  // namespace tqs
