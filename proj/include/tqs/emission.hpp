#pragma once

#include <cstdint>
#include <stdexcept>

#include "tqs/model.hpp"

namespace tqs {

struct ParticleState {
  Vec2 pos{};
  Vec2 vel{};
  std::uint64_t step{0};

  bool operator==(const ParticleState&) const = default;
};

/// Number of points of an angle grid: floor((max - min) / step) + 1.
std::uint64_t grid_size(const emission::AngleGrid& grid);

/// k-th grid angle. Points are placed symmetrically about the grid midpoint,
/// so a grid with alpha_min == -alpha_max yields exactly mirrored angles.
double grid_angle(const emission::AngleGrid& grid, std::uint64_t k);

/// Uniform double in [0, 1) from (seed, stream, index). Stateless and random-access.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Standard normal variate from (seed, index) via Box-Muller on two counter uniforms.
double counter_normal(std::uint64_t seed, std::uint64_t index);

class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Random-access stream of initial particle states for one configuration.
class EmissionStream {
 public:
  explicit EmissionStream(const ValidatedConfig& cfg);

  [[nodiscard]] std::uint64_t total() const { return total_; }

  /// Emission angle of particle `index` (radians).
  [[nodiscard]] double angle(std::uint64_t index) const;

  /// Pure in `index`. Throws IndexOutOfRange.
  [[nodiscard]] ParticleState emit(std::uint64_t index) const;

 private:
  EmissionSpec spec_;
  Geometry geometry_;
  double v0_;
  std::uint64_t total_;
};

/// Particle leaving the point source at angle `alpha` with speed v0.
ParticleState point_source_state(const Geometry& geometry, double v0, double alpha);

}  // namespace tqs
