#include "tqs/emission.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace tqs {

namespace {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Streams keep angle draws and source offsets independent.
constexpr std::uint64_t kAngleStream = 1;
constexpr std::uint64_t kOffsetStreamA = 2;
constexpr std::uint64_t kOffsetStreamB = 3;

double grid_hi(const emission::AngleGrid& g, std::uint64_t n) {
  const double hi = g.alpha_min + static_cast<double>(n - 1) * g.alpha_step;
  // Snap to alpha_max when the range is an exact multiple of the step.
  if (std::abs(hi - g.alpha_max) <= 1e-9 * g.alpha_step) return g.alpha_max;
  return hi;
}

std::uint64_t angle_count(const emission::AngleSpec& spec) {
  if (const auto* g = std::get_if<emission::AngleGrid>(&spec)) return grid_size(*g);
  return std::get<emission::AngleRandom>(spec).count;
}

double angle_at(const emission::AngleSpec& spec, std::uint64_t index) {
  if (const auto* g = std::get_if<emission::AngleGrid>(&spec)) return grid_angle(*g, index);
  const auto& r = std::get<emission::AngleRandom>(spec);
  return r.alpha_min + counter_uniform(r.seed, kAngleStream, index) * (r.alpha_max - r.alpha_min);
}

}  // namespace

std::uint64_t grid_size(const emission::AngleGrid& g) {
  const double ratio = (g.alpha_max - g.alpha_min) / g.alpha_step;
  return static_cast<std::uint64_t>(std::floor(ratio + 1e-9)) + 1;
}

double grid_angle(const emission::AngleGrid& g, std::uint64_t k) {
  const auto n = grid_size(g);
  if (n == 1) return g.alpha_min;
  const double hi = grid_hi(g, n);
  const double mid = 0.5 * (g.alpha_min + hi);
  const double step = (hi - g.alpha_min) / static_cast<double>(n - 1);
  const double offset = static_cast<double>(k) - 0.5 * static_cast<double>(n - 1);
  return mid + offset * step;
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const std::uint64_t key = mix64(seed + kGolden * (stream + 1));
  const std::uint64_t bits = mix64(key ^ (index * kGolden + stream));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double counter_normal(std::uint64_t seed, std::uint64_t index) {
  // 1 - u lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - counter_uniform(seed, kOffsetStreamA, index);
  const double u2 = counter_uniform(seed, kOffsetStreamB, index);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ParticleState point_source_state(const Geometry& geometry, double v0, double alpha) {
  return ParticleState{{-geometry.d, 0.0}, {v0 * std::cos(alpha), v0 * std::sin(alpha)}, 0};
}

EmissionStream::EmissionStream(const ValidatedConfig& cfg)
    : spec_(cfg.emission()), geometry_(cfg.geometry()), v0_(cfg.v0()) {
  total_ = std::visit(
      [](const auto& s) -> std::uint64_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, emission::AngleGrid>) {
          return grid_size(s);
        } else if constexpr (std::is_same_v<T, emission::AngleRandom>) {
          return s.count;
        } else {
          return angle_count(s.angles);
        }
      },
      spec_);
}

double EmissionStream::angle(std::uint64_t index) const {
  if (index >= total_)
    throw IndexOutOfRange("emission index " + std::to_string(index) + " out of range [0, " +
                          std::to_string(total_) + ")");
  return std::visit(
      [index](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, emission::GaussianLine>) {
          return angle_at(s.angles, index);
        } else {
          return angle_at(emission::AngleSpec{s}, index);
        }
      },
      spec_);
}

ParticleState EmissionStream::emit(std::uint64_t index) const {
  auto state = point_source_state(geometry_, v0_, angle(index));
  if (const auto* line = std::get_if<emission::GaussianLine>(&spec_))
    state.pos.y = line->sigma_src * counter_normal(line->seed, index);
  return state;
}

}  // namespace tqs
