#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tqs/vec2.hpp"

namespace tqs {

/// Source at (-d, 0), slitted screen at x = 0, detector plane at x = l.
/// R is the vertical half-extent of the density image frame.
struct Geometry {
  double d{5.0};
  double l{10.0};
  double R{5.0};

  bool operator==(const Geometry&) const = default;
};

namespace field {

struct Zero {
  bool operator==(const Zero&) const = default;
};

/// (F0, 0) for x >= 0.
struct HalfPlaneConstant {
  double F0{-2.0 * std::numbers::pi};
  bool operator==(const HalfPlaneConstant&) const = default;
};

/// (F0, 0) for |x| <= delta.
struct BandConstant {
  double F0{-2.0 * std::numbers::pi};
  double delta{0.5};
  bool operator==(const BandConstant&) const = default;
};

/// (F0 exp(-sigma x^2), 0) everywhere.
struct GaussianBand {
  double F0{-2.0 * std::numbers::pi};
  double sigma{4.0};
  bool operator==(const GaussianBand&) const = default;
};

}  // namespace field

using FieldSpec = std::variant<field::Zero, field::HalfPlaneConstant, field::BandConstant,
                               field::GaussianBand>;

namespace emission {

/// Deterministic sweep alpha_min, alpha_min + step, ... (radians).
struct AngleGrid {
  double alpha_min{0.0};
  double alpha_max{0.0};
  double alpha_step{0.0};
  bool operator==(const AngleGrid&) const = default;
};

/// Uniform random angles in [alpha_min, alpha_max), random-access by index.
struct AngleRandom {
  double alpha_min{0.0};
  double alpha_max{0.0};
  std::uint64_t count{0};
  std::uint64_t seed{0};
  bool operator==(const AngleRandom&) const = default;
};

using AngleSpec = std::variant<AngleGrid, AngleRandom>;

/// Source spread along the vertical line x = -d with y ~ N(0, sigma_src^2).
struct GaussianLine {
  double sigma_src{0.0};
  AngleSpec angles{};
  std::uint64_t seed{0};
  bool operator==(const GaussianLine&) const = default;
};

}  // namespace emission

using EmissionSpec = std::variant<emission::AngleGrid, emission::AngleRandom, emission::GaussianLine>;

struct SimConfig {
  Geometry geometry{};
  FieldSpec field{field::BandConstant{}};
  EmissionSpec emission{};
  double tau{0.025};
  double v0{12.0};
  double mass{1.0};
  /// Unset means ceil(4 (d + l) / (v0 tau)).
  std::optional<std::uint64_t> max_steps{};
  /// Absorbing slit in S1; unset means S1 is fully transparent.
  std::optional<double> slit_half_width{};

  bool operator==(const SimConfig&) const = default;
};

/// Parameters of the reference sweep: d = 5, l = 10, delta = 0.5, q = -1,
/// tau = 0.025, v0 = 12, angles -49 deg .. 49 deg in 0.01 deg steps.
SimConfig reference_config();

constexpr double deg_to_rad(double deg) { return deg * (std::numbers::pi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / std::numbers::pi); }

enum class ViolationKind { NonPositiveParameter, NonFiniteParameter, EmptyAngleRange, StepOvershoot };

struct ConfigViolation {
  ViolationKind kind;
  std::string field;
  std::string message;

  bool operator==(const ConfigViolation&) const = default;
};

std::string to_string(ViolationKind kind);

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigViolation> violations);
  [[nodiscard]] const std::vector<ConfigViolation>& violations() const { return violations_; }

 private:
  std::vector<ConfigViolation> violations_;
};

/// Every violation of the config invariants, in a stable order. Empty iff valid.
std::vector<ConfigViolation> check_config(const SimConfig& cfg);

/// A SimConfig that has passed check_config. The simulator only accepts this type.
class ValidatedConfig {
 public:
  [[nodiscard]] const SimConfig& config() const { return cfg_; }
  [[nodiscard]] const Geometry& geometry() const { return cfg_.geometry; }
  [[nodiscard]] const FieldSpec& field() const { return cfg_.field; }
  [[nodiscard]] const EmissionSpec& emission() const { return cfg_.emission; }
  [[nodiscard]] double tau() const { return cfg_.tau; }
  [[nodiscard]] double v0() const { return cfg_.v0; }
  [[nodiscard]] double mass() const { return cfg_.mass; }
  [[nodiscard]] std::uint64_t max_steps() const { return max_steps_; }

  bool operator==(const ValidatedConfig&) const = default;

 private:
  friend ValidatedConfig validate_config(const SimConfig& cfg);
  ValidatedConfig(SimConfig cfg, std::uint64_t max_steps) : cfg_(std::move(cfg)), max_steps_(max_steps) {}

  SimConfig cfg_;
  std::uint64_t max_steps_;
};

/// Throws ConfigError listing all violations.
ValidatedConfig validate_config(const SimConfig& cfg);

std::uint64_t default_max_steps(const Geometry& geometry, double v0, double tau);

/// Force onset distance from the source along x, or nullopt when the field
/// has no sharp onset (Zero, GaussianBand).
std::optional<double> force_onset_distance(const FieldSpec& field, const Geometry& geometry);

/// True when every emitted particle starts at (-d, 0).
bool is_point_source(const EmissionSpec& emission);

}  // namespace tqs
