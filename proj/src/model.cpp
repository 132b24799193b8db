#include "tqs/model.hpp"

#include <cmath>
#include <sstream>

namespace tqs {

SimConfig reference_config() {
  SimConfig cfg;
  cfg.geometry = Geometry{5.0, 10.0, 5.0};
  cfg.field = field::BandConstant{2.0 * std::numbers::pi * -1.0, 0.5};
  cfg.emission = emission::AngleGrid{deg_to_rad(-49.0), deg_to_rad(49.0), deg_to_rad(0.01)};
  cfg.tau = 0.025;
  cfg.v0 = 12.0;
  cfg.mass = 1.0;
  return cfg;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NonPositiveParameter: return "NonPositiveParameter";
    case ViolationKind::NonFiniteParameter: return "NonFiniteParameter";
    case ViolationKind::EmptyAngleRange: return "EmptyAngleRange";
    case ViolationKind::StepOvershoot: return "StepOvershoot";
  }
  return "Unknown";
}

namespace {

std::string join_violations(const std::vector<ConfigViolation>& violations) {
  std::ostringstream os;
  os << "invalid configuration:";
  for (const auto& v : violations) os << "\n  " << to_string(v.kind) << "(" << v.field << "): " << v.message;
  return os.str();
}

class Checker {
 public:
  void finite(const std::string& name, double value) {
    if (!std::isfinite(value))
      out_.push_back({ViolationKind::NonFiniteParameter, name, name + " must be finite"});
  }

  void positive(const std::string& name, double value) {
    if (!std::isfinite(value)) {
      finite(name, value);
    } else if (!(value > 0.0)) {
      out_.push_back({ViolationKind::NonPositiveParameter, name, name + " must be > 0"});
    }
  }

  void positive_count(const std::string& name, std::uint64_t value) {
    if (value == 0) out_.push_back({ViolationKind::NonPositiveParameter, name, name + " must be > 0"});
  }

  void range(const std::string& prefix, double lo, double hi) {
    finite(prefix + ".alpha_min", lo);
    finite(prefix + ".alpha_max", hi);
    if (std::isfinite(lo) && std::isfinite(hi) && !(lo < hi))
      out_.push_back({ViolationKind::EmptyAngleRange, prefix, "alpha_min must be < alpha_max"});
  }

  void angles(const std::string& prefix, const emission::AngleSpec& spec) {
    std::visit([&](const auto& s) { angles(prefix, s); }, spec);
  }
  void angles(const std::string& prefix, const emission::AngleGrid& g) {
    range(prefix, g.alpha_min, g.alpha_max);
    positive(prefix + ".alpha_step", g.alpha_step);
  }
  void angles(const std::string& prefix, const emission::AngleRandom& r) {
    range(prefix, r.alpha_min, r.alpha_max);
    positive_count(prefix + ".count", r.count);
  }
  void angles(const std::string& prefix, const emission::GaussianLine& g) {
    positive(prefix + ".sigma_src", g.sigma_src);
    angles(prefix, g.angles);
  }

  void add(ConfigViolation v) { out_.push_back(std::move(v)); }
  std::vector<ConfigViolation> take() { return std::move(out_); }

 private:
  std::vector<ConfigViolation> out_;
};

}  // namespace

ConfigError::ConfigError(std::vector<ConfigViolation> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

std::vector<ConfigViolation> check_config(const SimConfig& cfg) {
  Checker c;
  c.positive("geometry.d", cfg.geometry.d);
  c.positive("geometry.l", cfg.geometry.l);
  c.positive("geometry.R", cfg.geometry.R);
  c.positive("tau", cfg.tau);
  c.positive("v0", cfg.v0);
  c.positive("mass", cfg.mass);
  if (cfg.max_steps) c.positive_count("max_steps", *cfg.max_steps);
  if (cfg.slit_half_width) c.positive("slit_half_width", *cfg.slit_half_width);

  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, field::HalfPlaneConstant>) {
          c.finite("field.F0", f.F0);
        } else if constexpr (std::is_same_v<T, field::BandConstant>) {
          c.finite("field.F0", f.F0);
          c.positive("field.delta", f.delta);
        } else if constexpr (std::is_same_v<T, field::GaussianBand>) {
          c.finite("field.F0", f.F0);
          c.positive("field.sigma", f.sigma);
        }
      },
      cfg.field);

  std::visit([&](const auto& e) { c.angles("emission", e); }, cfg.emission);

  const double step = cfg.v0 * cfg.tau;
  const double span = cfg.geometry.d + cfg.geometry.l;
  if (std::isfinite(step) && std::isfinite(span) && step > 0.0 && span > 0.0 && step >= span) {
    c.add({ViolationKind::StepOvershoot, "tau",
           "v0*tau >= d + l: a single step jumps the whole apparatus"});
  }
  return c.take();
}

std::uint64_t default_max_steps(const Geometry& geometry, double v0, double tau) {
  return static_cast<std::uint64_t>(std::ceil(4.0 * (geometry.d + geometry.l) / (v0 * tau)));
}

ValidatedConfig validate_config(const SimConfig& cfg) {
  auto violations = check_config(cfg);
  if (!violations.empty()) throw ConfigError(std::move(violations));
  const auto steps = cfg.max_steps.value_or(default_max_steps(cfg.geometry, cfg.v0, cfg.tau));
  return ValidatedConfig(cfg, steps);
}

std::optional<double> force_onset_distance(const FieldSpec& field, const Geometry& geometry) {
  if (std::holds_alternative<field::HalfPlaneConstant>(field)) return geometry.d;
  if (const auto* band = std::get_if<field::BandConstant>(&field)) return geometry.d - band->delta;
  return std::nullopt;
}

bool is_point_source(const EmissionSpec& emission) {
  return !std::holds_alternative<emission::GaussianLine>(emission);
}

}  // namespace tqs
