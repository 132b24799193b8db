#include "tqs/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tqs/dynamics.hpp"

namespace tqs {

std::uint64_t compute_n0(double d, double v0, double tau) {
  const double ratio = d / (v0 * tau);
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= kLatticeRelTol * ratio) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::floor(ratio));
}

double DeviationOrigins::a(int i) const {
  if (i == 0 || std::abs(i) > i_max()) throw std::out_of_range("deviation origin index out of range");
  const double v = a_pos[static_cast<std::size_t>(std::abs(i) - 1)];
  return i > 0 ? v : -v;
}

double DeviationOrigins::phi(int i) const {
  if (i == 0 || std::abs(i) > i_max()) throw std::out_of_range("fork angle index out of range");
  const double v = phi_pos[static_cast<std::size_t>(std::abs(i) - 1)];
  return i > 0 ? v : -v;
}

DeviationOrigins deviation_origins(double boundary, double v0, double tau, int i_max) {
  if (!(boundary > 0.0) || !(v0 > 0.0) || !(tau > 0.0))
    throw std::invalid_argument("deviation_origins needs positive boundary, v0 and tau");
  DeviationOrigins out;
  out.n0 = compute_n0(boundary, v0, tau);
  out.boundary = boundary;
  out.step_length = v0 * tau;
  for (int i = 1; i <= std::max(i_max, 0); ++i) {
    const double radius = out.step_length * static_cast<double>(out.n0 + static_cast<std::uint64_t>(i));
    // Factored form avoids cancellation when the circle barely clears the boundary.
    const double radicand = std::max(0.0, (radius - boundary) * (radius + boundary));
    const double a = std::sqrt(radicand);
    out.a_pos.push_back(a);
    out.phi_pos.push_back(std::atan(a / boundary));
  }
  return out;
}

bool is_black_region(double d, double v0, double tau, double rel_tol) {
  const double ratio = d / (v0 * tau);
  return std::abs(ratio - std::round(ratio)) <= rel_tol * ratio;
}

namespace {

// Constant x-acceleration on [lo, hi).
struct Segment {
  double lo;
  double hi;
  double accel;
};

std::vector<Segment> segments_of(const FieldSpec& field, double mass) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (const auto* hp = std::get_if<field::HalfPlaneConstant>(&field))
    return {{-inf, 0.0, 0.0}, {0.0, inf, hp->F0 / mass}};
  if (const auto* band = std::get_if<field::BandConstant>(&field))
    return {{-inf, -band->delta, 0.0}, {-band->delta, band->delta, band->F0 / mass}, {band->delta, inf, 0.0}};
  return {{-inf, inf, 0.0}};
}

// Time to move from x to target (> x) starting with velocity vx under constant accel.
// Returns nullopt if the particle turns around first. Updates vx to the arrival speed.
std::optional<double> crossing_time(double x, double target, double& vx, double accel) {
  const double dist = target - x;
  if (accel == 0.0) {
    if (!(vx > 0.0)) return std::nullopt;
    const double t = dist / vx;
    return t;
  }
  const double disc = vx * vx + 2.0 * accel * dist;
  if (disc < 0.0) return std::nullopt;
  const double v_end = std::sqrt(disc);
  if (vx < 0.0 && accel > 0.0) {
    // Moves backwards first; the caller checks the left boundary.
    const double t = (v_end - vx) / accel;
    vx = v_end;
    return t;
  }
  if (vx + v_end <= 0.0) return std::nullopt;
  const double t = 2.0 * dist / (vx + v_end);
  vx = v_end;
  return t;
}

}  // namespace

double classical_reference(const ParticleState& initial, const FieldSpec& field, const Geometry& geometry,
                           double mass, std::optional<double> gaussian_reference_tau) {
  if (std::holds_alternative<field::GaussianBand>(field)) {
    if (!gaussian_reference_tau)
      throw std::invalid_argument("GaussianBand classical reference needs a reference tau");
    SimConfig cfg;
    cfg.geometry = geometry;
    cfg.field = field;
    cfg.mass = mass;
    cfg.tau = *gaussian_reference_tau;
    cfg.v0 = std::max(initial.vel.norm(), std::numeric_limits<double>::min());
    cfg.emission = emission::AngleGrid{0.0, 1.0, 1.0};
    const auto valid = validate_config(cfg);
    auto p = try_propagate(initial, valid);
    if (!p.reached) throw NeverReachesDetector("particle never reaches the detector plane");
    return p.impact.y_impact;
  }

  const double l = geometry.l;
  double x = initial.pos.x;
  double vx = initial.vel.x;
  double t = 0.0;
  const auto segments = segments_of(field, mass);
  for (const auto& seg : segments) {
    if (x >= l) break;
    if (x >= seg.hi) continue;
    if (x < seg.lo) continue;  // unreachable: segments are contiguous and visited in order
    const double target = std::min(seg.hi, l);
    if (seg.accel > 0.0 && vx < 0.0 && x - vx * vx / (2.0 * seg.accel) < seg.lo)
      throw NeverReachesDetector("particle leaves the force region backwards");
    const auto dt = crossing_time(x, target, vx, seg.accel);
    if (!dt) throw NeverReachesDetector("particle turns around before the detector plane");
    t += *dt;
    x = target;
  }
  return initial.pos.y + initial.vel.y * t;
}

std::vector<double> predict_minima(const ValidatedConfig& cfg, int i_max, std::optional<double> boundary) {
  if (!is_point_source(cfg.emission())) throw std::invalid_argument("predict_minima needs a point source");
  if (!boundary) boundary = force_onset_distance(cfg.field(), cfg.geometry());
  if (!boundary) throw std::invalid_argument("field has no sharp onset; pass an explicit boundary");
  if (i_max <= 0) return {};
  const auto origins = deviation_origins(*boundary, cfg.v0(), cfg.tau(), i_max);
  std::vector<double> out;
  out.reserve(2 * static_cast<std::size_t>(i_max));
  for (int i = -i_max; i <= i_max; ++i) {
    if (i == 0) continue;
    const auto initial = point_source_state(cfg.geometry(), cfg.v0(), origins.phi(i));
    out.push_back(propagate_to_detector(initial, cfg).y_impact);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tqs
