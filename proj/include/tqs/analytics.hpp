#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tqs/emission.hpp"
#include "tqs/model.hpp"

namespace tqs {

/// Relative tolerance used when a ratio d / (v0 tau) is meant to be an exact integer.
inline constexpr double kLatticeRelTol = 1e-9;

/// floor(d / (v0 tau)), with ratios within kLatticeRelTol of an integer snapped to it
/// (4.8 / (12 * 0.025) evaluates to 15.999999999999996 in doubles).
std::uint64_t compute_n0(double d, double v0, double tau);

/// Entry points of the reachable circles r_n = v0 tau n into the force region,
/// measured along the force boundary, which lies at distance `boundary` from the source.
///
/// a(i) = sign(i) sqrt(v0^2 tau^2 (n0 + |i|)^2 - boundary^2),  n0 = compute_n0(boundary, v0, tau)
/// phi(i) = atan(a(i) / boundary)
struct DeviationOrigins {
  std::uint64_t n0{0};
  double boundary{0.0};
  double step_length{0.0};   ///< v0 tau
  std::vector<double> a_pos;    ///< a(1) .. a(i_max)
  std::vector<double> phi_pos;  ///< phi(1) .. phi(i_max)

  [[nodiscard]] int i_max() const { return static_cast<int>(a_pos.size()); }
  /// i in [-i_max, -1] U [1, i_max].
  [[nodiscard]] double a(int i) const;
  [[nodiscard]] double phi(int i) const;
};

DeviationOrigins deviation_origins(double boundary, double v0, double tau, int i_max);

/// d is an integer multiple of v0 tau, to within rel_tol of the ratio.
bool is_black_region(double d, double v0, double tau, double rel_tol = kLatticeRelTol);

class NeverReachesDetector : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Continuous-time impact ordinate on x = l. Closed form for the piecewise-constant
/// fields (straight lines joined to parabolic arcs). GaussianBand has no closed form;
/// it is integrated with the discrete scheme at `gaussian_reference_tau`, which must
/// then be given.
double classical_reference(const ParticleState& initial, const FieldSpec& field, const Geometry& geometry,
                           double mass, std::optional<double> gaussian_reference_tau = std::nullopt);

/// Impact ordinates of the discrete trajectories launched exactly at the fork
/// angles +-phi(1..i_max), sorted ascending. `boundary` defaults to the field's
/// onset distance (d for the half-plane, d - delta for the band).
std::vector<double> predict_minima(const ValidatedConfig& cfg, int i_max,
                                   std::optional<double> boundary = std::nullopt);

}  // namespace tqs
