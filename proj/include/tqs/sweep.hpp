#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tqs/dynamics.hpp"
#include "tqs/histogram.hpp"
#include "tqs/model.hpp"

namespace tqs {

struct BatchResult {
  /// One record per particle that reached the detector, ordered by emission index.
  std::vector<ImpactRecord> impacts;
  std::uint64_t failures{0};
  std::array<std::uint64_t, 3> failures_by_kind{};  ///< indexed by FailureKind
  std::uint64_t emitted{0};

  bool operator==(const BatchResult&) const = default;
};

/// Propagates every emitted particle. Work is split into contiguous index ranges,
/// one per worker; the result does not depend on `workers`.
BatchResult run_batch(const ValidatedConfig& cfg, unsigned workers = 1);

struct SimulationOptions {
  double bin_width{0.025};
  double origin{0.0};
  unsigned workers{1};
  /// Rasterize full trajectories into a density image of this size (0 disables).
  std::size_t grid_width{0};
  std::size_t grid_height{0};
};

struct SimulationResult {
  BatchResult batch;
  Histogram histogram;
  std::optional<DensityGrid> density;
};

/// run_batch + accumulate (+ density_grid). Per-worker partial histograms and
/// grids are merged in index order.
SimulationResult simulate(const ValidatedConfig& cfg, const SimulationOptions& opts);

enum class SweepParameter { Tau, D, F0, Sigma, V0 };

std::string_view to_string(SweepParameter p);
/// Throws std::invalid_argument listing the valid names.
SweepParameter parse_sweep_parameter(std::string_view name);

struct SweepAxis {
  SweepParameter parameter{SweepParameter::Tau};
  std::vector<double> values;
};

/// `base` with one parameter replaced. Throws std::invalid_argument when the
/// field variant has no such parameter (F0 of a Zero field, sigma of a band).
SimConfig substitute(const SimConfig& base, SweepParameter parameter, double value);

struct SweepOptions {
  double bin_width{0.025};
  double origin{0.0};
  double smoothing_bins{1.0};
  unsigned workers{1};
};

struct SweepEntry {
  double value{0.0};
  bool ok{false};
  std::string error;
  std::optional<Histogram> histogram;
  Contrast contrast{};
  std::uint64_t failures{0};
  bool black_region{false};
  double wall_seconds{0.0};
};

struct SweepResult {
  SweepAxis axis;
  std::vector<SweepEntry> entries;
};

/// Throws std::invalid_argument when the axis values are not strictly monotone.
/// Per-value failures are recorded in the entry and the sweep continues.
SweepResult run_sweep(const SimConfig& base, const SweepAxis& axis, const SweepOptions& opts = {});

struct ConvergenceRow {
  double alpha{0.0};
  double tau{0.0};
  double y_discrete{0.0};
  double y_classical{0.0};
  double error{0.0};
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  /// Least-squares slope of log(error) against log(tau), one per alpha;
  /// NaN when fewer than two errors are nonzero.
  std::vector<double> slopes;
};

/// Discrete impacts of point-source particles at each (alpha, tau) against
/// classical_reference. GaussianBand uses min(tau_values) / 1024 as reference step.
ConvergenceStudy convergence_study(const SimConfig& base, const std::vector<double>& alphas,
                                   const std::vector<double>& tau_values);

/// Slope of the least-squares line through (log x, log y), skipping non-positive y.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tqs
