#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "tqs/dynamics.hpp"
#include "tqs/model.hpp"

namespace tqs {

/// Fixed-width integer histogram. Bin k covers [base + k w, base + (k + 1) w);
/// the stored range is first_bin .. first_bin + counts.size() - 1.
/// Keeping the base separate from the first stored bin makes merges exact.
class Histogram {
 public:
  Histogram(double base, double bin_width, std::int64_t first_bin = 0, std::size_t bins = 0);

  [[nodiscard]] double base() const { return base_; }
  [[nodiscard]] double bin_width() const { return width_; }
  [[nodiscard]] std::int64_t first_bin() const { return first_; }
  /// Left edge of the first stored bin.
  [[nodiscard]] double origin() const { return edge(first_); }
  [[nodiscard]] double edge(std::int64_t bin) const { return base_ + static_cast<double>(bin) * width_; }
  [[nodiscard]] const std::vector<std::uint64_t>& counts() const { return counts_; }
  [[nodiscard]] std::size_t size() const { return counts_.size(); }
  [[nodiscard]] std::uint64_t total() const;
  /// Count in absolute bin `bin`; zero outside the stored range.
  [[nodiscard]] std::uint64_t count(std::int64_t bin) const;

  [[nodiscard]] std::int64_t bin_of(double y) const;
  /// Adds y, growing the stored range as needed.
  void add(double y, std::uint64_t weight = 1);
  /// Element-wise sum. Both histograms must share base and bin width.
  void merge(const Histogram& other);

  bool operator==(const Histogram&) const = default;

 private:
  void ensure(std::int64_t lo, std::int64_t hi);

  double base_;
  double width_;
  std::int64_t first_;
  std::vector<std::uint64_t> counts_;
};

/// Real-valued profile on the same kind of bin lattice (smoothed histograms).
struct Profile {
  double origin{0.0};
  double bin_width{1.0};
  std::vector<double> values;

  [[nodiscard]] double total() const;
};

/// Histogram of y_impact with bin index floor((y - origin) / bin_width).
/// Impacts outside the initial `bins` range extend it. Order-independent.
Histogram accumulate(std::span<const ImpactRecord> impacts, double bin_width, double origin = 0.0,
                     std::size_t bins = 0);

/// Discrete convolution with a normalized Gaussian truncated at +-4 sigma.
/// The output range is widened by the kernel half-width so no mass is lost.
Profile convolve_gaussian(const Histogram& h, double sigma_bins);
Profile convolve_gaussian(const Profile& p, double sigma_bins);

Profile to_profile(const Histogram& h);

struct Contrast {
  int n_maxima{0};
  /// Largest counted maximum over the smallest value between the outermost
  /// counted maxima; infinity when that valley is empty, 1 with fewer than two maxima.
  double peak_to_valley{1.0};
  std::vector<std::size_t> maxima;  ///< profile indices of counted maxima
  std::vector<std::size_t> minima;  ///< profile indices of the valley between consecutive maxima
};

class EmptyHistogram : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fraction of the global maximum below which local maxima are ignored.
inline constexpr double kMaximaFloor = 0.05;

/// Strict interior local maxima (a plateau counts once, at its left edge)
/// above kMaximaFloor of the global maximum.
Contrast contrast(const Profile& p);

/// Smooths with a Gaussian of `smoothing_bins` (no smoothing when 0) and
/// evaluates contrast. Throws EmptyHistogram when there are no counts.
Contrast contrast(const Histogram& h, double smoothing_bins = 1.0);

/// Row-major counts of trajectory points over [-d, l] x [-R, R]; row 0 is +R.
class DensityGrid {
 public:
  DensityGrid(const Geometry& geometry, std::size_t width, std::size_t height);

  [[nodiscard]] std::size_t width() const { return width_; }
  [[nodiscard]] std::size_t height() const { return height_; }
  [[nodiscard]] const std::vector<std::uint64_t>& cells() const { return cells_; }
  [[nodiscard]] std::uint64_t at(std::size_t row, std::size_t col) const { return cells_[row * width_ + col]; }
  [[nodiscard]] std::uint64_t dropped() const { return dropped_; }
  [[nodiscard]] std::uint64_t total() const;
  [[nodiscard]] const Geometry& geometry() const { return geometry_; }

  void add(const Vec2& p);
  void add(const Trajectory& t);
  void merge(const DensityGrid& other);

  bool operator==(const DensityGrid&) const = default;

 private:
  Geometry geometry_;
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint64_t> cells_;
  std::uint64_t dropped_{0};
};

/// Rasterizes every trajectory point; points outside the frame are counted in dropped().
DensityGrid density_grid(std::span<const Trajectory> trajectories, const Geometry& geometry, std::size_t width,
                         std::size_t height);

}  // namespace tqs
