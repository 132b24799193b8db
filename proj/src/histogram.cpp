#include "tqs/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tqs {

Histogram::Histogram(double base, double bin_width, std::int64_t first_bin, std::size_t bins)
    : base_(base), width_(bin_width), first_(first_bin), counts_(bins, 0) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) throw std::invalid_argument("bin width must be > 0");
}

std::uint64_t Histogram::total() const { return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0}); }

std::uint64_t Histogram::count(std::int64_t bin) const {
  if (bin < first_ || bin >= first_ + static_cast<std::int64_t>(counts_.size())) return 0;
  return counts_[static_cast<std::size_t>(bin - first_)];
}

std::int64_t Histogram::bin_of(double y) const {
  return static_cast<std::int64_t>(std::floor((y - base_) / width_));
}

void Histogram::ensure(std::int64_t lo, std::int64_t hi) {
  if (counts_.empty()) {
    first_ = lo;
    counts_.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    return;
  }
  const std::int64_t last = first_ + static_cast<std::int64_t>(counts_.size()) - 1;
  if (lo < first_) {
    counts_.insert(counts_.begin(), static_cast<std::size_t>(first_ - lo), 0);
    first_ = lo;
  }
  if (hi > last) counts_.resize(counts_.size() + static_cast<std::size_t>(hi - last), 0);
}

void Histogram::add(double y, std::uint64_t weight) {
  if (!std::isfinite(y)) throw std::invalid_argument("cannot bin a non-finite value");
  const auto bin = bin_of(y);
  ensure(bin, bin);
  counts_[static_cast<std::size_t>(bin - first_)] += weight;
}

void Histogram::merge(const Histogram& other) {
  if (other.base_ != base_ || other.width_ != width_)
    throw std::invalid_argument("merging histograms with different bin lattices");
  if (other.counts_.empty()) return;
  ensure(other.first_, other.first_ + static_cast<std::int64_t>(other.counts_.size()) - 1);
  const auto offset = static_cast<std::size_t>(other.first_ - first_);
  for (std::size_t i = 0; i < other.counts_.size(); ++i) counts_[offset + i] += other.counts_[i];
}

double Profile::total() const { return std::accumulate(values.begin(), values.end(), 0.0); }

Histogram accumulate(std::span<const ImpactRecord> impacts, double bin_width, double origin, std::size_t bins) {
  Histogram h(origin, bin_width, 0, bins);
  for (const auto& r : impacts) h.add(r.y_impact);
  return h;
}

Profile to_profile(const Histogram& h) {
  Profile p{h.origin(), h.bin_width(), {}};
  p.values.assign(h.counts().begin(), h.counts().end());
  return p;
}

namespace {

std::vector<double> gaussian_kernel(double sigma_bins) {
  const auto half = static_cast<std::size_t>(std::floor(4.0 * sigma_bins));
  std::vector<double> k(2 * half + 1);
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double x = static_cast<double>(i) - static_cast<double>(half);
    k[i] = std::exp(-0.5 * x * x / (sigma_bins * sigma_bins));
  }
  const double norm = std::accumulate(k.begin(), k.end(), 0.0);
  for (auto& w : k) w /= norm;
  return k;
}

}  // namespace

Profile convolve_gaussian(const Profile& p, double sigma_bins) {
  if (!(sigma_bins > 0.0)) throw std::invalid_argument("sigma_bins must be > 0");
  const auto kernel = gaussian_kernel(sigma_bins);
  const std::size_t half = kernel.size() / 2;
  Profile out{p.origin - static_cast<double>(half) * p.bin_width, p.bin_width, {}};
  if (p.values.empty()) return out;
  out.values.assign(p.values.size() + 2 * half, 0.0);
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    const double v = p.values[i];
    if (v == 0.0) continue;
    for (std::size_t k = 0; k < kernel.size(); ++k) out.values[i + k] += v * kernel[k];
  }
  return out;
}

Profile convolve_gaussian(const Histogram& h, double sigma_bins) { return convolve_gaussian(to_profile(h), sigma_bins); }

Contrast contrast(const Profile& p) {
  const auto& v = p.values;
  if (v.empty()) throw EmptyHistogram("contrast of an empty histogram");
  const double global = *std::max_element(v.begin(), v.end());
  if (!(global > 0.0)) throw EmptyHistogram("contrast of a histogram without counts");

  Contrast c;
  const double floor = kMaximaFloor * global;
  std::size_t i = 1;
  while (i + 1 < v.size()) {
    if (!(v[i] > v[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
    if (j + 1 < v.size() && v[j + 1] < v[i] && v[i] > floor) c.maxima.push_back(i);
    i = j + 1;
  }
  c.n_maxima = static_cast<int>(c.maxima.size());
  if (c.maxima.size() < 2) return c;

  double peak = 0.0;
  for (auto m : c.maxima) peak = std::max(peak, v[m]);
  double valley = peak;
  for (std::size_t m = 0; m + 1 < c.maxima.size(); ++m) {
    const auto first = v.begin() + static_cast<std::ptrdiff_t>(c.maxima[m]);
    const auto last = v.begin() + static_cast<std::ptrdiff_t>(c.maxima[m + 1]) + 1;
    const auto it = std::min_element(first, last);
    c.minima.push_back(static_cast<std::size_t>(it - v.begin()));
    valley = std::min(valley, *it);
  }
  c.peak_to_valley = valley > 0.0 ? peak / valley : std::numeric_limits<double>::infinity();
  return c;
}

Contrast contrast(const Histogram& h, double smoothing_bins) {
  if (h.total() == 0) throw EmptyHistogram("contrast of an empty histogram");
  return contrast(smoothing_bins > 0.0 ? convolve_gaussian(h, smoothing_bins) : to_profile(h));
}

DensityGrid::DensityGrid(const Geometry& geometry, std::size_t width, std::size_t height)
    : geometry_(geometry), width_(width), height_(height), cells_(width * height, 0) {
  if (width < 2 || height < 2) throw std::invalid_argument("density grid needs at least 2x2 cells");
}

std::uint64_t DensityGrid::total() const { return std::accumulate(cells_.begin(), cells_.end(), std::uint64_t{0}); }

void DensityGrid::add(const Vec2& p) {
  const double x0 = -geometry_.d;
  const double x1 = geometry_.l;
  const double R = geometry_.R;
  if (!(p.x >= x0 && p.x <= x1 && p.y >= -R && p.y <= R)) {
    ++dropped_;
    return;
  }
  auto col = static_cast<std::size_t>((p.x - x0) / (x1 - x0) * static_cast<double>(width_));
  auto row = static_cast<std::size_t>((R - p.y) / (2.0 * R) * static_cast<double>(height_));
  col = std::min(col, width_ - 1);
  row = std::min(row, height_ - 1);
  ++cells_[row * width_ + col];
}

void DensityGrid::add(const Trajectory& t) {
  for (const auto& p : t.points) add(p);
}

void DensityGrid::merge(const DensityGrid& other) {
  if (other.width_ != width_ || other.height_ != height_ || !(other.geometry_ == geometry_))
    throw std::invalid_argument("merging density grids with different frames");
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] += other.cells_[i];
  dropped_ += other.dropped_;
}

DensityGrid density_grid(std::span<const Trajectory> trajectories, const Geometry& geometry, std::size_t width,
                         std::size_t height) {
  DensityGrid g(geometry, width, height);
  for (const auto& t : trajectories) g.add(t);
  return g;
}

}  // namespace tqs
