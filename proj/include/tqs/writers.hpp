#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "tqs/dynamics.hpp"
#include "tqs/histogram.hpp"
#include "tqs/sweep.hpp"

namespace tqs {

/// 8-bit grayscale raster, row-major, row 0 at the top.
struct Image {
  std::size_t width{0};
  std::size_t height{0};
  std::vector<std::uint8_t> pixels;
};

/// Columns: emission_index,y_impact,steps_taken
void write_impacts_csv(std::ostream& os, std::span<const ImpactRecord> impacts);
/// Columns: bin_left,bin_right,count
void write_histogram_csv(std::ostream& os, const Histogram& h);
/// Columns: value,n_maxima,peak_to_valley,failures (+ black_region,error)
void write_sweep_summary_csv(std::ostream& os, const SweepResult& sweep);

/// Plain "P2" PGM, maxval 255, lines at most 70 characters.
void write_pgm(std::ostream& os, const Image& img);

/// One column per bin, brightness linear in count, replicated over `height` rows.
Image histogram_image(const Histogram& h, std::size_t height);
/// Brightness log(1 + count) / log(1 + max); row 0 is y = +R.
Image density_image(const DensityGrid& grid);

/// Writes `contents` to a sibling temp file and renames it into place.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace tqs
