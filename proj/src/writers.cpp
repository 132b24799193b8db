#include "tqs/writers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "tqs/config_io.hpp"

namespace tqs {

void write_impacts_csv(std::ostream& os, std::span<const ImpactRecord> impacts) {
  os << "emission_index,y_impact,steps_taken\n";
  for (const auto& r : impacts) os << r.emission_index << ',' << format_real(r.y_impact) << ',' << r.steps_taken << '\n';
}

void write_histogram_csv(std::ostream& os, const Histogram& h) {
  os << "bin_left,bin_right,count\n";
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto bin = h.first_bin() + static_cast<std::int64_t>(i);
    os << format_real(h.edge(bin)) << ',' << format_real(h.edge(bin + 1)) << ',' << h.counts()[i] << '\n';
  }
}

void write_sweep_summary_csv(std::ostream& os, const SweepResult& sweep) {
  os << "value,n_maxima,peak_to_valley,failures,black_region,error\n";
  for (const auto& e : sweep.entries) {
    os << format_real(e.value) << ',';
    if (e.ok) os << e.contrast.n_maxima << ',' << format_real(e.contrast.peak_to_valley) << ',' << e.failures;
    else os << ",,";
    os << ',' << (e.black_region ? "true" : "false") << ',';
    std::string msg = e.error;
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::replace(msg.begin(), msg.end(), ',', ';');
    os << msg << '\n';
  }
}

void write_pgm(std::ostream& os, const Image& img) {
  if (img.pixels.size() != img.width * img.height) throw std::invalid_argument("image size mismatch");
  os << "P2\n" << img.width << ' ' << img.height << "\n255\n";
  for (std::size_t row = 0; row < img.height; ++row) {
    std::size_t line = 0;
    for (std::size_t col = 0; col < img.width; ++col) {
      const std::string v = std::to_string(img.pixels[row * img.width + col]);
      if (line > 0 && line + 1 + v.size() > 70) {
        os << '\n';
        line = 0;
      }
      if (line > 0) {
        os << ' ';
        ++line;
      }
      os << v;
      line += v.size();
    }
    os << '\n';
  }
}

Image histogram_image(const Histogram& h, std::size_t height) {
  Image img{h.size(), height, {}};
  img.pixels.resize(img.width * img.height, 0);
  const auto& c = h.counts();
  const std::uint64_t peak = c.empty() ? 0 : *std::max_element(c.begin(), c.end());
  for (std::size_t col = 0; col < img.width; ++col) {
    const auto v = peak == 0 ? 0
                             : static_cast<std::uint8_t>(std::lround(255.0 * static_cast<double>(c[col]) /
                                                                     static_cast<double>(peak)));
    for (std::size_t row = 0; row < height; ++row) img.pixels[row * img.width + col] = v;
  }
  return img;
}

Image density_image(const DensityGrid& grid) {
  Image img{grid.width(), grid.height(), {}};
  const auto& cells = grid.cells();
  const std::uint64_t peak = *std::max_element(cells.begin(), cells.end());
  const double norm = std::log1p(static_cast<double>(peak));
  img.pixels.reserve(cells.size());
  for (auto c : cells)
    img.pixels.push_back(peak == 0 ? 0
                                   : static_cast<std::uint8_t>(
                                         std::lround(255.0 * std::log1p(static_cast<double>(c)) / norm)));
  return img;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace tqs
