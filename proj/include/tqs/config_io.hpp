#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tqs/model.hpp"

namespace tqs {

/// Output settings that travel with a config file but are not part of the physics.
struct RunSettings {
  double bin_width{0.025};
  double bin_origin{0.0};
  double smoothing_bins{1.0};
  std::size_t image_width{480};
  std::size_t image_height{160};
  std::size_t histogram_image_height{100};

  bool operator==(const RunSettings&) const = default;
};

struct ConfigFile {
  SimConfig sim{reference_config()};
  RunSettings run{};

  bool operator==(const ConfigFile&) const = default;
};

class ConfigParseError : public std::runtime_error {
 public:
  ConfigParseError(std::string source, std::size_t line, std::string message);
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Flat `key = value` text, `#` starts a comment. Keys not given keep the
/// reference defaults. Angles are in degrees (or radians with a `_rad` suffix).
/// Keys under `run.` are manifest metadata and are ignored.
ConfigFile parse_config(std::string_view text, std::string_view source = "<config>");
ConfigFile load_config(const std::filesystem::path& path);

/// Inverse of parse_config: parse_config(format_config(c)) == c.
std::string format_config(const ConfigFile& cfg);

/// Shortest decimal text that reads back as exactly `v`.
std::string format_real(double v);

}  // namespace tqs
