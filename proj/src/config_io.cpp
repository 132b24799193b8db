#include "tqs/config_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "tqs/emission.hpp"

namespace tqs {

ConfigParseError::ConfigParseError(std::string source, std::size_t line, std::string message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  std::size_t line;
  bool used{false};
};

class Reader {
 public:
  Reader(std::string source, std::map<std::string, Entry> entries)
      : source_(std::move(source)), entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.contains(key); }

  std::optional<std::string> text(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    it->second.used = true;
    return it->second.value;
  }

  std::optional<double> real(const std::string& key) {
    auto t = text(key);
    if (!t) return std::nullopt;
    double v = 0.0;
    const auto* first = t->data();
    const auto* last = first + t->size();
    if (!t->empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) fail(key, "expected a real number, got '" + *t + "'");
    return v;
  }

  std::optional<std::uint64_t> integer(const std::string& key) {
    auto t = text(key);
    if (!t) return std::nullopt;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t->data(), t->data() + t->size(), v);
    if (ec != std::errc{} || ptr != t->data() + t->size())
      fail(key, "expected a non-negative integer, got '" + *t + "'");
    return v;
  }

  /// Angle given in degrees under `key` or radians under `key_rad`.
  std::optional<double> angle(const std::string& key) {
    const bool deg = has(key);
    const bool rad = has(key + "_rad");
    if (deg && rad) fail(key, "give either " + key + " or " + key + "_rad, not both");
    if (deg) return deg_to_rad(*real(key));
    if (rad) return real(key + "_rad");
    return std::nullopt;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    auto it = entries_.find(key);
    throw ConfigParseError(source_, it == entries_.end() ? 0 : it->second.line, message);
  }

  void reject_unused() const {
    for (const auto& [key, e] : entries_)
      if (!e.used && !key.starts_with("run.")) throw ConfigParseError(source_, e.line, "unknown key '" + key + "'");
  }

 private:
  std::string source_;
  std::map<std::string, Entry> entries_;
};

emission::AngleSpec read_angles(Reader& r, const std::string& kind, const emission::AngleSpec& fallback) {
  const auto lo = r.angle("emission.alpha_min");
  const auto hi = r.angle("emission.alpha_max");
  if (kind == "grid") {
    emission::AngleGrid g = std::holds_alternative<emission::AngleGrid>(fallback)
                                ? std::get<emission::AngleGrid>(fallback)
                                : emission::AngleGrid{};
    if (lo) g.alpha_min = *lo;
    if (hi) g.alpha_max = *hi;
    if (auto s = r.angle("emission.alpha_step")) g.alpha_step = *s;
    return g;
  }
  if (kind == "random") {
    emission::AngleRandom a;
    if (const auto* g = std::get_if<emission::AngleGrid>(&fallback)) {
      a.alpha_min = g->alpha_min;
      a.alpha_max = g->alpha_max;
      if (g->alpha_step > 0.0 && g->alpha_max > g->alpha_min) a.count = grid_size(*g);
    }
    if (lo) a.alpha_min = *lo;
    if (hi) a.alpha_max = *hi;
    if (auto c = r.integer("emission.count")) a.count = *c;
    if (auto s = r.integer("emission.seed")) a.seed = *s;
    return a;
  }
  r.fail("emission.angles", "unknown angle kind '" + kind + "' (expected grid or random)");
}

}  // namespace

ConfigFile parse_config(std::string_view text, std::string_view source) {
  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigParseError(std::string(source), line_no, "expected 'key = value'");
    const auto key = std::string(trim(line.substr(0, eq)));
    const auto value = std::string(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigParseError(std::string(source), line_no, "empty key");
    if (entries.contains(key)) throw ConfigParseError(std::string(source), line_no, "duplicate key '" + key + "'");
    entries.emplace(key, Entry{value, line_no});
  }

  Reader r(std::string(source), std::move(entries));
  ConfigFile out;
  SimConfig& c = out.sim;

  if (auto v = r.real("geometry.d")) c.geometry.d = *v;
  if (auto v = r.real("geometry.l")) c.geometry.l = *v;
  if (auto v = r.real("geometry.R")) c.geometry.R = *v;
  if (auto v = r.real("tau")) c.tau = *v;
  if (auto v = r.real("v0")) c.v0 = *v;
  if (auto v = r.real("mass")) c.mass = *v;
  if (auto t = r.text("max_steps"); t && *t != "auto") c.max_steps = *r.integer("max_steps");
  if (auto t = r.text("slit_half_width"); t && *t != "none") c.slit_half_width = *r.real("slit_half_width");

  // F0 defaults to 2 pi q with q = -1.
  std::optional<double> F0 = r.real("field.F0");
  if (auto q = r.real("field.q")) {
    if (F0) r.fail("field.q", "give either field.F0 or field.q, not both");
    F0 = 2.0 * std::numbers::pi * *q;
  }
  const std::string field_kind = r.text("field.kind").value_or("band");
  if (field_kind == "zero") {
    c.field = field::Zero{};
  } else if (field_kind == "half_plane") {
    c.field = field::HalfPlaneConstant{F0.value_or(field::HalfPlaneConstant{}.F0)};
  } else if (field_kind == "band") {
    field::BandConstant b;
    if (F0) b.F0 = *F0;
    if (auto v = r.real("field.delta")) b.delta = *v;
    c.field = b;
  } else if (field_kind == "gaussian") {
    field::GaussianBand g;
    if (F0) g.F0 = *F0;
    if (auto v = r.real("field.sigma")) g.sigma = *v;
    c.field = g;
  } else {
    r.fail("field.kind", "unknown field kind '" + field_kind + "' (expected zero, half_plane, band, gaussian)");
  }

  const std::string emission_kind = r.text("emission.kind").value_or("grid");
  const emission::AngleSpec default_angles = std::get<emission::AngleGrid>(reference_config().emission);
  if (emission_kind == "grid" || emission_kind == "random") {
    c.emission = std::visit([](const auto& a) -> EmissionSpec { return a; },
                            read_angles(r, emission_kind, default_angles));
  } else if (emission_kind == "gaussian_line") {
    emission::GaussianLine g;
    g.angles = read_angles(r, r.text("emission.angles").value_or("grid"), default_angles);
    if (auto v = r.real("emission.sigma_src")) g.sigma_src = *v;
    if (auto v = r.integer("emission.source_seed")) g.seed = *v;
    c.emission = g;
  } else {
    r.fail("emission.kind", "unknown emission kind '" + emission_kind + "' (expected grid, random, gaussian_line)");
  }

  if (auto v = r.real("histogram.bin_width")) out.run.bin_width = *v;
  if (auto v = r.real("histogram.origin")) out.run.bin_origin = *v;
  if (auto v = r.real("histogram.smoothing_bins")) out.run.smoothing_bins = *v;
  if (auto v = r.integer("image.width")) out.run.image_width = *v;
  if (auto v = r.integer("image.height")) out.run.image_height = *v;
  if (auto v = r.integer("image.histogram_height")) out.run.histogram_image_height = *v;

  r.reject_unused();
  return out;
}

ConfigFile load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigParseError(path.string(), 0, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

namespace {

void put(std::ostream& os, std::string_view key, const std::string& value) { os << key << " = " << value << '\n'; }

// Degrees when they read back to the identical radian value, radians otherwise.
void put_angle(std::ostream& os, const std::string& key, double rad) {
  const std::string deg = format_real(rad_to_deg(rad));
  double back = 0.0;
  std::from_chars(deg.data(), deg.data() + deg.size(), back);
  if (deg_to_rad(back) == rad) put(os, key, deg);
  else put(os, key + "_rad", format_real(rad));
}

void put_angles(std::ostream& os, const emission::AngleSpec& spec) {
  if (const auto* g = std::get_if<emission::AngleGrid>(&spec)) {
    put_angle(os, "emission.alpha_min", g->alpha_min);
    put_angle(os, "emission.alpha_max", g->alpha_max);
    put_angle(os, "emission.alpha_step", g->alpha_step);
  } else {
    const auto& a = std::get<emission::AngleRandom>(spec);
    put_angle(os, "emission.alpha_min", a.alpha_min);
    put_angle(os, "emission.alpha_max", a.alpha_max);
    put(os, "emission.count", std::to_string(a.count));
    put(os, "emission.seed", std::to_string(a.seed));
  }
}

}  // namespace

std::string format_config(const ConfigFile& cfg) {
  const auto& c = cfg.sim;
  std::ostringstream os;
  os << "# geometry (length units)\n";
  put(os, "geometry.d", format_real(c.geometry.d));
  put(os, "geometry.l", format_real(c.geometry.l));
  put(os, "geometry.R", format_real(c.geometry.R));
  os << "\n# dynamics\n";
  put(os, "tau", format_real(c.tau));
  put(os, "v0", format_real(c.v0));
  put(os, "mass", format_real(c.mass));
  put(os, "max_steps", c.max_steps ? std::to_string(*c.max_steps) : "auto");
  put(os, "slit_half_width", c.slit_half_width ? format_real(*c.slit_half_width) : "none");

  os << "\n# force field\n";
  std::visit(
      [&os](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, field::Zero>) {
          put(os, "field.kind", "zero");
        } else if constexpr (std::is_same_v<T, field::HalfPlaneConstant>) {
          put(os, "field.kind", "half_plane");
          put(os, "field.F0", format_real(f.F0));
        } else if constexpr (std::is_same_v<T, field::BandConstant>) {
          put(os, "field.kind", "band");
          put(os, "field.F0", format_real(f.F0));
          put(os, "field.delta", format_real(f.delta));
        } else {
          put(os, "field.kind", "gaussian");
          put(os, "field.F0", format_real(f.F0));
          put(os, "field.sigma", format_real(f.sigma));
        }
      },
      c.field);

  os << "\n# emission (angles in degrees)\n";
  std::visit(
      [&os](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, emission::AngleGrid>) {
          put(os, "emission.kind", "grid");
          put_angles(os, e);
        } else if constexpr (std::is_same_v<T, emission::AngleRandom>) {
          put(os, "emission.kind", "random");
          put_angles(os, e);
        } else {
          put(os, "emission.kind", "gaussian_line");
          put(os, "emission.angles", std::holds_alternative<emission::AngleGrid>(e.angles) ? "grid" : "random");
          put_angles(os, e.angles);
          put(os, "emission.sigma_src", format_real(e.sigma_src));
          put(os, "emission.source_seed", std::to_string(e.seed));
        }
      },
      c.emission);

  os << "\n# outputs\n";
  put(os, "histogram.bin_width", format_real(cfg.run.bin_width));
  put(os, "histogram.origin", format_real(cfg.run.bin_origin));
  put(os, "histogram.smoothing_bins", format_real(cfg.run.smoothing_bins));
  put(os, "image.width", std::to_string(cfg.run.image_width));
  put(os, "image.height", std::to_string(cfg.run.image_height));
  put(os, "image.histogram_height", std::to_string(cfg.run.histogram_image_height));
  return os.str();
}

}  // namespace tqs
