// Acceptance checks A1..A8. Prints one PASS/FAIL line per criterion.
// Usage: tqs_acceptance [A1 ... A8]   (no arguments runs all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "listing_oracle.hpp"
#include "tqs/analytics.hpp"
#include "tqs/cli.hpp"
#include "tqs/config_io.hpp"
#include "tqs/sweep.hpp"

using namespace tqs;
namespace fs = std::filesystem;

namespace {

// Pinned thresholds.
constexpr double kA1MaxSeconds = 10.0;
constexpr int kA1MinMaxima = 5;
constexpr double kA1MinPeakToValley = 2.0;
constexpr double kA1OracleTol = 1e-9;
constexpr double kA2RelTol = 1e-12;
constexpr int kA2Draws = 10'000;
constexpr int kA3Levels = 7;
constexpr double kA3MaxSeconds = 300.0;
constexpr int kA3MaxSmoothing = 40;
constexpr int kA4IMax = 3;
constexpr double kA4Tol = 0.025;
constexpr double kA5Ratio = 0.5;
constexpr int kA5CentralBins = 5;
constexpr int kA6Levels = 6;
constexpr double kA6SlopeLo = 0.8;
constexpr double kA6SlopeHi = 1.2;
constexpr double kA8Tol = 1e-9;

const fs::path kConfigs{TQS_CONFIG_DIR};

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(static_cast<double>(v[i]));
  return s;
}

SimConfig reference() { return load_config(kConfigs / "reference.cfg").sim; }

Histogram reference_histogram(const SimConfig& sim, double origin = 0.0) {
  SimulationOptions o;
  o.bin_width = 0.025;
  o.origin = origin;
  return simulate(validate_config(sim), o).histogram;
}

Outcome a1() {
  const auto file = load_config(kConfigs / "reference.cfg");
  const auto cfg = validate_config(file.sim);
  SimulationOptions o;
  o.bin_width = file.run.bin_width;
  const auto t0 = std::chrono::steady_clock::now();
  const auto run = simulate(cfg, o);
  const double wall = seconds_since(t0);
  const auto c = contrast(run.histogram, 1.0);

  // Same statistic on the transcribed reference program's impacts.
  const auto table = listing::sweep_table();
  Histogram ref(0.0, file.run.bin_width);
  double worst = 0.0;
  for (std::size_t k = 0; k < table.size(); ++k) {
    ref.add(table[k]);
    if (k < run.batch.impacts.size()) worst = std::max(worst, std::abs(table[k] - run.batch.impacts[k].y_impact));
  }
  const auto rc = contrast(ref, 1.0);

  const bool pass = run.batch.impacts.size() == 9801 && wall < kA1MaxSeconds && c.n_maxima >= kA1MinMaxima &&
                    c.peak_to_valley >= kA1MinPeakToValley && worst <= kA1OracleTol;
  return {pass, "completed=" + std::to_string(run.batch.impacts.size()) + " wall=" + fmt(wall) +
                    "s n_maxima=" + std::to_string(c.n_maxima) + " peak_to_valley=" + fmt(c.peak_to_valley) +
                    " reference n_maxima=" + std::to_string(rc.n_maxima) + " peak_to_valley=" +
                    fmt(rc.peak_to_valley) + " max|y-y_ref|=" + fmt(worst)};
}

Outcome a2() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> bd(0.1, 20.0), vd(0.1, 50.0), td(1e-4, 0.1);
  std::uniform_int_distribution<int> id(1, 10);
  double worst = 0.0;
  for (int k = 0; k < kA2Draws; ++k) {
    const double b = bd(rng), v = vd(rng), t = td(rng);
    const int i_max = id(rng);
    const auto o = deviation_origins(b, v, t, i_max);
    for (int i = 1; i <= i_max; ++i) {
      const double r = v * t * static_cast<double>(o.n0 + static_cast<std::uint64_t>(i));
      worst = std::max(worst, std::abs(o.a(i) * o.a(i) + b * b - r * r) / (r * r));
    }
  }
  const auto o = deviation_origins(5.0, 12.0, 0.025, 2);
  const double e1 = std::abs(o.a(1) - std::sqrt(1.01)) / std::sqrt(1.01);
  const double e2 = std::abs(o.a(2) - std::sqrt(4.16)) / std::sqrt(4.16);
  const bool pass = worst <= kA2RelTol && o.n0 == 16 && e1 <= kA2RelTol && e2 <= kA2RelTol;
  return {pass, "identity max rel=" + fmt(worst) + " n0=" + std::to_string(o.n0) + " a1=" + fmt(o.a(1)) +
                    " (rel " + fmt(e1) + ") a2=" + fmt(o.a(2)) + " (rel " + fmt(e2) + ")"};
}

// Smallest smoothing width at which the continuous-time histogram of the same
// angle grid is unimodal: the coarsest scale the grid cannot resolve.
int classical_smoothing(const SimConfig& sim) {
  const auto cfg = validate_config(sim);
  const EmissionStream stream(cfg);
  Histogram h(0.0, 0.025);
  for (std::uint64_t k = 0; k < stream.total(); ++k)
    h.add(classical_reference(stream.emit(k), sim.field, sim.geometry, sim.mass));
  for (int s = 1; s <= kA3MaxSmoothing; ++s)
    if (contrast(h, s).n_maxima <= 1) return s;
  return -1;
}

Outcome a3() {
  const auto base = reference();
  const auto t0 = std::chrono::steady_clock::now();
  const int sigma = classical_smoothing(base);
  if (sigma < 0) return {false, "classical histogram never unimodal up to smoothing " + std::to_string(kA3MaxSmoothing)};

  std::vector<double> taus;
  for (int k = 0; k < kA3Levels; ++k) taus.push_back(0.025 / std::pow(2.0, k));
  std::vector<int> n, n1;
  for (double tau : taus) {
    const auto h = reference_histogram(substitute(base, SweepParameter::Tau, tau));
    n.push_back(contrast(h, sigma).n_maxima);
    n1.push_back(contrast(h, 1.0).n_maxima);
  }
  const double wall = seconds_since(t0);

  // Non-increasing overall: the sequence never rises again after its peak,
  // ends at its minimum, and that minimum is at most one.
  const auto peak = std::max_element(n.begin(), n.end());
  const bool tail_monotone = std::is_sorted(peak, n.end(), std::greater<>());
  const bool ends_low = n.back() <= 1 && n.back() == *std::min_element(n.begin(), n.end());
  const bool pass = tail_monotone && ends_low && wall < kA3MaxSeconds;
  return {pass, "smoothing=" + std::to_string(sigma) + " n_maxima=[" + join(n) + "] (1-bin: [" + join(n1) +
                    "]) wall=" + fmt(wall) + "s"};
}

// Interior local minima of a profile, a flat bottom counting at its center.
std::vector<double> local_minima(const Profile& p) {
  std::vector<double> out;
  const auto& v = p.values;
  std::size_t i = 1;
  while (i + 1 < v.size()) {
    if (!(v[i] < v[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
    if (j + 1 < v.size() && v[j + 1] > v[i]) {
      const double center = 0.5 * static_cast<double>(i + j) + 0.5;
      out.push_back(p.origin + center * p.bin_width);
    }
    i = j + 1;
  }
  return out;
}

Outcome a4() {
  const auto sim = reference();
  const auto smooth = convolve_gaussian(reference_histogram(sim), 1.0);
  const auto minima = local_minima(smooth);
  const auto predicted = predict_minima(validate_config(sim), kA4IMax);
  bool pass = !minima.empty();
  std::string detail;
  for (double y : predicted) {
    double best = std::numeric_limits<double>::infinity();
    for (double m : minima) best = std::min(best, std::abs(m - y));
    pass = pass && best <= kA4Tol;
    detail += (detail.empty() ? "" : " ") + fmt(y) + ":" + fmt(best);
  }
  return {pass, "y_pred:distance " + detail};
}

// Central depletion: mean of the 5 bins around y = 0 over the mean of the
// nearest local maximum on each side.
struct Depletion {
  double ratio;
  double centre;
  double flank;
};

Depletion depletion(const SimConfig& sim) {
  const double w = 0.025;
  const auto h = reference_histogram(sim, -0.5 * w);  // bin 0 is centred on the axis
  const auto p = convolve_gaussian(h, 1.0);
  const auto zero = static_cast<std::ptrdiff_t>(std::llround((0.0 - p.origin) / w - 0.5));
  const auto& v = p.values;
  const std::ptrdiff_t half = kA5CentralBins / 2;
  double centre = 0.0;
  for (auto k = zero - half; k <= zero + half; ++k) centre += v[static_cast<std::size_t>(k)];
  centre /= kA5CentralBins;
  auto is_peak = [&](std::ptrdiff_t k) {
    return v[static_cast<std::size_t>(k)] > v[static_cast<std::size_t>(k - 1)] &&
           v[static_cast<std::size_t>(k)] >= v[static_cast<std::size_t>(k + 1)];
  };
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  double left = 0.0, right = 0.0;
  for (auto k = zero - half - 1; k > 0; --k)
    if (is_peak(k)) {
      left = v[static_cast<std::size_t>(k)];
      break;
    }
  for (auto k = zero + half + 1; k + 1 < n; ++k)
    if (is_peak(k)) {
      right = v[static_cast<std::size_t>(k)];
      break;
    }
  const double flank = 0.5 * (left + right);
  return {flank > 0.0 ? centre / flank : std::numeric_limits<double>::infinity(), centre, flank};
}

Outcome a5() {
  auto black = load_config(kConfigs / "black_region.cfg").sim;
  auto plain = substitute(black, SweepParameter::D, 5.0);
  const auto b = depletion(black);
  const auto p = depletion(plain);
  const bool pass = b.ratio < kA5Ratio && p.ratio >= kA5Ratio;
  return {pass, "d=4.8 ratio=" + fmt(b.ratio) + " (centre " + fmt(b.centre) + ", flank " + fmt(b.flank) +
                    ") d=5 ratio=" + fmt(p.ratio) + " (centre " + fmt(p.centre) + ", flank " + fmt(p.flank) + ")"};
}

Outcome a6() {
  auto base = reference();
  base.field = field::BandConstant{};
  std::vector<double> taus;
  for (int k = 0; k < kA6Levels; ++k) taus.push_back(0.025 / std::pow(2.0, k));
  const std::vector<double> degs{5.0, 10.0, 20.0};
  std::vector<double> alphas;
  for (double d : degs) alphas.push_back(deg_to_rad(d));
  const auto study = convergence_study(base, alphas, taus);
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double s = study.slopes[i];
    pass = pass && s >= kA6SlopeLo && s <= kA6SlopeHi;
    std::vector<double> errs;
    for (const auto& r : study.rows)
      if (r.alpha == alphas[i]) errs.push_back(r.error);
    detail += (detail.empty() ? "" : " ") + fmt(degs[i]) + "deg slope=" + fmt(s) + " err=[" + join(errs) + "]";
  }
  return {pass, detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Manifest lines that record how the run was executed rather than what it produced.
std::string strip_execution(const std::string& manifest) {
  std::istringstream in(manifest);
  std::string out;
  for (std::string line; std::getline(in, line);)
    if (!line.starts_with("run.workers") && !line.starts_with("run.wall_seconds")) out += line + '\n';
  return out;
}

Outcome a7() {
  const auto cfg = validate_config(reference());
  const auto reference = run_batch(cfg, 1);
  bool batch_same = true;
  for (unsigned w : {2u, 8u}) batch_same = batch_same && run_batch(cfg, w) == reference;

  ::unsetenv("TQS_THREADS");
  const fs::path root = fs::temp_directory_path() / ("tqs-acceptance-a7-" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::ostringstream sink;
  bool files_same = true;
  std::vector<std::string> differing;
  for (const char* w : {"1", "2", "8"}) {
    const std::vector<std::string> args{"tqs", "simulate", "--config", (kConfigs / "reference.cfg").string(),
                                        "--out", (root / w).string(), "--threads", w};
    if (run_cli(args, sink, sink) != 0) return {false, "cmd_simulate failed with " + std::string(w) + " workers"};
  }
  for (const char* f : {"impacts.csv", "histogram.csv", "histogram.pgm", "density.pgm"})
    for (const char* w : {"2", "8"})
      if (slurp(root / "1" / f) != slurp(root / w / f)) {
        files_same = false;
        differing.push_back(std::string(f) + "@" + w);
      }
  bool manifest_same = true;
  for (const char* w : {"2", "8"})
    manifest_same = manifest_same && strip_execution(slurp(root / "1" / "manifest.cfg")) ==
                                         strip_execution(slurp(root / w / "manifest.cfg"));
  fs::remove_all(root);
  std::string diff;
  for (const auto& d : differing) diff += " " + d;
  return {batch_same && files_same && manifest_same,
          std::string("run_batch identical=") + (batch_same ? "yes" : "no") +
              " output files identical=" + (files_same ? "yes" : "no" + diff) +
              " manifest identical apart from run.workers/run.wall_seconds=" + (manifest_same ? "yes" : "no")};
}

Outcome a8() {
  // Zero field on the full grid.
  auto zero = reference();
  zero.field = field::Zero{};
  const auto zcfg = validate_config(zero);
  const EmissionStream zs(zcfg);
  double zero_err = 0.0;
  for (std::uint64_t k = 0; k < zs.total(); ++k) {
    const double y = propagate_to_detector(zs.emit(k), zcfg).y_impact;
    zero_err = std::max(zero_err, std::abs(y - 15.0 * std::tan(zs.angle(k))));
  }

  // Exact mirror symmetry for every field variant.
  std::uint64_t asym = 0, pairs = 0;
  for (FieldSpec f : {FieldSpec{field::Zero{}}, FieldSpec{field::HalfPlaneConstant{}},
                      FieldSpec{field::BandConstant{}}, FieldSpec{field::GaussianBand{}}}) {
    auto sim = reference();
    sim.field = f;
    const auto cfg = validate_config(sim);
    const EmissionStream s(cfg);
    for (std::uint64_t k = 0; k < s.total() / 2; ++k) {
      const auto up = try_propagate(s.emit(k), cfg);
      const auto down = try_propagate(s.emit(s.total() - 1 - k), cfg);
      ++pairs;
      if (up.reached != down.reached || (up.reached && up.impact.y_impact != -down.impact.y_impact)) ++asym;
    }
  }

  // Free-flight lattice points on circles of radius v0 tau k.
  double circle_err = 0.0;
  const auto cfg = validate_config(reference());
  const EmissionStream s(cfg);
  Trajectory t;
  for (std::uint64_t k = 0; k < s.total(); k += 7) {
    t.points.clear();
    trace(s.emit(k), cfg, k, t);
    for (std::size_t n = 1; n < t.points.size() && t.points[n].x < -0.5; ++n) {
      const double r = (t.points[n] - Vec2{-5.0, 0.0}).norm();
      const double expect = 0.3 * static_cast<double>(n);
      circle_err = std::max(circle_err, std::abs(r - expect) / expect);
    }
  }
  const bool pass = zero_err <= kA8Tol && asym == 0 && circle_err <= kA8Tol;
  return {pass, "zero-field max err=" + fmt(zero_err) + " mirror mismatches=" + std::to_string(asym) + "/" +
                    std::to_string(pairs) + " circle max rel err=" + fmt(circle_err)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<std::string, std::function<Outcome()>> criteria{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5}, {"A6", a6}, {"A7", a7}, {"A8", a8}};
  std::vector<std::string> selected;
  for (int i = 1; i < argc; ++i) selected.emplace_back(argv[i]);
  if (selected.empty())
    for (const auto& [name, fn] : criteria) selected.push_back(name);

  int failed = 0;
  for (const auto& name : selected) {
    const auto it = criteria.find(name);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %s\n", name.c_str());
      return 2;
    }
    Outcome o;
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s %s\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
