#include "tqs/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "tqs/analytics.hpp"
#include "tqs/dynamics.hpp"
#include "tqs/writers.hpp"

namespace tqs {

namespace fs = std::filesystem;

unsigned resolve_workers(std::optional<unsigned> requested) {
  if (const char* env = std::getenv("TQS_THREADS"); env && *env) {
    unsigned v = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0)
      throw std::invalid_argument("TQS_THREADS must be a positive integer");
    return v;
  }
  if (requested) return std::max(1u, *requested);
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string format_manifest(const RunManifest& m) {
  std::ostringstream os;
  os << format_config(m.config);
  os << "\n# run metadata\n";
  os << "run.tool_version = " << kToolVersion << '\n';
  os << "run.command = " << m.command << '\n';
  os << "run.workers = " << m.workers << '\n';
  os << "run.wall_seconds = " << format_real(m.wall_seconds) << '\n';
  os << "run.emitted = " << m.emitted << '\n';
  os << "run.completed = " << m.completed << '\n';
  os << "run.failures = " << m.failures << '\n';
  os << "run.failures.max_steps = " << m.failures_by_kind[0] << '\n';
  os << "run.failures.absorbed = " << m.failures_by_kind[1] << '\n';
  os << "run.failures.non_finite = " << m.failures_by_kind[2] << '\n';
  for (std::size_t i = 0; i < m.outputs.size(); ++i) os << "run.output." << i << " = " << m.outputs[i] << '\n';
  return os.str();
}

namespace {

ConfigFile load_or_default(const std::optional<fs::path>& path) {
  return path ? load_config(*path) : ConfigFile{};
}

void apply_seed(SimConfig& c, std::uint64_t seed) {
  std::visit(
      [seed](auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, emission::AngleRandom>) {
          e.seed = seed;
        } else if constexpr (std::is_same_v<T, emission::GaussianLine>) {
          e.seed = seed;
          if (auto* r = std::get_if<emission::AngleRandom>(&e.angles)) r->seed = seed;
        }
      },
      c.emission);
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

std::string render(auto&& writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

}  // namespace

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto file = load_or_default(args.config);
    if (args.bin_width) file.run.bin_width = *args.bin_width;
    if (args.seed) apply_seed(file.sim, *args.seed);
    const auto cfg = validate_config(file.sim);
    const unsigned workers = resolve_workers(args.threads);

    SimulationOptions opts;
    opts.bin_width = file.run.bin_width;
    opts.origin = file.run.bin_origin;
    opts.workers = workers;
    opts.grid_width = file.run.image_width;
    opts.grid_height = file.run.image_height;

    const auto start = std::chrono::steady_clock::now();
    const auto run = simulate(cfg, opts);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    // Render everything before touching the output directory.
    const std::string impacts = render([&](auto& os) { write_impacts_csv(os, run.batch.impacts); });
    const std::string hist = render([&](auto& os) { write_histogram_csv(os, run.histogram); });
    const std::string hist_img =
        render([&](auto& os) { write_pgm(os, histogram_image(run.histogram, file.run.histogram_image_height)); });
    const std::string density = render([&](auto& os) { write_pgm(os, density_image(*run.density)); });

    RunManifest m;
    m.config = file;
    m.command = "simulate";
    m.workers = workers;
    m.wall_seconds = wall;
    m.emitted = run.batch.emitted;
    m.completed = run.batch.impacts.size();
    m.failures = run.batch.failures;
    m.failures_by_kind = run.batch.failures_by_kind;
    m.outputs = {"impacts.csv", "histogram.csv", "histogram.pgm", "density.pgm", "manifest.cfg"};

    fs::create_directories(args.out);
    write_file(args.out / "impacts.csv", impacts);
    write_file(args.out / "histogram.csv", hist);
    write_file(args.out / "histogram.pgm", hist_img);
    write_file(args.out / "density.pgm", density);
    write_file(args.out / "manifest.cfg", format_manifest(m));

    out << "emitted " << m.emitted << ", reached detector " << m.completed << ", failures " << m.failures << '\n';
    if (run.histogram.total() > 0) {
      const auto c = contrast(run.histogram, file.run.smoothing_bins);
      out << "histogram: " << run.histogram.size() << " bins, n_maxima " << c.n_maxima << ", peak_to_valley "
          << format_real(c.peak_to_valley) << '\n';
    }
    out << "wrote " << args.out.string() << '\n';
    return kExitOk;
  });
}

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto file = load_or_default(args.config);
    const auto cfg = validate_config(file.sim);
    if (args.i_max < 0) throw std::invalid_argument("--i-max must be >= 0");

    double boundary = cfg.geometry().d;
    if (args.boundary == "onset") {
      const auto onset = force_onset_distance(cfg.field(), cfg.geometry());
      if (!onset) throw std::invalid_argument("field has no sharp onset");
      boundary = *onset;
    } else if (args.boundary != "slit") {
      throw std::invalid_argument("--boundary must be 'slit' or 'onset'");
    }

    const auto origins = deviation_origins(boundary, cfg.v0(), cfg.tau(), args.i_max);
    std::ostringstream os;
    os << "boundary = " << format_real(boundary) << '\n';
    os << "step_length = " << format_real(origins.step_length) << '\n';
    os << "n0 = " << origins.n0 << '\n';
    os << "black_region = " << (is_black_region(cfg.geometry().d, cfg.v0(), cfg.tau()) ? "true" : "false") << "\n\n";

    std::ostringstream table;
    table << "i,a_i,phi_i_rad,phi_i_deg";
    if (args.with_minima) table << ",y_minimum";
    table << '\n';
    if (args.with_minima && !is_point_source(cfg.emission()))
      throw std::invalid_argument("--with-minima needs a point source");
    for (int i = -args.i_max; i <= args.i_max; ++i) {
      if (i == 0) continue;
      table << i << ',' << format_real(origins.a(i)) << ',' << format_real(origins.phi(i)) << ','
            << format_real(rad_to_deg(origins.phi(i)));
      // Same trajectories as predict_minima, kept in i order.
      if (args.with_minima) {
        const auto start = point_source_state(cfg.geometry(), cfg.v0(), origins.phi(i));
        table << ',' << format_real(propagate_to_detector(start, cfg).y_impact);
      }
      table << '\n';
    }
    os << table.str();
    out << os.str();
    if (args.out) {
      fs::create_directories(*args.out);
      write_file(*args.out / "analysis.csv", table.str());
    }
    return kExitOk;
  });
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  SweepParameter parameter;
  try {
    parameter = parse_sweep_parameter(args.axis);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return guarded(err, [&] {
    auto file = load_or_default(args.config);
    if (args.bin_width) file.run.bin_width = *args.bin_width;
    if (args.smoothing) file.run.smoothing_bins = *args.smoothing;
    if (args.seed) apply_seed(file.sim, *args.seed);
    validate_config(file.sim);

    SweepOptions opts;
    opts.bin_width = file.run.bin_width;
    opts.origin = file.run.bin_origin;
    opts.smoothing_bins = file.run.smoothing_bins;
    opts.workers = resolve_workers(args.threads);
    const auto start = std::chrono::steady_clock::now();
    const auto result = run_sweep(file.sim, SweepAxis{parameter, args.values}, opts);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    RunManifest m;
    m.config = file;
    m.command = "sweep " + std::string(to_string(parameter));
    m.workers = opts.workers;
    m.wall_seconds = wall;
    std::vector<std::pair<std::string, std::string>> files;
    for (std::size_t k = 0; k < result.entries.size(); ++k) {
      const auto& e = result.entries[k];
      if (!e.histogram) continue;
      const std::string name = "histogram_" + std::to_string(k) + ".csv";
      files.emplace_back(name, render([&](auto& os) { write_histogram_csv(os, *e.histogram); }));
      m.outputs.push_back(name);
      m.failures += e.failures;
    }
    files.emplace_back("summary.csv", render([&](auto& os) { write_sweep_summary_csv(os, result); }));
    m.outputs.push_back("summary.csv");
    m.outputs.push_back("manifest.cfg");

    fs::create_directories(args.out);
    for (const auto& [name, text] : files) write_file(args.out / name, text);
    write_file(args.out / "manifest.cfg", format_manifest(m));
    out << files.back().second;
    return kExitOk;
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete-time single-slit scattering simulator", "tqs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  SimulateArgs sim;
  std::string sim_config, sim_out = sim.out.string();
  double sim_bin = 0;
  unsigned sim_threads = 0;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Run the trajectory batch and write histograms and images");
  simulate->add_option("--config", sim_config, "Config file (key = value)");
  simulate->add_option("--out", sim_out, "Output directory");
  auto* sim_bin_opt = simulate->add_option("--bin-width", sim_bin, "Histogram bin width")->check(CLI::PositiveNumber);
  auto* sim_thr_opt = simulate->add_option("--threads", sim_threads, "Worker threads")->check(CLI::PositiveNumber);
  auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "Seed for random emission");

  AnalyzeArgs an;
  std::string an_config, an_out;
  auto* analyze = app.add_subcommand("analyze", "Print n0, deviation origins, fork angles and minima");
  analyze->add_option("--config", an_config, "Config file (key = value)");
  analyze->add_option("--i-max", an.i_max, "Largest |i| of the deviation origins")->check(CLI::NonNegativeNumber);
  analyze->add_flag("--with-minima", an.with_minima, "Run the fork trajectories to predict minima");
  analyze->add_option("--boundary", an.boundary, "slit or onset")->check(CLI::IsMember({"slit", "onset"}));
  analyze->add_option("--out", an_out, "Also write analysis.csv here");

  SweepArgs sw;
  std::string sw_config, sw_out = sw.out.string(), sw_values;
  double sw_bin = 0, sw_smooth = 0;
  unsigned sw_threads = 0;
  std::uint64_t sw_seed = 0;
  auto* sweep = app.add_subcommand("sweep", "Repeat the simulation over one parameter axis");
  sweep->add_option("--config", sw_config, "Config file (key = value)");
  sweep->add_option("--out", sw_out, "Output directory");
  sweep->add_option("--axis", sw.axis, "tau, d, F0, sigma or v0")->required();
  sweep->add_option("--values", sw_values, "Comma-separated axis values")->required();
  auto* sw_bin_opt = sweep->add_option("--bin-width", sw_bin, "Histogram bin width")->check(CLI::PositiveNumber);
  auto* sw_smooth_opt = sweep->add_option("--smoothing", sw_smooth, "Contrast smoothing (bins)")->check(CLI::NonNegativeNumber);
  auto* sw_thr_opt = sweep->add_option("--threads", sw_threads, "Worker threads")->check(CLI::PositiveNumber);
  auto* sw_seed_opt = sweep->add_option("--seed", sw_seed, "Seed for random emission");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  if (simulate->parsed()) {
    if (!sim_config.empty()) sim.config = sim_config;
    sim.out = sim_out;
    if (*sim_bin_opt) sim.bin_width = sim_bin;
    if (*sim_thr_opt) sim.threads = sim_threads;
    if (*sim_seed_opt) sim.seed = sim_seed;
    return cmd_simulate(sim, out, err);
  }
  if (analyze->parsed()) {
    if (!an_config.empty()) an.config = an_config;
    if (!an_out.empty()) an.out = an_out;
    return cmd_analyze(an, out, err);
  }
  if (!sw_config.empty()) sw.config = sw_config;
  sw.out = sw_out;
  if (*sw_bin_opt) sw.bin_width = sw_bin;
  if (*sw_smooth_opt) sw.smoothing = sw_smooth;
  if (*sw_thr_opt) sw.threads = sw_threads;
  if (*sw_seed_opt) sw.seed = sw_seed;
  std::stringstream ss(sw_values);
  for (std::string item; std::getline(ss, item, ',');) {
    double v = 0;
    const auto t = std::string_view(item);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
      err << "usage error: --values: cannot parse '" << item << "'\n";
      return kExitUsage;
    }
    sw.values.push_back(v);
  }
  return cmd_sweep(sw, out, err);
}

}  // namespace tqs
