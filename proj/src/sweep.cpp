#include "tqs/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "tqs/analytics.hpp"
#include "tqs/emission.hpp"

namespace tqs {

namespace {

struct Shard {
  std::uint64_t begin;
  std::uint64_t end;
};

std::vector<Shard> partition(std::uint64_t n, unsigned workers) {
  const std::uint64_t w = std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(n, 1));
  std::vector<Shard> shards;
  shards.reserve(w);
  for (std::uint64_t k = 0; k < w; ++k) shards.push_back({n * k / w, n * (k + 1) / w});
  return shards;
}

// Runs fn(shard_index) for every shard; shard 0 on the calling thread.
template <typename Fn>
void run_shards(std::size_t count, Fn&& fn) {
  std::vector<std::jthread> threads;
  threads.reserve(count > 0 ? count - 1 : 0);
  for (std::size_t k = 1; k < count; ++k) threads.emplace_back([&fn, k] { fn(k); });
  if (count > 0) fn(0);
}

struct ShardOutput {
  BatchResult batch;
  std::optional<Histogram> histogram;
  std::optional<DensityGrid> density;
};

void record_failure(BatchResult& b, FailureKind kind) {
  ++b.failures;
  ++b.failures_by_kind[static_cast<std::size_t>(kind)];
}

void merge_batch(BatchResult& into, BatchResult&& part) {
  into.impacts.insert(into.impacts.end(), part.impacts.begin(), part.impacts.end());
  into.failures += part.failures;
  for (std::size_t k = 0; k < into.failures_by_kind.size(); ++k) into.failures_by_kind[k] += part.failures_by_kind[k];
  into.emitted += part.emitted;
}

std::vector<ShardOutput> run_sharded(const ValidatedConfig& cfg, unsigned workers, const SimulationOptions* opts) {
  const EmissionStream stream(cfg);
  const auto shards = partition(stream.total(), workers);
  std::vector<ShardOutput> outputs(shards.size());
  const bool want_grid = opts && opts->grid_width > 0 && opts->grid_height > 0;

  run_shards(shards.size(), [&](std::size_t k) {
    auto& out = outputs[k];
    if (opts) out.histogram.emplace(opts->origin, opts->bin_width);
    if (want_grid) out.density.emplace(cfg.geometry(), opts->grid_width, opts->grid_height);
    Trajectory scratch;
    for (std::uint64_t i = shards[k].begin; i < shards[k].end; ++i) {
      const auto initial = stream.emit(i);
      Propagation p;
      if (want_grid) {
        scratch.points.clear();
        p = trace(initial, cfg, i, scratch);
        out.density->add(scratch);
      } else {
        p = try_propagate(initial, cfg, i);
      }
      ++out.batch.emitted;
      if (!p.reached) {
        record_failure(out.batch, p.failure);
        continue;
      }
      out.batch.impacts.push_back(p.impact);
      if (out.histogram) out.histogram->add(p.impact.y_impact);
    }
  });
  return outputs;
}

}  // namespace

BatchResult run_batch(const ValidatedConfig& cfg, unsigned workers) {
  auto outputs = run_sharded(cfg, workers, nullptr);
  BatchResult result;
  for (auto& o : outputs) merge_batch(result, std::move(o.batch));
  return result;
}

SimulationResult simulate(const ValidatedConfig& cfg, const SimulationOptions& opts) {
  auto outputs = run_sharded(cfg, opts.workers, &opts);
  SimulationResult result{{}, Histogram(opts.origin, opts.bin_width), std::nullopt};
  for (auto& o : outputs) {
    merge_batch(result.batch, std::move(o.batch));
    result.histogram.merge(*o.histogram);
    if (o.density) {
      if (!result.density) result.density.emplace(*o.density);
      else result.density->merge(*o.density);
    }
  }
  return result;
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Tau: return "tau";
    case SweepParameter::D: return "d";
    case SweepParameter::F0: return "F0";
    case SweepParameter::Sigma: return "sigma";
    case SweepParameter::V0: return "v0";
  }
  return "?";
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  for (auto p : {SweepParameter::Tau, SweepParameter::D, SweepParameter::F0, SweepParameter::Sigma, SweepParameter::V0})
    if (name == to_string(p)) return p;
  throw std::invalid_argument("unknown sweep parameter '" + std::string(name) + "'; valid: tau, d, F0, sigma, v0");
}

SimConfig substitute(const SimConfig& base, SweepParameter parameter, double value) {
  SimConfig cfg = base;
  switch (parameter) {
    case SweepParameter::Tau: cfg.tau = value; break;
    case SweepParameter::D: cfg.geometry.d = value; break;
    case SweepParameter::V0: cfg.v0 = value; break;
    case SweepParameter::F0:
      std::visit(
          [value](auto& f) {
            if constexpr (requires { f.F0; }) f.F0 = value;
            else throw std::invalid_argument("field variant has no F0");
          },
          cfg.field);
      break;
    case SweepParameter::Sigma:
      if (auto* g = std::get_if<field::GaussianBand>(&cfg.field)) g->sigma = value;
      else throw std::invalid_argument("sigma is only defined for the Gaussian band field");
      break;
  }
  return cfg;
}

SweepResult run_sweep(const SimConfig& base, const SweepAxis& axis, const SweepOptions& opts) {
  const auto& v = axis.values;
  if (v.empty()) throw std::invalid_argument("sweep axis has no values");
  const bool increasing = v.size() < 2 || v[1] > v[0];
  for (std::size_t i = 1; i < v.size(); ++i)
    if (increasing ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1]))
      throw std::invalid_argument("sweep axis values must be strictly monotone");

  SweepResult result{axis, {}};
  for (double value : v) {
    SweepEntry e;
    e.value = value;
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto cfg = validate_config(substitute(base, axis.parameter, value));
      e.black_region = is_black_region(cfg.geometry().d, cfg.v0(), cfg.tau());
      SimulationOptions sim;
      sim.bin_width = opts.bin_width;
      sim.origin = opts.origin;
      sim.workers = opts.workers;
      auto run = simulate(cfg, sim);
      e.failures = run.batch.failures;
      if (run.histogram.total() > 0) e.contrast = contrast(run.histogram, opts.smoothing_bins);
      e.histogram = std::move(run.histogram);
      e.ok = true;
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
    e.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.entries.push_back(std::move(e));
  }
  return result;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(y[i] > 0.0) || !(x[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

ConvergenceStudy convergence_study(const SimConfig& base, const std::vector<double>& alphas,
                                   const std::vector<double>& tau_values) {
  if (tau_values.empty()) throw std::invalid_argument("convergence study needs tau values");
  const double ref_tau = *std::min_element(tau_values.begin(), tau_values.end()) / 1024.0;
  ConvergenceStudy study;
  for (double alpha : alphas) {
    const auto initial = point_source_state(base.geometry, base.v0, alpha);
    const double y_ref = classical_reference(initial, base.field, base.geometry, base.mass, ref_tau);
    std::vector<double> errors;
    for (double tau : tau_values) {
      SimConfig c = base;
      c.tau = tau;
      const auto cfg = validate_config(c);
      const double y = propagate_to_detector(initial, cfg).y_impact;
      const double err = std::abs(y - y_ref);
      study.rows.push_back({alpha, tau, y, y_ref, err});
      errors.push_back(err);
    }
    study.slopes.push_back(loglog_slope(tau_values, errors));
  }
  return study;
}

}  // namespace tqs
