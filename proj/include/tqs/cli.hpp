#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tqs/config_io.hpp"
#include "tqs/sweep.hpp"

namespace tqs {

inline constexpr std::string_view kToolVersion = "0.3.0";

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitConfig = 2, kExitRuntime = 3 };

/// Worker count: TQS_THREADS if set, else `requested`, else hardware concurrency.
/// Throws std::invalid_argument when TQS_THREADS is not a positive integer.
unsigned resolve_workers(std::optional<unsigned> requested);

struct RunManifest {
  ConfigFile config;
  std::string command;
  unsigned workers{1};
  double wall_seconds{0.0};
  std::uint64_t emitted{0};
  std::uint64_t completed{0};
  std::uint64_t failures{0};
  std::array<std::uint64_t, 3> failures_by_kind{};
  std::vector<std::string> outputs;
};

/// Config text followed by `run.*` metadata; parse_config reads it back to the same config.
std::string format_manifest(const RunManifest& m);

struct SimulateArgs {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out{"tqs-out"};
  std::optional<double> bin_width;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
};

struct AnalyzeArgs {
  std::optional<std::filesystem::path> config;
  int i_max{3};
  bool with_minima{false};
  /// "slit" (x = 0, distance d) or "onset" (where the force starts).
  std::string boundary{"slit"};
  std::optional<std::filesystem::path> out;
};

struct SweepArgs {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out{"tqs-sweep"};
  std::string axis;
  std::vector<double> values;
  std::optional<double> bin_width;
  std::optional<double> smoothing;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

/// Full command line (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tqs
