#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rumor::cli {

namespace fs = std::filesystem;

constexpr const char* kOutEnvVar = "RUMORSIM_OUT";

enum ExitCode : int { kOk = 0, kConfigError = 1, kRuntimeError = 2 };

struct GenerateOptions {
  std::size_t nodes = 10000;
  std::size_t m = 2;
  std::uint64_t seed = 0;
  std::optional<std::size_t> k_min;
  std::size_t min_count = 5;
  bool gexf = false;
  fs::path out;
};

struct RunOptions {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  fs::path out;
};

struct BatchOptions {
  std::string scenario;
  std::optional<std::size_t> runs;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  unsigned jobs = 1;
  std::size_t bins = 20;
  double delta_th = 0.4;
  fs::path out;
};

struct SweepOptions {
  std::string scenario;
  std::string param;  // key=lo:hi:count or key=v1,v2,...
  std::optional<std::size_t> runs;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  unsigned jobs = 1;
  std::size_t bins = 20;
  double delta_th = 0.4;
  bool summary_only = false;
  fs::path out;
};

struct AnalyzeOptions {
  fs::path trace_dir;
  std::size_t bins = 20;
  double delta_th = 0.4;
  fs::path out;
};

struct DumpOptions {
  std::string name;
  fs::path out;
};

// Each command throws rumor::Error subclasses; main maps them to exit codes.
void cmd_generate(const GenerateOptions& o);
void cmd_run(const RunOptions& o);
void cmd_batch(const BatchOptions& o);
void cmd_sweep(const SweepOptions& o);
void cmd_analyze(const AnalyzeOptions& o);
/// Returns the file written.
fs::path cmd_dump_scenario(const DumpOptions& o);

/// Parses "key=lo:hi:count" or "key=v1,v2,..." into the key and its values.
std::pair<std::string, std::vector<double>> parse_grid(const std::string& spec);

/// Full command line entry point; returns the process exit code.
int main_entry(int argc, const char* const* argv);

}  // namespace rumor::cli
