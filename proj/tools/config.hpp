#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fermlap/problem.hpp"

namespace fermlap::cli {

/// Bad configuration; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Settings = std::map<std::string, std::string>;

/// Flat `key = value` lines; `#` starts a comment.
Settings read_config(const std::filesystem::path& path);

struct RunConfig {
  ProblemSpec spec;
  std::filesystem::path out_dir = ".";
  std::string sweep;
  bool flip_relocation_sign = false;
  bool export_matrix = false;
  double spectral_tol = 5e-2;
  std::size_t gap_steps = 11;
};

/// Builds the run configuration; `mode_default` applies when no mode is set.
RunConfig make_run_config(const Settings& settings, SynthesisMode mode_default);

/// Parses `lo..hi` or a comma list into values.
std::vector<unsigned> parse_range(const std::string& text);

/// `A=1..3,n=2..4` style sweep. Unlisted axes keep the given defaults.
struct SweepRanges {
  std::vector<unsigned> A, n, D;
};
SweepRanges parse_sweep(const std::string& text, const ProblemSpec& base);

}  // namespace fermlap::cli
