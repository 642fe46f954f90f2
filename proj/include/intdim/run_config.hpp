#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "intdim/geometry.hpp"
#include "intdim/profiles.hpp"

namespace intdim {

enum class Command { Generate, Estimate, Profile, Project, Verify };

const char* to_string(Command c);
Command parse_command(const std::string& name);

/// Which estimator `estimate` runs.
enum class EstimateSource { Cover, Capacity, Both };

/// One run of the command-line tool, parsed from a JSON config file. Every field is checked
/// against its module's preconditions by parse(); errors name the offending field.
struct RunConfig {
  Command command = Command::Estimate;
  nlohmann::json set;  // generator descriptor or {"path": ...}
  std::vector<double> theta_grid;
  std::vector<int> m_list;
  ScaleSchedule schedule;
  EstimateSource source = EstimateSource::Cover;
  int trials = 20;
  std::uint64_t seed = 0;
  double eta = 0.07;
  EstimatorOptions estimator;
  std::string output = "out";
  bool plot = false;
  bool dump = false;
  int workers = 0;  // 0 keeps the machine default

  // verify
  int pairs = 10;
  std::vector<int> r_exponents = {4, 5, 6, 7, 8, 9, 10};
  std::vector<double> verify_thetas = {0.3, 0.7, 1.0};
  long mc_trials = 100000;
  double target_se = 0.01;

  /// Throws ValidationError on unknown keys or out-of-range values.
  static RunConfig parse(const nlohmann::json& doc);
  /// Reads and parses a file; malformed JSON is a ValidationError on "config".
  static RunConfig load(const std::string& path);

  /// The effective configuration, after defaults and overrides, as JSON.
  nlohmann::json to_json() const;
  /// FNV-1a 64 of to_json().dump(), in hex.
  std::string hash() const;
};

/// Builds the cloud a set descriptor names. Descriptors:
///   {"generator": "sequence_set", "p": P, "count": N}
///   {"generator": "cantor", "depth": D}
///   {"generator": "uniform_grid", "dim": n, "per_axis": K}
///   {"generator": "carpet", "base_a": a, "base_b": b, "digits": [[i, j], ...], "depth": D}
///   {"generator": "single_point", "dim": n}
///   {"generator": "product", "factors": [descriptor, descriptor]}
///   {"path": FILE, "format": "csv" | "json"}
Cloud build_set(const nlohmann::json& descriptor);

}  // namespace intdim
