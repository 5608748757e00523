#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcpower/delay.hpp"
#include "dcpower/large_system.hpp"
#include "dcpower/utility.hpp"

namespace dcpower::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ClassDef {
  std::string name;
  int max_transmissions = 1;
  double beta = 0.5;
};

/// Evenly spaced grid start, start + step, ..., stop (inclusive up to 1e-9).
struct Grid {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.05;

  std::vector<double> points() const;
};

struct Scenario {
  std::vector<ReceiverKind> receivers{std::begin(kAllReceivers), std::end(kAllReceivers)};
  std::vector<double> alphas{0.1, 0.9};       // total loads for the loss sweep
  Grid fraction_grid{0.0, 1.0, 0.05};         // alpha_A / alpha
  std::string swept_class = "A";
  Grid beta_grid{0.50, 0.995, 0.005};
  std::vector<int> delay_limits{1, 2, 3};     // D values for the target-SIR sweep
  std::vector<std::size_t> counts;            // users per class for simulation
  std::vector<double> mix;                    // class mix for capacity
  std::size_t trials = 200;
  std::uint64_t seed = 42;
  double gap_band = 0.05;
  double censor_limit = 0.10;
  double tolerance = 1e-10;
  int max_iterations = 10000;
  unsigned threads = 0;
};

struct OutputSpec {
  std::string directory = "results";
  std::vector<std::string> formats{"csv"};
};

struct ExperimentConfig {
  SystemParams system;
  std::vector<ClassDef> classes;
  Scenario scenario;
  OutputSpec output;
  nlohmann::json source;  // the merged document the fields were read from

  std::size_t class_index(const std::string& name) const;
  /// Delay classes with derived targets for this system's efficiency model.
  std::vector<DelayClass> delay_classes() const;
};

/// The shipped defaults: N = 100, L = M = 100, R = 100 kb/s,
/// sigma^2 = 5e-16 W, classes A = (1, 0.99) and B = (3, 0.90).
nlohmann::json default_config_json();

/// Missing keys fall back to default_config_json(). Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig default_config();

/// Key-sorted compact dump; two configs are the same experiment iff equal.
std::string canonical_json(const nlohmann::json& doc);
/// FNV-1a 64 of canonical_json, 16 hex digits.
std::string config_hash(const nlohmann::json& doc);

}  // namespace dcpower::harness
