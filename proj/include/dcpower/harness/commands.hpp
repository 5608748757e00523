#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dcpower/harness/config.hpp"
#include "dcpower/harness/result_table.hpp"
#include "dcpower/netsim.hpp"

namespace dcpower::harness {

std::string artifact_version();

/// Overrides the scenario seed, keeping the hashed source document in sync.
void apply_seed(ExperimentConfig& cfg, std::uint64_t seed);
void apply_receivers(ExperimentConfig& cfg, const std::vector<ReceiverKind>& receivers);
void apply_trials(ExperimentConfig& cfg, std::size_t trials);

/// config_hash, seed, version and a UTC timestamp.
std::map<std::string, std::string> table_metadata(const ExperimentConfig& cfg);

struct GammaStarReport {
  int packet_bits;
  double gamma;
  double gamma_db;
  double residual;
};

GammaStarReport cmd_gamma_star(const ExperimentConfig& cfg);

/// Target SIR over the beta grid for each configured D.
ResultTable cmd_fig1(const ExperimentConfig& cfg);

/// Utility-loss ratios u_c / u over the swept-class fraction, one table per
/// receiver. Needs exactly two classes. Infeasible points carry an
/// "infeasible" marker instead of numbers.
std::vector<ResultTable> cmd_fig23(const ExperimentConfig& cfg);

struct ValidationReport {
  std::vector<netsim::MonteCarloReport> runs;
  ResultTable table;
  bool passed = true;
  std::vector<std::string> failures;
};

/// Monte Carlo equilibrium utilities against the large-system formulas at
/// alpha_c = K_c / N, with Nash checks. Fails when a gap exceeds the band,
/// more than censor_limit of trials are censored, or a Nash check fails.
ValidationReport cmd_validate(const ExperimentConfig& cfg);

struct CapacityReport {
  ResultTable table;      // per receiver: alpha_max with and without delay limits
  ResultTable admission;  // finite-K matched-filter admission sums
};

CapacityReport cmd_capacity(const ExperimentConfig& cfg);

struct SimulationReport {
  ResultTable users;
  std::optional<ResultTable> trace;
  netsim::EquilibriumTrace equilibrium;
};

/// One realization (trial 0 of the configured seed) driven to equilibrium.
SimulationReport cmd_simulate(const ExperimentConfig& cfg, ReceiverKind rx, bool with_trace);

}  // namespace dcpower::harness
