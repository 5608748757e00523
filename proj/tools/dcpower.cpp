#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dcpower/errors.hpp"
#include "dcpower/harness/commands.hpp"
#include "dcpower/harness/config.hpp"

namespace {

using namespace dcpower;
using namespace dcpower::harness;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string receiver;
  std::optional<std::size_t> trials;
  std::string format;
  bool trace = false;
};

ExperimentConfig resolve_config(const Options& opt) {
  auto cfg = opt.config_path.empty() ? default_config() : load_config(opt.config_path);
  if (const char* env = std::getenv("DCPOWER_SEED"); env && *env) {
    try {
      apply_seed(cfg, std::stoull(env));
    } catch (const std::exception&) {
      throw ConfigError(std::string("DCPOWER_SEED is not an unsigned integer: ") + env);
    }
  }
  if (opt.seed) apply_seed(cfg, *opt.seed);
  if (!opt.receiver.empty()) {
    if (opt.receiver == "all") {
      apply_receivers(cfg, {std::begin(kAllReceivers), std::end(kAllReceivers)});
    } else {
      apply_receivers(cfg, {parse_receiver(opt.receiver)});
    }
  }
  if (opt.trials) apply_trials(cfg, *opt.trials);
  if (!opt.out_dir.empty()) cfg.output.directory = opt.out_dir;
  if (!opt.format.empty()) cfg.output.formats = {opt.format};
  return cfg;
}

void save(const ResultTable& table, const ExperimentConfig& cfg) {
  for (const auto& path : save_table(table, cfg.output.directory, cfg.output.formats)) {
    std::cout << "wrote " << path.string() << "\n";
  }
}

int run_gamma_star(const ExperimentConfig& cfg) {
  const auto r = cmd_gamma_star(cfg);
  std::cout << std::setprecision(10) << "M = " << r.packet_bits << "\n"
            << "gamma* = " << r.gamma << " (" << std::setprecision(6) << r.gamma_db << " dB)\n"
            << "residual |f - gamma f'| = " << std::scientific << std::setprecision(3)
            << r.residual << "\n";
  return kExitOk;
}

int run_fig1(const ExperimentConfig& cfg) {
  const auto table = cmd_fig1(cfg);
  save(table, cfg);
  return kExitOk;
}

int run_fig23(const ExperimentConfig& cfg) {
  for (const auto& table : cmd_fig23(cfg)) save(table, cfg);
  return kExitOk;
}

int run_validate(const ExperimentConfig& cfg) {
  const auto report = cmd_validate(cfg);
  save(report.table, cfg);
  for (const auto& run : report.runs) {
    std::cout << receiver_name(run.receiver) << ": censored " << run.censored << "/"
              << run.trials.size() << ", nash " << run.nash_passed << "/" << run.nash_checked
              << ", mean sweeps " << run.mean_iterations << "\n";
    for (const auto& st : run.classes) {
      if (st.users_per_trial == 0) continue;
      std::cout << "  class " << st.name << ": mean " << st.mean << " bits/J";
      if (st.prediction_available) {
        std::cout << ", predicted " << st.predicted << ", gap " << st.rel_gap;
      }
      std::cout << "\n";
    }
  }
  for (const auto& f : report.failures) std::cerr << "FAIL " << f << "\n";
  std::cout << (report.passed ? "validation passed" : "validation FAILED") << "\n";
  return report.passed ? kExitOk : kExitValidation;
}

int run_capacity(const ExperimentConfig& cfg) {
  const auto report = cmd_capacity(cfg);
  save(report.table, cfg);
  save(report.admission, cfg);
  for (const auto& row : report.table.rows) {
    std::cout << format_cell(row[0]) << ": alpha_max " << format_cell(row[1])
              << " (unconstrained " << format_cell(row[2]) << ")\n";
  }
  return kExitOk;
}

int run_simulate(const ExperimentConfig& cfg, bool trace) {
  for (auto rx : cfg.scenario.receivers) {
    const auto report = cmd_simulate(cfg, rx, trace);
    save(report.users, cfg);
    if (report.trace) save(*report.trace, cfg);
    std::cout << receiver_name(rx) << ": converged after " << report.equilibrium.iterations
              << " sweeps, " << report.equilibrium.capped.size() << " users at p_max\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash-equilibrium power control with delay constraints for CDMA uplinks"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "Seed override (takes precedence over DCPOWER_SEED)");
    sub->add_option("--out", opt.out_dir, "Output directory");
    sub->add_option("--receiver", opt.receiver, "Receiver")
        ->check(CLI::IsMember({"mf", "de", "mmse", "all"}));
    sub->add_option("--trials", opt.trials, "Monte Carlo trials");
    sub->add_option("--format", opt.format, "Table format")->check(CLI::IsMember({"csv", "dat"}));
  };

  auto* gamma_star = app.add_subcommand("gamma-star", "Energy-efficient SIR gamma*");
  auto* fig1 = app.add_subcommand("fig1", "Target SIR versus beta for each D");
  auto* fig23 = app.add_subcommand("fig23", "Utility loss from delay-sensitive users");
  auto* validate = app.add_subcommand("validate", "Monte Carlo check of the large-system formulas");
  auto* capacity = app.add_subcommand("capacity", "Maximum load per receiver");
  auto* simulate = app.add_subcommand("simulate", "Drive one realization to equilibrium");
  for (auto* sub : {gamma_star, fig1, fig23, validate, capacity, simulate}) add_common(sub);
  simulate->add_flag("--trace", opt.trace, "Also write one row per user per sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const auto cfg = resolve_config(opt);
    if (gamma_star->parsed()) return run_gamma_star(cfg);
    if (fig1->parsed()) return run_fig1(cfg);
    if (fig23->parsed()) return run_fig23(cfg);
    if (validate->parsed()) return run_validate(cfg);
    if (capacity->parsed()) return run_capacity(cfg);
    if (simulate->parsed()) return run_simulate(cfg, opt.trace);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
