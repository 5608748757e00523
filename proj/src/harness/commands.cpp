#include "dcpower/harness/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "dcpower/errors.hpp"
#include "dcpower/large_system.hpp"
#include "dcpower/units.hpp"

#ifndef DCPOWER_VERSION
#define DCPOWER_VERSION "dev"
#endif

namespace dcpower::harness {
namespace {

const std::string kInfeasible = "infeasible";

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double gamma_star_of(const ExperimentConfig& cfg) {
  return solve_gamma_star(cfg.system.efficiency_model()).gamma;
}

netsim::MonteCarloOptions monte_carlo_options(const ExperimentConfig& cfg) {
  netsim::MonteCarloOptions opt;
  opt.trials = cfg.scenario.trials;
  opt.seed = cfg.scenario.seed;
  opt.threads = cfg.scenario.threads;
  opt.equilibrium.tolerance = cfg.scenario.tolerance;
  opt.equilibrium.max_iterations = cfg.scenario.max_iterations;
  return opt;
}

}  // namespace

std::string artifact_version() { return DCPOWER_VERSION; }

void apply_seed(ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.scenario.seed = seed;
  cfg.source["scenario"]["seed"] = seed;
}

void apply_receivers(ExperimentConfig& cfg, const std::vector<ReceiverKind>& receivers) {
  cfg.scenario.receivers = receivers;
  auto& node = cfg.source["scenario"]["receivers"];
  node = nlohmann::json::array();
  for (auto rx : receivers) node.push_back(std::string(receiver_name(rx)));
}

void apply_trials(ExperimentConfig& cfg, std::size_t trials) {
  if (trials < 1) throw ConfigError("trials must be positive");
  cfg.scenario.trials = trials;
  cfg.source["scenario"]["trials"] = trials;
}

std::map<std::string, std::string> table_metadata(const ExperimentConfig& cfg) {
  return {{"config_hash", config_hash(cfg.source)},
          {"seed", std::to_string(cfg.scenario.seed)},
          {"version", artifact_version()},
          {"timestamp", utc_timestamp()}};
}

GammaStarReport cmd_gamma_star(const ExperimentConfig& cfg) {
  const auto star = solve_gamma_star(cfg.system.efficiency_model());
  return {cfg.system.packet_bits, star.gamma, to_db(star.gamma), star.residual};
}

ResultTable cmd_fig1(const ExperimentConfig& cfg) {
  const auto model = cfg.system.efficiency_model();
  const double gamma_star = solve_gamma_star(model).gamma;
  ResultTable table;
  table.name = "fig1_target_sir";
  table.columns = {"D",           "beta",          "eta",        "gamma_tilde",
                   "gamma_tilde_db", "target_sir", "target_sir_db", "floor_active"};
  table.metadata = table_metadata(cfg);
  const auto betas = cfg.scenario.beta_grid.points();
  for (int d : cfg.scenario.delay_limits) {
    for (double beta : betas) {
      const auto cls = target_sir(d, beta, model, gamma_star);
      table.add_row({std::int64_t{d}, beta, cls.eta, cls.gamma_tilde, to_db(cls.gamma_tilde),
                     cls.gamma_tilde_star, to_db(cls.gamma_tilde_star),
                     cls.gamma_tilde_star == gamma_star});
    }
  }
  return table;
}

std::vector<ResultTable> cmd_fig23(const ExperimentConfig& cfg) {
  if (cfg.classes.size() != 2) {
    throw ConfigError("fig23 needs exactly two classes, got " + std::to_string(cfg.classes.size()));
  }
  const auto classes = cfg.delay_classes();
  const double gamma_star = gamma_star_of(cfg);
  const std::size_t swept = cfg.class_index(cfg.scenario.swept_class);
  const std::size_t other = 1 - swept;
  const auto fractions = cfg.scenario.fraction_grid.points();
  std::vector<DelayClass> loose = classes;
  for (auto& c : loose) c.gamma_tilde_star = gamma_star;
  const auto meta = table_metadata(cfg);

  std::vector<ResultTable> tables;
  for (auto rx : cfg.scenario.receivers) {
    ResultTable table;
    table.name = "fig23_" + std::string(receiver_name(rx));
    table.metadata = meta;
    table.columns = {"receiver", "alpha", "fraction_" + classes[swept].name, "feasible", "margin"};
    for (const auto& c : classes) table.columns.push_back("u_" + c.name + "_ratio");

    for (double alpha : cfg.scenario.alphas) {
      for (double frac : fractions) {
        large_system::LoadProfile load{classes, {0.0, 0.0}};
        load.alphas[swept] = frac * alpha;
        load.alphas[other] = (1.0 - frac) * alpha;
        const auto f = large_system::feasibility(load, rx);
        const large_system::LoadProfile baseline{loose, load.alphas};
        const bool baseline_ok = large_system::feasibility(baseline, rx).feasible;
        std::vector<Cell> row{std::string(receiver_name(rx)), alpha, frac, f.feasible && baseline_ok,
                              f.margin};
        for (std::size_t c = 0; c < classes.size(); ++c) {
          if (f.feasible && baseline_ok) {
            row.emplace_back(large_system::utility_loss_ratio(cfg.system, load, rx, c, gamma_star));
          } else {
            row.emplace_back(kInfeasible);
          }
        }
        table.add_row(std::move(row));
      }
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

ValidationReport cmd_validate(const ExperimentConfig& cfg) {
  const auto classes = cfg.delay_classes();
  const auto& counts = cfg.scenario.counts;
  std::size_t users = 0;
  for (auto n : counts) users += n;
  if (users == 0) throw ConfigError("validate needs scenario.counts with at least one user");

  ValidationReport report;
  report.table.name = "validate";
  report.table.metadata = table_metadata(cfg);
  report.table.columns = {"receiver",  "class",     "users",      "processing_gain",
                          "trials",    "censored",  "mean_utility", "stddev_utility",
                          "predicted_utility", "rel_gap", "median_trial_gap",
                          "nash_pass_rate", "mean_iterations", "within_band"};

  for (auto rx : cfg.scenario.receivers) {
    auto run = netsim::monte_carlo_utilities(cfg.system, classes, counts, rx,
                                             monte_carlo_options(cfg));
    const std::string rx_name(receiver_name(rx));
    const double nash_rate =
        run.nash_checked ? static_cast<double>(run.nash_passed) / run.nash_checked : 1.0;
    if (run.censored_fraction() > cfg.scenario.censor_limit) {
      report.passed = false;
      report.failures.push_back(rx_name + ": " + std::to_string(run.censored) + " of " +
                                std::to_string(run.trials.size()) + " trials censored");
    }
    if (run.nash_passed != run.nash_checked) {
      report.passed = false;
      report.failures.push_back(rx_name + ": " +
                                std::to_string(run.nash_checked - run.nash_passed) +
                                " users failed the unilateral-deviation check");
    }
    for (std::size_t c = 0; c < run.classes.size(); ++c) {
      const auto& st = run.classes[c];
      if (st.users_per_trial == 0) continue;
      bool within = false;
      if (!st.prediction_available) {
        report.passed = false;
        report.failures.push_back(rx_name + "/" + st.name +
                                  ": load infeasible for the large-system formula");
      } else if (st.samples == 0) {
        report.passed = false;
        report.failures.push_back(rx_name + "/" + st.name + ": no uncensored samples");
      } else {
        within = st.rel_gap <= cfg.scenario.gap_band;
        if (!within) {
          report.passed = false;
          report.failures.push_back(rx_name + "/" + st.name + ": relative gap " +
                                    format_number(st.rel_gap) + " exceeds band " +
                                    format_number(cfg.scenario.gap_band));
        }
      }
      report.table.add_row({rx_name, st.name, static_cast<std::int64_t>(st.users_per_trial),
                            std::int64_t{cfg.system.processing_gain},
                            static_cast<std::int64_t>(run.trials.size()),
                            static_cast<std::int64_t>(run.censored), st.mean, st.stddev,
                            st.prediction_available ? Cell{st.predicted} : Cell{kInfeasible},
                            st.prediction_available ? Cell{st.rel_gap} : Cell{kInfeasible},
                            st.prediction_available ? Cell{run.median_gap(c)} : Cell{kInfeasible},
                            nash_rate, run.mean_iterations, within});
    }
    report.runs.push_back(std::move(run));
  }
  return report;
}

CapacityReport cmd_capacity(const ExperimentConfig& cfg) {
  const auto classes = cfg.delay_classes();
  const double gamma_star = gamma_star_of(cfg);
  std::vector<DelayClass> loose = classes;
  for (auto& c : loose) c.gamma_tilde_star = gamma_star;

  CapacityReport report;
  auto& table = report.table;
  table.name = "capacity";
  table.metadata = table_metadata(cfg);
  table.columns = {"receiver", "alpha_max", "alpha_max_unconstrained", "capacity_ratio",
                   "max_users"};
  const int n = cfg.system.processing_gain;
  for (auto rx : cfg.scenario.receivers) {
    const double amax = large_system::capacity(classes, cfg.scenario.mix, rx);
    const double base = large_system::capacity(loose, cfg.scenario.mix, rx);
    // Largest K with K / N strictly below alpha_max.
    auto max_users = static_cast<std::int64_t>(std::ceil(amax * n)) - 1;
    table.add_row({std::string(receiver_name(rx)), amax, base, amax / base, max_users});
  }

  auto& adm = report.admission;
  adm.name = "capacity_admission";
  adm.metadata = table.metadata;
  adm.columns = {"target", "users", "processing_gain", "sum", "margin", "admitted"};
  std::vector<double> floors, targets;
  std::int64_t users = 0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (std::size_t i = 0; i < cfg.scenario.counts[c]; ++i) {
      floors.push_back(classes[c].gamma_tilde);
      targets.push_back(classes[c].gamma_tilde_star);
      ++users;
    }
  }
  const auto by_floor = mf_admission_check(floors, n);
  const auto by_target = mf_admission_check(targets, n);
  adm.add_row({std::string("gamma_tilde"), users, std::int64_t{n}, by_floor.sum, by_floor.margin,
               by_floor.admitted});
  adm.add_row({std::string("gamma_tilde_star"), users, std::int64_t{n}, by_target.sum,
               by_target.margin, by_target.admitted});
  return report;
}

SimulationReport cmd_simulate(const ExperimentConfig& cfg, ReceiverKind rx, bool with_trace) {
  const auto classes = cfg.delay_classes();
  auto net = netsim::generate_network(cfg.system, classes, cfg.scenario.counts, cfg.scenario.seed);
  SimulationReport report;
  netsim::EquilibriumOptions opt;
  opt.tolerance = cfg.scenario.tolerance;
  opt.max_iterations = cfg.scenario.max_iterations;
  if (with_trace) {
    ResultTable trace;
    trace.name = "simulate_trace_" + std::string(receiver_name(rx));
    trace.columns = {"iter", "user", "power", "sir"};
    trace.metadata = table_metadata(cfg);
    report.trace = std::move(trace);
    opt.on_update = [&report](int iter, std::size_t user, double power, double sir) {
      report.trace->add_row(
          {std::int64_t{iter}, static_cast<std::int64_t>(user), power, sir});
    };
  }
  report.equilibrium = netsim::find_equilibrium(net, rx, opt);

  auto& table = report.users;
  table.name = "simulate_" + std::string(receiver_name(rx));
  table.metadata = table_metadata(cfg);
  table.columns = {"user",   "class",      "gain",      "power",  "sir",     "sir_db",
                   "target", "target_db",  "utility",   "capped", "nash_ok"};
  const auto& eq = report.equilibrium;
  for (std::size_t k = 0; k < net.users(); ++k) {
    const bool capped = net.powers[k] >= net.p_max;
    table.add_row({static_cast<std::int64_t>(k), classes[net.class_of[k]].name, net.gains[k],
                   net.powers[k], eq.sirs[k], to_db(eq.sirs[k]), net.targets[k],
                   to_db(net.targets[k]),
                   constrained_utility(cfg.system, net.thresholds[k], eq.sirs[k], net.powers[k]),
                   capped, netsim::verify_nash(net, cfg.system, rx, k)});
  }
  return report;
}

}  // namespace dcpower::harness
