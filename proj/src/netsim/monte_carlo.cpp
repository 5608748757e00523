#include <algorithm>
#include <cmath>
#include <thread>

#include "dcpower/errors.hpp"
#include "dcpower/netsim.hpp"

namespace dcpower::netsim {
namespace {

TrialOutcome run_trial(const SystemParams& params, std::span<const DelayClass> classes,
                       std::span<const std::size_t> counts, ReceiverKind rx,
                       const MonteCarloOptions& options, std::uint64_t trial,
                       std::vector<std::vector<double>>& samples) {
  TrialOutcome out;
  auto net = generate_network(params, classes, counts, options.seed, trial);
  EquilibriumTrace trace;
  try {
    trace = find_equilibrium(net, rx, options.equilibrium);
  } catch (const ReceiverError& e) {
    out.censored = true;
    out.censor_reason = e.what();
    return out;
  } catch (const ConvergenceError& e) {
    out.censored = true;
    out.censor_reason = e.what();
    out.iterations = e.trace().iterations;
    return out;
  }
  out.iterations = trace.iterations;
  if (!trace.below_threshold.empty()) {
    out.censored = true;
    out.censor_reason = "delay requirement unreachable at p_max";
    return out;
  }

  samples.assign(classes.size(), {});
  for (std::size_t k = 0; k < net.users(); ++k) {
    samples[net.class_of[k]].push_back(
        constrained_utility(params, net.thresholds[k], trace.sirs[k], net.powers[k]));
  }
  out.class_means.assign(classes.size(), 0.0);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (samples[c].empty()) continue;
    double sum = 0.0;
    for (double u : samples[c]) sum += u;
    out.class_means[c] = sum / static_cast<double>(samples[c].size());
  }
  if (options.check_nash) {
    for (std::size_t k = 0; k < net.users(); ++k) {
      ++out.nash_checked;
      if (verify_nash(net, params, rx, k)) ++out.nash_passed;
    }
  }
  return out;
}

}  // namespace

double MonteCarloReport::censored_fraction() const {
  return trials.empty() ? 0.0 : static_cast<double>(censored) / trials.size();
}

std::vector<double> MonteCarloReport::trial_gaps(std::size_t class_index) const {
  std::vector<double> gaps;
  const auto& stats = classes.at(class_index);
  if (!stats.prediction_available) return gaps;
  for (const auto& t : trials) {
    if (t.censored) continue;
    gaps.push_back(std::abs(t.class_means[class_index] - stats.predicted) / stats.predicted);
  }
  return gaps;
}

double MonteCarloReport::median_gap(std::size_t class_index) const {
  auto gaps = trial_gaps(class_index);
  if (gaps.empty()) return std::nan("");
  std::sort(gaps.begin(), gaps.end());
  const auto n = gaps.size();
  return n % 2 ? gaps[n / 2] : 0.5 * (gaps[n / 2 - 1] + gaps[n / 2]);
}

MonteCarloReport monte_carlo_utilities(const SystemParams& params,
                                       std::span<const DelayClass> classes,
                                       std::span<const std::size_t> counts, ReceiverKind rx,
                                       const MonteCarloOptions& options) {
  if (classes.size() != counts.size() || classes.empty()) {
    throw DomainError("need one user count per class");
  }
  const std::size_t trials = options.trials;
  std::vector<TrialOutcome> outcomes(trials);
  std::vector<std::vector<std::vector<double>>> samples(trials);

  unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(trials)));
  auto work = [&](unsigned w) {
    for (std::size_t t = w; t < trials; t += workers) {
      outcomes[t] = run_trial(params, classes, counts, rx, options, t, samples[t]);
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  MonteCarloReport report{rx, {}, std::move(outcomes), 0, 0, 0, 0.0, 0};

  // Merge in trial order so results do not depend on the thread count.
  std::vector<std::vector<double>> pooled(classes.size());
  std::size_t converged = 0;
  double iteration_sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& out = report.trials[t];
    report.nash_checked += out.nash_checked;
    report.nash_passed += out.nash_passed;
    if (out.censored) {
      ++report.censored;
      continue;
    }
    ++converged;
    iteration_sum += out.iterations;
    report.max_iterations = std::max(report.max_iterations, out.iterations);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      pooled[c].insert(pooled[c].end(), samples[t][c].begin(), samples[t][c].end());
    }
  }
  report.mean_iterations = converged ? iteration_sum / converged : 0.0;

  large_system::LoadProfile load{{classes.begin(), classes.end()}, {}};
  for (auto count : counts) {
    load.alphas.push_back(static_cast<double>(count) / params.processing_gain);
  }
  const bool predictable = large_system::feasibility(load, rx).feasible;
  const double h = params.gain_model.gain();

  for (std::size_t c = 0; c < classes.size(); ++c) {
    ClassStats stats;
    stats.name = classes[c].name;
    stats.users_per_trial = counts[c];
    const auto& us = pooled[c];
    stats.samples = us.size();
    if (!us.empty()) {
      double sum = 0.0;
      for (double u : us) sum += u;
      stats.mean = sum / us.size();
      double ss = 0.0;
      for (double u : us) ss += (u - stats.mean) * (u - stats.mean);
      stats.stddev = us.size() > 1 ? std::sqrt(ss / (us.size() - 1)) : 0.0;
    }
    if (predictable && counts[c] > 0) {
      stats.prediction_available = true;
      stats.predicted = large_system::equilibrium_utility(params, load, rx, c, h);
      stats.rel_gap = std::abs(stats.mean - stats.predicted) / stats.predicted;
    }
    report.classes.push_back(std::move(stats));
  }
  return report;
}

}  // namespace dcpower::netsim
