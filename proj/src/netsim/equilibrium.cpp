#include <algorithm>
#include <cmath>
#include <limits>

#include "dcpower/errors.hpp"
#include "dcpower/netsim.hpp"

namespace dcpower::netsim {
namespace {

double zero_interference_power(const NetworkRealization& net, std::size_t k, double guard) {
  const double h2 = net.gains[k] * net.gains[k];
  return net.noise_power * net.targets[k] * (1.0 + guard) / h2;
}

double respond(const NetworkRealization& net, std::size_t k, double gamma, double guard) {
  const double p = (gamma > 0.0 && net.powers[k] > 0.0)
                       ? net.powers[k] * net.targets[k] * (1.0 + guard) / gamma
                       : zero_interference_power(net, k, guard);
  return std::min(p, net.p_max);
}

void finish_trace(const NetworkRealization& net, ReceiverKind rx, EquilibriumTrace& trace) {
  trace.powers = net.powers;
  trace.sirs = sir_all(net, rx);
  trace.capped.clear();
  trace.below_threshold.clear();
  for (std::size_t k = 0; k < net.users(); ++k) {
    if (net.powers[k] >= net.p_max) trace.capped.push_back(k);
    if (trace.sirs[k] < net.thresholds[k]) trace.below_threshold.push_back(k);
  }
}

}  // namespace

double best_response_step(const NetworkRealization& net, ReceiverKind rx, std::size_t k,
                          double target_guard) {
  return respond(net, k, sir(net, rx, k), target_guard);
}

EquilibriumTrace find_equilibrium(NetworkRealization& net, ReceiverKind rx,
                                  const EquilibriumOptions& options) {
  if (!(options.tolerance > 0.0)) throw DomainError("tolerance must be positive");
  const double guard = options.tolerance;
  const auto users = net.users();
  EquilibriumTrace trace;
  std::vector<double> next(users);

  for (int sweep = 1; sweep <= options.max_iterations; ++sweep) {
    const std::vector<double> gammas = sir_all(net, rx);
    double change = 0.0;
    for (std::size_t k = 0; k < users; ++k) {
      next[k] = respond(net, k, gammas[k], guard);
      const double prev = net.powers[k];
      const double rel = prev > 0.0 ? std::abs(next[k] - prev) / prev
                                    : std::numeric_limits<double>::infinity();
      change = std::max(change, rel);
      if (options.on_update) options.on_update(sweep, k, next[k], gammas[k]);
    }
    net.powers = next;
    trace.max_rel_change.push_back(change);
    if (change <= options.tolerance) {
      trace.converged = true;
      break;
    }
    ++trace.iterations;
  }

  finish_trace(net, rx, trace);
  if (!trace.converged) {
    throw ConvergenceError("best-response iteration did not converge in " +
                               std::to_string(options.max_iterations) + " sweeps",
                           std::move(trace));
  }
  return trace;
}

bool verify_nash(const NetworkRealization& net, const SystemParams& params, ReceiverKind rx,
                 std::size_t k, std::span<const double> perturbations, double rel_tol) {
  if (k >= net.users()) throw DomainError("user index out of range");
  const double base_power = net.powers[k];
  const double base = constrained_utility(params, net.thresholds[k], sir(net, rx, k), base_power);

  NetworkRealization probe = net;
  for (double delta : perturbations) {
    const double p = base_power * delta;
    if (p < 0.0 || p > net.p_max) continue;
    probe.powers[k] = p;
    const double u = constrained_utility(params, net.thresholds[k], sir(probe, rx, k), p);
    if (u > base * (1.0 + rel_tol)) return false;
  }
  return true;
}

}  // namespace dcpower::netsim
