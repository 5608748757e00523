#include "dcpower/large_system.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "dcpower/errors.hpp"

namespace dcpower {

std::string_view receiver_name(ReceiverKind rx) {
  switch (rx) {
    case ReceiverKind::MatchedFilter:
      return "mf";
    case ReceiverKind::Decorrelator:
      return "de";
    case ReceiverKind::MMSE:
      return "mmse";
  }
  return "?";
}

ReceiverKind parse_receiver(std::string_view name) {
  if (name == "mf") return ReceiverKind::MatchedFilter;
  if (name == "de") return ReceiverKind::Decorrelator;
  if (name == "mmse") return ReceiverKind::MMSE;
  throw DomainError("unknown receiver '" + std::string(name) + "'");
}

}  // namespace dcpower

namespace dcpower::large_system {
namespace {

// Per-user contribution of a class-c user to the receiver's load sum.
double load_weight(double target, ReceiverKind rx) {
  switch (rx) {
    case ReceiverKind::MatchedFilter:
      return target;
    case ReceiverKind::Decorrelator:
      return 1.0;
    case ReceiverKind::MMSE:
      return target / (1.0 + target);
  }
  return target;
}

Feasibility require_feasible(const LoadProfile& load, ReceiverKind rx) {
  auto f = feasibility(load, rx);
  if (!f.feasible) {
    throw FeasibilityError("load is infeasible for the " + std::string(receiver_name(rx)) +
                           " receiver (load sum " + std::to_string(f.sum) + ")");
  }
  return f;
}

}  // namespace

double LoadProfile::total_alpha() const {
  return std::accumulate(alphas.begin(), alphas.end(), 0.0);
}

void LoadProfile::validate() const {
  if (classes.empty() || classes.size() != alphas.size()) {
    throw DomainError("load profile needs one alpha per class and at least one class");
  }
  for (double a : alphas) {
    if (!(a >= 0.0)) throw DomainError("class loads must be nonnegative");
  }
}

Feasibility feasibility(const LoadProfile& load, ReceiverKind rx) {
  load.validate();
  double sum = 0.0;
  for (std::size_t c = 0; c < load.classes.size(); ++c) {
    sum += load.alphas[c] * load_weight(load.classes[c].gamma_tilde_star, rx);
  }
  const double margin = 1.0 - sum;
  return {margin >= kBoundaryGuard, sum, margin};
}

PowerResult equilibrium_power(const SystemParams& params, const LoadProfile& load,
                              ReceiverKind rx, std::size_t class_index, double gain) {
  if (!(gain > 0.0)) throw DomainError("gain must be positive");
  const auto f = require_feasible(load, rx);
  const double target = load.classes.at(class_index).gamma_tilde_star;
  const double watts = target * params.noise_power / (gain * gain * f.margin);
  return {watts, watts > params.p_max};
}

double equilibrium_utility(const SystemParams& params, const LoadProfile& load, ReceiverKind rx,
                           std::size_t class_index, double gain) {
  if (!(gain > 0.0)) throw DomainError("gain must be positive");
  const auto f = require_feasible(load, rx);
  const double target = load.classes.at(class_index).gamma_tilde_star;
  const double scale = static_cast<double>(params.info_bits) * params.rate /
                       (params.packet_bits * params.noise_power);
  return scale * gain * gain * f.margin * params.efficiency_model().value(target) / target;
}

double unconstrained_utility(const SystemParams& params, double gamma_star, double total_alpha,
                             ReceiverKind rx, double gain) {
  if (!(gain > 0.0)) throw DomainError("gain must be positive");
  const double margin = 1.0 - total_alpha * load_weight(gamma_star, rx);
  if (!(margin >= kBoundaryGuard)) {
    throw FeasibilityError("unconstrained baseline infeasible at alpha = " +
                           std::to_string(total_alpha));
  }
  const double scale = static_cast<double>(params.info_bits) * params.rate /
                       (params.packet_bits * params.noise_power);
  return scale * gain * gain * margin * params.efficiency_model().value(gamma_star) / gamma_star;
}

double utility_loss_ratio(const SystemParams& params, const LoadProfile& load, ReceiverKind rx,
                          std::size_t class_index, double gamma_star) {
  const double baseline = unconstrained_utility(params, gamma_star, load.total_alpha(), rx);
  return equilibrium_utility(params, load, rx, class_index) / baseline;
}

EquilibriumReport equilibrium_report(const SystemParams& params, const LoadProfile& load,
                                     ReceiverKind rx) {
  const auto f = feasibility(load, rx);
  EquilibriumReport report{rx, f.feasible, f.margin, {}, {}, {}};
  if (!f.feasible) return report;
  for (std::size_t c = 0; c < load.classes.size(); ++c) {
    const auto p = equilibrium_power(params, load, rx, c);
    report.powers.push_back(p.watts);
    report.utilities.push_back(equilibrium_utility(params, load, rx, c));
    if (p.exceeds_p_max) report.over_p_max.push_back(c);
  }
  return report;
}

double capacity(std::span<const DelayClass> classes, std::span<const double> mix_fractions,
                ReceiverKind rx) {
  if (classes.size() != mix_fractions.size() || classes.empty()) {
    throw DomainError("capacity needs one mix fraction per class");
  }
  const double total = std::accumulate(mix_fractions.begin(), mix_fractions.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("mix fractions must sum to 1");
  double weighted = 0.0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    weighted += mix_fractions[c] * load_weight(classes[c].gamma_tilde_star, rx);
  }
  return 1.0 / weighted;
}

}  // namespace dcpower::large_system
