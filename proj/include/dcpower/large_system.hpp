#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dcpower/delay.hpp"
#include "dcpower/utility.hpp"

namespace dcpower {

enum class ReceiverKind { MatchedFilter, Decorrelator, MMSE };

inline constexpr ReceiverKind kAllReceivers[] = {
    ReceiverKind::MatchedFilter, ReceiverKind::Decorrelator, ReceiverKind::MMSE};

std::string_view receiver_name(ReceiverKind rx);  // "mf", "de", "mmse"
ReceiverKind parse_receiver(std::string_view name);

}  // namespace dcpower

namespace dcpower::large_system {

/// Per-class loads alpha_c = lim K_c / N for K, N -> infinity.
struct LoadProfile {
  std::vector<DelayClass> classes;
  std::vector<double> alphas;

  double total_alpha() const;
  void validate() const;
};

struct Feasibility {
  bool feasible;
  double sum;     // receiver-specific load sum that must stay below 1
  double margin;  // 1 - sum
};

/// Margins below this are treated as infeasible: the closed-form powers
/// have a pole at margin 0.
inline constexpr double kBoundaryGuard = 1e-9;

/// MF: sum alpha_c g_c < 1; DE: alpha < 1; MMSE: sum alpha_c g_c/(1+g_c) < 1,
/// with g_c the class target gamma_tilde_star.
Feasibility feasibility(const LoadProfile& load, ReceiverKind rx);

struct PowerResult {
  double watts;
  bool exceeds_p_max;  // reported, never clamped
};

/// Minimum power for a class-c user with gain h to reach its target.
/// Throws FeasibilityError for an infeasible load.
PowerResult equilibrium_power(const SystemParams& params, const LoadProfile& load,
                              ReceiverKind rx, std::size_t class_index, double gain = 1.0);

/// Delay-constrained utility at the Nash equilibrium, bits/Joule.
double equilibrium_utility(const SystemParams& params, const LoadProfile& load, ReceiverKind rx,
                           std::size_t class_index, double gain = 1.0);

/// Utility with no delay constraints at total load alpha (every target at
/// gamma_star). Throws FeasibilityError when alpha is beyond capacity.
double unconstrained_utility(const SystemParams& params, double gamma_star, double total_alpha,
                             ReceiverKind rx, double gain = 1.0);

/// Class utility divided by the all-unconstrained utility at the same total
/// load. Independent of the gain.
double utility_loss_ratio(const SystemParams& params, const LoadProfile& load, ReceiverKind rx,
                          std::size_t class_index, double gamma_star);

struct EquilibriumReport {
  ReceiverKind receiver;
  bool feasible;
  double margin;
  std::vector<double> powers;     // per class, h = 1; empty when infeasible
  std::vector<double> utilities;  // per class, h = 1; empty when infeasible
  std::vector<std::size_t> over_p_max;
};

EquilibriumReport equilibrium_report(const SystemParams& params, const LoadProfile& load,
                                     ReceiverKind rx);

/// Largest total load alpha with alpha_c = alpha * mix_c still feasible.
double capacity(std::span<const DelayClass> classes, std::span<const double> mix_fractions,
                ReceiverKind rx);

}  // namespace dcpower::large_system
