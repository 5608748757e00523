#pragma once

#include <string>

#include "dcpower/efficiency.hpp"

namespace dcpower {

/// A (D, beta) delay requirement: at most D transmissions with probability
/// at least beta. The derived fields are filled in by target_sir().
struct DelayClass {
  std::string name;
  int max_transmissions = 1;  // D
  double beta = 0.0;
  double eta = 0.0;                // required per-packet success rate
  double gamma_tilde = 0.0;        // SIR floor implied by (D, beta)
  double gamma_tilde_star = 0.0;   // max(gamma_tilde, gamma_star)

  /// True when the delay requirement, not energy efficiency, sets the target.
  bool delay_binding() const noexcept { return gamma_tilde_star == gamma_tilde; }
};

/// eta(D, beta) = 1 - (1 - beta)^(1/D).
double eta(int max_transmissions, double beta);

/// Pr{X > D} = (1 - f(gamma))^D for the geometric transmission count X.
double delay_outage_probability(const EfficiencyModel& model, double gamma,
                                int max_transmissions);

DelayClass target_sir(int max_transmissions, double beta, const EfficiencyModel& model,
                      double gamma_star);
DelayClass target_sir(int max_transmissions, double beta, const EfficiencyModel& model);

}  // namespace dcpower
