#include "dcpower/delay.hpp"

#include <algorithm>
#include <cmath>

#include "dcpower/errors.hpp"

namespace dcpower {
namespace {

void require_valid_pair(int max_transmissions, double beta) {
  if (max_transmissions < 1) {
    throw DomainError("D must be >= 1, got " + std::to_string(max_transmissions));
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("beta must lie in (0, 1), got " + std::to_string(beta));
  }
}

}  // namespace

double eta(int max_transmissions, double beta) {
  require_valid_pair(max_transmissions, beta);
  return -std::expm1(std::log1p(-beta) / max_transmissions);
}

double delay_outage_probability(const EfficiencyModel& model, double gamma,
                                int max_transmissions) {
  if (!(gamma > 0.0)) throw DomainError("SIR must be positive");
  if (max_transmissions < 1) throw DomainError("D must be >= 1");
  return std::pow(1.0 - model.value(gamma), max_transmissions);
}

DelayClass target_sir(int max_transmissions, double beta, const EfficiencyModel& model,
                      double gamma_star) {
  DelayClass cls;
  cls.max_transmissions = max_transmissions;
  cls.beta = beta;
  cls.eta = eta(max_transmissions, beta);
  cls.gamma_tilde = model.inverse(cls.eta);
  cls.gamma_tilde_star = std::max(cls.gamma_tilde, gamma_star);
  return cls;
}

DelayClass target_sir(int max_transmissions, double beta, const EfficiencyModel& model) {
  return target_sir(max_transmissions, beta, model, solve_gamma_star(model).gamma);
}

}  // namespace dcpower
