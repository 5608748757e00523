#include "dcpower/utility.hpp"

#include <cmath>
#include <string>

#include "dcpower/errors.hpp"

namespace dcpower {

double GainModel::gain(std::optional<double> distance_m) const {
  switch (kind) {
    case Kind::Unit:
      return 1.0;
    case Kind::PathLoss: {
      const double d = distance_m.value_or(distance);
      if (!(d > 0.0) || !(kappa > 0.0)) {
        throw DomainError("path-loss gain needs positive kappa and distance");
      }
      return std::sqrt(kappa) / (d * d);
    }
  }
  return 1.0;
}

void SystemParams::validate() const {
  if (info_bits < 1 || packet_bits < 1) throw DomainError("L and M must be positive");
  if (info_bits > packet_bits) throw DomainError("L must not exceed M");
  if (!(rate > 0.0)) throw DomainError("rate must be positive");
  if (!(noise_power > 0.0)) throw DomainError("noise power must be positive");
  if (processing_gain < 1) throw DomainError("processing gain must be positive");
  if (!(p_max > 0.0)) throw DomainError("p_max must be positive");
  if (gain_model.kind == GainModel::Kind::PathLoss) {
    if (!(gain_model.kappa > 0.0) || !(gain_model.distance > 0.0)) {
      throw DomainError("path-loss gain needs positive kappa and distance");
    }
  }
}

double utility(const SystemParams& params, double gamma, double power) {
  if (!(power > 0.0)) {
    throw DomainError("utility needs a positive power, got " + std::to_string(power));
  }
  const double throughput = static_cast<double>(params.info_bits) / params.packet_bits *
                            params.rate * params.efficiency_model().value(gamma);
  return throughput / power;
}

double constrained_utility(const SystemParams& params, double gamma_threshold, double gamma,
                           double power) {
  if (!(power >= 0.0)) throw DomainError("power must be nonnegative");
  if (power == 0.0 || gamma < gamma_threshold) return 0.0;
  return utility(params, gamma, power);
}

double constrained_utility(const SystemParams& params, const DelayClass& cls, double gamma,
                           double power) {
  return constrained_utility(params, cls.gamma_tilde, gamma, power);
}

AdmissionCheck mf_admission_check(std::span<const double> targets, int processing_gain) {
  double sum = 0.0;
  for (double target : targets) {
    sum += 1.0 / (1.0 + processing_gain / target);
  }
  return {sum < 1.0, sum, 1.0 - sum};
}

}  // namespace dcpower
