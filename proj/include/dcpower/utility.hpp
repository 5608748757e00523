#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "dcpower/delay.hpp"
#include "dcpower/efficiency.hpp"

namespace dcpower {

/// Amplitude channel gain h. Unit gains by default; the path-loss variant
/// uses h^2 = kappa / d^4.
struct GainModel {
  enum class Kind { Unit, PathLoss };
  Kind kind = Kind::Unit;
  double kappa = 1.0;
  double distance = 100.0;  // meters, used when a user carries no distance

  double gain(std::optional<double> distance_m = std::nullopt) const;
};

struct SystemParams {
  int info_bits = 100;        // L
  int packet_bits = 100;      // M
  double rate = 1e5;          // R, bits/s
  double noise_power = 5e-16; // sigma^2, W
  int processing_gain = 100;  // N
  double p_max = 1.0;         // W
  GainModel gain_model;

  EfficiencyModel efficiency_model() const { return EfficiencyModel(packet_bits); }

  /// Throws DomainError on L > M or a non-positive scalar.
  void validate() const;
};

struct UserSpec {
  std::size_t class_index = 0;
  double gain = 1.0;  // h
  std::optional<double> distance;
};

/// u = (L/M) R f(gamma) / p, in bits/Joule. Requires p > 0.
double utility(const SystemParams& params, double gamma, double power);

/// Delay-constrained utility: utility() when gamma >= gamma_threshold, 0
/// below it, and 0 at p = 0.
double constrained_utility(const SystemParams& params, double gamma_threshold, double gamma,
                           double power);
double constrained_utility(const SystemParams& params, const DelayClass& cls, double gamma,
                           double power);

struct AdmissionCheck {
  bool admitted;
  double sum;     // sum_k 1 / (1 + N / target_k)
  double margin;  // 1 - sum
};

/// Matched-filter admission test sum_k 1/(1 + N/target_k) < 1. Callers pass
/// gamma_tilde or gamma_tilde_star depending on which guarantee they need.
AdmissionCheck mf_admission_check(std::span<const double> targets, int processing_gain);

}  // namespace dcpower
