#pragma once

namespace dcpower {

/// Packet success probability as a function of output SIR,
/// f(gamma) = (1 - exp(-gamma))^M for an M-bit packet.
///
/// f(0) = 0 exactly, f is strictly increasing on (0, inf) and tends to 1.
/// For M >= 2 the curve is S-shaped and f'(0) = 0.
class EfficiencyModel {
 public:
  explicit EfficiencyModel(int packet_bits);

  int packet_bits() const noexcept { return packet_bits_; }

  double value(double gamma) const;
  double derivative(double gamma) const;

  /// Closed-form inverse: gamma = -ln(1 - eta^(1/M)).
  double inverse(double eta) const;

  /// Inverse by bisection on value(); independent of the closed form.
  double inverse_bisection(double eta) const;

 private:
  int packet_bits_;
};

double efficiency(const EfficiencyModel& model, double gamma);
double efficiency_derivative(const EfficiencyModel& model, double gamma);
double invert_efficiency(const EfficiencyModel& model, double eta);

struct GammaStar {
  double gamma;
  double residual;  // |f(gamma) - gamma f'(gamma)|
};

/// Unique positive root of f(gamma) = gamma f'(gamma), the SIR maximizing
/// f(gamma)/gamma. Bisection on [1e-6, 100] to a 1e-12 bracket followed by
/// three Newton steps. Throws SolverError if the root is not bracketed
/// (M = 1 has no interior maximum).
GammaStar solve_gamma_star(const EfficiencyModel& model);

}  // namespace dcpower
