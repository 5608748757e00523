#include "dcpower/efficiency.hpp"

#include <cmath>
#include <string>

#include "dcpower/errors.hpp"

namespace dcpower {
namespace {

constexpr double kStarLower = 1e-6;
constexpr double kStarUpper = 100.0;
constexpr double kBracketWidth = 1e-12;
constexpr int kNewtonSteps = 3;

void require_nonnegative(double gamma) {
  if (!(gamma >= 0.0)) {
    throw DomainError("SIR must be nonnegative, got " + std::to_string(gamma));
  }
}

void require_open_unit(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw DomainError("probability must lie in (0, 1), got " + std::to_string(eta));
  }
}

// (f - gamma f') / f = 1 - M gamma / (e^gamma - 1). Same sign as
// f - gamma f' but free of the underflow f suffers near zero for large M.
double normalized_stationarity(int m, double gamma) {
  return 1.0 - m * gamma / std::expm1(gamma);
}

double normalized_stationarity_slope(int m, double gamma) {
  const double em1 = std::expm1(gamma);
  return -m * (em1 - gamma * std::exp(gamma)) / (em1 * em1);
}

}  // namespace

EfficiencyModel::EfficiencyModel(int packet_bits) : packet_bits_(packet_bits) {
  if (packet_bits < 1) {
    throw DomainError("packet length M must be >= 1");
  }
}

double EfficiencyModel::value(double gamma) const {
  require_nonnegative(gamma);
  if (gamma == 0.0) return 0.0;
  return std::pow(-std::expm1(-gamma), packet_bits_);
}

double EfficiencyModel::derivative(double gamma) const {
  require_nonnegative(gamma);
  const double success_bit = -std::expm1(-gamma);
  return packet_bits_ * std::exp(-gamma) * std::pow(success_bit, packet_bits_ - 1);
}

double EfficiencyModel::inverse(double eta) const {
  require_open_unit(eta);
  // 1 - eta^(1/M) computed as -expm1(ln(eta)/M) to keep digits for eta near 1.
  return -std::log(-std::expm1(std::log(eta) / packet_bits_));
}

double EfficiencyModel::inverse_bisection(double eta) const {
  require_open_unit(eta);
  double lo = 0.0;
  double hi = 1.0;
  while (value(hi) < eta) {
    hi *= 2.0;
    if (hi > 1e6) throw SolverError("efficiency inverse not bracketed");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (value(mid) < eta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double efficiency(const EfficiencyModel& model, double gamma) { return model.value(gamma); }

double efficiency_derivative(const EfficiencyModel& model, double gamma) {
  return model.derivative(gamma);
}

double invert_efficiency(const EfficiencyModel& model, double eta) { return model.inverse(eta); }

GammaStar solve_gamma_star(const EfficiencyModel& model) {
  const int m = model.packet_bits();
  double lo = kStarLower;
  double hi = kStarUpper;
  if (!(normalized_stationarity(m, lo) < 0.0 && normalized_stationarity(m, hi) > 0.0)) {
    throw SolverError("f(gamma) = gamma f'(gamma) has no root in [1e-6, 100] for M = " +
                      std::to_string(m) + "; efficiency function is not sigmoidal");
  }
  while (hi - lo > kBracketWidth) {
    const double mid = 0.5 * (lo + hi);
    if (normalized_stationarity(m, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double gamma = 0.5 * (lo + hi);
  for (int i = 0; i < kNewtonSteps; ++i) {
    const double slope = normalized_stationarity_slope(m, gamma);
    if (slope == 0.0) break;
    const double next = gamma - normalized_stationarity(m, gamma) / slope;
    if (!(next > lo - kBracketWidth && next < hi + kBracketWidth)) break;
    gamma = next;
  }
  const double residual = std::abs(model.value(gamma) - gamma * model.derivative(gamma));
  return {gamma, residual};
}

}  // namespace dcpower
