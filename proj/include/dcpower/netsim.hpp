#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dcpower/delay.hpp"
#include "dcpower/large_system.hpp"
#include "dcpower/utility.hpp"

namespace dcpower::netsim {

/// One snapshot of a synchronous random-spreading CDMA uplink.
///
/// Column k of `sequences` is user k's spreading sequence. Generated chips
/// are i.i.d. equiprobable in {-1/sqrt(N), +1/sqrt(N)}, so every column has
/// unit norm. Symbols and noise are never sampled: receivers work from the
/// second-order statistics (unit-power symbols, noise covariance sigma^2 I).
struct NetworkRealization {
  Eigen::MatrixXd sequences;          // N x K
  std::vector<double> gains;          // h_k
  std::vector<double> powers;         // p_k in [0, p_max]
  std::vector<double> targets;        // gamma_tilde_star_k
  std::vector<double> thresholds;     // gamma_tilde_k
  std::vector<std::size_t> class_of;  // index into the class list
  double noise_power = 0.0;
  double p_max = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;

  std::size_t users() const noexcept { return gains.size(); }
  int processing_gain() const noexcept { return static_cast<int>(sequences.rows()); }
};

/// N x K chip matrix; user k's column is drawn from its own stream
/// stream_seed(seed, trial, k), one 64-bit word per 64 chips (LSB first,
/// bit set -> +1/sqrt(N)).
Eigen::MatrixXd generate_sequences(int processing_gain, std::size_t users, std::uint64_t seed,
                                   std::uint64_t trial = 0);

/// Users are laid out class by class, counts[c] users of classes[c]. Powers
/// start at the zero-interference power sigma^2 target / h^2 (capped at
/// p_max).
NetworkRealization generate_network(const SystemParams& params,
                                    std::span<const DelayClass> classes,
                                    std::span<const std::size_t> counts, std::uint64_t seed,
                                    std::uint64_t trial = 0);

/// Output SIR of user k for a linear receiver at the realization's powers.
/// Throws ReceiverError when the decorrelator is not applicable (K > N or
/// ill-conditioned S^T S).
double sir(const NetworkRealization& net, ReceiverKind rx, std::size_t k);

/// All users' SIRs from one factorization per call.
std::vector<double> sir_all(const NetworkRealization& net, ReceiverKind rx);

/// Power that meets user k's target with everyone else frozen:
/// min(p_k * target (1 + guard) / gamma_k, p_max). SIR is linear in own
/// power for every linear receiver, so one step lands on the target. A user
/// at zero SIR restarts from the zero-interference power.
double best_response_step(const NetworkRealization& net, ReceiverKind rx, std::size_t k,
                          double target_guard = 0.0);

struct EquilibriumOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
  /// Called once per user per sweep with (sweep, user, new power, SIR measured
  /// before the update).
  std::function<void(int, std::size_t, double, double)> on_update;
};

struct EquilibriumTrace {
  int iterations = 0;                  // sweeps that moved some power by more than tol
  std::vector<double> max_rel_change;  // one entry per sweep, including the last
  std::vector<double> sirs;
  std::vector<double> powers;
  bool converged = false;
  std::vector<std::size_t> capped;         // users held at p_max
  std::vector<std::size_t> below_threshold;  // users with gamma_k < gamma_tilde_k
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, EquilibriumTrace trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const EquilibriumTrace& trace() const noexcept { return trace_; }

 private:
  EquilibriumTrace trace_;
};

/// Synchronous best-response sweeps until the largest relative power change
/// is at most `tolerance`. Each sweep aims at target (1 + tolerance) so that
/// the monotone climb from below ends with every uncapped user at or just
/// above its target. Updates net.powers in place. Throws ConvergenceError
/// after max_iterations sweeps.
EquilibriumTrace find_equilibrium(NetworkRealization& net, ReceiverKind rx,
                                  const EquilibriumOptions& options = {});

inline constexpr double kDefaultPerturbations[] = {0.5, 0.9, 0.99, 1.01, 1.1, 2.0};

/// True iff no multiplicative change of p_k alone (within [0, p_max]) raises
/// user k's constrained utility by more than rel_tol.
bool verify_nash(const NetworkRealization& net, const SystemParams& params, ReceiverKind rx,
                 std::size_t k, std::span<const double> perturbations = kDefaultPerturbations,
                 double rel_tol = 1e-9);

struct MonteCarloOptions {
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  EquilibriumOptions equilibrium;
  unsigned threads = 0;  // 0: hardware concurrency
  bool check_nash = true;
};

struct TrialOutcome {
  bool censored = false;
  std::string censor_reason;
  int iterations = 0;
  std::vector<double> class_means;  // mean constrained utility per class
  std::size_t nash_checked = 0;
  std::size_t nash_passed = 0;
};

struct ClassStats {
  std::string name;
  std::size_t users_per_trial = 0;
  std::size_t samples = 0;
  double mean = 0.0;
  double stddev = 0.0;
  bool prediction_available = false;
  double predicted = 0.0;  // large-system utility at alpha_c = K_c / N
  double rel_gap = 0.0;
};

struct MonteCarloReport {
  ReceiverKind receiver;
  std::vector<ClassStats> classes;
  std::vector<TrialOutcome> trials;
  std::size_t censored = 0;
  std::size_t nash_checked = 0;
  std::size_t nash_passed = 0;
  double mean_iterations = 0.0;
  int max_iterations = 0;

  double censored_fraction() const;
  /// Per-trial |class mean - prediction| / prediction over uncensored trials.
  std::vector<double> trial_gaps(std::size_t class_index) const;
  double median_gap(std::size_t class_index) const;
};

/// Independent realizations, each driven to equilibrium; per-class utility
/// statistics compared against the large-system closed form. Trials where
/// the receiver is inapplicable, the iteration fails, or some user cannot
/// reach its delay floor at p_max are counted as censored and excluded from
/// the averages.
MonteCarloReport monte_carlo_utilities(const SystemParams& params,
                                       std::span<const DelayClass> classes,
                                       std::span<const std::size_t> counts, ReceiverKind rx,
                                       const MonteCarloOptions& options = {});

}  // namespace dcpower::netsim
