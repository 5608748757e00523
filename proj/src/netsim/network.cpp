#include <algorithm>
#include <cmath>

#include "dcpower/errors.hpp"
#include "dcpower/netsim.hpp"
#include "dcpower/rng.hpp"

namespace dcpower::netsim {

Eigen::MatrixXd generate_sequences(int processing_gain, std::size_t users, std::uint64_t seed,
                                   std::uint64_t trial) {
  if (processing_gain < 1) throw DomainError("processing gain must be >= 1");
  const double chip = 1.0 / std::sqrt(static_cast<double>(processing_gain));
  Eigen::MatrixXd s(processing_gain, static_cast<Eigen::Index>(users));
  for (std::size_t k = 0; k < users; ++k) {
    SplitMix64 rng(stream_seed(seed, trial, k));
    std::uint64_t word = 0;
    for (int n = 0; n < processing_gain; ++n) {
      if (n % 64 == 0) word = rng.next();
      s(n, static_cast<Eigen::Index>(k)) = (word & 1U) ? chip : -chip;
      word >>= 1;
    }
  }
  return s;
}

NetworkRealization generate_network(const SystemParams& params,
                                    std::span<const DelayClass> classes,
                                    std::span<const std::size_t> counts, std::uint64_t seed,
                                    std::uint64_t trial) {
  if (classes.size() != counts.size()) {
    throw DomainError("need one user count per class");
  }
  NetworkRealization net;
  net.noise_power = params.noise_power;
  net.p_max = params.p_max;
  net.seed = seed;
  net.trial = trial;
  const double h = params.gain_model.gain();
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (std::size_t i = 0; i < counts[c]; ++i) {
      net.class_of.push_back(c);
      net.gains.push_back(h);
      net.targets.push_back(classes[c].gamma_tilde_star);
      net.thresholds.push_back(classes[c].gamma_tilde);
      net.powers.push_back(
          std::min(params.noise_power * classes[c].gamma_tilde_star / (h * h), params.p_max));
    }
  }
  if (net.users() == 0) throw DomainError("network needs at least one user");
  net.sequences = generate_sequences(params.processing_gain, net.users(), seed, trial);
  return net;
}

}  // namespace dcpower::netsim
