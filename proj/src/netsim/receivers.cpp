#include <string>

#include "dcpower/errors.hpp"
#include "dcpower/netsim.hpp"

namespace dcpower::netsim {
namespace {

constexpr double kConditionLimit = 1e12;

Eigen::Index idx(std::size_t k) { return static_cast<Eigen::Index>(k); }

// Received power p_j h_j^2 normalized by the noise power.
Eigen::VectorXd received_snr(const NetworkRealization& net) {
  Eigen::VectorXd q(idx(net.users()));
  for (std::size_t j = 0; j < net.users(); ++j) {
    q(idx(j)) = net.powers[j] * net.gains[j] * net.gains[j] / net.noise_power;
  }
  return q;
}

Eigen::VectorXd decorrelator_noise_gain(const NetworkRealization& net) {
  const auto k = net.users();
  if (static_cast<Eigen::Index>(k) > net.sequences.rows()) {
    throw ReceiverError("decorrelator needs K <= N (K = " + std::to_string(k) +
                        ", N = " + std::to_string(net.sequences.rows()) + ")");
  }
  const Eigen::MatrixXd gram = net.sequences.transpose() * net.sequences;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(gram);
  const double rcond = lu.rcond();
  if (!(rcond * kConditionLimit > 1.0)) {
    throw ReceiverError("sequence correlation matrix is singular or ill-conditioned");
  }
  return lu.inverse().diagonal();
}

// Noise-normalized covariance I + sum_j q_j s_j s_j^T.
Eigen::MatrixXd normalized_covariance(const NetworkRealization& net, const Eigen::VectorXd& q) {
  const auto n = net.sequences.rows();
  return Eigen::MatrixXd::Identity(n, n) +
         net.sequences * q.asDiagonal() * net.sequences.transpose();
}

Eigen::LLT<Eigen::MatrixXd> factor_covariance(const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success || !(llt.rcond() * kConditionLimit > 1.0)) {
    throw ReceiverError("MMSE interference covariance is ill-conditioned");
  }
  return llt;
}

double matched_filter_sir(const NetworkRealization& net, const Eigen::VectorXd& q,
                          const Eigen::MatrixXd& gram, std::size_t k) {
  const double self = gram(idx(k), idx(k));
  double interference = 0.0;
  for (std::size_t j = 0; j < net.users(); ++j) {
    if (j == k) continue;
    const double rho = gram(idx(k), idx(j));
    interference += q(idx(j)) * rho * rho;
  }
  return q(idx(k)) * self * self / (self + interference);
}

}  // namespace

double sir(const NetworkRealization& net, ReceiverKind rx, std::size_t k) {
  if (k >= net.users()) throw DomainError("user index out of range");
  const Eigen::VectorXd q = received_snr(net);
  switch (rx) {
    case ReceiverKind::MatchedFilter: {
      const Eigen::MatrixXd gram = net.sequences.transpose() * net.sequences;
      return matched_filter_sir(net, q, gram, k);
    }
    case ReceiverKind::Decorrelator:
      return q(idx(k)) / decorrelator_noise_gain(net)(idx(k));
    case ReceiverKind::MMSE: {
      Eigen::VectorXd others = q;
      others(idx(k)) = 0.0;
      const auto llt = factor_covariance(normalized_covariance(net, others));
      const Eigen::VectorXd s = net.sequences.col(idx(k));
      return q(idx(k)) * s.dot(llt.solve(s));
    }
  }
  return 0.0;
}

std::vector<double> sir_all(const NetworkRealization& net, ReceiverKind rx) {
  const auto users = net.users();
  const Eigen::VectorXd q = received_snr(net);
  std::vector<double> out(users);
  switch (rx) {
    case ReceiverKind::MatchedFilter: {
      const Eigen::MatrixXd gram = net.sequences.transpose() * net.sequences;
      for (std::size_t k = 0; k < users; ++k) out[k] = matched_filter_sir(net, q, gram, k);
      break;
    }
    case ReceiverKind::Decorrelator: {
      const Eigen::VectorXd d = decorrelator_noise_gain(net);
      for (std::size_t k = 0; k < users; ++k) out[k] = q(idx(k)) / d(idx(k));
      break;
    }
    case ReceiverKind::MMSE: {
      // Factor the full covariance once, then remove user k by a rank-one
      // downdate; the result stays >= I so the downdate is well posed.
      const auto full = factor_covariance(normalized_covariance(net, q));
      for (std::size_t k = 0; k < users; ++k) {
        const Eigen::VectorXd s = net.sequences.col(idx(k));
        if (q(idx(k)) == 0.0) {
          out[k] = 0.0;
          continue;
        }
        Eigen::LLT<Eigen::MatrixXd> without_k = full;
        without_k.rankUpdate(s, -q(idx(k)));
        if (without_k.info() != Eigen::Success) {
          throw ReceiverError("MMSE downdate lost positive definiteness");
        }
        out[k] = q(idx(k)) * s.dot(without_k.solve(s));
      }
      break;
    }
  }
  return out;
}

}  // namespace dcpower::netsim
