#pragma once

#include <stdexcept>
#include <string>

namespace dcpower {

// Input outside an operation's mathematical domain (negative SIR, beta not
// in (0,1), non-positive power, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A root finder could not bracket or converge.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Large-system closed forms requested for a load that violates the
// receiver's feasibility condition.
class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Receiver cannot be applied to a realization (decorrelator with K > N or a
// singular / ill-conditioned correlation matrix).
class ReceiverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dcpower
