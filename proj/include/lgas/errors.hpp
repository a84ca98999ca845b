#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lgas {

/// An operation was called with arguments violating its precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The chain reached a configuration with q(eta) = 0.
class AbsorbingStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state-space size guard was exceeded.
class CapExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The stationary system is singular: the model is not irreducible.
class ReducibleModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The model has no positive injection rate in stationarity.
class NoInfluxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A drained run ran out of its jump budget.
class JumpBudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Residence-time estimate requested while counted particles are still inside.
class IncompleteDrainError : public std::runtime_error {
 public:
  IncompleteDrainError(std::uint64_t open_count)
      : std::runtime_error("incomplete drain: " + std::to_string(open_count) +
                           " counted particle(s) still in the system"),
        open_count_(open_count) {}
  std::uint64_t open_count() const noexcept { return open_count_; }

 private:
  std::uint64_t open_count_;
};

/// The particle ledger disagrees with the occupancy it is tracking.
class LedgerCorruptionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Failure inside one replica of an ensemble.
class ReplicaError : public std::runtime_error {
 public:
  ReplicaError(std::size_t replica, const std::string& what)
      : std::runtime_error("replica " + std::to_string(replica) + ": " + what),
        replica_(replica) {}
  std::size_t replica() const noexcept { return replica_; }

 private:
  std::size_t replica_;
};

}  // namespace lgas
