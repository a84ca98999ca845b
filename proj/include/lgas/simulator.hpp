#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <variant>
#include <vector>

#include "lgas/errors.hpp"
#include "lgas/lattice.hpp"
#include "lgas/rng.hpp"

namespace lgas {

/// Result of one direct-method step from a configuration.
struct Step {
  double holding_time;
  Event event;
  Configuration next;
};

/// Draws H ~ Exp(q(eta)) and an enabled event with probability rate / q(eta).
/// Throws AbsorbingStateError when q(eta) = 0.
Step step(const RateModel& model, const Configuration& eta, Rng& rng);

/// As above, with caller-owned scratch storage for the enabled-event list.
Step step(const RateModel& model, const Configuration& eta, Rng& rng, std::vector<RatedEvent>& scratch);

/// State of the jump chain right after jump `index`.
///
/// `holding_time` is the hold that ended at this jump, J_i - J_{i-1}; it is 0
/// for the initial record.
struct JumpRecord {
  std::uint64_t index = 0;
  double time = 0.0;
  std::optional<Event> event;
  Configuration config;
  double holding_time = 0.0;
};

struct MaxJumps {
  std::uint64_t count;
};

struct MaxTime {
  double time;
};

struct RunControl {
  std::variant<MaxJumps, MaxTime> stop = MaxJumps{0};
  /// Keep simulating past the stop point until the observer reports drained().
  bool drain = false;
  /// Hard cap on the total number of jumps of a drained run.
  std::uint64_t jump_budget = 1'000'000'000;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  Configuration initial;
};

enum class Termination { max_jumps, max_time, drained };

struct RunSummary {
  /// Time of the last jump, or the horizon time for an undrained MaxTime run.
  double final_time = 0.0;
  std::uint64_t jumps = 0;
  /// Measurement horizon t and N_t.
  double horizon_time = 0.0;
  std::uint64_t horizon_jumps = 0;
  Termination reason = Termination::max_jumps;
};

class TrajectoryObserver {
 public:
  virtual ~TrajectoryObserver() = default;
  virtual void on_jump(const JumpRecord& record) = 0;
  /// Called once when the stop rule is met, before any drain jumps.
  virtual void on_horizon(double /*time*/, std::uint64_t /*jumps*/) {}
  virtual bool drained() const { return true; }
};

RunSummary run(const RateModel& model, const RunControl& control, TrajectoryObserver& observer);
RunSummary run(const RateModel& model, const RunControl& control,
               const std::function<void(const JumpRecord&)>& observer);

/// Worker count for ensembles: $LGAS_THREADS if set and positive, else the
/// hardware concurrency.
unsigned default_thread_count();

template <typename Observer>
struct ReplicaRun {
  std::size_t replica = 0;
  RunSummary summary;
  Observer observer;
};

/// Runs `n_replicas` trajectories; replica k uses stream k of `base.seed`.
///
/// `make_observer(k)` builds the observer of replica k. Results are ordered by
/// replica index regardless of scheduling. The first failing replica (lowest
/// index) is rethrown as ReplicaError.
template <typename Observer, typename Factory>
std::vector<ReplicaRun<Observer>> run_ensemble(const RateModel& model, const RunControl& base,
                                               std::size_t n_replicas, Factory make_observer,
                                               unsigned threads = 0) {
  if (n_replicas == 0) throw ContractError("run_ensemble needs at least one replica");
  std::vector<std::optional<ReplicaRun<Observer>>> slots(n_replicas);
  std::vector<std::exception_ptr> errors(n_replicas);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k = next++; k < n_replicas; k = next++) {
      try {
        RunControl control = base;
        control.stream = k;
        Observer observer = make_observer(k);
        RunSummary summary = run(model, control, observer);
        slots[k].emplace(ReplicaRun<Observer>{k, summary, std::move(observer)});
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };

  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_replicas));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t k = 0; k < n_replicas; ++k) {
    if (!errors[k]) continue;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const std::exception& e) {
      throw ReplicaError(k, e.what());
    }
  }
  std::vector<ReplicaRun<Observer>> out;
  out.reserve(n_replicas);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace lgas
