#include "lgas/simulator.hpp"

#include <string>

namespace lgas {

Step step(const RateModel& model, const Configuration& eta, Rng& rng, std::vector<RatedEvent>& scratch) {
  const double q = enabled_events(model, eta, scratch);
  if (!(q > 0.0)) {
    throw AbsorbingStateError("absorbing configuration " + eta.to_string() + " (q = 0)");
  }
  const double holding = rng.exponential(q);
  // Linear scan; the last event absorbs any rounding in the cumulative sum.
  const double target = rng.uniform_open() * q;
  double cumulative = 0.0;
  std::size_t chosen = scratch.size() - 1;
  for (std::size_t k = 0; k + 1 < scratch.size(); ++k) {
    cumulative += scratch[k].rate;
    if (target < cumulative) {
      chosen = k;
      break;
    }
  }
  const Event& event = scratch[chosen].event;
  return {holding, event, eta.flipped(flip_set(event))};
}

Step step(const RateModel& model, const Configuration& eta, Rng& rng) {
  std::vector<RatedEvent> scratch;
  return step(model, eta, rng, scratch);
}

RunSummary run(const RateModel& model, const RunControl& control, TrajectoryObserver& observer) {
  if (control.initial.size() != model.lattice().size()) {
    throw ContractError("initial configuration size " + std::to_string(control.initial.size()) +
                        " does not match lattice size " + std::to_string(model.lattice().size()));
  }
  Rng rng(control.seed, control.stream);
  std::vector<RatedEvent> scratch;

  JumpRecord record;
  record.config = control.initial;
  observer.on_jump(record);

  RunSummary summary;
  const auto* max_jumps = std::get_if<MaxJumps>(&control.stop);
  const double max_time = max_jumps ? std::numeric_limits<double>::infinity() : std::get<MaxTime>(control.stop).time;
  bool past_horizon = false;

  auto reach_horizon = [&](double t) {
    past_horizon = true;
    summary.horizon_time = t;
    summary.horizon_jumps = record.index;
    observer.on_horizon(t, record.index);
  };

  if (max_jumps && max_jumps->count == 0) reach_horizon(0.0);

  while (true) {
    if (past_horizon && (!control.drain || observer.drained())) break;
    if (past_horizon && record.index >= control.jump_budget) {
      throw JumpBudgetExhausted("drain did not finish within " + std::to_string(control.jump_budget) + " jumps");
    }
    Step s = step(model, record.config, rng, scratch);
    const double next_time = record.time + s.holding_time;
    if (!past_horizon && next_time > max_time) {
      reach_horizon(max_time);
      if (!control.drain || observer.drained()) break;
    }
    record.index += 1;
    record.time = next_time;
    record.holding_time = s.holding_time;
    record.event = std::move(s.event);
    record.config = s.next;
    observer.on_jump(record);
    if (!past_horizon && max_jumps && record.index == max_jumps->count) reach_horizon(record.time);
  }

  summary.jumps = record.index;
  if (control.drain) {
    summary.reason = Termination::drained;
    summary.final_time = record.time;
  } else if (max_jumps) {
    summary.reason = Termination::max_jumps;
    summary.final_time = record.time;
  } else {
    summary.reason = Termination::max_time;
    summary.final_time = max_time;
  }
  return summary;
}

namespace {

class CallbackObserver final : public TrajectoryObserver {
 public:
  explicit CallbackObserver(const std::function<void(const JumpRecord&)>& fn) : fn_(fn) {}
  void on_jump(const JumpRecord& record) override {
    if (fn_) fn_(record);
  }

 private:
  const std::function<void(const JumpRecord&)>& fn_;
};

}  // namespace

RunSummary run(const RateModel& model, const RunControl& control,
               const std::function<void(const JumpRecord&)>& observer) {
  CallbackObserver wrapped(observer);
  return run(model, control, wrapped);
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("LGAS_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace lgas
