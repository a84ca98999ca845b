#include "lgas/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "lgas/batch_means.hpp"
#include "lgas/errors.hpp"

namespace lgas {

ResidenceLedger::ResidenceLedger(const Configuration& initial)
    : sites_(static_cast<std::size_t>(initial.size())), current_(initial) {
  for (int x = 0; x < initial.size(); ++x) {
    if (initial[x]) {
      sites_[static_cast<std::size_t>(x)] = OpenRecord{next_id_++, 0, 0.0, true};
      ++open_initial_;
    }
  }
}

void ResidenceLedger::observe(const JumpRecord& record) {
  if (record.index == 0) {
    if (record.config != current_) throw LedgerCorruptionError("initial record does not match the ledger's configuration");
    return;
  }
  if (record.index != last_index_ + 1) {
    throw LedgerCorruptionError("jump " + std::to_string(record.index) + " observed after jump " + std::to_string(last_index_));
  }
  if (!record.event) throw LedgerCorruptionError("jump " + std::to_string(record.index) + " carries no event");

  const int size = current_.size();
  auto slot = [&](int x) -> std::optional<OpenRecord>& {
    if (x < 0 || x >= size) throw LedgerCorruptionError("event site " + std::to_string(x) + " out of range");
    return sites_[static_cast<std::size_t>(x)];
  };
  auto fail = [&](const std::string& what) {
    throw LedgerCorruptionError("jump " + std::to_string(record.index) + " (" + to_string(*record.event) + "): " + what);
  };

  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Injection>) {
          auto& s = slot(e.site);
          if (s) fail("site already owned by particle " + std::to_string(s->id));
          s = OpenRecord{next_id_++, record.index, record.time, false};
          ++open_injected_;
        } else if constexpr (std::is_same_v<T, Diffusion>) {
          auto& from = slot(e.source);
          auto& to = slot(e.target);
          if (!from) fail("source site has no particle");
          if (to) fail("target site already owned by particle " + std::to_string(to->id));
          to = from;
          from.reset();
        } else {
          if (e.sites.empty()) fail("empty extraction set");
          for (int x : e.sites.sites()) {
            if (!slot(x)) fail("extracted site " + std::to_string(x) + " has no particle");
          }
          for (int x : e.sites.sites()) {
            auto& s = slot(x);
            closed_.push_back({s->id, s->entry_jump, s->entry_time, record.time, s->initial});
            --(s->initial ? open_initial_ : open_injected_);
            s.reset();
          }
        }
      },
      *record.event);

  current_ = current_.flipped(flip_set(*record.event));
  if (current_ != record.config) {
    fail("tracked configuration " + current_.to_string() + " differs from recorded " + record.config.to_string());
  }
  last_index_ = record.index;
}

std::optional<ParticleId> ResidenceLedger::owner(int site) const {
  const auto& s = sites_.at(static_cast<std::size_t>(site));
  if (!s) return std::nullopt;
  return s->id;
}

std::vector<OpenRecord> ResidenceLedger::open_records() const {
  std::vector<OpenRecord> out;
  for (const auto& s : sites_) {
    if (s) out.push_back(*s);
  }
  std::sort(out.begin(), out.end(), [](const OpenRecord& a, const OpenRecord& b) { return a.id < b.id; });
  return out;
}

double mean_residence_time(const ResidenceLedger& ledger, double t) {
  std::uint64_t open = 0;
  for (const auto& r : ledger.open_records()) {
    if (!r.initial && r.entry_time <= t) ++open;
  }
  if (open != 0) throw IncompleteDrainError(open);
  double sum = 0.0;
  std::uint64_t count = 0;
  for (const auto& r : ledger.closed_records()) {
    if (!r.initial && r.entry_time <= t) {
      sum += r.residence();
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double influx_estimate(const ResidenceLedger& ledger, double t) {
  if (!(t > 0.0)) throw ContractError("influx_estimate needs t > 0");
  std::uint64_t count = 0;
  for (const auto& r : ledger.closed_records()) count += (!r.initial && r.entry_time <= t) ? 1 : 0;
  for (const auto& r : ledger.open_records()) count += (!r.initial && r.entry_time <= t) ? 1 : 0;
  return static_cast<double>(count) / t;
}

double occupancy_time_average(std::span<const JumpRecord> trajectory, double t) {
  if (!(t > 0.0)) throw ContractError("occupancy_time_average needs t > 0");
  double integral = 0.0;
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const double start = trajectory[k].time;
    if (start >= t) break;
    const double end = k + 1 < trajectory.size() ? std::min(trajectory[k + 1].time, t) : t;
    integral += trajectory[k].config.particle_count() * (end - start);
  }
  return integral / t;
}

Estimates merge_estimates(std::span<const Estimates> parts) {
  std::vector<Estimates> sorted(parts.begin(), parts.end());
  std::sort(sorted.begin(), sorted.end(), [](const Estimates& a, const Estimates& b) {
    return std::tie(a.t, a.n_jumps, a.n_injected, a.rho_hat) < std::tie(b.t, b.n_jumps, b.n_injected, b.rho_hat);
  });
  Estimates out;
  double occupancy = 0.0, residence = 0.0;
  for (const auto& p : sorted) {
    out.t += p.t;
    out.n_injected += p.n_injected;
    out.n_completed += p.n_completed;
    out.n_jumps += p.n_jumps;
    occupancy += p.rho_hat * p.t;
    residence += p.tau_hat * static_cast<double>(p.n_injected);
  }
  if (out.t > 0.0) {
    out.rho_hat = occupancy / out.t;
    out.phi_hat = static_cast<double>(out.n_injected) / out.t;
  }
  out.tau_hat = out.n_injected > 0 ? residence / static_cast<double>(out.n_injected) : 0.0;
  double var_rho = 0.0, var_phi = 0.0, var_tau = 0.0;
  for (const auto& p : sorted) {
    const double wt = out.t > 0.0 ? p.t / out.t : 0.0;
    const double wn = out.n_injected > 0 ? static_cast<double>(p.n_injected) / static_cast<double>(out.n_injected) : 0.0;
    var_rho += wt * wt * p.stderr_rho * p.stderr_rho;
    var_phi += wt * wt * p.stderr_phi * p.stderr_phi;
    var_tau += wn * wn * p.stderr_tau * p.stderr_tau;
  }
  out.stderr_rho = std::sqrt(var_rho);
  out.stderr_phi = std::sqrt(var_phi);
  out.stderr_tau = std::sqrt(var_tau);
  return out;
}

ResidenceTracker::ResidenceTracker(const Configuration& initial)
    : ledger_(initial), previous_count_(initial.particle_count()) {}

void ResidenceTracker::on_jump(const JumpRecord& record) {
  ledger_.observe(record);
  ++count_checks_;
  const auto open = ledger_.open_initial() + ledger_.open_injected();
  if (static_cast<std::uint64_t>(record.config.particle_count()) != open) ++count_violations_;

  if (!horizon_) {
    if (record.index > 0) {
      const bool injected = std::holds_alternative<Injection>(*record.event);
      holds_.push_back(record.holding_time);
      occupancy_.push_back(previous_count_ * record.holding_time);
      injections_.push_back(injected ? 1.0 : 0.0);
    }
    last_jump_time_ = record.time;
    previous_count_ = record.config.particle_count();
  }
}

void ResidenceTracker::on_horizon(double time, std::uint64_t jumps) {
  horizon_ = time;
  horizon_jumps_ = jumps;
  const double partial = time - last_jump_time_;
  if (partial > 0.0) {
    holds_.push_back(partial);
    occupancy_.push_back(previous_count_ * partial);
    injections_.push_back(0.0);
  }
}

bool ResidenceTracker::drained() const {
  if (!horizon_) return false;
  for (const auto& r : ledger_.open_records()) {
    if (!r.initial && r.entry_time <= *horizon_) return false;
  }
  return true;
}

Estimates ResidenceTracker::estimates() const {
  if (!horizon_) throw ContractError("estimates requested before the run reached its horizon");
  Estimates out;
  out.t = *horizon_;
  out.n_jumps = horizon_jumps_;
  if (out.t > 0.0) {
    const auto rho = ratio_batch_means(occupancy_, holds_);
    const auto phi = ratio_batch_means(injections_, holds_);
    double integral = 0.0, injected = 0.0;
    for (double v : occupancy_) integral += v;
    for (double v : injections_) injected += v;
    out.rho_hat = integral / out.t;
    out.phi_hat = injected / out.t;
    out.stderr_rho = rho.std_error;
    out.stderr_phi = phi.std_error;
  }

  std::vector<ResidenceRecord> counted;
  for (const auto& r : ledger_.closed_records()) {
    if (!r.initial && r.entry_time <= out.t) counted.push_back(r);
  }
  std::uint64_t open = 0;
  for (const auto& r : ledger_.open_records()) open += (!r.initial && r.entry_time <= out.t) ? 1 : 0;
  out.n_completed = counted.size();
  out.n_injected = counted.size() + open;
  if (open != 0) {
    out.tau_hat = std::numeric_limits<double>::quiet_NaN();
    out.stderr_tau = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  std::sort(counted.begin(), counted.end(),
            [](const ResidenceRecord& a, const ResidenceRecord& b) { return a.entry_jump < b.entry_jump; });
  std::vector<double> residence;
  residence.reserve(counted.size());
  for (const auto& r : counted) residence.push_back(r.residence());
  const auto tau = batch_means(residence);
  out.tau_hat = tau.value;
  out.stderr_tau = tau.std_error;
  return out;
}

ThetaU::ThetaU(int n, int sites)
    : n_(n),
      sites_(sites),
      theta_(static_cast<std::size_t>((n + 2) * (n + 1) * sites), 0),
      u_(static_cast<std::size_t>((n + 1) * (n + 1)), 0) {}

std::size_t ThetaU::theta_index(int i, int j, int x) const {
  return static_cast<std::size_t>((i * (n_ + 1) + j) * sites_ + x);
}

int ThetaU::theta(int i, int j, int x) const {
  if (i < 1 || j < i || j > n_ || x < 0 || x >= sites_) throw ContractError("Theta index out of range");
  return theta_[theta_index(i, j, x)];
}

int ThetaU::u(int i, int j) const {
  if (i < 1 || j < i || j > n_) throw ContractError("U index out of range");
  return u_[static_cast<std::size_t>(i * (n_ + 1) + j)];
}

ThetaU bruteforce_theta_u(std::span<const Configuration> path) {
  if (path.empty()) throw ContractError("bruteforce_theta_u needs at least the initial configuration");
  const int n = static_cast<int>(path.size()) - 1;
  const int sites = path.front().size();
  if (n > 32 || sites > 6) throw CapExceededError("bruteforce_theta_u is limited to 32 jumps and 6 sites");

  // theta_k(x, y) from consecutive configurations.
  auto theta_k = [&](int k, int x, int y) -> int {
    const Configuration& before = path[static_cast<std::size_t>(k - 1)];
    const Configuration& after = path[static_cast<std::size_t>(k)];
    if (x == y) return before[x] * after[x];
    return before[x] * (1 - before[y]) * (1 - after[x]) * after[y];
  };

  ThetaU out(n, sites);
  std::vector<int> next(static_cast<std::size_t>(sites)), current(static_cast<std::size_t>(sites));
  for (int j = 1; j <= n; ++j) {
    // Theta_{j+1,j} is the empty product, 1.
    std::fill(next.begin(), next.end(), 1);
    for (int i = j; i >= 1; --i) {
      for (int x = 0; x < sites; ++x) {
        int sum = 0;
        for (int y = 0; y < sites; ++y) sum += theta_k(i, x, y) * next[static_cast<std::size_t>(y)];
        current[static_cast<std::size_t>(x)] = sum;
        out.theta_[out.theta_index(i, j, x)] = sum;
      }
      // U_{i,j} for j > i uses Theta_{i+1,j}, which is `next` here.
      const int entered = path[static_cast<std::size_t>(i)].particle_count() >
                          path[static_cast<std::size_t>(i - 1)].particle_count();
      int u = entered;
      if (j > i) {
        int survivors = 0;
        for (int x = 0; x < sites; ++x) survivors += (1 - path[static_cast<std::size_t>(i - 1)][x]) * next[static_cast<std::size_t>(x)];
        u = entered * survivors;
      }
      out.u_[static_cast<std::size_t>(i * (n + 1) + j)] = u;
      std::swap(next, current);
    }
  }
  return out;
}

}  // namespace lgas
