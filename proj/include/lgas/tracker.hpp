#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lgas/lattice.hpp"
#include "lgas/simulator.hpp"

namespace lgas {

using ParticleId = std::uint64_t;

struct OpenRecord {
  ParticleId id = 0;
  std::uint64_t entry_jump = 0;
  double entry_time = 0.0;
  bool initial = false;  // present in the initial configuration
};

struct ResidenceRecord {
  ParticleId id = 0;
  std::uint64_t entry_jump = 0;
  double entry_time = 0.0;
  double exit_time = 0.0;
  bool initial = false;

  double residence() const { return exit_time - entry_time; }
};

/// Identity bookkeeping for every particle of one trajectory.
///
/// Particles of the initial configuration get ids 0..|eta_0|-1 with the
/// initial flag; each injection creates a fresh id, diffusion moves an id, and
/// extraction closes the ids of the extracted sites at the jump time.
class ResidenceLedger {
 public:
  explicit ResidenceLedger(const Configuration& initial);

  /// Applies one jump record. Records must arrive in jump order; the initial
  /// record (index 0) is accepted and ignored. Throws LedgerCorruptionError when
  /// the event contradicts the tracked occupancy or the resulting configuration.
  void observe(const JumpRecord& record);

  std::optional<ParticleId> owner(int site) const;
  const std::optional<OpenRecord>& open_at(int site) const { return sites_[static_cast<std::size_t>(site)]; }
  std::vector<OpenRecord> open_records() const;
  std::span<const ResidenceRecord> closed_records() const { return closed_; }

  std::uint64_t open_initial() const { return open_initial_; }
  std::uint64_t open_injected() const { return open_injected_; }
  std::uint64_t last_index() const { return last_index_; }
  const Configuration& current() const { return current_; }

 private:
  std::vector<std::optional<OpenRecord>> sites_;
  std::vector<ResidenceRecord> closed_;
  Configuration current_;
  ParticleId next_id_ = 0;
  std::uint64_t last_index_ = 0;
  std::uint64_t open_initial_ = 0;
  std::uint64_t open_injected_ = 0;
};

/// T_t: mean residence of the particles injected by time t (initial particles
/// excluded). Returns 0 when none were injected. Throws IncompleteDrainError if
/// any such particle is still open.
double mean_residence_time(const ResidenceLedger& ledger, double t);

/// Injections with entry time <= t, divided by t.
double influx_estimate(const ResidenceLedger& ledger, double t);

/// (1/t) * integral of |eta_s| over [0, t] for a recorded trajectory (records
/// in jump order, starting with the initial record).
double occupancy_time_average(std::span<const JumpRecord> trajectory, double t);

struct Estimates {
  double t = 0.0;
  double rho_hat = 0.0;
  double phi_hat = 0.0;
  /// NaN when the run was not drained.
  double tau_hat = 0.0;
  std::uint64_t n_injected = 0;
  std::uint64_t n_completed = 0;
  double stderr_rho = 0.0;
  double stderr_phi = 0.0;
  double stderr_tau = 0.0;
  std::uint64_t n_jumps = 0;
};

/// Pools replica estimates: ratios of summed numerators and denominators, with
/// standard errors combined by denominator share. Order-independent.
Estimates merge_estimates(std::span<const Estimates> parts);

/// Observer computing rho_hat, phi_hat and T_t along a run, and checking the
/// particle-count identity |zeta_j| = (# open initial) + (# open injected) at
/// every jump.
class ResidenceTracker final : public TrajectoryObserver {
 public:
  explicit ResidenceTracker(const Configuration& initial);

  void on_jump(const JumpRecord& record) override;
  void on_horizon(double time, std::uint64_t jumps) override;
  /// True once every particle injected by the horizon has left.
  bool drained() const override;

  Estimates estimates() const;

  const ResidenceLedger& ledger() const { return ledger_; }
  std::uint64_t count_checks() const { return count_checks_; }
  std::uint64_t count_violations() const { return count_violations_; }

 private:
  ResidenceLedger ledger_;
  std::optional<double> horizon_;
  std::uint64_t horizon_jumps_ = 0;
  int previous_count_ = 0;
  double last_jump_time_ = 0.0;
  // Per counted jump: hold of the preceding state, occupancy * hold, injection flag.
  std::vector<double> holds_;
  std::vector<double> occupancy_;
  std::vector<double> injections_;
  std::uint64_t count_checks_ = 0;
  std::uint64_t count_violations_ = 0;
};

/// Survival indicators computed directly from a jump-chain path zeta_0..zeta_n.
class ThetaU {
 public:
  ThetaU(int n, int sites);

  int n() const { return n_; }
  int sites() const { return sites_; }
  /// Theta_{i,j}(x) for 1 <= i <= j <= n.
  int theta(int i, int j, int x) const;
  /// U_{i,j} for 1 <= i <= j <= n.
  int u(int i, int j) const;

 private:
  friend ThetaU bruteforce_theta_u(std::span<const Configuration> path);
  std::size_t theta_index(int i, int j, int x) const;

  int n_;
  int sites_;
  std::vector<int> theta_;
  std::vector<int> u_;
};

/// Evaluates every theta_k(x, y), Theta_{i,j}(x) and U_{i,j} of a path by
/// dynamic programming over site sequences. Test oracle; requires n <= 32 and
/// L <= 6.
ThetaU bruteforce_theta_u(std::span<const Configuration> path);

}  // namespace lgas
