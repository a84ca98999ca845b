#pragma once

#include <vector>

#include "lgas/lattice.hpp"

namespace lgas {

/// Rate model given by explicit per-state tables, for lattices of at most 8
/// sites. Rates default to zero and are stored as given, so a table may break
/// the occupancy constraints; validate_model reports that.
class TableModel final : public RateModel {
 public:
  static constexpr int kMaxSites = 8;

  TableModel(int sites, std::vector<SitePair> diffusion_pairs, std::vector<SiteSet> extraction_sets);

  void set_injection(const Configuration& eta, int x, double rate);
  void set_diffusion(const Configuration& eta, int x, int y, double rate);
  void set_extraction(const Configuration& eta, SiteSet v, double rate);

  const Lattice& lattice() const override { return lattice_; }
  double injection_rate(const Configuration& eta, int x) const override;
  double diffusion_rate(const Configuration& eta, int x, int y) const override;
  double extraction_rate(const Configuration& eta, SiteSet v) const override;
  std::span<const SitePair> diffusion_pairs() const override { return pairs_; }
  std::span<const SiteSet> extraction_candidates() const override { return sets_; }

 private:
  int pair_slot(int x, int y) const;
  int set_slot(SiteSet v) const;
  std::size_t state(const Configuration& eta) const;

  Lattice lattice_;
  std::vector<SitePair> pairs_;
  std::vector<SiteSet> sets_;
  std::vector<int> pair_index_;  // x * L + y -> slot in pairs_, or -1
  std::vector<double> injection_;
  std::vector<double> diffusion_;
  std::vector<double> extraction_;
};

}  // namespace lgas
