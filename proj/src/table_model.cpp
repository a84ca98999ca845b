#include "lgas/table_model.hpp"

#include <algorithm>
#include <string>

#include "lgas/errors.hpp"

namespace lgas {

TableModel::TableModel(int sites, std::vector<SitePair> diffusion_pairs, std::vector<SiteSet> extraction_sets)
    : lattice_(sites), pairs_(std::move(diffusion_pairs)), sets_(std::move(extraction_sets)) {
  if (sites > kMaxSites) {
    throw ContractError("table models support at most 8 sites, got " + std::to_string(sites));
  }
  pair_index_.assign(static_cast<std::size_t>(sites * sites), -1);
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const auto [x, y] = pairs_[p];
    if (x < 0 || y < 0 || x >= sites || y >= sites || x == y) {
      throw ContractError("invalid diffusion pair " + std::to_string(x) + "->" + std::to_string(y));
    }
    int& slot = pair_index_[static_cast<std::size_t>(x * sites + y)];
    if (slot >= 0) throw ContractError("duplicate diffusion pair " + std::to_string(x) + "->" + std::to_string(y));
    slot = static_cast<int>(p);
  }
  for (std::size_t k = 0; k < sets_.size(); ++k) {
    if (sets_[k].empty() || (sets_[k].mask() & ~lattice_.full_mask()) != 0) {
      throw ContractError("extraction set " + sets_[k].to_string() + " is empty or leaves the lattice");
    }
    if (std::find(sets_.begin(), sets_.begin() + static_cast<std::ptrdiff_t>(k), sets_[k]) != sets_.begin() + static_cast<std::ptrdiff_t>(k)) {
      throw ContractError("duplicate extraction set " + sets_[k].to_string());
    }
  }
  const std::size_t n = std::size_t{1} << sites;
  injection_.assign(n * static_cast<std::size_t>(sites), 0.0);
  diffusion_.assign(n * pairs_.size(), 0.0);
  extraction_.assign(n * sets_.size(), 0.0);
}

std::size_t TableModel::state(const Configuration& eta) const {
  if (eta.size() != lattice_.size()) throw ContractError("configuration size does not match the table model");
  return static_cast<std::size_t>(eta.bits());
}

int TableModel::pair_slot(int x, int y) const {
  const int sites = lattice_.size();
  if (x < 0 || y < 0 || x >= sites || y >= sites) return -1;
  return pair_index_[static_cast<std::size_t>(x * sites + y)];
}

int TableModel::set_slot(SiteSet v) const {
  const auto it = std::find(sets_.begin(), sets_.end(), v);
  return it == sets_.end() ? -1 : static_cast<int>(it - sets_.begin());
}

void TableModel::set_injection(const Configuration& eta, int x, double rate) {
  if (x < 0 || x >= lattice_.size()) throw ContractError("injection site out of range");
  injection_[state(eta) * static_cast<std::size_t>(lattice_.size()) + static_cast<std::size_t>(x)] = rate;
}

void TableModel::set_diffusion(const Configuration& eta, int x, int y, double rate) {
  const int slot = pair_slot(x, y);
  if (slot < 0) throw ContractError("diffusion pair " + std::to_string(x) + "->" + std::to_string(y) + " is not declared");
  diffusion_[state(eta) * pairs_.size() + static_cast<std::size_t>(slot)] = rate;
}

void TableModel::set_extraction(const Configuration& eta, SiteSet v, double rate) {
  const int slot = set_slot(v);
  if (slot < 0) throw ContractError("extraction set " + v.to_string() + " is not declared");
  extraction_[state(eta) * sets_.size() + static_cast<std::size_t>(slot)] = rate;
}

double TableModel::injection_rate(const Configuration& eta, int x) const {
  return injection_[state(eta) * static_cast<std::size_t>(lattice_.size()) + static_cast<std::size_t>(x)];
}

double TableModel::diffusion_rate(const Configuration& eta, int x, int y) const {
  const int slot = pair_slot(x, y);
  return slot < 0 ? 0.0 : diffusion_[state(eta) * pairs_.size() + static_cast<std::size_t>(slot)];
}

double TableModel::extraction_rate(const Configuration& eta, SiteSet v) const {
  const int slot = set_slot(v);
  return slot < 0 ? 0.0 : extraction_[state(eta) * sets_.size() + static_cast<std::size_t>(slot)];
}

}  // namespace lgas
