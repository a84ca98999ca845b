#include <algorithm>
#include <cmath>
#include <string>

#include "lgas/errors.hpp"
#include "lgas/models.hpp"

namespace lgas {

double IsingParams::alpha(int left, int right) const {
  if (left == 0) return right == 0 ? alpha00 : alpha01;
  return right == 0 ? alpha10 : alpha11;
}

double IsingParams::beta(int left, int right) const {
  return alpha(left, right) * std::exp(V * (left + right) - mu);
}

void IsingParams::validate() const {
  if (L < 2) throw ContractError("ising: L must be at least 2, got " + std::to_string(L));
  if (!std::isfinite(V)) throw ContractError("ising: V must be finite");
  if (!std::isfinite(mu)) throw ContractError("ising: mu must be finite");
  for (double a : {alpha00, alpha10, alpha01, alpha11}) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ContractError("ising: injection parameters alpha must be positive");
  }
  if (!(kawasaki_scale > 0.0) || !std::isfinite(kawasaki_scale)) {
    throw ContractError("ising: kawasaki_scale must be positive");
  }
}

double ising_hamiltonian(const IsingParams& params, const Configuration& eta) {
  const int size = eta.size();
  double bonds = 0.0;
  for (int x = 0; x < size; ++x) bonds += eta[x] * eta[(x + 1) % size];
  return params.V * bonds - params.mu * eta.particle_count();
}

IsingModel::IsingModel(const IsingParams& params)
    : params_((params.validate(), params)),
      lattice_(params.L, Topology::ring),
      pairs_(ring_neighbour_pairs(params.L)) {
  for (int x = 0; x < params.L; ++x) singletons_.push_back(SiteSet::single(x));
}

double IsingModel::injection_rate(const Configuration& eta, int x) const {
  if (eta[x]) return 0.0;
  return params_.alpha(eta[left(x)], eta[right(x)]);
}

double IsingModel::diffusion_rate(const Configuration& eta, int x, int y) const {
  if (!eta[x] || eta[y]) return 0.0;
  if (y != left(x) && y != right(x)) return 0.0;
  const double delta = ising_hamiltonian(params_, eta) - ising_hamiltonian(params_, eta.flipped(SiteSet::pair(x, y)));
  return params_.kawasaki_scale * std::min(1.0, std::exp(delta));
}

double IsingModel::extraction_rate(const Configuration& eta, SiteSet v) const {
  if (v.size() != 1) return 0.0;
  const int x = v.sites().front();
  if (!eta[x]) return 0.0;
  return params_.beta(eta[left(x)], eta[right(x)]);
}

IsingModel ising_model(const IsingParams& params) { return IsingModel(params); }

}  // namespace lgas
