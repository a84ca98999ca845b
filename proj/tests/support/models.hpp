#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "lgas/lattice.hpp"
#include "lgas/table_model.hpp"

namespace lgas::fixtures {

/// One site: injection alpha when empty, extraction beta when full.
inline TableModel single_site(double alpha, double beta) {
  TableModel m(1, {}, {SiteSet::single(0)});
  m.set_injection(Configuration(1, 0), 0, alpha);
  m.set_extraction(Configuration(1, 1), SiteSet::single(0), beta);
  return m;
}

struct RandomModelOptions {
  double rate_low = 0.2;
  double rate_high = 2.0;
  double pair_probability = 0.6;
  int extra_sets = 2;  // random multi-site extraction subsets on top of some singletons
};

/// Random table model honouring the occupancy constraints: positive injection
/// on every empty site, a random subset of diffusion pairs, one singleton and a
/// few random extraction sets. Not necessarily irreducible; check with
/// validate_model.
inline TableModel random_table_model(int sites, std::uint64_t seed, const RandomModelOptions& opt = {}) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> rate(opt.rate_low, opt.rate_high);
  std::bernoulli_distribution keep(opt.pair_probability);

  std::vector<SitePair> pairs;
  for (int x = 0; x < sites; ++x)
    for (int y = 0; y < sites; ++y)
      if (x != y && keep(gen)) pairs.emplace_back(x, y);

  std::vector<SiteSet> sets;
  std::uniform_int_distribution<int> site(0, sites - 1);
  sets.push_back(SiteSet::single(site(gen)));
  const std::uint64_t full = (std::uint64_t{1} << sites) - 1;
  std::uniform_int_distribution<std::uint64_t> mask(1, full);
  for (int k = 0; k < opt.extra_sets; ++k) {
    const SiteSet v(mask(gen));
    if (std::find(sets.begin(), sets.end(), v) == sets.end()) sets.push_back(v);
  }

  TableModel m(sites, pairs, sets);
  const std::uint64_t states = std::uint64_t{1} << sites;
  for (std::uint64_t s = 0; s < states; ++s) {
    const Configuration eta(sites, s);
    for (int x = 0; x < sites; ++x)
      if (!eta[x]) m.set_injection(eta, x, rate(gen));
    for (const auto& [x, y] : pairs)
      if (eta[x] && !eta[y]) m.set_diffusion(eta, x, y, rate(gen));
    for (const SiteSet& v : sets)
      if (eta.filled(v)) m.set_extraction(eta, v, rate(gen));
  }
  return m;
}

}  // namespace lgas::fixtures
