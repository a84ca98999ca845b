#include "lgas/lattice.hpp"

#include <cmath>
#include <deque>
#include <random>
#include <sstream>

#include "lgas/errors.hpp"

namespace lgas {

Lattice::Lattice(int size, Topology topology) : size_(size), topology_(topology) {
  if (size < 1 || size > kMaxSites) {
    throw ContractError("lattice size must be in [1, 64], got " + std::to_string(size));
  }
}

SiteSet::SiteSet(std::initializer_list<int> sites) {
  for (int s : sites) {
    if (s < 0 || s >= kMaxSites) throw ContractError("site index out of range: " + std::to_string(s));
    mask_ |= std::uint64_t{1} << s;
  }
}

std::vector<int> SiteSet::sites() const {
  std::vector<int> out;
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

std::string SiteSet::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int x : sites()) {
    if (!first) s += ',';
    s += std::to_string(x);
    first = false;
  }
  return s + "}";
}

Configuration::Configuration(int size, std::uint64_t bits) : size_(size), bits_(bits) {
  if (size < 1 || size > kMaxSites) {
    throw ContractError("configuration size must be in [1, 64], got " + std::to_string(size));
  }
  if (size < 64 && (bits >> size) != 0) {
    throw ContractError("configuration bits exceed lattice size " + std::to_string(size));
  }
}

Configuration Configuration::parse(const std::string& text) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      bits |= std::uint64_t{1} << i;
    } else if (text[i] != '0') {
      throw ContractError("configuration string may only contain '0' and '1': \"" + text + "\"");
    }
  }
  return Configuration(static_cast<int>(text.size()), bits);
}

std::string Configuration::to_string() const {
  std::string s(static_cast<std::size_t>(size_), '0');
  for (int x = 0; x < size_; ++x) {
    if ((*this)[x]) s[static_cast<std::size_t>(x)] = '1';
  }
  return s;
}

SiteSet flip_set(const Event& event) {
  return std::visit(
      [](const auto& e) -> SiteSet {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Injection>) {
          return SiteSet::single(e.site);
        } else if constexpr (std::is_same_v<T, Diffusion>) {
          return SiteSet::pair(e.source, e.target);
        } else {
          return e.sites;
        }
      },
      event);
}

std::string to_string(const Event& event) {
  return std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Injection>) {
          return "inject " + std::to_string(e.site);
        } else if constexpr (std::is_same_v<T, Diffusion>) {
          return "diffuse " + std::to_string(e.source) + "->" + std::to_string(e.target);
        } else {
          return "extract " + e.sites.to_string();
        }
      },
      event);
}

std::vector<SitePair> all_ordered_pairs(int size) {
  std::vector<SitePair> pairs;
  for (int x = 0; x < size; ++x) {
    for (int y = 0; y < size; ++y) {
      if (x != y) pairs.emplace_back(x, y);
    }
  }
  return pairs;
}

std::vector<SitePair> ring_neighbour_pairs(int size) {
  std::vector<SitePair> pairs;
  if (size < 2) return pairs;
  if (size == 2) return {{0, 1}, {1, 0}};
  for (int x = 0; x < size; ++x) {
    pairs.emplace_back(x, (x + 1) % size);
    pairs.emplace_back(x, (x + size - 1) % size);
  }
  return pairs;
}

double enabled_events(const RateModel& model, const Configuration& eta, std::vector<RatedEvent>& out) {
  out.clear();
  double q = 0.0;
  const int size = model.lattice().size();
  for (int x = 0; x < size; ++x) {
    const double r = model.injection_rate(eta, x);
    if (r > 0.0) {
      out.push_back({Injection{x}, r});
      q += r;
    }
  }
  for (const auto& [x, y] : model.diffusion_pairs()) {
    const double r = model.diffusion_rate(eta, x, y);
    if (r > 0.0) {
      out.push_back({Diffusion{x, y}, r});
      q += r;
    }
  }
  for (const SiteSet& v : model.extraction_candidates()) {
    const double r = model.extraction_rate(eta, v);
    if (r > 0.0) {
      out.push_back({Extraction{v}, r});
      q += r;
    }
  }
  return q;
}

std::vector<RatedEvent> enabled_events(const RateModel& model, const Configuration& eta) {
  std::vector<RatedEvent> out;
  enabled_events(model, eta, out);
  return out;
}

double total_rate(const RateModel& model, const Configuration& eta) {
  double q = 0.0;
  const int size = model.lattice().size();
  for (int x = 0; x < size; ++x) q += model.injection_rate(eta, x);
  for (const auto& [x, y] : model.diffusion_pairs()) q += model.diffusion_rate(eta, x, y);
  for (const SiteSet& v : model.extraction_candidates()) q += model.extraction_rate(eta, v);
  return q;
}

Configuration apply_event(const Configuration& eta, const Event& event) {
  const int size = eta.size();
  auto in_range = [size](int x) { return x >= 0 && x < size; };
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Injection>) {
          if (!in_range(e.site)) throw ContractError("injection site " + std::to_string(e.site) + " out of range");
          if (eta[e.site]) throw ContractError("injection at occupied site " + std::to_string(e.site));
        } else if constexpr (std::is_same_v<T, Diffusion>) {
          if (!in_range(e.source) || !in_range(e.target) || e.source == e.target) {
            throw ContractError("invalid diffusion " + std::to_string(e.source) + "->" + std::to_string(e.target));
          }
          if (!eta[e.source]) throw ContractError("diffusion from empty site " + std::to_string(e.source));
          if (eta[e.target]) throw ContractError("diffusion onto occupied site " + std::to_string(e.target));
        } else {
          if (e.sites.empty()) throw ContractError("extraction of the empty set");
          const std::uint64_t full = ~std::uint64_t{0} >> (64 - size);
          if ((e.sites.mask() & ~full) != 0) throw ContractError("extraction set " + e.sites.to_string() + " leaves the lattice");
          const SiteSet missing(e.sites.mask() & ~eta.bits());
          if (!missing.empty()) throw ContractError("extraction of " + e.sites.to_string() + " with empty site(s) " + missing.to_string());
        }
      },
      event);
  return eta.flipped(flip_set(event));
}

namespace {

void check_state(const RateModel& model, const Configuration& eta, ValidationReport& report) {
  auto flag = [&](Event e, double rate, std::string reason) {
    report.violations.push_back({eta, std::move(e), rate, std::move(reason)});
  };
  const int size = model.lattice().size();
  for (int x = 0; x < size; ++x) {
    const double r = model.injection_rate(eta, x);
    if (!std::isfinite(r) || r < 0.0) {
      flag(Injection{x}, r, "injection rate must be finite and nonnegative");
    } else if (eta[x] && r != 0.0) {
      flag(Injection{x}, r, "injection rate positive on occupied site");
    }
  }
  for (const auto& [x, y] : model.diffusion_pairs()) {
    const double r = model.diffusion_rate(eta, x, y);
    if (!std::isfinite(r) || r < 0.0) {
      flag(Diffusion{x, y}, r, "diffusion rate must be finite and nonnegative");
    } else if ((!eta[x] || eta[y]) && r != 0.0) {
      flag(Diffusion{x, y}, r, "diffusion rate positive with empty source or occupied target");
    }
  }
  for (const SiteSet& v : model.extraction_candidates()) {
    const double r = model.extraction_rate(eta, v);
    if (!std::isfinite(r) || r < 0.0) {
      flag(Extraction{v}, r, "extraction rate must be finite and nonnegative");
    } else if (!eta.filled(v) && r != 0.0) {
      flag(Extraction{v}, r, "extraction rate positive on a set that is not filled");
    }
  }
}

// Every state reachable from `start`, following edges forward or backward.
std::vector<char> reach(const std::vector<std::vector<std::uint32_t>>& adjacency, std::uint32_t start) {
  std::vector<char> seen(adjacency.size(), 0);
  std::deque<std::uint32_t> queue{start};
  seen[start] = 1;
  while (!queue.empty()) {
    const auto s = queue.front();
    queue.pop_front();
    for (auto t : adjacency[s]) {
      if (!seen[t]) {
        seen[t] = 1;
        queue.push_back(t);
      }
    }
  }
  return seen;
}

}  // namespace

ValidationReport validate_model(const RateModel& model, const ValidationOptions& options) {
  ValidationReport report;
  const int size = model.lattice().size();

  for (const auto& [x, y] : model.diffusion_pairs()) {
    if (x == y || x < 0 || y < 0 || x >= size || y >= size) {
      report.violations.push_back({Configuration::empty(size), Diffusion{x, y}, 0.0, "declared diffusion pair is invalid"});
    }
  }
  for (const SiteSet& v : model.extraction_candidates()) {
    if (v.empty() || (v.mask() & ~model.lattice().full_mask()) != 0) {
      report.violations.push_back({Configuration::empty(size), Extraction{v}, 0.0, "declared extraction set is empty or leaves the lattice"});
    }
  }
  if (!report.violations.empty()) return report;

  if (size > options.enumeration_cap) {
    std::mt19937_64 gen(options.seed);
    for (std::size_t i = 0; i < options.samples; ++i) {
      const Configuration eta(size, gen() & model.lattice().full_mask());
      check_state(model, eta, report);
      if (total_rate(model, eta) <= 0.0) report.absorbing_states.push_back(eta);
    }
    return report;
  }

  report.enumerated = true;
  const std::uint64_t n_states = std::uint64_t{1} << size;
  std::vector<std::vector<std::uint32_t>> forward(n_states), backward(n_states);
  std::vector<RatedEvent> events;
  for (std::uint64_t s = 0; s < n_states; ++s) {
    const Configuration eta(size, s);
    check_state(model, eta, report);
    if (enabled_events(model, eta, events) <= 0.0) report.absorbing_states.push_back(eta);
    for (const auto& [event, rate] : events) {
      const auto t = static_cast<std::uint32_t>(eta.flipped(flip_set(event)).bits());
      forward[s].push_back(t);
      backward[t].push_back(static_cast<std::uint32_t>(s));
    }
  }
  const auto fwd = reach(forward, 0);
  const auto bwd = reach(backward, 0);
  bool connected = true;
  for (std::uint64_t s = 0; s < n_states; ++s) connected = connected && fwd[s] && bwd[s];
  report.irreducible = connected;
  return report;
}

}  // namespace lgas
