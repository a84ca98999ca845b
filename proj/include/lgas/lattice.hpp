#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lgas {

/// Largest lattice a Configuration can hold (one bit per site).
inline constexpr int kMaxSites = 64;

enum class Topology { ring, path };

/// A finite lattice with sites 0..size-1.
class Lattice {
 public:
  explicit Lattice(int size, Topology topology = Topology::path);

  int size() const noexcept { return size_; }
  Topology topology() const noexcept { return topology_; }

  /// Mask with one bit per site.
  std::uint64_t full_mask() const noexcept {
    return size_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size_) - 1;
  }

  bool operator==(const Lattice&) const = default;

 private:
  int size_;
  Topology topology_;
};

/// A set of sites, stored as a bit mask.
class SiteSet {
 public:
  constexpr SiteSet() = default;
  constexpr explicit SiteSet(std::uint64_t mask) : mask_(mask) {}
  SiteSet(std::initializer_list<int> sites);

  static SiteSet single(int site) { return SiteSet(std::uint64_t{1} << site); }
  static SiteSet pair(int a, int b) { return SiteSet((std::uint64_t{1} << a) | (std::uint64_t{1} << b)); }

  std::uint64_t mask() const noexcept { return mask_; }
  int size() const noexcept { return std::popcount(mask_); }
  bool empty() const noexcept { return mask_ == 0; }
  bool contains(int site) const noexcept { return (mask_ >> site) & 1U; }
  std::vector<int> sites() const;
  std::string to_string() const;

  auto operator<=>(const SiteSet&) const = default;

 private:
  std::uint64_t mask_ = 0;
};

/// Occupancy of every site of a lattice; bit x is eta(x).
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(int size, std::uint64_t bits = 0);

  /// Parses a string of '0'/'1' characters, site 0 first.
  static Configuration parse(const std::string& text);
  static Configuration empty(int size) { return Configuration(size, 0); }

  int size() const noexcept { return size_; }
  std::uint64_t bits() const noexcept { return bits_; }
  bool operator[](int site) const noexcept { return (bits_ >> site) & 1U; }
  int particle_count() const noexcept { return std::popcount(bits_); }

  /// True when every site of v is occupied.
  bool filled(SiteSet v) const noexcept { return (bits_ & v.mask()) == v.mask(); }

  /// The configuration eta^v, flipping every site in v.
  Configuration flipped(SiteSet v) const noexcept { return Configuration(size_, bits_ ^ v.mask(), 0); }

  std::string to_string() const;

  auto operator<=>(const Configuration&) const = default;

 private:
  Configuration(int size, std::uint64_t bits, int /*unchecked*/) : size_(size), bits_(bits) {}

  int size_ = 0;
  std::uint64_t bits_ = 0;
};

struct Injection {
  int site;
  bool operator==(const Injection&) const = default;
};

struct Diffusion {
  int source;
  int target;
  bool operator==(const Diffusion&) const = default;
};

struct Extraction {
  SiteSet sites;
  bool operator==(const Extraction&) const = default;
};

/// One jump-chain transition.
using Event = std::variant<Injection, Diffusion, Extraction>;

/// Sites whose occupancy the event flips.
SiteSet flip_set(const Event& event);
std::string to_string(const Event& event);

struct RatedEvent {
  Event event;
  double rate;
};

using SitePair = std::pair<int, int>;

/// All ordered pairs (x, y) with x != y.
std::vector<SitePair> all_ordered_pairs(int size);

/// Nearest-neighbour ordered pairs on a ring (both directions, deduplicated for size 2).
std::vector<SitePair> ring_neighbour_pairs(int size);

/// Rate functions of an injection / diffusion / extraction lattice gas.
///
/// Implementations must return zero for injection onto an occupied site,
/// diffusion from an empty or onto an occupied site, and extraction of a set
/// that is not completely filled. Diffusion and extraction are only queried
/// for the declared pairs and candidate sets; everything else is zero.
class RateModel {
 public:
  virtual ~RateModel() = default;

  virtual const Lattice& lattice() const = 0;
  virtual double injection_rate(const Configuration& eta, int x) const = 0;
  virtual double diffusion_rate(const Configuration& eta, int x, int y) const = 0;
  virtual double extraction_rate(const Configuration& eta, SiteSet v) const = 0;

  virtual std::span<const SitePair> diffusion_pairs() const = 0;
  virtual std::span<const SiteSet> extraction_candidates() const = 0;
};

/// q(eta): total exit rate of eta.
double total_rate(const RateModel& model, const Configuration& eta);

/// Events with strictly positive rate, in the order injection, diffusion, extraction.
std::vector<RatedEvent> enabled_events(const RateModel& model, const Configuration& eta);

/// As above, reusing `out` as storage. Returns the sum of the listed rates.
double enabled_events(const RateModel& model, const Configuration& eta, std::vector<RatedEvent>& out);

/// eta^v for the event's flip set. Throws ContractError if the event is not
/// applicable to eta.
Configuration apply_event(const Configuration& eta, const Event& event);

struct ValidationOptions {
  int enumeration_cap = 16;
  std::size_t samples = 4096;  // states checked when L exceeds the cap
  std::uint64_t seed = 0;
};

struct RateViolation {
  Configuration state;
  Event event;
  double rate;
  std::string reason;
};

struct ValidationReport {
  std::vector<RateViolation> violations;
  std::vector<Configuration> absorbing_states;
  /// Strong connectivity of the jump digraph; empty when L exceeds the cap.
  std::optional<bool> irreducible;
  bool enumerated = false;

  bool valid() const { return violations.empty() && absorbing_states.empty() && irreducible.value_or(false); }
};

ValidationReport validate_model(const RateModel& model, const ValidationOptions& options = {});

}  // namespace lgas
