#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgas/lattice.hpp"
#include "lgas/models.hpp"

namespace lgas {

enum class Mode { simulate, exact, verify_law, profile, ising_tau, scan };
enum class ModelKind { ising, tasep, custom };
enum class Format { csv, json };

std::string to_string(Mode mode);
std::string to_string(ModelKind kind);
std::optional<Mode> parse_mode(const std::string& text);

/// Explicit per-state rates of a custom model. Entries override the uniform
/// defaults, which apply wherever the occupancy allows the event.
struct CustomTable {
  int L = 1;
  std::vector<SitePair> pairs;
  std::vector<SiteSet> sets;
  double injection_default = 0.0;
  double diffusion_default = 0.0;
  double extraction_default = 0.0;

  struct Entry {
    Configuration state;
    Event event;
    double rate = 0.0;
  };
  std::vector<Entry> entries;
};

struct RunConfig {
  Mode mode = Mode::exact;
  ModelKind model = ModelKind::tasep;
  IsingParams ising;
  TasepParams tasep;
  CustomTable custom;

  std::optional<std::uint64_t> max_jumps;
  std::optional<double> max_time;
  bool drain = true;
  std::uint64_t jump_budget = 1'000'000'000;
  std::uint64_t seed = 0;
  std::uint64_t replicas = 8;
  /// Initial configuration as a 0/1 string; empty means the empty lattice.
  std::string initial;
  std::vector<int> L_grid;

  std::string output;  // empty: standard output
  Format format = Format::csv;

  int lattice_size() const;
};

struct SchemaError {
  int line = 0;  // 1-based line in the document, 0 for command-line overrides
  std::string key;
  std::string message;

  std::string to_string() const;
};

/// A document that fails the schema; carries every error found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<SchemaError> errors);
  const std::vector<SchemaError>& errors() const noexcept { return errors_; }

 private:
  std::vector<SchemaError> errors_;
};

/// Parses a YAML run configuration. Each override is "key=value" with a YAML
/// value and replaces (or adds) that top-level key. Throws ConfigError.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

/// The rate model a configuration describes.
std::unique_ptr<RateModel> make_model(const RunConfig& config);

}  // namespace lgas
