#include "lgas/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <climits>
#include <cmath>
#include <map>
#include <set>

#include "lgas/errors.hpp"
#include "lgas/oracle.hpp"
#include "lgas/table_model.hpp"

namespace lgas {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::simulate: return "simulate";
    case Mode::exact: return "exact";
    case Mode::verify_law: return "verify-law";
    case Mode::profile: return "profile";
    case Mode::ising_tau: return "ising-tau";
    case Mode::scan: return "scan";
  }
  return "?";
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::ising: return "ising";
    case ModelKind::tasep: return "tasep";
    case ModelKind::custom: return "custom";
  }
  return "?";
}

std::optional<Mode> parse_mode(const std::string& text) {
  for (Mode m : {Mode::simulate, Mode::exact, Mode::verify_law, Mode::profile, Mode::ising_tau, Mode::scan}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

int RunConfig::lattice_size() const {
  switch (model) {
    case ModelKind::ising: return ising.L;
    case ModelKind::tasep: return tasep.L;
    case ModelKind::custom: return custom.L;
  }
  return 0;
}

std::string SchemaError::to_string() const {
  std::string where = line > 0 ? "line " + std::to_string(line) + ": " : "";
  return where + key + ": " + message;
}

namespace {

std::string join(const std::vector<SchemaError>& errors) {
  std::string s = "invalid configuration";
  for (const auto& e : errors) s += "\n  " + e.to_string();
  return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<SchemaError> errors) : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

namespace {

constexpr int kIsingClosedFormMaxL = 1'000'000;

const std::set<std::string> kCommonKeys = {"mode", "model", "seed", "replicas", "max_jumps", "max_time", "drain",
                                           "jump_budget", "initial", "output", "format"};
const std::map<ModelKind, std::set<std::string>> kModelKeys = {
    {ModelKind::tasep, {"L", "alpha", "beta", "L_grid"}},
    {ModelKind::ising, {"L", "V", "mu", "alpha", "kawasaki_scale"}},
    {ModelKind::custom, {"L", "diffusion_pairs", "extraction_sets", "injection_rate", "diffusion_rate",
                         "extraction_rate", "injection", "diffusion", "extraction"}},
};

class Parser {
 public:
  Parser(YAML::Node root, std::set<std::string> overridden) : root_(std::move(root)), overridden_(std::move(overridden)) {}

  RunConfig parse() {
    RunConfig c;
    if (!root_.IsMap()) {
      fail(root_, "document", "expected a mapping of keys to values");
      throw ConfigError(errors_);
    }

    if (auto mode = text("mode", true)) {
      if (auto m = parse_mode(*mode)) c.mode = *m;
      else fail("mode", "unknown mode '" + *mode + "' (simulate, exact, verify-law, profile, ising-tau, scan)");
    }
    if (auto model = text("model", true)) {
      if (*model == "ising") c.model = ModelKind::ising;
      else if (*model == "tasep") c.model = ModelKind::tasep;
      else if (*model == "custom") c.model = ModelKind::custom;
      else fail("model", "unknown model '" + *model + "' (ising, tasep, custom)");
    }
    if (!errors_.empty()) throw ConfigError(errors_);

    for (const auto& kv : root_) {
      const auto key = kv.first.as<std::string>();
      if (!kCommonKeys.contains(key) && !kModelKeys.at(c.model).contains(key)) {
        const bool elsewhere = std::any_of(kModelKeys.begin(), kModelKeys.end(), [&](const auto& m) { return m.second.contains(key); });
        fail(kv.first, key, elsewhere ? "key does not apply to model " + to_string(c.model) : "unknown key");
      }
    }

    switch (c.model) {
      case ModelKind::tasep: parse_tasep(c); break;
      case ModelKind::ising: parse_ising(c); break;
      case ModelKind::custom: parse_custom(c); break;
    }
    parse_run(c);
    check_mode(c);
    if (!errors_.empty()) {
      std::stable_sort(errors_.begin(), errors_.end(), [](const SchemaError& a, const SchemaError& b) {
        return (a.line == 0 ? INT_MAX : a.line) < (b.line == 0 ? INT_MAX : b.line);
      });
      throw ConfigError(errors_);
    }
    return c;
  }

 private:
  int line_of(const YAML::Node& node, const std::string& key) const {
    if (overridden_.contains(key)) return 0;
    return node.Mark().is_null() ? 0 : node.Mark().line + 1;
  }

  void fail(const YAML::Node& node, const std::string& key, const std::string& message) {
    errors_.push_back({line_of(node, key), key, message + (overridden_.contains(key) ? " (from --set)" : "")});
  }
  void fail(const std::string& key, const std::string& message) {
    const YAML::Node node = root_[key];
    if (node) fail(node, key, message);
    else errors_.push_back({0, key, message});
  }

  bool has(const std::string& key) const { return static_cast<bool>(root_[key]); }

  bool require(const std::string& key) {
    if (has(key)) return true;
    errors_.push_back({0, key, "missing required key"});
    return false;
  }

  std::optional<std::string> text(const std::string& key, bool required = false) {
    if (required && !require(key)) return std::nullopt;
    const YAML::Node node = root_[key];
    if (!node) return std::nullopt;
    if (!node.IsScalar()) {
      fail(key, "expected a scalar");
      return std::nullopt;
    }
    return node.Scalar();
  }

  std::optional<double> real(const YAML::Node& node, const std::string& key) {
    if (!node.IsScalar()) {
      fail(node, key, "expected a number");
      return std::nullopt;
    }
    try {
      const double v = node.as<double>();
      if (!std::isfinite(v)) {
        fail(node, key, "must be finite");
        return std::nullopt;
      }
      return v;
    } catch (const YAML::Exception&) {
      fail(node, key, "expected a number, got '" + node.Scalar() + "'");
      return std::nullopt;
    }
  }

  std::optional<double> real(const std::string& key, bool required) {
    if (required && !require(key)) return std::nullopt;
    const YAML::Node node = root_[key];
    if (!node) return std::nullopt;
    return real(node, key);
  }

  std::optional<double> positive(const std::string& key, bool required) {
    auto v = real(key, required);
    if (v && !(*v > 0.0)) {
      fail(key, "must be positive, got " + root_[key].Scalar());
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> rate(const YAML::Node& node, const std::string& key) {
    auto v = real(node, key);
    if (v && *v < 0.0) {
      fail(node, key, "rates must be nonnegative, got " + node.Scalar());
      return std::nullopt;
    }
    return v;
  }

  // Nonnegative integer; accepts 1e6-style literals that are exact integers.
  std::optional<std::uint64_t> count(const YAML::Node& node, const std::string& key) {
    if (!node.IsScalar()) {
      fail(node, key, "expected a nonnegative integer");
      return std::nullopt;
    }
    const std::string& s = node.Scalar();
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && end == s.data() + s.size()) return v;
    try {
      const double d = node.as<double>();
      if (d >= 0.0 && d <= 9007199254740992.0 && d == std::floor(d)) return static_cast<std::uint64_t>(d);
    } catch (const YAML::Exception&) {
    }
    fail(node, key, "expected a nonnegative integer, got '" + s + "'");
    return std::nullopt;
  }

  std::optional<std::uint64_t> count(const std::string& key, bool required) {
    if (required && !require(key)) return std::nullopt;
    const YAML::Node node = root_[key];
    if (!node) return std::nullopt;
    return count(node, key);
  }

  std::optional<int> size(const std::string& key, int low, int high) {
    auto v = count(key, true);
    if (!v) return std::nullopt;
    if (*v < static_cast<std::uint64_t>(low) || *v > static_cast<std::uint64_t>(high)) {
      fail(key, "must be in [" + std::to_string(low) + ", " + std::to_string(high) + "], got " + std::to_string(*v));
      return std::nullopt;
    }
    return static_cast<int>(*v);
  }

  std::optional<int> site(const YAML::Node& node, const std::string& key, int L) {
    auto v = count(node, key);
    if (!v) return std::nullopt;
    if (*v >= static_cast<std::uint64_t>(L)) {
      fail(node, key, "site " + std::to_string(*v) + " is outside 0.." + std::to_string(L - 1));
      return std::nullopt;
    }
    return static_cast<int>(*v);
  }

  std::optional<Configuration> state(const YAML::Node& node, const std::string& key, int L) {
    if (!node || !node.IsScalar()) {
      fail(node, key, "expected a 0/1 string");
      return std::nullopt;
    }
    const std::string& s = node.Scalar();
    if (static_cast<int>(s.size()) != L || s.find_first_not_of("01") != std::string::npos) {
      fail(node, key, "expected a 0/1 string of length " + std::to_string(L) + ", got '" + s + "'");
      return std::nullopt;
    }
    return Configuration::parse(s);
  }

  std::optional<SiteSet> site_set(const YAML::Node& node, const std::string& key, int L) {
    if (!node || !node.IsSequence() || node.size() == 0) {
      fail(node, key, "expected a nonempty list of sites");
      return std::nullopt;
    }
    std::uint64_t mask = 0;
    for (const auto& item : node) {
      auto x = site(item, key, L);
      if (!x) return std::nullopt;
      mask |= std::uint64_t{1} << *x;
    }
    return SiteSet(mask);
  }

  void parse_tasep(RunConfig& c) {
    if (c.mode != Mode::scan) {
      if (auto L = size("L", 2, kTasepMaxClosedFormL)) c.tasep.L = *L;
    }
    if (auto a = positive("alpha", true)) c.tasep.alpha = *a;
    if (auto b = positive("beta", true)) c.tasep.beta = *b;
    if (const YAML::Node grid = root_["L_grid"]) {
      if (!grid.IsSequence() || grid.size() == 0) {
        fail("L_grid", "expected a nonempty list of lattice sizes");
      } else {
        for (const auto& item : grid) {
          auto L = count(item, "L_grid");
          if (!L) continue;
          if (*L < 2 || *L > static_cast<std::uint64_t>(kTasepMaxClosedFormL)) {
            fail(item, "L_grid", "sizes must be in [2, " + std::to_string(kTasepMaxClosedFormL) + "], got " + std::to_string(*L));
          } else {
            c.L_grid.push_back(static_cast<int>(*L));
          }
        }
      }
    }
  }

  void parse_ising(RunConfig& c) {
    // The closed form has no size limit; everything else builds the model.
    if (auto L = size("L", 2, c.mode == Mode::ising_tau ? kIsingClosedFormMaxL : kMaxSites)) c.ising.L = *L;
    if (auto v = real("V", true)) c.ising.V = *v;
    if (auto mu = real("mu", true)) c.ising.mu = *mu;
    if (auto k = positive("kawasaki_scale", false)) c.ising.kawasaki_scale = *k;
    if (!require("alpha")) return;
    const YAML::Node a = root_["alpha"];
    std::vector<double> values;
    if (a.IsScalar()) {
      if (auto v = real(a, "alpha")) values.assign(4, *v);
    } else if (a.IsSequence() && a.size() == 4) {
      for (const auto& item : a) {
        if (auto v = real(item, "alpha")) values.push_back(*v);
      }
    } else {
      fail("alpha", "expected a number or a list [alpha00, alpha10, alpha01, alpha11]");
    }
    if (values.size() != 4) return;
    if (std::any_of(values.begin(), values.end(), [](double v) { return !(v > 0.0); })) {
      fail("alpha", "injection parameters must be positive");
      return;
    }
    c.ising.alpha00 = values[0];
    c.ising.alpha10 = values[1];
    c.ising.alpha01 = values[2];
    c.ising.alpha11 = values[3];
  }

  void parse_custom(RunConfig& c) {
    auto L = size("L", 1, TableModel::kMaxSites);
    if (!L) return;
    CustomTable& t = c.custom;
    t.L = *L;

    if (const YAML::Node pairs = root_["diffusion_pairs"]) {
      if (pairs.IsScalar() && pairs.Scalar() == "all") {
        t.pairs = all_ordered_pairs(t.L);
      } else if (pairs.IsSequence()) {
        std::set<SitePair> seen;
        for (const auto& p : pairs) {
          if (!p.IsSequence() || p.size() != 2) {
            fail(p, "diffusion_pairs", "expected [source, target]");
            continue;
          }
          auto x = site(p[0], "diffusion_pairs", t.L);
          auto y = site(p[1], "diffusion_pairs", t.L);
          if (!x || !y) continue;
          if (*x == *y) fail(p, "diffusion_pairs", "source and target must differ");
          else if (!seen.insert({*x, *y}).second) fail(p, "diffusion_pairs", "duplicate pair");
          else t.pairs.emplace_back(*x, *y);
        }
      } else {
        fail("diffusion_pairs", "expected a list of [source, target] pairs or 'all'");
      }
    }

    if (const YAML::Node sets = root_["extraction_sets"]) {
      if (!sets.IsSequence()) fail("extraction_sets", "expected a list of site lists");
      for (const auto& s : sets) {
        auto v = site_set(s, "extraction_sets", t.L);
        if (!v) continue;
        if (std::find(t.sets.begin(), t.sets.end(), *v) != t.sets.end()) fail(s, "extraction_sets", "duplicate set " + v->to_string());
        else t.sets.push_back(*v);
      }
    } else {
      for (int x = 0; x < t.L; ++x) t.sets.push_back(SiteSet::single(x));
    }

    for (auto [key, slot] : {std::pair{"injection_rate", &t.injection_default},
                             {"diffusion_rate", &t.diffusion_default},
                             {"extraction_rate", &t.extraction_default}}) {
      if (const YAML::Node n = root_[key]) {
        if (auto r = rate(n, key)) *slot = *r;
      }
    }

    auto entries = [&](const char* key, auto&& each) {
      const YAML::Node list = root_[key];
      if (!list) return;
      if (!list.IsSequence()) {
        fail(key, "expected a list of rate entries");
        return;
      }
      for (const auto& e : list) {
        if (!e.IsMap()) {
          fail(e, key, "expected a mapping with state, rate and sites");
          continue;
        }
        auto eta = state(e["state"], key, t.L);
        auto r = e["rate"] ? rate(e["rate"], key) : std::nullopt;
        if (!e["rate"]) fail(e, key, "entry is missing 'rate'");
        if (eta && r) each(e, *eta, *r);
      }
    };
    entries("injection", [&](const YAML::Node& e, const Configuration& eta, double r) {
      auto x = site(e["site"], "injection", t.L);
      if (!x) return;
      if (eta[*x] && r != 0.0) fail(e, "injection", "site " + std::to_string(*x) + " is occupied in " + eta.to_string());
      else t.entries.push_back({eta, Injection{*x}, r});
    });
    entries("diffusion", [&](const YAML::Node& e, const Configuration& eta, double r) {
      auto x = site(e["from"], "diffusion", t.L);
      auto y = site(e["to"], "diffusion", t.L);
      if (!x || !y) return;
      if (std::find(t.pairs.begin(), t.pairs.end(), SitePair{*x, *y}) == t.pairs.end()) {
        fail(e, "diffusion", "pair " + std::to_string(*x) + "->" + std::to_string(*y) + " is not in diffusion_pairs");
      } else if ((!eta[*x] || eta[*y]) && r != 0.0) {
        fail(e, "diffusion", "hop " + std::to_string(*x) + "->" + std::to_string(*y) + " cannot occur in " + eta.to_string());
      } else {
        t.entries.push_back({eta, Diffusion{*x, *y}, r});
      }
    });
    entries("extraction", [&](const YAML::Node& e, const Configuration& eta, double r) {
      auto v = site_set(e["sites"], "extraction", t.L);
      if (!v) return;
      if (std::find(t.sets.begin(), t.sets.end(), *v) == t.sets.end()) {
        fail(e, "extraction", "set " + v->to_string() + " is not in extraction_sets");
      } else if (!eta.filled(*v) && r != 0.0) {
        fail(e, "extraction", "set " + v->to_string() + " is not filled in " + eta.to_string());
      } else {
        t.entries.push_back({eta, Extraction{*v}, r});
      }
    });
  }

  void parse_run(RunConfig& c) {
    if (auto n = count("max_jumps", false)) c.max_jumps = *n;
    if (auto t = positive("max_time", false)) c.max_time = *t;
    if (const YAML::Node d = root_["drain"]) {
      try {
        c.drain = d.as<bool>();
      } catch (const YAML::Exception&) {
        fail(d, "drain", "expected true or false");
      }
    }
    if (auto b = count("jump_budget", false)) {
      if (*b == 0) fail("jump_budget", "must be at least 1");
      else c.jump_budget = *b;
    }
    if (auto s = count("seed", false)) c.seed = *s;
    if (auto r = count("replicas", false)) {
      if (*r == 0) fail("replicas", "must be at least 1");
      else c.replicas = *r;
    }
    if (auto init = text("initial")) {
      const int L = c.lattice_size();
      if (static_cast<int>(init->size()) != L || init->find_first_not_of("01") != std::string::npos) {
        fail("initial", "expected a 0/1 string of length " + std::to_string(L));
      } else {
        c.initial = *init;
      }
    }
    if (auto out = text("output")) c.output = *out;
    if (auto f = text("format")) {
      if (*f == "csv") c.format = Format::csv;
      else if (*f == "json") c.format = Format::json;
      else fail("format", "expected csv or json, got '" + *f + "'");
    }
  }

  void check_mode(const RunConfig& c) {
    const bool sampled = c.mode == Mode::simulate || c.mode == Mode::verify_law;
    if (sampled) {
      if (has("max_jumps") == has("max_time")) {
        fail(has("max_jumps") ? "max_jumps" : "max_time", "exactly one of max_jumps and max_time is required");
      }
      if (c.mode == Mode::verify_law && !c.drain) fail("drain", "verify-law needs drained runs");
    } else {
      for (const char* key : {"max_jumps", "max_time", "drain", "jump_budget", "replicas", "seed", "initial"}) {
        if (has(key)) fail(key, "key does not apply to mode " + to_string(c.mode));
      }
    }
    if ((c.mode == Mode::exact || c.mode == Mode::verify_law) && c.lattice_size() > oracle::kStationaryCap) {
      fail("L", "exact solutions need L <= " + std::to_string(oracle::kStationaryCap));
    }
    if (c.mode == Mode::simulate && c.lattice_size() > kMaxSites) fail("L", "simulation supports L <= 64");
    if ((c.mode == Mode::profile || c.mode == Mode::scan) && c.model != ModelKind::tasep) {
      fail("model", "mode " + to_string(c.mode) + " needs model tasep");
    }
    if (c.mode == Mode::ising_tau && c.model != ModelKind::ising) fail("model", "mode ising-tau needs model ising");
    if (c.mode == Mode::scan) {
      if (!has("L_grid")) errors_.push_back({0, "L_grid", "missing required key"});
      if (has("L")) fail("L", "mode scan takes its sizes from L_grid");
    } else if (has("L_grid")) {
      fail("L_grid", "only mode scan takes a size grid");
    }
  }

  YAML::Node root_;
  std::set<std::string> overridden_;
  std::vector<SchemaError> errors_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError({{e.mark.line + 1, "document", e.msg}});
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);

  std::set<std::string> overridden;
  std::vector<SchemaError> errors;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      errors.push_back({0, o, "override must look like key=value"});
      continue;
    }
    const std::string key = o.substr(0, eq);
    try {
      root[key] = YAML::Load(o.substr(eq + 1));
      overridden.insert(key);
    } catch (const YAML::ParserException& e) {
      errors.push_back({0, key, "cannot parse override value: " + e.msg});
    }
  }
  if (!errors.empty()) throw ConfigError(errors);
  return Parser(root, overridden).parse();
}

std::unique_ptr<RateModel> make_model(const RunConfig& config) {
  switch (config.model) {
    case ModelKind::ising: return std::make_unique<IsingModel>(config.ising);
    case ModelKind::tasep: return std::make_unique<TasepModel>(config.tasep);
    case ModelKind::custom: break;
  }
  const CustomTable& t = config.custom;
  auto m = std::make_unique<TableModel>(t.L, t.pairs, t.sets);
  const std::uint64_t states = std::uint64_t{1} << t.L;
  for (std::uint64_t s = 0; s < states; ++s) {
    const Configuration eta(t.L, s);
    for (int x = 0; x < t.L; ++x) {
      if (!eta[x]) m->set_injection(eta, x, t.injection_default);
    }
    for (const auto& [x, y] : t.pairs) {
      if (eta[x] && !eta[y]) m->set_diffusion(eta, x, y, t.diffusion_default);
    }
    for (const SiteSet& v : t.sets) {
      if (eta.filled(v)) m->set_extraction(eta, v, t.extraction_default);
    }
  }
  for (const auto& e : t.entries) {
    std::visit(
        [&](const auto& ev) {
          using T = std::decay_t<decltype(ev)>;
          if constexpr (std::is_same_v<T, Injection>) m->set_injection(e.state, ev.site, e.rate);
          else if constexpr (std::is_same_v<T, Diffusion>) m->set_diffusion(e.state, ev.source, ev.target, e.rate);
          else m->set_extraction(e.state, ev.sites, e.rate);
        },
        e.event);
  }
  return m;
}

}  // namespace lgas
