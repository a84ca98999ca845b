#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "lgas/config.hpp"
#include "lgas/oracle.hpp"
#include "lgas/table_model.hpp"
#include "lgas/workflows.hpp"

using namespace lgas;

namespace {

std::vector<SchemaError> errors_of(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

bool mentions(const std::vector<SchemaError>& errors, const std::string& key, const std::string& fragment = "") {
  return std::any_of(errors.begin(), errors.end(), [&](const SchemaError& e) {
    return e.key == key && e.message.find(fragment) != std::string::npos;
  });
}

}  // namespace

TEST(Config, MinimalTasep) {
  const auto c = parse_config("mode: exact\nmodel: tasep\nL: 4\nalpha: 0.5\nbeta: 2\n");
  EXPECT_EQ(c.mode, Mode::exact);
  EXPECT_EQ(c.model, ModelKind::tasep);
  EXPECT_EQ(c.tasep.L, 4);
  EXPECT_DOUBLE_EQ(c.tasep.alpha, 0.5);
  EXPECT_DOUBLE_EQ(c.tasep.beta, 2.0);
  EXPECT_EQ(c.format, Format::csv);
  EXPECT_TRUE(c.output.empty());
}

TEST(Config, NegativeAlphaNamesTheField) {
  const auto errors = errors_of("mode: exact\nmodel: tasep\nL: 4\nalpha: -1\nbeta: 2\n");
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0].key, "alpha");
  EXPECT_EQ(errors[0].line, 4);
  EXPECT_NE(errors[0].to_string().find("alpha"), std::string::npos);
  EXPECT_NE(errors[0].message.find("-1"), std::string::npos);
}

TEST(Config, VerifyLawDefaults) {
  const auto c = parse_config("mode: verify-law\nmodel: tasep\nL: 2\nalpha: 1\nbeta: 1\nmax_jumps: 1000\n");
  EXPECT_EQ(c.seed, 0u);
  EXPECT_EQ(c.replicas, 8u);
  EXPECT_TRUE(c.drain);
  EXPECT_EQ(c.max_jumps, 1000u);
  EXPECT_FALSE(c.max_time.has_value());
}

TEST(Config, UnknownAndMissingKeys) {
  const auto errors = errors_of("mode: exact\nmodel: tasep\nL: 3\nalpha: 1\ncolour: red\n");
  EXPECT_TRUE(mentions(errors, "colour", "unknown key"));
  EXPECT_TRUE(mentions(errors, "beta", "missing"));
  EXPECT_TRUE(mentions(errors_of("model: tasep\nL: 3\nalpha: 1\nbeta: 1\n"), "mode", "missing"));
  EXPECT_TRUE(mentions(errors_of("mode: exact\nL: 3\n"), "model", "missing"));
}

TEST(Config, KeyOfAnotherModel) {
  const auto errors = errors_of("mode: exact\nmodel: tasep\nL: 3\nalpha: 1\nbeta: 1\nV: 2\n");
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0].line, 6);
  EXPECT_NE(errors[0].message.find("does not apply"), std::string::npos);
}

TEST(Config, ErrorsAreSortedByLine) {
  const auto errors = errors_of("mode: exact\nmodel: tasep\nL: 1\nalpha: 0\nbeta: x\n");
  ASSERT_EQ(errors.size(), 3u);
  EXPECT_EQ(errors[0].line, 3);
  EXPECT_EQ(errors[1].line, 4);
  EXPECT_EQ(errors[2].line, 5);
}

TEST(Config, SyntaxErrorHasLine) {
  const auto errors = errors_of("mode: exact\nmodel: [tasep\n");
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_GT(errors[0].line, 0);
}

TEST(Config, StopRule) {
  const std::string base = "mode: simulate\nmodel: tasep\nL: 3\nalpha: 1\nbeta: 1\n";
  EXPECT_TRUE(mentions(errors_of(base), "max_time", "exactly one"));
  EXPECT_FALSE(errors_of(base + "max_jumps: 1e6\n").size());
  EXPECT_EQ(parse_config(base + "max_jumps: 1e6\n").max_jumps, 1'000'000u);
  EXPECT_TRUE(mentions(errors_of(base + "max_jumps: 10\nmax_time: 2\n"), "max_jumps", "exactly one"));
  EXPECT_TRUE(mentions(errors_of(base + "max_jumps: 2.5\n"), "max_jumps", "integer"));
  EXPECT_TRUE(mentions(errors_of(base + "max_jumps: -3\n"), "max_jumps", "integer"));
  EXPECT_TRUE(mentions(errors_of(base + "max_time: 0\n"), "max_time", "positive"));
  EXPECT_TRUE(mentions(errors_of(base + "max_time: 5\nreplicas: 0\n"), "replicas"));
  EXPECT_TRUE(mentions(errors_of(base + "max_time: 5\ninitial: \"01\"\n"), "initial"));
  EXPECT_EQ(parse_config(base + "max_time: 5\ninitial: \"011\"\n").initial, "011");
}

TEST(Config, ModeSpecificKeys) {
  EXPECT_TRUE(mentions(errors_of("mode: exact\nmodel: tasep\nL: 3\nalpha: 1\nbeta: 1\nseed: 4\n"), "seed", "does not apply"));
  EXPECT_TRUE(mentions(errors_of("mode: verify-law\nmodel: tasep\nL: 13\nalpha: 1\nbeta: 1\nmax_jumps: 9\n"), "L"));
  EXPECT_TRUE(mentions(errors_of("mode: verify-law\nmodel: tasep\nL: 3\nalpha: 1\nbeta: 1\nmax_jumps: 9\ndrain: false\n"), "drain"));
  EXPECT_TRUE(mentions(errors_of("mode: profile\nmodel: ising\nL: 3\nV: 0\nmu: 0\nalpha: 1\n"), "model", "tasep"));
  EXPECT_TRUE(mentions(errors_of("mode: ising-tau\nmodel: tasep\nL: 3\nalpha: 1\nbeta: 1\n"), "model", "ising"));
  EXPECT_TRUE(mentions(errors_of("mode: scan\nmodel: tasep\nalpha: 1\nbeta: 1\n"), "L_grid", "missing"));
  EXPECT_TRUE(mentions(errors_of("mode: scan\nmodel: tasep\nalpha: 1\nbeta: 1\nL_grid: [1, 10]\n"), "L_grid", "[2,"));
  const auto scan = parse_config("mode: scan\nmodel: tasep\nalpha: 1\nbeta: 1\nL_grid: [100, 400]\n");
  EXPECT_EQ(scan.L_grid, (std::vector<int>{100, 400}));
}

TEST(Config, Ising) {
  const auto c = parse_config("mode: exact\nmodel: ising\nL: 4\nV: 0.5\nmu: -1\nalpha: [1, 2, 3, 4]\nkawasaki_scale: 3\n");
  EXPECT_EQ(c.ising.L, 4);
  EXPECT_DOUBLE_EQ(c.ising.alpha10, 2.0);
  EXPECT_DOUBLE_EQ(c.ising.alpha11, 4.0);
  EXPECT_DOUBLE_EQ(c.ising.kawasaki_scale, 3.0);
  const auto d = parse_config("mode: exact\nmodel: ising\nL: 4\nV: 0\nmu: 0\nalpha: 2\n");
  EXPECT_DOUBLE_EQ(d.ising.alpha01, 2.0);
  EXPECT_DOUBLE_EQ(d.ising.kawasaki_scale, 1.0);
  EXPECT_TRUE(mentions(errors_of("mode: exact\nmodel: ising\nL: 4\nV: 0\nmu: 0\nalpha: [1, 2]\n"), "alpha"));
  EXPECT_TRUE(mentions(errors_of("mode: exact\nmodel: ising\nL: 4\nV: .inf\nmu: 0\nalpha: 1\n"), "V", "finite"));
  EXPECT_EQ(parse_config("mode: ising-tau\nmodel: ising\nL: 10000\nV: 0\nmu: 0\nalpha: 1\n").ising.L, 10000);
}

TEST(Config, Overrides) {
  const std::string text = "mode: exact\nmodel: tasep\nL: 3\nalpha: 1\nbeta: 1\n";
  const auto c = parse_config(text, {"alpha=0.25", "format=json", "L=5"});
  EXPECT_DOUBLE_EQ(c.tasep.alpha, 0.25);
  EXPECT_EQ(c.tasep.L, 5);
  EXPECT_EQ(c.format, Format::json);
  const auto errors = errors_of(text, {"beta=-2"});
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0].line, 0);
  EXPECT_NE(errors[0].message.find("--set"), std::string::npos);
  EXPECT_TRUE(mentions(errors_of(text, {"nonsense"}), "nonsense", "key=value"));
}

TEST(Config, CustomTable) {
  const auto c = parse_config(R"(mode: exact
model: custom
L: 2
diffusion_pairs: [[0, 1]]
extraction_sets: [[1], [0, 1]]
injection_rate: 1
diffusion_rate: 2
extraction_rate: 0.5
injection:
  - {state: "01", site: 0, rate: 4}
extraction:
  - {state: "11", sites: [0, 1], rate: 0}
)");
  EXPECT_EQ(c.custom.L, 2);
  ASSERT_EQ(c.custom.sets.size(), 2u);
  const auto m = make_model(c);
  const auto eta = [](const char* s) { return Configuration::parse(s); };
  EXPECT_DOUBLE_EQ(m->injection_rate(eta("00"), 0), 1.0);
  EXPECT_DOUBLE_EQ(m->injection_rate(eta("01"), 0), 4.0);
  EXPECT_DOUBLE_EQ(m->injection_rate(eta("10"), 0), 0.0);
  EXPECT_DOUBLE_EQ(m->diffusion_rate(eta("10"), 0, 1), 2.0);
  EXPECT_DOUBLE_EQ(m->diffusion_rate(eta("11"), 0, 1), 0.0);
  EXPECT_DOUBLE_EQ(m->extraction_rate(eta("01"), SiteSet::single(1)), 0.5);
  EXPECT_DOUBLE_EQ(m->extraction_rate(eta("11"), SiteSet::pair(0, 1)), 0.0);
  EXPECT_DOUBLE_EQ(m->extraction_rate(eta("11"), SiteSet::single(1)), 0.5);
}

TEST(Config, CustomTableErrors) {
  const std::string base = "mode: exact\nmodel: custom\nL: 2\n";
  EXPECT_TRUE(mentions(errors_of("mode: exact\nmodel: custom\nL: 9\n"), "L", "[1, 8]"));
  EXPECT_TRUE(mentions(errors_of(base + "injection:\n  - {state: \"10\", site: 0, rate: 1}\n"), "injection", "occupied"));
  EXPECT_TRUE(mentions(errors_of(base + "injection:\n  - {state: \"1\", site: 0, rate: 1}\n"), "injection", "length 2"));
  EXPECT_TRUE(mentions(errors_of(base + "injection:\n  - {state: \"00\", site: 5, rate: 1}\n"), "injection", "outside"));
  EXPECT_TRUE(mentions(errors_of(base + "diffusion:\n  - {state: \"10\", from: 0, to: 1, rate: 1}\n"), "diffusion", "not in"));
  EXPECT_TRUE(mentions(errors_of(base + "extraction:\n  - {state: \"10\", sites: [0, 1], rate: 1}\n"), "extraction", "not in"));
  EXPECT_TRUE(mentions(errors_of(base + "extraction:\n  - {state: \"10\", sites: [1], rate: 1}\n"), "extraction", "not filled"));
  EXPECT_TRUE(mentions(errors_of(base + "injection_rate: -1\n"), "injection_rate", "nonnegative"));
  EXPECT_TRUE(mentions(errors_of(base + "diffusion_pairs: [[0, 0]]\n"), "diffusion_pairs", "differ"));
  EXPECT_TRUE(mentions(errors_of(base + "injection:\n  - {state: \"00\", site: 0}\n"), "injection", "rate"));
}

TEST(Config, CustomModelMatchesTableModel) {
  const auto c = parse_config(R"(mode: exact
model: custom
L: 1
injection_rate: 1
extraction_rate: 1
)");
  const auto exact = oracle::exact_law(*make_model(c));
  EXPECT_NEAR(exact.rho, 0.5, 1e-14);
  EXPECT_NEAR(exact.phi, 0.5, 1e-14);
  EXPECT_NEAR(exact.tau, 1.0, 1e-14);
}
