#include <gtest/gtest.h>

#include <cmath>

#include "lgas/errors.hpp"
#include "lgas/lattice.hpp"
#include "lgas/models.hpp"
#include "support/models.hpp"

using namespace lgas;

namespace {

// Injects on occupied sites too.
class LeakyInjection final : public RateModel {
 public:
  LeakyInjection() : lattice_(2) {}
  const Lattice& lattice() const override { return lattice_; }
  double injection_rate(const Configuration&, int) const override { return 1.0; }
  double diffusion_rate(const Configuration&, int, int) const override { return 0.0; }
  double extraction_rate(const Configuration& eta, SiteSet v) const override { return eta.filled(v) ? 1.0 : 0.0; }
  std::span<const SitePair> diffusion_pairs() const override { return {}; }
  std::span<const SiteSet> extraction_candidates() const override { return sets_; }

 private:
  Lattice lattice_;
  std::vector<SiteSet> sets_{SiteSet::single(0), SiteSet::single(1)};
};

}  // namespace

TEST(SiteSet, MaskAndListAgree) {
  EXPECT_EQ(SiteSet({0, 2}).mask(), 0b101u);
  EXPECT_EQ(SiteSet::single(3).mask(), 0b1000u);
  EXPECT_EQ(SiteSet::pair(1, 4), SiteSet({4, 1}));
  EXPECT_EQ(SiteSet({0, 2}).to_string(), "{0,2}");
  EXPECT_EQ(SiteSet::single(63).sites(), std::vector<int>{63});
}

TEST(Configuration, ParseAndFlip) {
  const auto eta = Configuration::parse("0110");
  EXPECT_EQ(eta.size(), 4);
  EXPECT_FALSE(eta[0]);
  EXPECT_TRUE(eta[1]);
  EXPECT_EQ(eta.particle_count(), 2);
  EXPECT_EQ(eta.to_string(), "0110");
  EXPECT_EQ(eta.flipped(SiteSet({0, 1})).to_string(), "1010");
  EXPECT_THROW(Configuration::parse("01x"), ContractError);
  EXPECT_THROW(Configuration(2, 0b100), ContractError);
  EXPECT_THROW(Configuration(65, 0), ContractError);
}

TEST(TotalRate, SingleSiteEmpty) {
  const auto m = fixtures::single_site(1.0, 1.0);
  EXPECT_DOUBLE_EQ(total_rate(m, Configuration::parse("0")), 1.0);
}

TEST(TotalRate, TasepOnlyHopEnabled) {
  const TasepModel m({.L = 2, .alpha = 1.0, .beta = 1.0});
  EXPECT_DOUBLE_EQ(total_rate(m, Configuration::parse("10")), 1.0);
}

TEST(TotalRate, AllRatesZero) {
  TableModel m(2, {{0, 1}}, {SiteSet::single(1)});
  for (std::uint64_t s = 0; s < 4; ++s) EXPECT_EQ(total_rate(m, Configuration(2, s)), 0.0);
}

TEST(EnabledEvents, SingleSiteFull) {
  const auto m = fixtures::single_site(1.0, 1.0);
  const auto ev = enabled_events(m, Configuration::parse("1"));
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].event, Event(Extraction{SiteSet::single(0)}));
  EXPECT_DOUBLE_EQ(ev[0].rate, 1.0);
}

TEST(EnabledEvents, TasepBoundaries) {
  const TasepModel m({.L = 2, .alpha = 1.0, .beta = 1.0});
  auto ev = enabled_events(m, Configuration::parse("00"));
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].event, Event(Injection{0}));
  ev = enabled_events(m, Configuration::parse("11"));
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].event, Event(Extraction{SiteSet::single(1)}));
}

TEST(EnabledEvents, TasepBulkHop) {
  const TasepModel m({.L = 3, .alpha = 1.0, .beta = 1.0});
  const auto ev = enabled_events(m, Configuration::parse("110"));
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].event, Event(Diffusion{1, 2}));
  EXPECT_DOUBLE_EQ(ev[0].rate, 1.0);
}

TEST(EnabledEvents, RatesSumToTotalAndRespectOccupancy) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (int L = 1; L <= 6; ++L) {
      const auto m = fixtures::random_table_model(L, seed);
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << L); ++s) {
        const Configuration eta(L, s);
        const auto ev = enabled_events(m, eta);
        double sum = 0.0;
        for (const auto& [e, r] : ev) {
          EXPECT_GT(r, 0.0);
          sum += r;
          EXPECT_NO_THROW(apply_event(eta, e));
        }
        EXPECT_NEAR(sum, total_rate(m, eta), 1e-12);
      }
    }
  }
}

TEST(ApplyEvent, Flips) {
  EXPECT_EQ(apply_event(Configuration::parse("01"), Injection{0}).to_string(), "11");
  EXPECT_EQ(apply_event(Configuration::parse("10"), Diffusion{0, 1}).to_string(), "01");
  EXPECT_EQ(apply_event(Configuration::parse("11"), Extraction{SiteSet({0, 1})}).to_string(), "00");
}

TEST(ApplyEvent, InputUnchanged) {
  const auto eta = Configuration::parse("01");
  const auto next = apply_event(eta, Injection{0});
  EXPECT_EQ(eta.to_string(), "01");
  EXPECT_NE(next, eta);
}

TEST(ApplyEvent, FlipTwiceIsIdentity) {
  for (std::uint64_t s = 0; s < 16; ++s) {
    const Configuration eta(4, s);
    for (std::uint64_t v = 1; v < 16; ++v) EXPECT_EQ(eta.flipped(SiteSet(v)).flipped(SiteSet(v)), eta);
  }
}

TEST(ApplyEvent, PreconditionNamesSites) {
  try {
    apply_event(Configuration::parse("010"), Extraction{SiteSet({0, 1, 2})});
    FAIL();
  } catch (const ContractError& e) {
    EXPECT_NE(std::string(e.what()).find("{0,2}"), std::string::npos) << e.what();
  }
  EXPECT_THROW(apply_event(Configuration::parse("01"), Injection{1}), ContractError);
  EXPECT_THROW(apply_event(Configuration::parse("01"), Diffusion{1, 1}), ContractError);
  EXPECT_THROW(apply_event(Configuration::parse("11"), Diffusion{0, 1}), ContractError);
  EXPECT_THROW(apply_event(Configuration::parse("01"), Injection{5}), ContractError);
}

TEST(ValidateModel, TasepIrreducible) {
  const TasepModel m({.L = 3, .alpha = 1.0, .beta = 1.0});
  const auto r = validate_model(m);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_TRUE(r.absorbing_states.empty());
  ASSERT_TRUE(r.irreducible.has_value());
  EXPECT_TRUE(*r.irreducible);
  EXPECT_TRUE(r.enumerated);
  EXPECT_TRUE(r.valid());
}

TEST(ValidateModel, InjectionOnOccupiedSite) {
  const auto r = validate_model(LeakyInjection{});
  ASSERT_FALSE(r.violations.empty());
  EXPECT_FALSE(r.valid());
  for (const auto& v : r.violations) {
    const auto* inj = std::get_if<Injection>(&v.event);
    ASSERT_NE(inj, nullptr);
    EXPECT_TRUE(v.state[inj->site]);
  }
}

TEST(ValidateModel, AbsorbingEmptyState) {
  TableModel m(2, {}, {SiteSet::single(0), SiteSet::single(1)});
  m.set_extraction(Configuration::parse("10"), SiteSet::single(0), 1.0);
  const auto r = validate_model(m);
  ASSERT_FALSE(r.absorbing_states.empty());
  EXPECT_EQ(r.absorbing_states.front(), Configuration::parse("00"));
  EXPECT_FALSE(r.valid());
}

TEST(ValidateModel, ReducibleWithoutAbsorbingState) {
  // Site 1 is never touched by injection or extraction: states with site 1
  // filled never reach states with it empty.
  TableModel m(2, {}, {SiteSet::single(0)});
  for (std::uint64_t s = 0; s < 4; ++s) {
    const Configuration eta(2, s);
    if (!eta[0]) m.set_injection(eta, 0, 1.0);
    else m.set_extraction(eta, SiteSet::single(0), 1.0);
  }
  const auto r = validate_model(m);
  EXPECT_TRUE(r.absorbing_states.empty());
  ASSERT_TRUE(r.irreducible.has_value());
  EXPECT_FALSE(*r.irreducible);
}

TEST(ValidateModel, SampledAboveCap) {
  const TasepModel m({.L = 20, .alpha = 0.5, .beta = 0.5});
  const auto r = validate_model(m, {.enumeration_cap = 16, .samples = 256, .seed = 3});
  EXPECT_FALSE(r.enumerated);
  EXPECT_FALSE(r.irreducible.has_value());
  EXPECT_TRUE(r.violations.empty());
}

TEST(TableModel, RejectsBadDeclarations) {
  EXPECT_THROW(TableModel(9, {}, {}), ContractError);
  EXPECT_THROW(TableModel(2, {{0, 0}}, {}), ContractError);
  EXPECT_THROW(TableModel(2, {{0, 1}, {0, 1}}, {}), ContractError);
  EXPECT_THROW(TableModel(2, {}, {SiteSet()}), ContractError);
  EXPECT_THROW(TableModel(2, {}, {SiteSet::single(2)}), ContractError);
  TableModel m(2, {{0, 1}}, {SiteSet::single(1)});
  EXPECT_THROW(m.set_diffusion(Configuration::parse("10"), 1, 0, 1.0), ContractError);
  EXPECT_THROW(m.set_extraction(Configuration::parse("11"), SiteSet::single(0), 1.0), ContractError);
  EXPECT_EQ(m.diffusion_rate(Configuration::parse("01"), 1, 0), 0.0);
}
