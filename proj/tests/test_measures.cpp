#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "urnlab/measures.hpp"
#include "urnlab/rng.hpp"
#include "urnlab/sampler.hpp"
#include "urnlab/stats.hpp"

using namespace urnlab;

TEST(Color, Encodings) {
  EXPECT_TRUE(Color::tag(3).is_tag());
  EXPECT_EQ(Color::tag(3).tag_index(), 3u);
  EXPECT_TRUE(Color::point(0.25).is_point());
  EXPECT_DOUBLE_EQ(Color::point(0.25).value(), 0.25);
  EXPECT_EQ(Color::point(0.0), Color::point(-0.0));
  EXPECT_NE(Color::tag(1), Color::point(0.0));
  const auto pair = Color::composite(Color::tag(2), Color::point(0.5));
  EXPECT_TRUE(pair.is_composite());
  EXPECT_EQ(pair.first(), Color::tag(2));
  EXPECT_EQ(pair.second(), Color::point(0.5));
  EXPECT_THROW(Color::point(1.5), ColorSpaceError);
  EXPECT_THROW(Color::point(std::nan("")), ColorSpaceError);
  EXPECT_THROW(Color::point(0.5).tag_index(), ColorSpaceError);
}

TEST(Integrate, PointAtoms) {
  CountingMeasure nu{{Color::point(0.2), 2}, {Color::point(0.7), 1}};
  EXPECT_DOUBLE_EQ(integrate(nu, TestFunction::indicator(0.0, 0.5)), 2.0);
  EXPECT_DOUBLE_EQ(integrate(nu, TestFunction::zero()), 0.0);
}

TEST(Integrate, TagTable) {
  CountingMeasure nu{{Color::tag(1), 3}, {Color::tag(2), 4}};
  EXPECT_DOUBLE_EQ(integrate(nu, TestFunction::table({1.0, -1.0})), -1.0);
  EXPECT_EQ(integrate(nu, TestFunction::one()), 7.0);
}

TEST(Integrate, Linearity) {
  PhiloxStream rng(11, 0);
  CountingMeasure nu;
  for (int i = 0; i < 500; ++i) nu.add(Color::point(rng.uniform()), 1 + rng.below(5));
  const auto f = TestFunction::indicator(0.1, 0.6);
  const auto g = TestFunction::monomial(2);
  const double lhs = integrate(nu, f.scaled(2.5) + g.scaled(-0.75));
  const double rhs = 2.5 * integrate(nu, f) - 0.75 * integrate(nu, g);
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(rhs));
  EXPECT_EQ(integrate(nu, TestFunction::one()), static_cast<double>(nu.total()));
}

TEST(Normalize, Weights) {
  CountingMeasure a{{Color::tag(1), 1}, {Color::tag(2), 3}};
  auto w = normalize(a);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_DOUBLE_EQ(w[0].weight, 0.25);
  EXPECT_DOUBLE_EQ(w[1].weight, 0.75);

  CountingMeasure b{{Color::tag(1), 5}};
  EXPECT_DOUBLE_EQ(normalize(b)[0].weight, 1.0);

  CountingMeasure c{{Color::point(0.1), 2}, {Color::point(0.9), 2}};
  w = normalize(c);
  EXPECT_DOUBLE_EQ(w[0].weight, 0.5);
  EXPECT_DOUBLE_EQ(w[1].weight, 0.5);

  EXPECT_THROW(normalize(CountingMeasure{}), EmptyMeasureError);
}

TEST(Normalize, SumsToOne) {
  PhiloxStream rng(5, 1);
  CountingMeasure nu;
  for (int i = 0; i < 1000; ++i) nu.add(Color::tag(1 + static_cast<std::uint32_t>(rng.below(300))), 1 + rng.below(9));
  CompensatedSum s;
  for (const auto& a : normalize(nu)) {
    EXPECT_GE(a.weight, 0.0);
    EXPECT_LE(a.weight, 1.0);
    s.add(a.weight);
  }
  EXPECT_NEAR(s.value(), 1.0, 1e-15);
}

TEST(MeasureIntegrate, Examples) {
  const auto mu = FiniteMeasure::lebesgue(0.6);
  EXPECT_NEAR(measure_integrate(mu, TestFunction::indicator(0.0, 0.5)), 0.3, 1e-15);
  const auto atoms = FiniteMeasure::atomic({{Color::tag(1), 0.5}, {Color::tag(2), 0.5}});
  EXPECT_EQ(measure_integrate(atoms, TestFunction::one()), atoms.total_mass());
  EXPECT_DOUBLE_EQ(measure_integrate(atoms, TestFunction::one()), 1.0);
  EXPECT_DOUBLE_EQ(measure_integrate(FiniteMeasure::lebesgue(), TestFunction::monomial(1)), 0.5);
}

TEST(MeasureIntegrate, UnsupportedPair) {
  const TestFunction g(GenericFunction{[](const Color& c) { return c.value(); }, 1.0, std::nullopt});
  EXPECT_THROW(measure_integrate(FiniteMeasure::lebesgue(), g), UnsupportedPairError);
  const TestFunction h(GenericFunction{[](const Color& c) { return c.value(); }, 1.0, 0.5});
  EXPECT_DOUBLE_EQ(measure_integrate(FiniteMeasure::lebesgue(), h), 0.5);
}

TEST(FiniteMeasure, Validation) {
  EXPECT_THROW(FiniteMeasure::atomic({{Color::tag(1), -1.0}}), ParameterError);
  EXPECT_THROW(FiniteMeasure::atomic({{Color::tag(1), 0.0}}), ParameterError);
  EXPECT_THROW(FiniteMeasure::lebesgue(0.0), ParameterError);
}

TEST(CountingMeasure, Bookkeeping) {
  CountingMeasure nu;
  auto [s1, created1] = nu.add(Color::tag(1), 2);
  auto [s2, created2] = nu.add(Color::tag(1), 3);
  EXPECT_TRUE(created1);
  EXPECT_FALSE(created2);
  EXPECT_EQ(s1, s2);
  EXPECT_EQ(nu.multiplicity(Color::tag(1)), 5u);
  EXPECT_EQ(nu.total(), 5u);
  nu.remove_at(s1, 5);
  EXPECT_EQ(nu.size(), 0u);
  EXPECT_TRUE(nu.empty());
  EXPECT_THROW(nu.remove_at(s1, 1), IntegrityError);
}

TEST(CountingMeasure, DeferredIndexMerges) {
  CountingMeasure nu{{Color::point(0.5), 1}};
  nu.append_unindexed(Color::point(0.5), 2);
  nu.append_unindexed(Color::point(0.25), 1);
  EXPECT_TRUE(nu.has_unindexed());
  EXPECT_EQ(nu.multiplicity(Color::point(0.5)), 3u);
  std::vector<std::uint32_t> merged;
  nu.settle([&](std::uint32_t from, std::uint32_t to, std::uint64_t k) {
    merged.push_back(from);
    EXPECT_EQ(to, 0u);
    EXPECT_EQ(k, 2u);
  });
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_EQ(merged[0], 1u);
  EXPECT_EQ(nu.multiplicity_at(0), 3u);
  EXPECT_EQ(nu.size(), 2u);
  EXPECT_EQ(nu.find(Color::point(0.25)), 2u);
}

TEST(CountingMeasure, CompactionKeepsAtoms) {
  PhiloxStream rng(3, 0);
  CountingMeasure nu;
  std::vector<Color> colors;
  for (int i = 0; i < 2000; ++i) {
    colors.push_back(Color::point(rng.uniform()));
    nu.add(colors.back(), 2);
  }
  for (int i = 0; i < 2000; i += 2) nu.remove_at(nu.find(colors[i]), 2);
  const double before = integrate(nu, TestFunction::monomial(1));
  nu.compact();
  EXPECT_EQ(nu.slot_count(), 1000u);
  EXPECT_EQ(nu.zero_slots(), 0u);
  EXPECT_EQ(nu.total(), 2000u);
  EXPECT_DOUBLE_EQ(integrate(nu, TestFunction::monomial(1)), before);
  for (int i = 1; i < 2000; i += 2) EXPECT_EQ(nu.multiplicity(colors[i]), 2u);
  EXPECT_EQ(nu.find(colors[0]), ColorIndex::kNotFound);
}

TEST(Philox, KnownAnswer) {
  const auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
  const auto ones = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                  {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(ones[0], 0x408f276du);
  EXPECT_EQ(ones[1], 0x41c83b0eu);
  EXPECT_EQ(ones[2], 0xa20bc7c6u);
  EXPECT_EQ(ones[3], 0x6d5451fdu);
}

TEST(Philox, StreamsAreDistinctAndReproducible) {
  PhiloxStream a(7, 0, Substream::kColor), b(7, 0, Substream::kColor), c(7, 1, Substream::kColor);
  int same = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    same += x == c() ? 1 : 0;
  }
  EXPECT_EQ(same, 0);
}

TEST(UrnSampler, ChiSquareFiveAtoms) {
  const std::vector<std::uint64_t> w{1, 2, 3, 10, 4};
  UrnSampler sampler(w);
  PhiloxStream rng(2024, 0, Substream::kColor);
  std::vector<std::uint64_t> counts(w.size(), 0);
  for (int i = 0; i < 1'000'000; ++i) ++counts[sampler.sample(rng, w)];
  std::vector<double> p;
  for (auto x : w) p.push_back(static_cast<double>(x) / 20.0);
  const auto chi = stats::chi_square_test(counts, p);
  EXPECT_GT(chi.p_value, 0.001) << "chi2 = " << chi.statistic;
}

TEST(UrnSampler, MatchesBruteForceUnderUpdates) {
  PhiloxStream rng(99, 0);
  std::vector<std::uint64_t> w;
  UrnSampler sampler;
  for (int round = 0; round < 3000; ++round) {
    const auto op = rng.below(3);
    if (op == 0 || w.empty()) {
      w.push_back(rng.below(4));
      sampler.push_back(w.back());
    } else if (op == 1) {
      const auto s = rng.below(w.size());
      const auto k = rng.below(3);
      w[s] += k;
      sampler.add(s, k);
    } else {
      const auto s = rng.below(w.size());
      if (w[s] > 0) {
        --w[s];
        sampler.subtract(s, 1);
      }
    }
    std::uint64_t total = 0;
    for (auto x : w) total += x;
    ASSERT_EQ(sampler.total_weight(), total);
    if (total == 0) continue;
    const auto target = rng.below(total);
    std::uint64_t acc = 0;
    std::size_t expect = 0;
    while (acc + w[expect] <= target) acc += w[expect++];
    ASSERT_EQ(sampler.find(target, w), expect);
    const auto probe = rng.below(w.size() + 1);
    std::uint64_t pre = 0;
    for (std::size_t j = 0; j < probe; ++j) pre += w[j];
    ASSERT_EQ(sampler.prefix(probe, w), pre);
  }
}

TEST(UrnSampler, RejectsNegativeWeight) {
  const std::vector<std::uint64_t> w{1};
  UrnSampler sampler(w);
  EXPECT_THROW(sampler.subtract(0, 2), IntegrityError);
  PhiloxStream rng;
  EXPECT_THROW(UrnSampler().sample(rng, std::span<const std::uint64_t>{}), IntegrityError);
}
