#include <gtest/gtest.h>

#include <array>
#include <vector>

#include "support.hpp"
#include "urnlab/oracle.hpp"

using namespace urnlab;
namespace ut = urnlab::testing;

namespace {

/// Three colors, C in {0, 1, 3} independent of xi; a = 2 on perm[0], 1 elsewhere.
FiniteKernel lopsided(const std::array<std::uint32_t, 3>& perm) {
  const FiniteKernel::InnovationLaw heavy{
      {{perm[0], perm[1]}, Rational(1, 2)}, {{perm[0]}, Rational(1, 4)}, {{}, Rational(1, 4)}};
  const FiniteKernel::InnovationLaw light{
      {{perm[0], perm[1]}, Rational(1, 4)}, {{perm[0]}, Rational(1, 8)}, {{}, Rational(5, 8)}};
  std::vector<FiniteKernel::InnovationLaw> laws(3, light);
  laws[perm[0] - 1] = heavy;
  return builtin_finite(3, {{0, Rational(1, 3)}, {1, Rational(1, 3)}, {3, Rational(1, 3)}}, laws);
}

}  // namespace

TEST(ExactMoments, ForcedPath) {
  const auto k = ut::forced_kernel();
  const TagState u0{0, 1};
  const std::vector<Rational> f{1, 0};
  EXPECT_EQ(exact_moments(k, u0, 1, f).mean, Rational(1));
  const auto m2 = exact_moments(k, u0, 2, f);
  EXPECT_EQ(m2.mean, Rational(7, 3));
  EXPECT_EQ(m2.variance, Rational(2, 9));
  EXPECT_EQ(m2.normalized_mean, Rational(7, 15));
}

TEST(ExactMoments, DeterministicTotal) {
  const auto k = ut::forced_kernel();
  const TagState u0{2, 1};
  const std::vector<Rational> one{1, 1};
  for (std::uint32_t n = 0; n <= 6; ++n) {
    const auto m = exact_moments(k, u0, n, one);
    EXPECT_EQ(m.mean, Rational(3 + 2 * n));
    EXPECT_EQ(m.variance, Rational(0));
  }
}

TEST(ExactMoments, DepthZero) {
  const auto k = ut::simon_surrogate();
  const TagState u0{3, 1};
  const std::vector<Rational> f{Rational(1, 3), -2};
  const auto m = exact_moments(k, u0, 0, f);
  EXPECT_EQ(m.mean, Rational(-1));
  EXPECT_EQ(m.normalized_mean, Rational(-1, 4));
  EXPECT_EQ(m.variance, Rational(0));
}

TEST(ExactMoments, FromCountingMeasure) {
  const auto m = exact_moments(ut::forced_kernel(), CountingMeasure{{Color::tag(2), 1}}, 2,
                               TestFunction::tag_indicator(1));
  EXPECT_EQ(m.mean, Rational(7, 3));
  EXPECT_THROW(exact_moments(ut::forced_kernel(), CountingMeasure{{Color::tag(3), 1}}, 2,
                             TestFunction::tag_indicator(1)),
               ColorSpaceError);
}

TEST(ExactMoments, Budget) {
  const auto k = ut::simon_surrogate();
  OracleOptions tight;
  tight.node_budget = 5;
  EXPECT_THROW(exact_moments(k, TagState{1, 1}, 4, {1, 0}, tight), BudgetExceededError);
  EXPECT_THROW(exact_moments(k, TagState{1, 1}, 9, {1, 0}), BudgetExceededError);
  OracleOptions deep;
  deep.max_depth = 10;
  EXPECT_NO_THROW(exact_moments(k, TagState{1, 1}, 9, {1, 0}, deep));
  EXPECT_THROW(exact_moments(k, TagState{0, 0}, 1, {1, 0}), EmptyMeasureError);
}

TEST(ExactMoments, PermutationEquivariance) {
  const std::array<std::uint32_t, 3> id{1, 2, 3}, perm{3, 1, 2};
  const auto a = lopsided(id);
  const auto b = lopsided(perm);
  const TagState u0{2, 1, 1};
  const std::vector<Rational> f{Rational(1), Rational(-3, 2), Rational(1, 5)};
  TagState v0(3);
  std::vector<Rational> g(3);
  for (std::size_t t = 0; t < 3; ++t) {
    v0[perm[t] - 1] = u0[t];
    g[perm[t] - 1] = f[t];
  }
  for (std::uint32_t n = 0; n <= 5; ++n) {
    const auto x = exact_moments(a, u0, n, f);
    const auto y = exact_moments(b, v0, n, g);
    EXPECT_EQ(x.mean, y.mean);
    EXPECT_EQ(x.normalized_mean, y.normalized_mean);
    EXPECT_EQ(x.variance, y.variance);
  }
}

TEST(GeneratorIdentity, HandExample) {
  const auto k = ut::forced_kernel();
  EXPECT_EQ(generator_identity_check(k, {0, 1}, {1, 0}), Rational(0));
  EXPECT_EQ(generator_identity_check(k, {0, 1}, {0, 0}), Rational(0));
}

TEST(GeneratorIdentity, ModulationEigenvector) {
  const auto k = lopsided({1, 2, 3});
  const auto& a = k.modulation_exact();
  const TagState urn{2, 3, 4};
  EXPECT_EQ(generator_identity_check(k, urn, a), Rational(0));
  const auto ra = apply_R_exact(k, a);
  const Rational lambda1 = k.lambda2_exact() + [&] {
    Rational s = 0;
    for (std::size_t t = 0; t < 3; ++t) s += k.mu_exact()[t] * a[t];
    return s;
  }();
  Rational ubar_ra = 0, ubar_a = 0;
  for (std::size_t t = 0; t < 3; ++t) {
    ubar_ra += Rational(urn[t], 9) * ra[t];
    ubar_a += Rational(urn[t], 9) * a[t];
  }
  EXPECT_EQ(ubar_ra, lambda1 * ubar_a);
}

TEST(GeneratorIdentity, AllSmallUrnsAllProbes) {
  std::vector<FiniteKernel> kernels{ut::forced_kernel(), ut::uniform_ball_kernel(1),
                                    ut::uniform_ball_kernel(2), ut::simon_surrogate(),
                                    builtin_finite(2, {{0, Rational(1)}}, {{{{1}, Rational(1)}}}),
                                    builtin_finite(2, {{-1, Rational(1, 3)}, {2, Rational(2, 3)}},
                                                   {{{{1, 2}, Rational(1, 2)}, {{2}, Rational(1, 2)}}})};
  for (const auto& k : kernels) {
    std::vector<std::vector<Rational>> probes{{1, 0}, {0, 1}, {1, 1}, {0, 0},
                                              {Rational(3, 7), Rational(-5, 2)}, k.modulation_exact()};
    for (std::uint64_t x = 0; x <= 10; ++x) {
      for (std::uint64_t y = 0; x + y <= 10; ++y) {
        if (x + y == 0) continue;
        for (const auto& f : probes) {
          ASSERT_EQ(generator_identity_check(k, {x, y}, f), Rational(0));
        }
      }
    }
  }
}

TEST(OracleVsMc, ForcedKernelTwoSteps) {
  const auto cmp = oracle_vs_montecarlo(ut::forced_kernel(), {{Color::tag(2), 1}}, 2,
                                        TestFunction::tag_indicator(1), 20'000, 1, 2);
  EXPECT_EQ(to_string(cmp.exact.mean), "7/3");
  EXPECT_TRUE(cmp.outcome.passed) << cmp.mc_mean << " vs " << cmp.outcome.predicted;
}

TEST(OracleVsMc, DepthZeroIsExact) {
  const auto cmp = oracle_vs_montecarlo(ut::forced_kernel(), {{Color::tag(2), 3}, {Color::tag(1), 1}},
                                        0, TestFunction::tag_indicator(1), 50, 1, 1);
  EXPECT_EQ(cmp.mc_standard_error, 0.0);
  EXPECT_EQ(cmp.mc_mean, 0.25);
  EXPECT_TRUE(cmp.outcome.passed);
}

TEST(OracleVsMc, SimonSurrogate) {
  const auto k = ut::simon_surrogate();
  for (std::uint32_t n = 1; n <= 6; ++n) {
    const auto cmp = oracle_vs_montecarlo(k, {{Color::tag(1), 1}}, n, TestFunction::tag_indicator(1),
                                          20'000, 100 + n, 2);
    EXPECT_TRUE(cmp.outcome.passed) << "n=" << n;
  }
}
