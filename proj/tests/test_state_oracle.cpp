#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mcqw/state_oracle.hpp"
#include "mcqw/walk_engine.hpp"

using namespace mcqw;

TEST_CASE("zero steps returns the initial product state at the origin") {
  for (int M : {1, 3}) {
    const PositionDistribution d =
        oracle_distribution(WalkSpec{M, 0}, InitialSpec::case_b(M));
    CHECK(d.t == 0);
    REQUIRE(d.mass.size() == 1);
    CHECK(std::abs(d.mass_at(0) - 1.0) < 1e-15);
  }
}

TEST_CASE("oracle normalizes for every init kind") {
  for (int M : {1, 2, 4}) {
    for (const InitialSpec& init :
         {InitialSpec::case_a(M), InitialSpec::case_b(M), InitialSpec::ket1(M),
          InitialSpec::mixture(M, M / 2)}) {
      const PositionDistribution d = oracle_distribution(WalkSpec{M, 9}, init);
      double total = 0.0;
      for (double p : d.mass) {
        CHECK(p >= -1e-15);
        total += p;
      }
      CHECK(std::abs(total - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("engine agrees with the oracle on a fast sub-grid") {
  for (int M : {1, 2, 3, 4}) {
    for (long t : {1L, 3L, 6L, 10L}) {
      const WalkSpec spec{M, t};
      for (const InitialSpec& init :
           {InitialSpec::case_a(M), InitialSpec::case_b(M), InitialSpec::ket1(M),
            InitialSpec::mixture(M, (M + 1) / 2)}) {
        CHECK(total_variation(distribution(spec, init),
                              oracle_distribution(spec, init)) < 1e-10);
      }
    }
  }
}

TEST_CASE("mixture endpoints coincide with the pure cases") {
  const WalkSpec spec{3, 8};
  CHECK(total_variation(oracle_distribution(spec, InitialSpec::mixture(3, 3)),
                        oracle_distribution(spec, InitialSpec::case_a(3))) <
        1e-14);
  CHECK(total_variation(oracle_distribution(spec, InitialSpec::mixture(3, 0)),
                        oracle_distribution(spec, InitialSpec::case_b(3))) <
        1e-14);
}

TEST_CASE("sampling the all-mixed start enumerates exactly when it can") {
  // 2^3 = 8 <= n_samples: every basis corner visited once, so the Monte
  // Carlo average IS the oracle distribution.
  const PositionDistribution mc = sample_case_b(3, 5, 8, /*seed=*/99);
  const PositionDistribution exact =
      oracle_distribution(WalkSpec{3, 5}, InitialSpec::case_b(3));
  CHECK(total_variation(mc, exact) < 1e-14);
}

TEST_CASE("pinned Monte Carlo instance: M=4, t=8, n=4000, seed=1") {
  const PositionDistribution mc = sample_case_b(4, 8, 4000, 1);
  const PositionDistribution exact =
      oracle_distribution(WalkSpec{4, 8}, InitialSpec::case_b(4));
  CHECK(total_variation(mc, exact) < 0.05);

  const PositionDistribution again = sample_case_b(4, 8, 4000, 1);
  REQUIRE(mc.mass.size() == again.mass.size());
  for (size_t i = 0; i < mc.mass.size(); ++i) CHECK(mc.mass[i] == again.mass[i]);

  // 2^4 <= 4000, so the sampler enumerates the corners exactly and the seed
  // is idle; seed sensitivity needs 2^M > n to hit the Monte Carlo path.
  const PositionDistribution other = sample_case_b(4, 8, 4000, 2);
  CHECK(total_variation(mc, other) < 1e-14);
  const PositionDistribution s1 = sample_case_b(6, 8, 30, 1);
  const PositionDistribution s2 = sample_case_b(6, 8, 30, 2);
  CHECK(total_variation(s1, s2) > 0.0);
}

TEST_CASE("oracle guards: size caps and work budget") {
  CHECK_THROWS_AS(oracle_distribution(WalkSpec{25, 1}, InitialSpec::case_a(25)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      oracle_distribution(WalkSpec{12, 200}, InitialSpec::case_b(12), 1e6),
      BudgetError);
  CHECK_THROWS_AS(sample_case_b(12, 200, 5000, 1, 1e6), BudgetError);
  CHECK_THROWS_AS(sample_case_b(0, 5, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_case_b(3, 5, 0, 1), std::invalid_argument);
}
