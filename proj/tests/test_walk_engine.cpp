#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "mcqw/numerics.hpp"
#include "mcqw/state_oracle.hpp"
#include "mcqw/walk_engine.hpp"

using namespace mcqw;

namespace {

// E e^{i xi X} directly from a distribution, for cross-checking inversion.
cplx chf_of(const PositionDistribution& d, double xi) {
  cplx acc(0.0, 0.0);
  for (long x = -d.t; x <= d.t; ++x)
    acc += d.mass_at(x) * std::polar(1.0, xi * double(x));
  return acc;
}

}  // namespace

TEST_CASE("per-coin factors: normalization, bounds, realness") {
  Vector2cd tilted;
  tilted << cplx(0.8, 0.0), cplx(0.0, -0.6);
  for (double k : {0.15, 1.2, 3.9, 5.8}) {
    for (long d : {1L, 2L, 5L, 17L}) {
      CHECK(std::abs(q_factor(k, 0.0, d, coin_symmetric()) - 1.0) < 1e-14);
      CHECK(std::abs(q_factor(k, 0.0, d, tilted) - 1.0) < 1e-14);
      CHECK(std::abs(c_factor(k, 0.0, d) - 1.0) < 1e-14);
      for (double xi : {0.3, 1.7, 2.9}) {
        CHECK(std::abs(q_factor(k, xi, d, tilted)) <= 1.0 + 1e-13);
        CHECK(std::abs(c_factor(k, xi, d).imag()) < 1e-13);
        CHECK(std::abs(c_factor(k, xi, d).real()) <= 1.0 + 1e-13);
      }
    }
  }
}

TEST_CASE("one-step factors collapse to cos(xi) for canonical initial coins") {
  Vector2cd e1;
  e1 << cplx(0.0, 0.0), cplx(1.0, 0.0);
  for (double k : {0.4, 2.2, 5.1}) {
    for (double xi : {0.0, 0.37, 1.9, 3.0}) {
      CHECK(std::abs(q_factor(k, xi, 1, coin_symmetric()) - std::cos(xi)) < 1e-14);
      CHECK(std::abs(q_factor(k, xi, 1, coin_ket1()) - std::cos(xi)) < 1e-14);
      CHECK(std::abs(q_factor(k, xi, 1, e1) - std::cos(xi)) < 1e-14);
      CHECK(std::abs(c_factor(k, xi, 1) - std::cos(xi)) < 1e-14);
    }
  }
}

TEST_CASE("mixed factor approaches cos(xi h(k)) in the deep-driving limit") {
  // c_factor(k, xi/d, d) -> cos(xi h(k)) as d grows: the slow phase rides the
  // group velocity while intra-branch oscillation averages out.
  const long d = 400;
  for (double k : {0.3, 1.0, 2.6}) {
    const double xi = 0.3;
    const double target = std::cos(xi * group_velocity(k));
    CHECK(std::abs(c_factor(k, xi / double(d), d).real() - target) < 1e-3);
  }
}

TEST_CASE("mixed factor is numerically stable near xi = 0") {
  // (1 - C)/eps^2 has a finite limit with an O(eps) correction (the cross
  // trace is not even in xi), so each 10x refinement shrinks the change
  // ~10x; cancellation blow-up at the smallest step would reverse that.
  const long d = 7;
  const double k = 1.3;
  std::vector<double> curv;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const double c = c_factor(k, eps, d).real();
    CHECK(c <= 1.0 + 1e-13);
    curv.push_back((1.0 - c) / (eps * eps));
    CHECK(curv.back() > 0.0);
  }
  const double delta1 = std::abs(curv[1] - curv[0]);
  const double delta2 = std::abs(curv[2] - curv[1]);
  CHECK(delta2 < delta1 / 5.0);
  CHECK(delta2 < 5e-3 * curv[2] + 1e-12);
}

TEST_CASE("hand-evolved two-step symmetric walk") {
  const PositionDistribution d =
      distribution(WalkSpec{1, 2}, InitialSpec::case_a(1));
  CHECK(std::abs(d.mass_at(-2) - 0.25) < 1e-14);
  CHECK(std::abs(d.mass_at(0) - 0.50) < 1e-14);
  CHECK(std::abs(d.mass_at(2) - 0.25) < 1e-14);
  CHECK(std::abs(d.mass_at(1)) < 1e-15);
  CHECK(std::abs(d.mass_at(-1)) < 1e-15);
}

TEST_CASE("binomial regime: t <= M collapses to the fair binomial") {
  for (const auto& [M, t] : {std::pair<int, long>{10, 10}, {50, 37}}) {
    for (const InitialSpec& init :
         {InitialSpec::case_a(M), InitialSpec::case_b(M), InitialSpec::ket1(M)}) {
      const PositionDistribution d = distribution(WalkSpec{M, t}, init);
      const double scale = std::ldexp(1.0, -int(t));
      for (long j = 0; j <= t; ++j)
        CHECK(std::abs(d.mass_at(2 * j - t) - binomial(int(t), int(j)) * scale) <
              1e-12);
    }
  }
}

TEST_CASE("engine equals the dense oracle beyond the binomial regime") {
  const int M = 2;
  const long t = 7;
  for (const InitialSpec& init :
       {InitialSpec::case_a(M), InitialSpec::case_b(M), InitialSpec::ket1(M),
        InitialSpec::mixture(M, 1)}) {
    const double tv = total_variation(distribution(WalkSpec{M, t}, init),
                                      oracle_distribution(WalkSpec{M, t}, init));
    CHECK(tv < 1e-10);
  }
}

TEST_CASE("characteristic function matches the inverted distribution") {
  const WalkSpec spec{3, 10};
  const InitialSpec init = InitialSpec::mixture(3, 2);
  const PositionDistribution d = distribution(spec, init);
  for (double xi : {0.0, 0.21, 1.4, 2.8}) {
    const cplx direct = characteristic_function(spec, init, xi);
    CHECK(std::abs(direct - chf_of(d, xi)) < 1e-12);
  }
}

TEST_CASE("doubling the mode grid leaves the characteristic function fixed") {
  const WalkSpec spec{3, 10};
  const InitialSpec init = InitialSpec::mixture(3, 2);
  for (double xi : {0.33, 1.9}) {
    const cplx base = characteristic_function(spec, init, xi);
    const cplx dbl = characteristic_function(spec, init, xi, 2 * (2 * spec.t + 2));
    CHECK(std::abs(base - dbl) < 1e-12);
  }
  CHECK_THROWS_AS(characteristic_function(spec, init, 0.5, 10),
                  std::invalid_argument);
}

TEST_CASE("distributions are normalized, nonnegative and parity-clean") {
  const PositionDistribution d =
      distribution(WalkSpec{3, 25}, InitialSpec::mixture(3, 2));
  double total = 0.0;
  for (long x = -d.t; x <= d.t; ++x) {
    const double p = d.mass_at(x);
    CHECK(p >= 0.0);
    if ((x + d.t) % 2 == 1) CHECK(p == 0.0);
    total += p;
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("moments: binomial variance is exact, bad orders are rejected") {
  const long t = 64;
  const PositionDistribution d =
      distribution(WalkSpec{64, t}, InitialSpec::case_a(64));
  CHECK(std::abs(moment(d, 1, 0.0)) < 1e-10);
  CHECK(std::abs(moment(d, 2, 0.0) - double(t)) < 1e-8);
  CHECK(std::abs(moment(d, 2, 0.5) - 1.0) < 1e-12);  // scaled by sqrt(t)
  CHECK_THROWS_AS(moment(d, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(moment(d, 9, 0.0), std::invalid_argument);
}

TEST_CASE("the |+1> product start drifts right at the known rate") {
  // E[X_t / t] -> mean squared group velocity = 1 - 1/sqrt(2) > 0; the
  // shift convention ties chirality (1,0) to +1 steps.
  const PositionDistribution d =
      distribution(WalkSpec{2, 500}, InitialSpec::ket1(2));
  const double rate = moment(d, 1, 1.0);
  CHECK(rate > 0.25);
  CHECK(std::abs(rate - (1.0 - SQRT1_2)) < 2e-2);
}

TEST_CASE("guards: budget, spec validation, mismatched lattices") {
  CHECK_THROWS_AS(distribution(WalkSpec{1, 5000}, InitialSpec::case_a(1), 1e3),
                  BudgetError);
  try {
    distribution(WalkSpec{1, 5000}, InitialSpec::case_a(1), 1e3);
  } catch (const BudgetError& e) {
    CHECK(e.estimated_cost > 1e3);
  }
  CHECK_THROWS_AS(distribution(WalkSpec{0, 5}, InitialSpec::case_a(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(distribution(WalkSpec{2, 0}, InitialSpec::case_a(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(InitialSpec::mixture(4, 5), std::invalid_argument);
  const PositionDistribution a = distribution(WalkSpec{1, 2}, InitialSpec::case_a(1));
  const PositionDistribution b = distribution(WalkSpec{1, 3}, InitialSpec::case_a(1));
  CHECK_THROWS_AS(total_variation(a, b), std::invalid_argument);
}
