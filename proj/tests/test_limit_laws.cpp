#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mcqw/coin_kernel.hpp"
#include "mcqw/limit_laws.hpp"
#include "mcqw/numerics.hpp"

using namespace mcqw;

namespace {

constexpr double SQRT1_8 = 0.35355339059327376220;

// Sample second moment, for loose distributional checks on the samplers.
double sample_m2(const Law& law, std::uint64_t n, std::uint64_t seed) {
  auto v = law.sample(n, seed);
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc / static_cast<double>(n);
}

// Ballistic density, restated locally for quadrature weights.
double ballistic_density(double x) {
  if (!(std::abs(x) < SQRT1_2)) return 0.0;
  return 1.0 / (PI * (1.0 - x * x) * std::sqrt(1.0 - 2.0 * x * x));
}

double atom_at_zero(const Law& law) {
  for (const Atom& a : law.atoms())
    if (a.location == 0.0) return a.mass;
  return 0.0;
}

// Integral of f against the ballistic density rho via the substitution
// x = sin(u) / sqrt(2), which removes the edge singularity:
// rho(x) dx = sqrt(2) du / (pi (2 - sin^2 u)).
double rho_integral(const std::function<double(double)>& f) {
  return gauss_integrate(
      [&](double u) {
        double s = std::sin(u);
        double x = s * SQRT1_2;
        return f(x) * std::sqrt(2.0) / (PI * (2.0 - s * s));
      },
      -PI / 2.0, PI / 2.0, 512);
}

}  // namespace

TEST_CASE("point mass at the origin") {
  auto law = make_dirac0();
  CHECK(law->name() == "dirac0");
  CHECK(law->cdf(-1e-12) == 0.0);
  CHECK(law->cdf(0.0) == 1.0);
  CHECK(law->moment(0) == 1.0);
  CHECK(law->moment(5) == 0.0);
  REQUIRE(law->atoms().size() == 1);
  CHECK(law->atoms()[0].location == 0.0);
  CHECK(law->atoms()[0].mass == 1.0);
  for (double v : law->sample(64, 7)) CHECK(v == 0.0);
}

TEST_CASE("gaussian closed forms and guards") {
  auto law = make_gaussian(1.0);
  CHECK(law->name() == "gaussian:sigma=1");
  CHECK(std::abs(law->density(0.0) - 1.0 / std::sqrt(TWO_PI)) < 1e-15);
  CHECK(std::abs(law->cdf(0.0) - 0.5) < 1e-15);
  CHECK(std::abs(law->moment(2) - 1.0) < 1e-14);
  CHECK(std::abs(law->moment(4) - 3.0) < 1e-14);
  CHECK(law->moment(3) == 0.0);
  auto wide = make_gaussian(2.0);
  CHECK(std::abs(wide->moment(2) - 4.0) < 1e-13);
  CHECK(std::abs(wide->density(0.0) - 0.5 / std::sqrt(TWO_PI)) < 1e-15);
  CHECK_THROWS_AS(make_gaussian(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_gaussian(-1.0), std::invalid_argument);
}

TEST_CASE("arcsine family: support 2^-beta, closed moments, sampler") {
  auto full = make_arcsine(1.0);
  CHECK(full->name() == "arcsine:beta=1");
  CHECK(std::abs(full->density(0.0) - 2.0 / PI) < 1e-15);
  CHECK(std::abs(full->moment(2) - 0.125) < 1e-14);
  CHECK(full->cdf(0.5) == 1.0);
  CHECK(full->cdf(-0.5) == 0.0);

  auto unit = make_arcsine(0.0);
  CHECK(std::abs(unit->moment(2) - 0.5) < 1e-14);
  CHECK(std::abs(unit->moment(4) - 3.0 / 8.0) < 1e-14);
  CHECK(std::abs(unit->cdf(0.0) - 0.5) < 1e-15);
  // Pushforward sampler a*sin(2 pi U); spec tolerance 3e-3 at 1e6 draws.
  CHECK(std::abs(sample_m2(*unit, 1000000, 11) - 0.5) < 3e-3);

  CHECK_THROWS_AS(make_arcsine(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(make_arcsine(1.1), std::invalid_argument);
}

TEST_CASE("ballistic walk density: pins and edge behavior") {
  auto law = make_konno();
  CHECK(law->name() == "konno");
  CHECK(std::abs(law->density(0.0) - 1.0 / PI) < 1e-15);
  CHECK(law->density(SQRT1_2) == 0.0);
  CHECK(std::abs(law->cdf(0.0) - 0.5) < 1e-12);
  CHECK(law->cdf(SQRT1_2) == 1.0);
  CHECK(law->cdf(-SQRT1_2 - 1e-9) == 0.0);
  CHECK(std::abs(law->moment(2) - (1.0 - SQRT1_2)) < 1e-10);
  CHECK(std::abs(law->moment(4) - (1.0 - 1.25 * SQRT1_2)) < 1e-10);
  CHECK(law->moment(1) == 0.0);
  CHECK(law->moment(3) == 0.0);
  // cdf matches a quadrature of the density with the edge singularity
  // removed by x = sin(u)/sqrt(2).
  double q = gauss_integrate(
      [](double u) {
        double s = std::sin(u);
        return std::sqrt(2.0) / (PI * (2.0 - s * s));
      },
      -PI / 2.0, std::asin(0.3 * std::sqrt(2.0)), 256);
  CHECK(std::abs(law->cdf(0.3) - q) < 1e-10);
}

TEST_CASE("gaussian-plus-arcsine convolution: exact moments, sampler") {
  auto law = make_gauss_plus_arcsine(0.5);
  CHECK(law->name() == "gauss-plus-arcsine:beta=0.5");
  // Independent sum: E[Y^2] = 1 + a^2/2 with a = 2^-1/2.
  CHECK(std::abs(law->moment(2) - 1.25) < 1e-12);
  CHECK(law->moment(1) == 0.0);
  CHECK(std::abs(law->cdf(0.0) - 0.5) < 1e-10);
  // Density is the angular average of shifted normal pdfs.
  double direct = gauss_integrate(
      [&](double v) {
        double z = 0.4 - SQRT1_2 * std::cos(v);
        return std::exp(-0.5 * z * z) / std::sqrt(TWO_PI);
      },
      0.0, PI, 256) / PI;
  CHECK(std::abs(law->density(0.4) - direct) < 1e-9);
  CHECK(std::abs(sample_m2(*law, 1000000, 3) - 1.25) < 5e-3);
}

TEST_CASE("gaussian-times-ballistic product: moments factorize") {
  auto law = make_gauss_times_konno();
  CHECK(law->name() == "gauss-times-konno");
  CHECK(std::abs(law->moment(2) - (1.0 - SQRT1_2)) < 1e-10);
  CHECK(std::abs(law->moment(4) - 3.0 * (1.0 - 1.25 * SQRT1_2)) < 1e-10);
  CHECK(law->moment(1) == 0.0);
  CHECK(law->cdf(0.0) == 0.5);
  CHECK(std::isinf(law->density(0.0)));
  // Away from the logarithmic peak the cdf differentiates to the density.
  for (double x : {0.4, 1.1}) {
    double fd = (law->cdf(x + 5e-5) - law->cdf(x - 5e-5)) / 1e-4;
    CHECK(std::abs(fd - law->density(x)) < 1e-6);
  }
  CHECK(std::abs(sample_m2(*law, 1000000, 5) - (1.0 - SQRT1_2)) < 5e-3);
}

TEST_CASE("single-coin fixed-M laws collapse to the ballistic density") {
  auto konno = make_konno();
  auto a = make_fixedM_A(1, coin_symmetric());
  auto b = make_fixedM_B(1);
  CHECK(a->name() == "fixedM:A:M=1");
  CHECK(b->name() == "fixedM:B:M=1");
  for (int i = 0; i <= 40; ++i) {
    double x = -0.7 + 0.035 * i;
    CHECK(std::abs(a->cdf(x) - konno->cdf(x)) < 1e-8);
    CHECK(std::abs(b->cdf(x) - konno->cdf(x)) < 1e-10);
    CHECK(std::abs(b->density(x) - konno->density(x)) < 1e-12);
  }
  CHECK(a->atoms().empty());
  CHECK(b->atoms().empty());
}

TEST_CASE("fixed-M pure |1> second moment matches the closed form") {
  for (int M : {1, 2, 4}) {
    auto law = make_fixedM_A(M, coin_ket1());
    double expect = 1.0 - 1.25 * SQRT1_2 + SQRT1_2 / (4.0 * M);
    CHECK(std::abs(law->moment(2) - expect) < 1e-8);
    CHECK(std::abs(law->moment(0) - 1.0) < 1e-15);
  }
  CHECK(make_fixedM_A(2, coin_ket1())->name() == "fixedM:A:M=2:phi=ket1");
}

TEST_CASE("fixed-M mixed law: exact moment split and atom") {
  for (int M : {1, 2, 3, 5, 8}) {
    auto law = make_fixedM_B(M);
    // E[Y^2] = E[(2B/M-1)^2] E[h^2] = (1/M)(1 - 1/sqrt(2)).
    CHECK(std::abs(M * law->moment(2) - (1.0 - SQRT1_2)) < 1e-10);
    CHECK(law->moment(1) == 0.0);
  }
  CHECK(std::abs(atom_at_zero(*make_fixedM_B(2)) - 0.5) < 1e-15);
  CHECK(std::abs(atom_at_zero(*make_fixedM_B(4)) - 0.375) < 1e-15);
  CHECK(make_fixedM_B(3)->atoms().empty());
}

TEST_CASE("fixed-M atom masses: combinatorial and spectral forms") {
  CHECK(atom_mass_fixedM(3, true, coin_symmetric()) == 0.0);
  CHECK(atom_mass_fixedM(5, false, coin_ket1()) == 0.0);
  CHECK(std::abs(atom_mass_fixedM(2, true, coin_symmetric()) - 0.5) < 1e-15);
  // Pure symmetric: p q = h^2 / 2, so the M = 2 atom is E[h^2] and the
  // M = 4 atom is (3/2) E[h^4].
  CHECK(std::abs(atom_mass_fixedM(2, false, coin_symmetric()) -
                 (1.0 - SQRT1_2)) < 1e-10);
  CHECK(std::abs(atom_mass_fixedM(4, false, coin_symmetric()) -
                 1.5 * (1.0 - 1.25 * SQRT1_2)) < 1e-10);
  // The law object reports the same atom.
  CHECK(std::abs(atom_at_zero(*make_fixedM_A(2, coin_symmetric())) -
                 (1.0 - SQRT1_2)) < 1e-10);
  CHECK_THROWS_AS(atom_mass_fixedM(0, true, coin_symmetric()),
                  std::invalid_argument);
}

TEST_CASE("fixed-M law: density, cdf and atom are mutually consistent") {
  for (bool mixed : {false, true}) {
    auto law = mixed ? make_fixedM_B(4) : make_fixedM_A(4, coin_ket1());
    // On a branch-singularity-free window the density integrates to the
    // cdf increment (singular points sit at c/sqrt(2), c in {1/2, 1}).
    double inc = gauss_integrate(
        [&](double x) { return law->density(x); }, 0.05, 0.30, 256);
    CHECK(std::abs(inc - (law->cdf(0.30) - law->cdf(0.05))) < 1e-7);
    // cdf jump across 0 equals the atom.
    double atom = atom_at_zero(*law);
    CHECK(atom > 0.1);
    CHECK(std::abs(law->cdf(0.0) - law->cdf(-1e-13) - atom) < 1e-7);
    // Symmetry of the mixed law: cdf(x) + cdf(-x) = 1 off the atom.
    if (mixed)
      for (double x : {0.1, 0.3, 0.62})
        CHECK(std::abs(law->cdf(x) + law->cdf(-x) - 1.0) < 1e-10);
  }
}

TEST_CASE("fixed-d pure laws: level-set cdf matches closed arcsine forms") {
  // d = 1 is the frozen case mu_1 = 0: one atom, step cdf, no density.
  auto frozen = make_fixedD_A(1, coin_symmetric());
  REQUIRE(frozen->atoms().size() == 1);
  CHECK(frozen->atoms()[0].location == 0.0);
  CHECK(frozen->atoms()[0].mass == 1.0);
  CHECK(frozen->cdf(-1e-9) == 0.0);
  CHECK(frozen->cdf(0.0) == 1.0);
  CHECK_THROWS_AS(frozen->density(0.1), std::domain_error);

  // d = 2: mu_2 is sin(2k)/2 (symmetric) or -cos(2k)/2 (|1>); both push
  // forward to the arcsine law on [-1/2, 1/2].
  auto arcs = make_arcsine(1.0);
  for (auto law : {make_fixedD_A(2, coin_symmetric()),
                   make_fixedD_A(2, coin_ket1())}) {
    CHECK(law->atoms().empty());
    for (int i = 0; i <= 50; ++i) {
      double y = -0.55 + 0.022 * i;
      CHECK(std::abs(law->cdf(y) - arcs->cdf(y)) < 1e-8);
    }
    CHECK(std::abs(law->moment(2) - 0.125) < 1e-10);
    CHECK(std::abs(law->moment(1)) < 1e-12);
  }
  CHECK(make_fixedD_A(2, coin_ket1())->name() == "fixedD:A:d=2:phi=ket1");
}

TEST_CASE("fixed-d mixed law: d <= 2 has unit variance profile") {
  auto gauss = make_gaussian(1.0);
  for (int d : {1, 2}) {
    auto law = make_fixedD_B(d);
    for (int i = 0; i <= 30; ++i) {
      double y = -4.5 + 0.3 * i;
      CHECK(std::abs(law->cdf(y) - gauss->cdf(y)) < 1e-12);
      CHECK(std::abs(law->density(y) - gauss->density(y)) < 1e-12);
    }
    CHECK(std::abs(law->moment(2) - 1.0) < 1e-12);
    CHECK(std::abs(law->moment(4) - 3.0) < 1e-12);
  }
  // For large d the scaled variance approaches E-free h^2 pointwise; the
  // second moment of the d-step law is d E[nu_d]/d -> interface checked in
  // the convergence suite. Here just pin monotone growth.
  CHECK(make_fixedD_B(8)->moment(2) > make_fixedD_B(2)->moment(2));
  CHECK(make_fixedD_B(8)->name() == "fixedD:B:d=8");
}

TEST_CASE("balanced-growth symmetric limit: closed density and cdf") {
  auto law = make_product_sym();
  CHECK(law->name() == "product-sym");
  CHECK(std::abs(law->density(0.0) - 3.0 / PI) < 1e-15);
  CHECK(law->density(SQRT1_8 + 1e-9) == 0.0);
  CHECK(std::abs(law->cdf(0.0) - 0.5) < 1e-15);
  CHECK(law->cdf(SQRT1_8) == 1.0);
  CHECK(law->cdf(-SQRT1_8) == 0.0);
  // Unit mass via the sine substitution x = sin(u) sqrt(1/8).
  double mass = gauss_integrate(
      [&](double u) {
        double x = SQRT1_8 * std::sin(u);
        return law->density(x) * SQRT1_8 * std::cos(u);
      },
      -PI / 2.0, PI / 2.0, 256);
  CHECK(std::abs(mass - 1.0) < 1e-8);
  // Closed second moment of the velocity pushforward: 3/(2 sqrt(2)) - 1.
  CHECK(std::abs(law->moment(2) - (1.5 * SQRT1_2 - 1.0)) < 1e-10);
  CHECK(law->moment(1) == 0.0);
  // cdf differentiates back to the density.
  for (double x : {-0.3, -0.1, 0.05, 0.2}) {
    double fd = (law->cdf(x + 5e-7) - law->cdf(x - 5e-7)) / 1e-6;
    CHECK(std::abs(fd - law->density(x)) < 1e-5);
  }
}

TEST_CASE("balanced-growth |1> limit: squared-velocity pushforward") {
  auto law = make_product_ket1();
  CHECK(law->name() == "product-ket1");
  CHECK(law->cdf(0.0) == 0.0);
  CHECK(law->cdf(0.5) == 1.0);
  CHECK(std::abs(law->moment(1) - (1.0 - SQRT1_2)) < 1e-10);
  CHECK(std::abs(law->moment(2) - (1.0 - 1.25 * SQRT1_2)) < 1e-10);
  CHECK(law->density(-0.01) == 0.0);
  CHECK(law->density(0.51) == 0.0);
  for (double y : {0.05, 0.17, 0.33, 0.45}) {
    double fd = (law->cdf(y + 5e-7) - law->cdf(y - 5e-7)) / 1e-6;
    CHECK(std::abs(fd - law->density(y)) < 1e-5);
  }
  // All mass on (0, 1/2).
  CHECK(std::abs(law->cdf(0.4999999) - 1.0) < 1e-3);
}

TEST_CASE("scaled wrapper: moments, cdf, atoms and name") {
  auto base = make_fixedM_B(2);
  auto law = make_scaled(base, 2.0);
  CHECK(law->name() == "fixedM:B:M=2:x2");
  CHECK(std::abs(law->moment(2) - 4.0 * base->moment(2)) < 1e-14);
  CHECK(std::abs(law->cdf(0.6) - base->cdf(0.3)) < 1e-15);
  CHECK(std::abs(law->density(0.6) - base->density(0.3) / 2.0) < 1e-15);
  REQUIRE(law->atoms().size() == 1);
  CHECK(law->atoms()[0].mass == base->atoms()[0].mass);
  CHECK(std::abs(law->radius() - 2.0 * base->radius()) < 1e-15);
  CHECK_THROWS_AS(make_scaled(base, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_scaled(base, -1.0), std::invalid_argument);
}

TEST_CASE("catalog names round-trip through the parser") {
  for (const char* name :
       {"dirac0", "gaussian:sigma=1", "gaussian:sigma=0.5", "konno",
        "arcsine:beta=0.5", "arcsine:beta=1", "gauss-plus-arcsine:beta=0.5",
        "gauss-times-konno", "fixedM:A:M=4", "fixedM:A:M=4:phi=ket1",
        "fixedM:B:M=2", "fixedD:A:d=2", "fixedD:A:d=2:phi=ket1",
        "fixedD:B:d=8", "product-sym", "product-ket1"}) {
    auto law = make_law(name);
    CHECK(law->name() == name);
    CHECK(make_law(law->name())->name() == law->name());
  }
  CHECK(make_law("gaussian")->name() == "gaussian:sigma=1");
}

TEST_CASE("parser rejects malformed names with the grammar message") {
  for (const char* bad :
       {"", "gauss", "konno:beta=1", "arcsine", "arcsine:beta=2",
        "gaussian:sigma=0", "gaussian:sigma=abc", "fixedM:A",
        "fixedM:A:M=2.5", "fixedM:C:M=2", "fixedM:B:M=2:phi=ket1",
        "fixedD:A:d=0", "fixedD:A:d=2:phi=up", "dirac0:x=1",
        "product-sym:beta=1"}) {
    CHECK_THROWS_AS(make_law(bad), std::invalid_argument);
  }
  try {
    make_law("no-such-law");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("expected one of") != std::string::npos);
  }
}

TEST_CASE("symmetric laws satisfy cdf(x) + cdf(-x) = 1 off atoms") {
  for (auto law : {make_konno(), make_gaussian(1.0), make_arcsine(0.3),
                   make_gauss_plus_arcsine(0.5), make_gauss_times_konno(),
                   make_fixedM_B(3), make_fixedM_B(4), make_product_sym(),
                   make_fixedD_B(6)}) {
    for (double x : {0.11, 0.37, 0.83}) {
      CHECK(std::abs(law->cdf(x) + law->cdf(-x) - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("samplers are reproducible and seed-sensitive") {
  for (auto law : {make_konno(), make_gaussian(1.0), make_fixedM_A(3, coin_ket1()),
                   make_fixedD_B(4), make_product_ket1()}) {
    auto a = law->sample(256, 42);
    auto b = law->sample(256, 42);
    auto c = law->sample(256, 43);
    CHECK(a == b);
    CHECK(a != c);
    REQUIRE(a.size() == 256);
    for (double v : a) CHECK(std::isfinite(v));
  }
}

TEST_CASE("moment order is validated across the catalog") {
  for (auto law : {make_konno(), make_dirac0(), make_fixedM_B(2),
                   make_fixedD_A(2, coin_symmetric()), make_product_sym()}) {
    CHECK_THROWS_AS(law->moment(-1), std::invalid_argument);
    CHECK_THROWS_AS(law->moment(9), std::invalid_argument);
    CHECK(law->moment(0) == 1.0);
  }
}

TEST_CASE("family parameter guards") {
  CHECK_THROWS_AS(make_fixedM_A(0, coin_symmetric()), std::invalid_argument);
  CHECK_THROWS_AS(make_fixedM_B(65), std::invalid_argument);
  CHECK_THROWS_AS(make_fixedD_A(0, coin_symmetric()), std::invalid_argument);
  CHECK_THROWS_AS(make_fixedD_B(257), std::invalid_argument);
  CHECK_THROWS_AS(make_gauss_plus_arcsine(-0.5), std::invalid_argument);
}

TEST_CASE("full-sum characteristic function of the fixed-M limit") {
  // xi = 0 gives exactly 1 for every configuration.
  for (int M : {1, 2, 5}) {
    CHECK(std::abs(fixedM_char(M, coin_symmetric(), true, 0.0) - 1.0) < 1e-14);
    CHECK(std::abs(fixedM_char(M, coin_ket1(), false, 0.0) - 1.0) < 1e-14);
  }
  // Symmetric weights give a real characteristic function equal to the
  // ballistic one at M = 1; check against an independent quadrature of
  // cos(xi x) against rho.
  for (double xi : {0.5, 2.0, 7.0}) {
    cplx ch = fixedM_char(1, coin_symmetric(), false, xi);
    CHECK(std::abs(ch.imag()) < 1e-12);
    double direct = rho_integral([&](double x) { return std::cos(xi * x); });
    CHECK(std::abs(ch.real() - direct) < 1e-9);
    // Mixed coins at M = 1: E[cos(xi h)] is the same real value.
    cplx mixed = fixedM_char(1, coin_symmetric(), true, xi);
    CHECK(std::abs(mixed - ch) < 1e-10);
  }
  // |1> start drifts right: positive imaginary part for small xi > 0.
  CHECK(fixedM_char(1, coin_ket1(), false, 0.5).imag() > 0.0);
  CHECK_THROWS_AS(fixedM_char(0, coin_symmetric(), true, 1.0),
                  std::invalid_argument);
}

TEST_CASE("printed truncated densities undercount the continuous mass") {
  // Mixed M = 1: the printed half-sum integrates to 1/2, not 1.
  double half = rho_integral(
      [&](double x) { return as_printed_density_fixedM(1, true, x) /
                              ballistic_density(x); });
  CHECK(std::abs(half - 0.5) < 1e-10);
  // Pure M = 1 keeps only the branch weighted by P(x) = (1+sqrt(1-2x^2))/2;
  // its mass is 1/2 + ln(1+sqrt(2))/pi ~ 0.7805.
  double pure = gauss_integrate(
      [&](double u) {
        double x = SQRT1_2 * std::sin(u);
        return as_printed_density_fixedM(1, false, x) * SQRT1_2 * std::cos(u);
      },
      -PI / 2.0, PI / 2.0, 1024);
  CHECK(std::abs(pure - (0.5 + std::log(1.0 + std::sqrt(2.0)) / PI)) < 1e-6);
  // Mixed M = 2: printed continuous mass 1/4 vs canonical 1/2.
  double printed2 = rho_integral(
      [&](double x) { return as_printed_density_fixedM(2, true, x) /
                              ballistic_density(x); });
  CHECK(std::abs(printed2 - 0.25) < 1e-10);
  double canonical2 = rho_integral(
      [&](double x) { return make_fixedM_B(2)->density(x) / ballistic_density(x); });
  CHECK(std::abs(canonical2 - 0.5) < 1e-10);
  CHECK_THROWS_AS(as_printed_density_fixedM(0, true, 0.1),
                  std::invalid_argument);
}
