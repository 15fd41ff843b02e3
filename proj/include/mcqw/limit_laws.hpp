#pragma once

// Catalog of the theoretical limit distributions: point mass, Gaussian,
// scaled arcsine family, the ballistic walk density rho, convolution and
// product laws, and the fixed-M / fixed-d families built from the spectral
// data in coin_kernel.  Every law exposes cdf, moments, atoms and an i.i.d.
// sampler; densities are available wherever the continuous part is a
// function (the fixed-d level-set law is cdf-only by construction).

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mcqw/coin_kernel.hpp"

namespace mcqw {

struct Atom {
  double location;
  double mass;
};

class Law {
 public:
  virtual ~Law() = default;
  const std::string& name() const { return name_; }

  // Density of the continuous part; 0 outside the support and at atoms.
  // Laws without a pointwise density (level-set pushforwards) throw.
  virtual double density(double x) const = 0;
  virtual double cdf(double x) const = 0;      // right-continuous
  virtual double moment(int n) const = 0;      // 0 <= n <= 8
  virtual std::vector<Atom> atoms() const { return {}; }
  // Radius R such that all mass outside [-R, R] is below 1e-12.
  virtual double radius() const = 0;
  // n i.i.d. draws, reproducible under seed.
  std::vector<double> sample(std::uint64_t n, std::uint64_t seed) const;

 protected:
  explicit Law(std::string name) : name_(std::move(name)) {}
  virtual void sample_into(std::uint64_t seed, std::vector<double>& out) const = 0;
  std::string name_;
};

using LawPtr = std::shared_ptr<const Law>;

LawPtr make_dirac0();
LawPtr make_gaussian(double sigma);
LawPtr make_arcsine(double beta);        // density 2^beta s(2^beta x)
LawPtr make_konno();                     // density rho
LawPtr make_gauss_plus_arcsine(double beta);
LawPtr make_gauss_times_konno();
LawPtr make_fixedM_A(int M, const Vector2cd& phi0);
LawPtr make_fixedM_B(int M);
LawPtr make_fixedD_A(int d, const Vector2cd& phi0);  // cdf-only
LawPtr make_fixedD_B(int d);
LawPtr make_product_sym();               // 3/(pi (1+x^2) sqrt(1-8x^2))
LawPtr make_product_ket1();              // 1/(pi (1-x) sqrt((1-2x)x))
// Law of scale * Y for Y ~ base (scale > 0).
LawPtr make_scaled(LawPtr base, double scale);

// String catalog used by the CLI, e.g. "konno", "gaussian:sigma=1",
// "arcsine:beta=0.5", "gauss-plus-arcsine:beta=0.5", "gauss-times-konno",
// "fixedM:A:M=4", "fixedM:A:M=4:phi=ket1", "fixedM:B:M=2",
// "fixedD:A:d=2", "fixedD:A:d=2:phi=ket1", "fixedD:B:d=2",
// "product-sym", "product-ket1", "dirac0".  Unknown names throw
// std::invalid_argument listing the grammar.
LawPtr make_law(const std::string& name);

// Full-sum characteristic function of the fixed-M limit: each of the M
// coins rides branch 1 (velocity +h) with weight q(k) and branch 0
// (velocity -h) with weight p(k); mixed coins use p = q = 1/2.  This is the
// canonical, normalized-by-construction form backing the fixed-M laws.
cplx fixedM_char(int M, const Vector2cd& phi0, bool mixed, double xi);

// The published closed-form densities evaluated verbatim: the sum truncated
// at floor(M/2) with the j = M/2 term routed to the atom.  Exposed for
// comparison against fixedM_char; the truncation undercounts the continuous
// mass (mixed M = 1 integrates to 1/2 instead of 1) and is reported, never
// silently patched.
double as_printed_density_fixedM(int M, bool mixed, double x);

// Atom mass at 0 of the fixed-M law: (M choose M/2) 2^{-M} for mixed coins,
// (M choose M/2) mean_k[(p q)^{M/2}] for pure phi0; 0 for odd M.
double atom_mass_fixedM(int M, bool mixed, const Vector2cd& phi0);

}  // namespace mcqw
