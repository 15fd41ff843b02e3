#pragma once
// Exact position distributions for the cyclic multi-coin walk.
//
// With M coins used round-robin for t = d*M + q steps (0 <= q < M), coin j
// is driven d+1 times when j < q and d times otherwise. The characteristic
// function of the walker position factorises over coins into per-mode scalar
// factors:
//   pure coin  phi:  q_factor(k, xi, steps, phi)
//   basis-mixed coin: c_factor(k, xi, steps)
// and E e^{i xi X_t} is the mode average of the product. Every factor is a
// trigonometric polynomial of degree <= steps in k, so a rectangle rule with
// more than 2t nodes integrates the product exactly, and sampling xi on the
// (2t+1)-point inversion grid recovers the distribution exactly.
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcqw/coin_kernel.hpp"

namespace mcqw {

struct WalkSpec {
  int M;    // number of coins, >= 1
  long t;   // steps, >= 1
};

struct CoinInit {
  bool mixed = false;        // true: maximally mixed over the chirality basis
  Vector2cd amp = coin_symmetric();  // used when !mixed; must be unit norm
};

// Ordered per-coin initial states; coins[j] is the coin driven at steps
// s == j (mod M).
struct InitialSpec {
  std::vector<CoinInit> coins;

  static InitialSpec case_a(int M);              // all coins = symmetric qubit
  static InitialSpec case_b(int M);              // all coins basis-mixed
  static InitialSpec ket1(int M);                // all coins = |+1>
  static InitialSpec mixture(int M, int n_pure); // n_pure leading symmetric, rest mixed
  void validate(int M) const;                    // size == M, unit norms
};

struct PositionDistribution {
  long t = 0;
  std::vector<double> mass;  // index x + t, x = -t..t; sums to 1

  double mass_at(long x) const { return mass[size_t(x + t)]; }
};

class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, double estimated)
      : std::runtime_error(what), estimated_cost(estimated) {}
  double estimated_cost;
};

// Single-coin factors. q_factor: <Hk^d(k) phi, Hk^d(k+xi) phi>;
// c_factor: tr[Hk^d(k)^dagger Hk^d(k+xi)] / 2 (real for real xi).
cplx q_factor(double k, double xi, long d, const Vector2cd& phi);
cplx c_factor(double k, double xi, long d);

// E e^{i xi X_t} by exact mode quadrature. Identical per-coin factors are
// grouped and raised to integer powers. n_k = 0 selects the minimal exact
// rule (2t+2 nodes); any larger count gives the same value to roundoff,
// which the tests exercise as the grid-doubling invariant.
cplx characteristic_function(const WalkSpec& spec, const InitialSpec& init,
                             double xi, long n_k = 0);

// Exact distribution of X_t. Work scales as ~2(2t+1)^2 factor evaluations;
// the pair budget guards against accidental huge requests and is reported in
// the BudgetError. Deterministic for any MCQW_THREADS setting.
PositionDistribution distribution(const WalkSpec& spec, const InitialSpec& init,
                                  double pair_budget = 6e9);

// n-th moment of X_t / t^theta. n in [1, 8].
double moment(const PositionDistribution& dist, int n, double theta);

// Total variation distance between two distributions on the same lattice.
double total_variation(const PositionDistribution& a,
                       const PositionDistribution& b);

}  // namespace mcqw
