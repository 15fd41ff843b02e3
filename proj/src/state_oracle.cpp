#include "mcqw/state_oracle.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace mcqw {

namespace {

// One pure-state run.  basis[j] selects which basis vector a mixed coin j
// starts in; pure coins use their own amplitudes.
std::vector<double> evolve_pure(const WalkSpec& spec, const InitialSpec& init,
                                std::uint32_t basis) {
  const long t = spec.t;
  const int M = spec.M;
  const long nx = 2 * t + 1;
  const size_t nr = size_t(1) << M;
  std::vector<cplx> cur(size_t(nx) * nr, cplx(0.0, 0.0));
  std::vector<cplx> nxt(cur.size());

  // Product initial register at the origin.
  for (size_t r = 0; r < nr; ++r) {
    cplx amp(1.0, 0.0);
    for (int j = 0; j < M; ++j) {
      const int bit = int(r >> j) & 1;
      const CoinInit& c = init.coins[size_t(j)];
      if (c.mixed)
        amp *= (bit == (int(basis >> j) & 1)) ? 1.0 : 0.0;
      else
        amp *= c.amp(bit);
    }
    cur[size_t(t) * nr + r] = amp;
  }

  const double inv_rt2 = SQRT1_2;
  for (long s = 0; s < t; ++s) {
    const int j = int(s % M);
    const size_t mask = size_t(1) << j;
    // Coin toss on qubit j at every site, then shift on that qubit.
    for (long x = 0; x < nx; ++x) {
      cplx* reg = &cur[size_t(x) * nr];
      for (size_t r = 0; r < nr; ++r) {
        if (r & mask) continue;
        const cplx a0 = reg[r], a1 = reg[r | mask];
        reg[r] = (a0 + a1) * inv_rt2;
        reg[r | mask] = (a0 - a1) * inv_rt2;
      }
    }
    std::fill(nxt.begin(), nxt.end(), cplx(0.0, 0.0));
    for (long x = 0; x < nx; ++x) {
      const cplx* reg = &cur[size_t(x) * nr];
      for (size_t r = 0; r < nr; ++r) {
        if (reg[r] == cplx(0.0, 0.0)) continue;
        const long x2 = (r & mask) ? x - 1 : x + 1;
        nxt[size_t(x2) * nr + r] += reg[r];
      }
    }
    cur.swap(nxt);
  }

  std::vector<double> mass(size_t(nx), 0.0);
  for (long x = 0; x < nx; ++x) {
    double p = 0.0;
    for (size_t r = 0; r < nr; ++r) p += std::norm(cur[size_t(x) * nr + r]);
    mass[size_t(x)] = p;
  }
  return mass;
}

}  // namespace

PositionDistribution oracle_distribution(const WalkSpec& spec,
                                         const InitialSpec& init,
                                         double work_budget) {
  if (spec.M < 1 || spec.t < 0)
    throw std::invalid_argument("oracle: need M >= 1 and t >= 0");
  init.validate(spec.M);
  if (spec.M > 24) throw std::invalid_argument("oracle: M too large");

  int n_mixed = 0;
  for (const CoinInit& c : init.coins) n_mixed += c.mixed ? 1 : 0;
  const double cost = std::ldexp(1.0, n_mixed) * double(spec.t) *
                      double(2 * spec.t + 1) * std::ldexp(1.0, spec.M);
  if (cost > work_budget)
    throw BudgetError("oracle: estimated amplitude updates " +
                          std::to_string(cost) + " exceed budget " +
                          std::to_string(work_budget),
                      cost);

  // Average over the 2^{n_mixed} basis unravellings with equal weight.
  std::vector<int> mixed_pos;
  for (int j = 0; j < spec.M; ++j)
    if (init.coins[size_t(j)].mixed) mixed_pos.push_back(j);

  PositionDistribution dist;
  dist.t = spec.t;
  dist.mass.assign(size_t(2 * spec.t + 1), 0.0);
  const std::uint32_t n_runs = std::uint32_t(1) << n_mixed;
  const double w = 1.0 / double(n_runs);
  for (std::uint32_t run = 0; run < n_runs; ++run) {
    std::uint32_t basis = 0;
    for (int b = 0; b < n_mixed; ++b)
      if ((run >> b) & 1) basis |= std::uint32_t(1) << mixed_pos[size_t(b)];
    const std::vector<double> mass = evolve_pure(spec, init, basis);
    for (size_t i = 0; i < mass.size(); ++i) dist.mass[i] += w * mass[i];
  }
  return dist;
}

PositionDistribution sample_case_b(int M, long t, long n_samples,
                                   std::uint64_t seed, double work_budget) {
  if (n_samples < 1) throw std::invalid_argument("sample_case_b: n_samples >= 1");
  if (M < 1 || M > 24 || t < 0)
    throw std::invalid_argument("sample_case_b: need 1 <= M <= 24 and t >= 0");
  WalkSpec spec{M, t};
  InitialSpec init = InitialSpec::case_b(M);
  if (M < 63 && (long(1) << M) <= n_samples)
    return oracle_distribution(spec, init, work_budget);

  const double cost = double(n_samples) * double(t) * double(2 * t + 1) *
                      std::ldexp(1.0, M);
  if (cost > work_budget)
    throw BudgetError("sample_case_b: estimated amplitude updates " +
                          std::to_string(cost) + " exceed budget " +
                          std::to_string(work_budget),
                      cost);

  std::mt19937_64 rng(seed);
  const std::uint32_t mask = (std::uint32_t(1) << M) - 1;
  PositionDistribution dist;
  dist.t = t;
  dist.mass.assign(size_t(2 * t + 1), 0.0);
  const double w = 1.0 / double(n_samples);
  for (long s = 0; s < n_samples; ++s) {
    const std::uint32_t basis = std::uint32_t(rng()) & mask;
    const std::vector<double> mass = evolve_pure(spec, init, basis);
    for (size_t i = 0; i < mass.size(); ++i) dist.mass[i] += w * mass[i];
  }
  return dist;
}

}  // namespace mcqw
