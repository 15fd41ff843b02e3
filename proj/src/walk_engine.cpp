#include "mcqw/walk_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <tuple>

namespace mcqw {

InitialSpec InitialSpec::case_a(int M) {
  InitialSpec s;
  s.coins.assign(size_t(M), CoinInit{false, coin_symmetric()});
  return s;
}

InitialSpec InitialSpec::case_b(int M) {
  InitialSpec s;
  s.coins.assign(size_t(M), CoinInit{true, coin_symmetric()});
  return s;
}

InitialSpec InitialSpec::ket1(int M) {
  InitialSpec s;
  s.coins.assign(size_t(M), CoinInit{false, coin_ket1()});
  return s;
}

InitialSpec InitialSpec::mixture(int M, int n_pure) {
  if (n_pure < 0 || n_pure > M)
    throw std::invalid_argument("mixture: n_pure out of range");
  InitialSpec s = case_b(M);
  for (int j = 0; j < n_pure; ++j) s.coins[size_t(j)] = CoinInit{false, coin_symmetric()};
  return s;
}

void InitialSpec::validate(int M) const {
  if (int(coins.size()) != M || M < 1)
    throw std::invalid_argument("InitialSpec: need one coin state per coin");
  for (const CoinInit& c : coins)
    if (!c.mixed && std::abs(c.amp.norm() - 1.0) > 1e-10)
      throw std::invalid_argument("InitialSpec: pure coin state must be unit norm");
}

namespace {

void validate_spec(const WalkSpec& spec) {
  if (spec.M < 1 || spec.t < 1)
    throw std::invalid_argument("WalkSpec: need M >= 1 and t >= 1");
}

// A maximal set of coins sharing (mixed?, step count, initial qubit); its
// factor is raised to the integer multiplicity, never multiplied coin by coin.
struct Group {
  bool mixed;
  long steps;
  Vector2cd amp;
  std::uint64_t count;
};

std::vector<Group> group_coins(const WalkSpec& spec, const InitialSpec& init) {
  const long d = spec.t / spec.M, q = spec.t % spec.M;
  using Key = std::tuple<int, long, std::array<double, 4>>;
  std::map<Key, Group> groups;
  for (int j = 0; j < spec.M; ++j) {
    const long steps = d + (j < q ? 1 : 0);
    if (steps == 0) continue;  // undriven coin contributes a unit factor
    const CoinInit& c = init.coins[size_t(j)];
    std::array<double, 4> bits{};
    if (!c.mixed)
      bits = {c.amp(0).real(), c.amp(0).imag(), c.amp(1).real(), c.amp(1).imag()};
    const Key key{c.mixed ? 1 : 0, steps, bits};
    auto it = groups.find(key);
    if (it == groups.end())
      groups.emplace(key, Group{c.mixed, steps, c.amp, 1});
    else
      ++it->second.count;
  }
  std::vector<Group> out;
  out.reserve(groups.size());
  for (auto& [key, g] : groups) out.push_back(g);
  return out;
}

// Per-mode spectral data needed to apply coin powers in O(1).
struct NodeEig {
  double alpha;        // asin(sin k / sqrt 2)
  cplx v0[2], v1[2];   // orthonormal eigenvector components
};

NodeEig node_eig(double k) {
  NodeEig e;
  const double c = std::cos(k);
  const double n = std::sqrt(1.0 + c * c);
  e.alpha = std::asin(std::sin(k) * SQRT1_2);
  const cplx e_mk = std::polar(1.0, -k);
  const double s0 = 1.0 / std::sqrt(2.0 * n * (n + c));
  const double s1 = 1.0 / std::sqrt(2.0 * n * (n - c));
  e.v0[0] = cplx(s0, 0.0);
  e.v0[1] = -(n + c) * s0 * e_mk;
  e.v1[0] = cplx(s1, 0.0);
  e.v1[1] = (n - c) * s1 * e_mk;
  return e;
}

// Hk^steps(k) phi written in components.
void apply_power(const NodeEig& e, long steps, const Vector2cd& phi, cplx out[2]) {
  const cplx l0 = std::polar(1.0, double(steps) * (PI - e.alpha));
  const cplx l1 = std::polar(1.0, double(steps) * e.alpha);
  const cplx c0 = std::conj(e.v0[0]) * phi(0) + std::conj(e.v0[1]) * phi(1);
  const cplx c1 = std::conj(e.v1[0]) * phi(0) + std::conj(e.v1[1]) * phi(1);
  const cplx a0 = l0 * c0, a1 = l1 * c1;
  out[0] = a0 * e.v0[0] + a1 * e.v1[0];
  out[1] = a0 * e.v0[1] + a1 * e.v1[1];
}

// Hk^steps(k) as a dense 2x2 (row-major).
void matrix_power(const NodeEig& e, long steps, cplx out[4]) {
  const cplx l0 = std::polar(1.0, double(steps) * (PI - e.alpha));
  const cplx l1 = std::polar(1.0, double(steps) * e.alpha);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      out[2 * r + c] = l0 * e.v0[r] * std::conj(e.v0[c]) +
                       l1 * e.v1[r] * std::conj(e.v1[c]);
}

}  // namespace

cplx q_factor(double k, double xi, long d, const Vector2cd& phi) {
  if (d < 0) throw std::invalid_argument("q_factor: d must be >= 0");
  if (d == 0) return cplx(1.0, 0.0);
  if (std::abs(phi.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("q_factor: phi must be unit norm");
  cplx a[2], b[2];
  apply_power(node_eig(k), d, phi, a);
  apply_power(node_eig(k + xi), d, phi, b);
  return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

cplx c_factor(double k, double xi, long d) {
  if (d < 0) throw std::invalid_argument("c_factor: d must be >= 0");
  if (d == 0) return cplx(1.0, 0.0);
  cplx a[4], b[4];
  matrix_power(node_eig(k), d, a);
  matrix_power(node_eig(k + xi), d, b);
  cplx tr(0.0, 0.0);
  for (int i = 0; i < 4; ++i) tr += std::conj(a[i]) * b[i];
  return 0.5 * tr;
}

cplx characteristic_function(const WalkSpec& spec, const InitialSpec& init,
                             double xi, long n_k) {
  validate_spec(spec);
  init.validate(spec.M);
  const std::vector<Group> groups = group_coins(spec, init);
  const long nk = n_k > 0 ? n_k : 2 * spec.t + 2;
  if (nk < 2 * spec.t + 2)
    throw std::invalid_argument("characteristic_function: n_k below exactness bound 2t+2");
  cplx acc(0.0, 0.0);
  for (long n = 0; n < nk; ++n) {
    const double k = TWO_PI * double(n) / double(nk);
    cplx prod(1.0, 0.0);
    for (const Group& g : groups) {
      const cplx f = g.mixed ? c_factor(k, xi, g.steps)
                             : q_factor(k, xi, g.steps, g.amp);
      prod *= pow_int(f, g.count);
    }
    acc += prod;
  }
  return acc / double(nk);
}

PositionDistribution distribution(const WalkSpec& spec, const InitialSpec& init,
                                  double pair_budget) {
  validate_spec(spec);
  init.validate(spec.M);
  const long t = spec.t;
  const long nxi = 2 * t + 1;       // inversion grid size (odd)
  const long nk = 2 * nxi;          // mode nodes, commensurate with xi grid
  const long half = (nxi - 1) / 2;  // conjugate symmetry halves the xi rows
  const std::vector<Group> groups = group_coins(spec, init);

  const double cost = double(half + 1) * double(nk) *
                      double(std::max<size_t>(groups.size(), 1));
  if (cost > pair_budget)
    throw BudgetError("distribution: estimated factor evaluations " +
                          std::to_string(cost) + " exceed budget " +
                          std::to_string(pair_budget),
                      cost);

  // Per-node tables: branch data once, then per group the powered state
  // (pure: 2 entries) or powered coin matrix (mixed: 4 entries).
  std::vector<std::vector<cplx>> tab(groups.size());
  for (size_t gi = 0; gi < groups.size(); ++gi)
    tab[gi].resize(size_t(nk) * (groups[gi].mixed ? 4 : 2));
  parallel_for(nk, [&](std::int64_t n) {
    const NodeEig e = node_eig(TWO_PI * double(n) / double(nk));
    for (size_t gi = 0; gi < groups.size(); ++gi) {
      const Group& g = groups[gi];
      if (g.mixed)
        matrix_power(e, g.steps, &tab[gi][size_t(n) * 4]);
      else
        apply_power(e, g.steps, g.amp, &tab[gi][size_t(n) * 2]);
    }
  });

  // Characteristic function on the inversion grid xi_m = 2 pi m / (2t+1);
  // with nk = 2*nxi the shifted mode k + xi_m is node (n + 2m) mod nk.
  std::vector<cplx> chf(static_cast<size_t>(nxi));
  parallel_for(half + 1, [&](std::int64_t m) {
    const long shift = 2 * m;
    cplx acc(0.0, 0.0);
    for (long n = 0; n < nk; ++n) {
      long n2 = n + shift;
      if (n2 >= nk) n2 -= nk;
      cplx prod(1.0, 0.0);
      for (size_t gi = 0; gi < groups.size(); ++gi) {
        const Group& g = groups[gi];
        cplx f;
        if (g.mixed) {
          const cplx* a = &tab[gi][size_t(n) * 4];
          const cplx* b = &tab[gi][size_t(n2) * 4];
          f = 0.5 * (std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] +
                     std::conj(a[2]) * b[2] + std::conj(a[3]) * b[3]);
        } else {
          const cplx* a = &tab[gi][size_t(n) * 2];
          const cplx* b = &tab[gi][size_t(n2) * 2];
          f = std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
        }
        prod *= pow_int(f, g.count);
      }
      acc += prod;
    }
    chf[size_t(m)] = acc / double(nk);
  });

  // Invert: P(x) = (1/nxi) [chf(0) + 2 sum_m Re chf(m) e^{-i xi_m x}], using
  // the conjugate symmetry chf(nxi - m) = conj chf(m).
  PositionDistribution dist;
  dist.t = t;
  dist.mass.assign(size_t(nxi), 0.0);
  parallel_for(nxi, [&](std::int64_t ix) {
    const long x = ix - t;
    const double step_arg = -TWO_PI * double(x) / double(nxi);
    const cplx step = std::polar(1.0, step_arg);
    cplx phase(1.0, 0.0);
    double acc = chf[0].real();
    for (long m = 1; m <= half; ++m) {
      phase = (m % 512) ? phase * step : std::polar(1.0, step_arg * double(m));
      acc += 2.0 * (chf[size_t(m)] * phase).real();
    }
    dist.mass[size_t(ix)] = acc / double(nxi);
  });

  // Exactness checks, then the documented cleanup: zero off-parity residue,
  // clamp tiny negatives, renormalise.
  double total = 0.0;
  for (long ix = 0; ix < nxi; ++ix) {
    const long x = ix - t;
    double& p = dist.mass[size_t(ix)];
    if (((x ^ t) & 1) != 0) {
      if (std::abs(p) > 1e-12)
        throw std::runtime_error("distribution: off-parity mass above 1e-12");
      p = 0.0;
    } else if (p < 0.0) {
      if (p < -1e-9)
        throw std::runtime_error("distribution: negative mass below -1e-9");
      p = 0.0;
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::runtime_error("distribution: total mass deviates from 1");
  for (double& p : dist.mass) p /= total;
  return dist;
}

double moment(const PositionDistribution& dist, int n, double theta) {
  if (n < 1 || n > 8) throw std::invalid_argument("moment: n must be in [1,8]");
  const double scale = std::pow(double(dist.t), theta);
  double acc = 0.0;
  for (size_t ix = 0; ix < dist.mass.size(); ++ix) {
    const double x = (double(ix) - double(dist.t)) / scale;
    acc += dist.mass[ix] * pow_int(x, std::uint64_t(n));
  }
  return acc;
}

double total_variation(const PositionDistribution& a,
                       const PositionDistribution& b) {
  if (a.t != b.t)
    throw std::invalid_argument("total_variation: lattice mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < a.mass.size(); ++i)
    acc += std::abs(a.mass[i] - b.mass[i]);
  return 0.5 * acc;
}

}  // namespace mcqw
