#include "mcqw/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mcqw/numerics.hpp"

namespace mcqw {
namespace {

constexpr double SQRT1_8 = 0.3535533905932737622004221810524245196;

// Deterministic draws: explicit 53-bit uniforms from mt19937_64 so sampled
// output is byte-identical across platforms for a fixed seed.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  double gauss() {
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(TWO_PI * u2);
  }
};

double norm_cdf(double z) { return 0.5 * std::erfc(-z * SQRT1_2); }
double norm_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(TWO_PI);
}

// Step limit of Phi(y / s) as the scale s -> 0.
double norm_cdf_scaled(double y, double s) {
  if (s < 1e-12) return y > 0.0 ? 1.0 : (y < 0.0 ? 0.0 : 0.5);
  return norm_cdf(y / s);
}

int check_order(int n) {
  if (n < 0 || n > 8) throw std::invalid_argument("moment order must be in [0, 8]");
  return n;
}

// E[N(0,1)^n]: 1, 0, 1, 0, 3, 0, 15, 0, 105.
double gauss_moment(int n) {
  static const double tab[9] = {1, 0, 1, 0, 3, 0, 15, 0, 105};
  return tab[check_order(n)];
}

// --- ballistic walk density rho ------------------------------------------
double rho_density(double x) {
  if (!(std::abs(x) < SQRT1_2)) return 0.0;
  return 1.0 / (PI * (1.0 - x * x) * std::sqrt(1.0 - 2.0 * x * x));
}

double rho_cdf(double x) {
  if (x <= -SQRT1_2) return 0.0;
  if (x >= SQRT1_2) return 1.0;
  double c = x / std::sqrt(1.0 - x * x);
  return 1.0 - std::acos(std::clamp(c, -1.0, 1.0)) / PI;
}

// E[rho^n] as the mode average of h^n; analytic integrand, so the rectangle
// rule converges past double precision well before 4096 nodes.
double rho_moment(int n) {
  if (check_order(n) % 2 == 1) return 0.0;
  if (n == 0) return 1.0;
  return periodic_mean(
      [n](double k) { return pow_int(group_velocity(k), n); }, 4096);
}

double konno_draw(Rng& rng) { return group_velocity(PI * rng.uniform()); }

// --- concrete laws --------------------------------------------------------
class Dirac0 final : public Law {
 public:
  Dirac0() : Law("dirac0") {}
  double density(double) const override { return 0.0; }
  double cdf(double x) const override { return x >= 0.0 ? 1.0 : 0.0; }
  double moment(int n) const override { return check_order(n) == 0 ? 1.0 : 0.0; }
  std::vector<Atom> atoms() const override { return {{0.0, 1.0}}; }
  double radius() const override { return 0.5; }

 protected:
  void sample_into(std::uint64_t, std::vector<double>& out) const override {
    std::fill(out.begin(), out.end(), 0.0);
  }
};

class Gaussian final : public Law {
  double sigma_;

 public:
  explicit Gaussian(double sigma) : Law("gaussian"), sigma_(sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian: sigma must be > 0");
    std::ostringstream os;
    os << "gaussian:sigma=" << sigma;
    name_ = os.str();
  }
  double density(double x) const override {
    return norm_pdf(x / sigma_) / sigma_;
  }
  double cdf(double x) const override { return norm_cdf(x / sigma_); }
  double moment(int n) const override {
    return gauss_moment(n) * std::pow(sigma_, n);
  }
  double radius() const override { return 8.5 * sigma_; }

 protected:
  void sample_into(std::uint64_t seed, std::vector<double>& out) const override {
    Rng rng(seed);
    for (auto& v : out) v = sigma_ * rng.gauss();
  }
};

// Scaled arcsine: density 2^beta s(2^beta x), support [-2^-beta, 2^-beta].
class Arcsine final : public Law {
  double a_;

 public:
  explicit Arcsine(double beta) : Law("arcsine"), a_(std::pow(2.0, -beta)) {
    if (!(beta >= 0.0 && beta <= 1.0))
      throw std::invalid_argument("arcsine: beta must be in [0, 1]");
    std::ostringstream os;
    os << "arcsine:beta=" << beta;
    name_ = os.str();
  }
  double density(double x) const override {
    if (!(std::abs(x) < a_)) return 0.0;
    return 1.0 / (PI * std::sqrt(a_ * a_ - x * x));
  }
  double cdf(double x) const override {
    if (x <= -a_) return 0.0;
    if (x >= a_) return 1.0;
    return 0.5 + std::asin(x / a_) / PI;
  }
  double moment(int n) const override {
    if (check_order(n) % 2 == 1) return 0.0;
    return std::pow(a_, n) * binomial(n, n / 2) / std::pow(2.0, n);
  }
  double radius() const override { return a_ + 1e-6; }

 protected:
  void sample_into(std::uint64_t seed, std::vector<double>& out) const override {
    Rng rng(seed);
    for (auto& v : out) v = a_ * std::sin(TWO_PI * rng.uniform());
  }
};

class Konno final : public Law {
 public:
  Konno() : Law("konno") {}
  double density(double x) const override { return rho_density(x); }
  double cdf(double x) const override { return rho_cdf(x); }
  double moment(int n) const override { return rho_moment(n); }
  double radius() const override { return SQRT1_2 + 1e-6; }

 protected:
  void sample_into(std::uint64_t seed, std::vector<double>& out) const override {
    Rng rng(seed);
    for (auto& v : out) v = konno_draw(rng);
  }
};

// Independent sum N(0,1) + Arcsine(beta).
class GaussPlusArcsine final : public Law {
  double a_;

 public:
  explicit GaussPlusArcsine(double beta)
      : Law("gauss-plus-arcsine"), a_(std::pow(2.0, -beta)) {
    if (!(beta >= 0.0 && beta <= 1.0))
      throw std::invalid_argument("gauss-plus-arcsine: beta must be in [0, 1]");
    std::ostringstream os;
    os << "gauss-plus-arcsine:beta=" << beta;
    name_ = os.str();
  }
  double density(double x) const override {
    return gauss_integrate(
               [&](double v) { return norm_pdf(x - a_ * std::cos(v)); }, 0.0,
               PI, 96) /
           PI;
  }
  double cdf(double x) const override {
    return gauss_integrate(
               [&](double v) { return norm_cdf(x - a_ * std::cos(v)); }, 0.0,
               PI, 96) /
           PI;
  }
  double moment(int n) const override {
    check_order(n);
    double acc = 0.0;
    for (int i = 0; i <= n; i += 2) {
      if ((n - i) % 2 == 1) continue;
      double arc = std::pow(a_, i) * binomial(i, i / 2) / std::pow(2.0, i);
      acc += binomial(n, i) * gauss_moment(n - i) * arc;
    }
    return acc;
  }
  double radius() const override { return 8.5 + a_; }

 protected:
  void sample_into(std::uint64_t seed, std::vector<double>& out) const override {
    Rng rng(seed);
    for (auto& v : out) {
      double g = rng.gauss();
      v = g + a_ * std::sin(TWO_PI * rng.uniform());
    }
  }
};

// Independent product N(0,1) * Konno. Continuous with a logarithmic density
// peak at 0; the cdf is smooth and is what the harness consumes.
class GaussTimesKonno final : public Law {
 public:
  GaussTimesKonno() : Law("gauss-times-konno") {}
  double density(double x) const override {
    if (x == 0.0) return std::numeric_limits<double>::infinity();
    auto f = [&](double k) {
      double h = group_velocity(k);
      if (h < 1e-12) return 0.0;
      return norm_pdf(x / h) / h;
    };
    return 2.0 / PI * adaptive_simpson(f, 0.0, PI / 2.0, 1e-11);
  }
  double cdf(double x) const override {
    if (x == 0.0) return 0.5;
    auto f = [&](double k) {
      return norm_cdf_scaled(x, group_velocity(k));
    };
    return 2.0 / PI * adaptive_simpson(f, 0.0, PI / 2.0, 1e-11);
  }
  double moment(int n) const override {
    if (check_order(n) % 2 == 1) return 0.0;
    return gauss_moment(n) * rho_moment(n);
  }
  double radius() const override { return 7.0; }

 protected:
  void sample_into(std::uint64_t seed, std::vector<double>& out) const override {
    Rng rng(seed);
    for (auto& v : out) {
      double g = rng.gauss();
      v = g * konno_draw(rng);
    }
  }
};

// Fixed number of coins, pure initial qubit phi0: Y = (2J/M - 1) h(K) with
// K uniform on the circle and J | K binomial(M, q(K)).
class FixedMA final : public Law {
  int M_;
  Vector2cd phi_;
  std::vector<double> wfull_;  // C(M,j) mean_k[p^{M-j} q^j]
  double atom_ = 0.0;

  // (1/2pi) int_a^b C(M,j) p^{M-j} q^j dk
  double arc_weight(int j, double a, double b) const {
    if (b <= a) return 0.0;
    return gauss_integrate(
               [&](double k) {
                 auto sw = spectral_weights(k, phi_);
                 return std::pow(sw.p, M_ - j) * std::pow(sw.q, j);
               },
               a, b, 128) *
           binomial(M_, j) / TWO_PI;
  }

 public:
  FixedMA(int M, const Vector2cd& phi, std::string name)
      : Law(std::move(name)), M_(M), phi_(phi) {
    if (M < 1 || M > 64) throw std::invalid_argument("fixedM: M must be in [1, 64]");
    const int N = 4096;
    wfull_.assign(M_ + 1, 0.0);
    for (int i = 0; i < N; ++i) {
      double k = TWO_PI * (i + 0.5) / N;
      auto sw = spectral_weights(k, phi_);
      for (int j = 0; j <= M_; ++j)
        wfull_[j] += std::pow(sw.p, M_ - j) * std::pow(sw.q, j);
    }
    for (int j = 0; j <= M_; ++j) wfull_[j] *= binomial(M_, j) / N;
    if (M_ % 2 == 0) atom_ = wfull_[M_ / 2];
  }

  double density(double x) const override {
    double acc = 0.0;
    for (int j = 0; j <= M_; ++j) {
      double c = 2.0 * j / M_ - 1.0;
      if (c == 0.0) continue;
      double y = x / c;
      double r = rho_density(y);
      if (r == 0.0) continue;
      double k1 = konno_substitution(y);
      double k2 = TWO_PI - k1;
      auto w1 = spectral_weights(k1, phi_);
      auto w2 = spectral_weights(k2, phi_);
      double wsum = std::pow(w1.p, M_ - j) * std::pow(w1.q, j) +
                    std::pow(w2.p, M_ - j) * std::pow(w2.q, j);
      acc += binomial(M_, j) * wsum * r / (2.0 * std::abs(c));
    }
    return acc;
  }

  double cdf(double y) const override {
    double acc = 0.0;
    for (int j = 0; j <= M_; ++j) {
      double c = 2.0 * j / M_ - 1.0;
      if (c == 0.0) {
        if (y >= 0.0) acc += wfull_[j];
        continue;
      }
      double r = y / c;
      if (c > 0.0) {
        // region h(k) <= r, i.e. cos k <= r / sqrt(1 - r^2)
        if (r >= SQRT1_2) {
          acc += wfull_[j];
        } else if (r > -SQRT1_2) {
          double ks = std::acos(std::clamp(r / std::sqrt(1.0 - r * r), -1.0, 1.0));
          acc += arc_weight(j, ks, TWO_PI - ks);
        }
      } else {
        // region h(k) >= r, i.e. cos k >= r / sqrt(1 - r^2)
        if (r <= -SQRT1_2) {
          acc += wfull_[j];
        } else if (r < SQRT1_2) {
          double ks = std::acos(std::clamp(r / std::sqrt(1.0 - r * r), -1.0, 1.0));
          acc += arc_weight(j, 0.0, ks) + arc_weight(j, TWO_PI - ks, TWO_PI);
        }
      }
    }
    return std::clamp(acc, 0.0, 1.0);
  }

  double moment(int n) const override {
    if (check_order(n) == 0) return 1.0;
    return periodic_mean(
        [&](double k) {
          auto sw = spectral_weights(k, phi_);
          double hn = pow_int(group_velocity(k), n);
          double acc = 0.0;
          for (int j = 0; j <= M_; ++j) {
            double c = 2.0 * j / M_ - 1.0;
            acc += binomial(M_, j) * std::pow(sw.p, M_ - j) *
                   std::pow(sw.q, j) * pow_int(c, n);
          }
          return acc * hn;
        },
        8192);
  }

  std::vector<Atom> atoms() const override {
    if (M_ % 2 == 0) return {{0.0, atom_}};
    return {};
  }
  double radius() const override { return SQRT1_2 + 1e-6; }

 protected:
  void sample_into(std::uint64_t seed, std::vector<double>& out) const override {
    Rng rng(seed);
    for (auto& v : out) {
      double k = TWO_PI * rng.uniform();
      auto sw = spectral_weights(k, phi_);
      int J = 0;
      for (int m = 0; m < M_; ++m) J += rng.uniform() < sw.q ? 1 : 0;
      v = (2.0 * J / M_ - 1.0) * group_velocity(k);
    }
  }
};

// Fixed number of coins, mixed-basis coins: Y = (2B/M - 1) h(K) with
// B ~ binomial(M, 1/2) independent of K.
class FixedMB final : public Law {
  int M_;
  std::vector<double> w_;  // C(M,j) 2^-M

 public:
  explicit FixedMB(int M) : Law("fixedM:B"), M_(M) {
    if (M < 1 || M > 64) throw std::invalid_argument("fixedM: M must be in [1, 64]");
    std::ostringstream os;
    os << "fixedM:B:M=" << M;
    name_ = os.str();
    w_.resize(M_ + 1);
    for (int j = 0; j <= M_; ++j) w_[j] = binomial(M_, j) * std::pow(0.5, M_);
  }
  double density(double x) const override {
    double acc = 0.0;
    for (int j = 0; j <= M_; ++j) {
      double c = 2.0 * j / M_ - 1.0;
      if (c == 0.0) continue;
      acc += w_[j] * rho_density(x / c) / std::abs(c);
    }
    return acc;
  }
  double cdf(double y) const override {
    double acc = 0.0;
    for (int j = 0; j <= M_; ++j) {
      double c = 2.0 * j / M_ - 1.0;
      if (c == 0.0) {
        if (y >= 0.0) acc += w_[j];
      } else if (c > 0.0) {
        acc += w_[j] * rho_cdf(y / c);
      } else {
        acc += w_[j] * (1.0 - rho_cdf(y / c));
      }
    }
    return std::clamp(acc, 0.0, 1.0);
  }
  double moment(int n) const override {
    if (check_order(n) % 2 == 1) return 0.0;
    double vel = 0.0;
    for (int j = 0; j <= M_; ++j) vel += w_[j] * pow_int(2.0 * j / M_ - 1.0, n);
    return vel * rho_moment(n);
  }
  std::vector<Atom> atoms() const override {
    if (M_ % 2 == 0) return {{0.0, w_[M_ / 2]}};
    return {};
  }
  double radius() const override { return SQRT1_2 + 1e-6; }

 protected:
  void sample_into(std::uint64_t seed, std::vector<double>& out) const override {
    Rng rng(seed);
    for (auto& v : out) {
      double k = TWO_PI * rng.uniform();
      int J = 0;
      for (int m = 0; m < M_; ++m) J += rng.uniform() < 0.5 ? 1 : 0;
      v = (2.0 * J / M_ - 1.0) * group_velocity(k);
    }
  }
};

// Fixed steps-per-coin, pure qubit: pushforward of mu_d(K), K uniform.
// The pushforward is a level-set measure with no closed density, so this law
// is cdf-only: cdf(y) = |{k : mu_d(k) <= y}| / 2pi, measured on a fine grid
// with bisection-refined crossings.
class FixedDA final : public Law {
  int d_;
  Vector2cd phi_;
  static constexpr int G = 1 << 16;
  std::vector<double> mu_;  // G + 1 samples on [0, 2pi]
  bool constant_ = false;
  double lo_ = 0.0, hi_ = 0.0;

 public:
  FixedDA(int d, const Vector2cd& phi, std::string name)
      : Law(std::move(name)), d_(d), phi_(phi) {
    if (d < 1 || d > 256) throw std::invalid_argument("fixedD: d must be in [1, 256]");
    mu_.resize(G + 1);
    for (int i = 0; i <= G; ++i) mu_[i] = mu_d(TWO_PI * i / G, d_, phi_);
    lo_ = *std::min_element(mu_.begin(), mu_.end());
    hi_ = *std::max_element(mu_.begin(), mu_.end());
    constant_ = (hi_ - lo_) < 1e-14;
  }

  double density(double) const override {
    throw std::domain_error(
        "fixedD:A is a level-set pushforward; only its cdf is defined pointwise");
  }

  double cdf(double y) const override {
    if (constant_) return y >= mu_[0] ? 1.0 : 0.0;
    if (y >= hi_) return 1.0;
    if (y < lo_) return 0.0;
    const double step = TWO_PI / G;
    double acc = 0.0;  // in units of one grid cell
    for (int i = 0; i < G; ++i) {
      bool b0 = mu_[i] <= y, b1 = mu_[i + 1] <= y;
      if (b0 && b1) {
        acc += 1.0;
      } else if (b0 != b1) {
        double a = step * i, b = a + step;
        for (int it = 0; it < 60; ++it) {
          double m = 0.5 * (a + b);
          if ((mu_d(m, d_, phi_) <= y) == b0)
            a = m;
          else
            b = m;
        }
        double cross = 0.5 * (a + b) - step * i;
        acc += b0 ? cross / step : 1.0 - cross / step;
      }
    }
    return std::clamp(acc / G, 0.0, 1.0);
  }

  double moment(int n) const override {
    if (check_order(n) == 0) return 1.0;
    int nodes = std::max<long>(8192, 4L * d_ * n + 9);
    return periodic_mean(
        [&](double k) { return pow_int(mu_d(k, d_, phi_), n); }, nodes);
  }

  std::vector<Atom> atoms() const override {
    if (constant_) return {{mu_[0], 1.0}};
    return {};
  }
  double radius() const override {
    return std::max(std::abs(lo_), std::abs(hi_)) + 0.01;
  }

 protected:
  void sample_into(std::uint64_t seed, std::vector<double>& out) const override {
    Rng rng(seed);
    for (auto& v : out) v = mu_d(TWO_PI * rng.uniform(), d_, phi_);
  }
};

// Fixed steps-per-coin, mixed coins: Y = sqrt(nu_d(K)) * N(0,1).
class FixedDB final : public Law {
  int d_;
  static constexpr int N = 8192;
  std::vector<double> nu_;
  double numax_ = 0.0;

 public:
  explicit FixedDB(int d) : Law("fixedD:B"), d_(d) {
    if (d < 1 || d > 256) throw std::invalid_argument("fixedD: d must be in [1, 256]");
    std::ostringstream os;
    os << "fixedD:B:d=" << d;
    name_ = os.str();
    nu_.resize(N);
    for (int i = 0; i < N; ++i) {
      nu_[i] = nu_d(TWO_PI * (i + 0.5) / N, d_);
      numax_ = std::max(numax_, nu_[i]);
    }
  }
  double density(double x) const override {
    double acc = 0.0;
    for (double nu : nu_) {
      if (nu < 1e-24) continue;
      double s = std::sqrt(nu);
      acc += norm_pdf(x / s) / s;
    }
    return acc / N;
  }
  double cdf(double y) const override {
    double acc = 0.0;
    for (double nu : nu_) acc += norm_cdf_scaled(y, std::sqrt(nu));
    return acc / N;
  }
  double moment(int n) const override {
    if (check_order(n) % 2 == 1) return 0.0;
    if (n == 0) return 1.0;
    int half = n / 2;
    int nodes = std::max<long>(8192, 2L * d_ * n + 9);
    double m = periodic_mean(
        [&](double k) { return pow_int(nu_d(k, d_), half); }, nodes);
    return gauss_moment(n) * m;
  }
  double radius() const override { return 8.5 * std::sqrt(numax_) + 0.5; }

 protected:
  void sample_into(std::uint64_t seed, std::vector<double>& out) const override {
    Rng rng(seed);
    for (auto& v : out) {
      double k = TWO_PI * rng.uniform();
      v = std::sqrt(nu_d(k, d_)) * rng.gauss();
    }
  }
};

// Limit of the balanced growth (t = M^2) symmetric walk: pushforward of
// v(k) = -sin 2k / (2 (1 + cos^2 k)); density 3 / (pi (1+x^2) sqrt(1-8x^2)).
double product_sym_v(double k) {
  double c = std::cos(k);
  return -std::sin(2.0 * k) / (2.0 * (1.0 + c * c));
}

class ProductSym final : public Law {
 public:
  ProductSym() : Law("product-sym") {}
  double density(double x) const override {
    if (!(std::abs(x) < SQRT1_8)) return 0.0;
    return 3.0 / (PI * (1.0 + x * x) * std::sqrt(1.0 - 8.0 * x * x));
  }
  double cdf(double y) const override {
    if (y <= -SQRT1_8) return 0.0;
    if (y >= SQRT1_8) return 1.0;
    // (3/pi) int dx/((1+x^2) sqrt(1-8x^2)) with x = sin(u)/sqrt(8) reduces to
    // int du/(1 + sin^2(u)/8), whose closed form carries sqrt(9/8) = 3/(2 sqrt 2).
    double u = std::asin(std::clamp(y / SQRT1_8, -1.0, 1.0));
    return 0.5 + std::atan(0.75 * std::sqrt(2.0) * std::tan(u)) / PI;
  }
  double moment(int n) const override {
    if (check_order(n) % 2 == 1) return 0.0;
    if (n == 0) return 1.0;
    return periodic_mean(
        [n](double k) { return pow_int(product_sym_v(k), n); }, 4096);
  }
  double radius() const override { return SQRT1_8 + 1e-6; }

 protected:
  void sample_into(std::uint64_t seed, std::vector<double>& out) const override {
    Rng rng(seed);
    for (auto& v : out) v = product_sym_v(TWO_PI * rng.uniform());
  }
};

// Same limit for the |+1> initial qubit: pushforward of h^2(K) on (0, 1/2),
// density 1 / (pi (1-y) sqrt(y (1-2y))).
class ProductKet1 final : public Law {
 public:
  ProductKet1() : Law("product-ket1") {}
  double density(double y) const override {
    if (!(y > 0.0 && y < 0.5)) return 0.0;
    return 1.0 / (PI * (1.0 - y) * std::sqrt(y * (1.0 - 2.0 * y)));
  }
  double cdf(double y) const override {
    if (y <= 0.0) return 0.0;
    if (y >= 0.5) return 1.0;
    double u = std::sqrt(std::min(1.0, y / (1.0 - y)));
    return 1.0 - 2.0 / PI * std::acos(u);
  }
  double moment(int n) const override {
    check_order(n);
    return rho_moment(2 * n);
  }
  double radius() const override { return 0.5 + 1e-6; }

 protected:
  void sample_into(std::uint64_t seed, std::vector<double>& out) const override {
    Rng rng(seed);
    for (auto& v : out) {
      double h = group_velocity(TWO_PI * rng.uniform());
      v = h * h;
    }
  }
};

class Scaled final : public Law {
  LawPtr base_;
  double s_;

 public:
  Scaled(LawPtr base, double s)
      : Law(base->name() + ":scaled"), base_(std::move(base)), s_(s) {
    if (!(s > 0.0)) throw std::invalid_argument("scaled law: scale must be > 0");
    std::ostringstream os;
    os << base_->name() << ":x" << s;
    name_ = os.str();
  }
  double density(double x) const override { return base_->density(x / s_) / s_; }
  double cdf(double x) const override { return base_->cdf(x / s_); }
  double moment(int n) const override {
    return std::pow(s_, check_order(n)) * base_->moment(n);
  }
  std::vector<Atom> atoms() const override {
    auto a = base_->atoms();
    for (auto& at : a) at.location *= s_;
    return a;
  }
  double radius() const override { return s_ * base_->radius(); }

 protected:
  void sample_into(std::uint64_t seed, std::vector<double>& out) const override {
    auto v = base_->sample(out.size(), seed);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = s_ * v[i];
  }
};

// --- catalog parser --------------------------------------------------------
std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

[[noreturn]] void bad_law(const std::string& name) {
  throw std::invalid_argument(
      "unknown law '" + name +
      "'; expected one of: dirac0 | gaussian[:sigma=S] | arcsine:beta=B | "
      "konno | gauss-plus-arcsine:beta=B | gauss-times-konno | "
      "fixedM:A:M=N[:phi=sym|ket1] | fixedM:B:M=N | "
      "fixedD:A:d=N[:phi=sym|ket1] | fixedD:B:d=N | product-sym | product-ket1");
}

std::map<std::string, std::string> parse_params(
    const std::vector<std::string>& toks, std::size_t from,
    const std::string& name) {
  std::map<std::string, std::string> out;
  for (std::size_t i = from; i < toks.size(); ++i) {
    auto eq = toks[i].find('=');
    if (eq == std::string::npos || eq == 0) bad_law(name);
    out[toks[i].substr(0, eq)] = toks[i].substr(eq + 1);
  }
  return out;
}

double parse_num(const std::map<std::string, std::string>& p,
                 const std::string& key, double fallback, bool required,
                 const std::string& name) {
  auto it = p.find(key);
  if (it == p.end()) {
    if (required) bad_law(name);
    return fallback;
  }
  try {
    std::size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) bad_law(name);
    return v;
  } catch (const std::invalid_argument&) {
    bad_law(name);
  } catch (const std::out_of_range&) {
    bad_law(name);
  }
}

Vector2cd parse_phi(const std::map<std::string, std::string>& p,
                    const std::string& name) {
  auto it = p.find("phi");
  if (it == p.end() || it->second == "sym") return coin_symmetric();
  if (it->second == "ket1") return coin_ket1();
  bad_law(name);
}

}  // namespace

std::vector<double> Law::sample(std::uint64_t n, std::uint64_t seed) const {
  std::vector<double> out(n);
  sample_into(seed, out);
  return out;
}

LawPtr make_dirac0() { return std::make_shared<Dirac0>(); }
LawPtr make_gaussian(double sigma) { return std::make_shared<Gaussian>(sigma); }
LawPtr make_arcsine(double beta) { return std::make_shared<Arcsine>(beta); }
LawPtr make_konno() { return std::make_shared<Konno>(); }
LawPtr make_gauss_plus_arcsine(double beta) {
  return std::make_shared<GaussPlusArcsine>(beta);
}
LawPtr make_gauss_times_konno() { return std::make_shared<GaussTimesKonno>(); }

LawPtr make_fixedM_A(int M, const Vector2cd& phi0) {
  std::ostringstream os;
  os << "fixedM:A:M=" << M;
  if ((phi0 - coin_ket1()).norm() < 1e-14) os << ":phi=ket1";
  else if ((phi0 - coin_symmetric()).norm() >= 1e-14) os << ":phi=custom";
  return std::make_shared<FixedMA>(M, phi0, os.str());
}
LawPtr make_fixedM_B(int M) { return std::make_shared<FixedMB>(M); }
LawPtr make_fixedD_A(int d, const Vector2cd& phi0) {
  std::ostringstream os;
  os << "fixedD:A:d=" << d;
  if ((phi0 - coin_ket1()).norm() < 1e-14) os << ":phi=ket1";
  else if ((phi0 - coin_symmetric()).norm() >= 1e-14) os << ":phi=custom";
  return std::make_shared<FixedDA>(d, phi0, os.str());
}
LawPtr make_fixedD_B(int d) { return std::make_shared<FixedDB>(d); }
LawPtr make_product_sym() { return std::make_shared<ProductSym>(); }
LawPtr make_product_ket1() { return std::make_shared<ProductKet1>(); }
LawPtr make_scaled(LawPtr base, double scale) {
  return std::make_shared<Scaled>(std::move(base), scale);
}

LawPtr make_law(const std::string& name) {
  auto toks = split(name, ':');
  const std::string& head = toks[0];
  if (head == "dirac0" && toks.size() == 1) return make_dirac0();
  if (head == "gaussian")
    return make_gaussian(parse_num(parse_params(toks, 1, name), "sigma", 1.0,
                                   false, name));
  if (head == "arcsine")
    return make_arcsine(parse_num(parse_params(toks, 1, name), "beta", 0.0,
                                  true, name));
  if (head == "konno" && toks.size() == 1) return make_konno();
  if (head == "gauss-plus-arcsine")
    return make_gauss_plus_arcsine(
        parse_num(parse_params(toks, 1, name), "beta", 0.0, true, name));
  if (head == "gauss-times-konno" && toks.size() == 1)
    return make_gauss_times_konno();
  if (head == "product-sym" && toks.size() == 1) return make_product_sym();
  if (head == "product-ket1" && toks.size() == 1) return make_product_ket1();
  if ((head == "fixedM" || head == "fixedD") && toks.size() >= 3) {
    const std::string& variant = toks[1];
    auto params = parse_params(toks, 2, name);
    if (head == "fixedM") {
      double M = parse_num(params, "M", 0, true, name);
      if (M != std::floor(M)) bad_law(name);
      if (variant == "A") return make_fixedM_A(static_cast<int>(M), parse_phi(params, name));
      if (variant == "B" && !params.count("phi")) return make_fixedM_B(static_cast<int>(M));
    } else {
      double d = parse_num(params, "d", 0, true, name);
      if (d != std::floor(d)) bad_law(name);
      if (variant == "A") return make_fixedD_A(static_cast<int>(d), parse_phi(params, name));
      if (variant == "B" && !params.count("phi")) return make_fixedD_B(static_cast<int>(d));
    }
  }
  bad_law(name);
}

cplx fixedM_char(int M, const Vector2cd& phi0, bool mixed, double xi) {
  if (M < 1) throw std::invalid_argument("fixedM_char: M must be >= 1");
  return periodic_mean_c(
      [&](double k) -> cplx {
        double ph = xi * group_velocity(k) / M;
        if (mixed) return {pow_int(std::cos(ph), static_cast<std::uint64_t>(M)), 0.0};
        auto sw = spectral_weights(k, phi0);
        cplx w = sw.q * std::polar(1.0, ph) + sw.p * std::polar(1.0, -ph);
        return pow_int(w, static_cast<std::uint64_t>(M));
      },
      4096);
}

double as_printed_density_fixedM(int M, bool mixed, double x) {
  if (M < 1) throw std::invalid_argument("as_printed_density_fixedM: M must be >= 1");
  double acc = 0.0;
  for (int j = 0; j <= M / 2; ++j) {
    double cj = std::abs(1.0 - 2.0 * j / M);
    if (cj == 0.0) continue;  // the even-M midpoint term is the atom
    double xj = x / cj;
    double r = rho_density(xj);
    if (r == 0.0) continue;
    if (mixed) {
      acc += binomial(M, j) * r / cj * std::pow(0.5, M);
    } else {
      double root = std::sqrt(std::max(0.0, 1.0 - 2.0 * xj * xj));
      double P = 0.5 * (1.0 + root), Q = 0.5 * (1.0 - root);
      acc += binomial(M, j) * (r / cj) * std::pow(P, M - j) * std::pow(Q, j);
    }
  }
  return acc;
}

double atom_mass_fixedM(int M, bool mixed, const Vector2cd& phi0) {
  if (M < 1) throw std::invalid_argument("atom_mass_fixedM: M must be >= 1");
  if (M % 2 == 1) return 0.0;
  if (mixed) return binomial(M, M / 2) * std::pow(0.5, M);
  int half = M / 2;
  return binomial(M, half) *
         periodic_mean(
             [&](double k) {
               auto sw = spectral_weights(k, phi0);
               return pow_int(sw.p * sw.q, half);
             },
             4096);
}

}  // namespace mcqw
