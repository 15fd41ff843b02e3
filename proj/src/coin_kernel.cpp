#include "mcqw/coin_kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace mcqw {

namespace {

void require_finite(double k) {
  if (!std::isfinite(k)) throw std::domain_error("mode k must be finite");
}

}  // namespace

Vector2cd coin_symmetric() {
  return Vector2cd(cplx(SQRT1_2, 0.0), cplx(0.0, SQRT1_2));
}

Vector2cd coin_ket1() { return Vector2cd(cplx(1.0, 0.0), cplx(0.0, 0.0)); }

Matrix2cd fourier_coin(double k) {
  require_finite(k);
  const cplx up = std::polar(SQRT1_2, k);    // e^{ik}/sqrt2
  const cplx dn = std::polar(SQRT1_2, -k);   // e^{-ik}/sqrt2
  Matrix2cd m;
  m << up, up, dn, -dn;
  return m;
}

EigenSystem eigensystem(double k) {
  require_finite(k);
  const double c = std::cos(k);
  const double n = std::sqrt(1.0 + c * c);
  const double a = std::asin(std::sin(k) * SQRT1_2);
  EigenSystem es;
  es.lambda0 = -std::polar(1.0, -a);
  es.lambda1 = std::polar(1.0, a);
  // Unnormalised rows (1, -(n+c) e^{-ik}) and (1, (n-c) e^{-ik}); the scale
  // factors 2n(n±c) stay >= 2(sqrt2 - 1) so both forms are globally smooth.
  const cplx e_mk = std::polar(1.0, -k);
  const double s0 = 1.0 / std::sqrt(2.0 * n * (n + c));
  const double s1 = 1.0 / std::sqrt(2.0 * n * (n - c));
  es.v0 << cplx(s0, 0.0), -(n + c) * s0 * e_mk;
  es.v1 << cplx(s1, 0.0), (n - c) * s1 * e_mk;
  return es;
}

Matrix2cd coin_power(double k, long d) {
  if (d < 0) throw std::invalid_argument("coin_power: d must be >= 0");
  if (d == 0) return Matrix2cd::Identity();
  if (d == 1) return fourier_coin(k);
  const EigenSystem es = eigensystem(k);
  const double a = std::asin(std::sin(k) * SQRT1_2);
  const cplx l0d = std::polar(1.0, double(d) * (PI - a));
  const cplx l1d = std::polar(1.0, double(d) * a);
  return l0d * (es.v0 * es.v0.adjoint()) + l1d * (es.v1 * es.v1.adjoint());
}

double group_velocity(double k) {
  require_finite(k);
  const double c = std::cos(k);
  return c / std::sqrt(1.0 + c * c);
}

SpectralWeights spectral_weights(double k, const Vector2cd& phi) {
  if (std::abs(phi.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("spectral_weights: phi must be a unit vector");
  const EigenSystem es = eigensystem(k);
  return SpectralWeights{std::norm(es.v0.dot(phi)), std::norm(es.v1.dot(phi))};
}

double mu_d(double k, long d, const Vector2cd& phi) {
  if (d < 1) throw std::invalid_argument("mu_d: d must be >= 1");
  require_finite(k);
  const Matrix2cd hk = fourier_coin(k);
  Vector2cd psi = phi;
  double acc = 0.0;
  for (long b = 1; b <= d; ++b) {
    psi = hk * psi;
    acc += std::norm(psi(0)) - std::norm(psi(1));
  }
  return -acc / double(d);
}

double nu_d(double k, long d) {
  if (d < 1) throw std::invalid_argument("nu_d: d must be >= 1");
  require_finite(k);
  const double h = group_velocity(k);
  const double h2 = h * h;
  const double a = std::asin(std::sin(k) * SQRT1_2);
  double acc = 0.0;
  for (long m = 1; m < d; ++m) {
    const double tm = 2.0 * h2 + 2.0 * (1.0 - h2) *
                                     (m % 2 ? -1.0 : 1.0) *
                                     std::cos(2.0 * double(m) * a);
    acc += double(d - m) * tm;
  }
  return 1.0 + acc / double(d);
}

double konno_substitution(double x) {
  if (!(std::abs(x) < SQRT1_2))
    throw std::domain_error("konno_substitution: |x| must be < 1/sqrt(2)");
  return std::acos(x / std::sqrt(1.0 - x * x));
}

}  // namespace mcqw
