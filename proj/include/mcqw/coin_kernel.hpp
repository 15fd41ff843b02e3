#pragma once
// Momentum-space kernel of the Hadamard walk: the one-mode coin matrix, its
// closed-form spectral decomposition, and the per-mode drift/dispersion
// functionals that drive every limit law downstream.
//
// Conventions used throughout:
//  * chirality basis |+1> = (1,0), |-1> = (0,1); |+1> shifts right.
//  * Hk(k) = diag(e^{ik}, e^{-ik}) * H with H the 2x2 Hadamard matrix.
//  * branch 0 carries positive group velocity at k = 0. Concretely
//    lambda0(k) = -e^{-i a(k)}, lambda1(k) = e^{i a(k)}, a(k) = asin(sin k / sqrt 2),
//    and h0(k) = cos k / sqrt(1 + cos^2 k), h1 = -h0.
//  * the spectrum is gapped (|lambda0 - lambda1| >= sqrt 2 for all k), so the
//    branch labels extend smoothly over the whole circle; the only label
//    ambiguity is the sign rule at the zero-velocity points k = pi/2, 3pi/2,
//    fixed here by continuity from below.
#include <Eigen/Dense>

#include "mcqw/numerics.hpp"

namespace mcqw {

using Eigen::Matrix2cd;
using Eigen::Vector2cd;

// Default initial coin qubit (symmetric walk) and the |+1> basis qubit.
Vector2cd coin_symmetric();
Vector2cd coin_ket1();

// The momentum-space coin at mode k. Unitary with det = -1.
Matrix2cd fourier_coin(double k);

struct EigenSystem {
  cplx lambda0, lambda1;   // unit-modulus eigenvalues, lambda0*lambda1 = -1
  Vector2cd v0, v1;        // orthonormal eigenvectors, first component real > 0
};

// Closed-form eigendecomposition of fourier_coin(k). Throws std::domain_error
// for non-finite k.
EigenSystem eigensystem(double k);

// d-th power of the coin via the spectral form; d = 0 returns the exact
// identity. Cost O(1) in d.
Matrix2cd coin_power(double k, long d);

// Group velocity of branch 0: h(k) = cos k / sqrt(1 + cos^2 k). Branch 1 is
// the exact negative. Throws std::domain_error for non-finite k.
double group_velocity(double k);

struct SpectralWeights {
  double p, q;  // |<v0, phi>|^2 and |<v1, phi>|^2; p + q = 1 for unit phi
};
// Overlap weights of a unit coin qubit with the two branches. Rejects
// non-normalised phi (||phi| - 1| > 1e-10).
SpectralWeights spectral_weights(double k, const Vector2cd& phi);

// Per-step mean displacement of a coin driven d times at mode k:
//   mu_d(k) = <Psi_d, i d/dk Psi_d> / d,  Psi_d = Hk^d phi.
// Evaluated exactly through the identity dHk/dk = i sigma3 Hk, which reduces
// it to -1/d * sum_{b=1..d} <Psi_b, sigma3 Psi_b>. Rejects d < 1.
double mu_d(double k, long d, const Vector2cd& phi);

// Per-step second displacement moment of a basis-averaged coin:
//   nu_d(k) = tr[Hk^{-d} (i d/dk)^2 Hk^d] / (2d).
// The sigma3 identity collapses the double sum to the closed form
//   nu_d = 1 + (1/d) sum_{m=1..d-1} (d-m) T_m(k),
//   T_m = 2 h^2 + 2 (1-h^2) (-1)^m cos(2 m a(k)).
// Real and nonnegative. Rejects d < 1.
double nu_d(double k, long d);

// Inverse of the branch-0 velocity restricted to k in (0, pi):
//   k(x) = arccos(x / sqrt(1 - x^2)), defined for |x| < 1/sqrt 2.
// Pushing the uniform mode measure through h produces the Konno density;
// this map transports mode-space averages to velocity-space integrals.
double konno_substitution(double x);

}  // namespace mcqw
