#pragma once
// Small numeric helpers shared across the engine: integer powers of complex
// factors, periodic/adaptive quadrature, binomials, and a thread-chunked loop.
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace mcqw {

using cplx = std::complex<double>;

inline constexpr double PI = 3.141592653589793238462643383279502884;
inline constexpr double TWO_PI = 2.0 * PI;
inline constexpr double SQRT1_2 = 0.7071067811865475244008443621048490393;

// z^n by binary exponentiation. Branch-free for integer n (unlike pow via
// principal log) and O(log n) multiplies, so grouped coin factors with counts
// in the thousands stay cheap and exact in sign.
cplx pow_int(cplx z, std::uint64_t n);
double pow_int(double z, std::uint64_t n);

// Exact binomial coefficient as double (n <= 1029 before overflow to inf;
// callers here stay far below that).
double binomial(int n, int k);

// Mean of f over one period [0, 2pi) by the N-point rectangle rule.
// Spectrally accurate for smooth periodic integrands and exact for
// trigonometric polynomials of degree < N.
double periodic_mean(const std::function<double(double)>& f, int n);
cplx periodic_mean_c(const std::function<cplx(double)>& f, int n);

// Adaptive Simpson on [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 48);

// Gauss-Legendre nodes/weights on [-1, 1]; cached by n.
struct GaussRule {
  std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);

// Integral of f over [a, b] with an n-point Gauss-Legendre rule.
double gauss_integrate(const std::function<double(double)>& f, double a,
                       double b, int n);

// Runs body(i) for i in [0, n); chunks across threads. Thread count comes
// from MCQW_THREADS when set, else hardware concurrency. Writers must touch
// disjoint state per index so results do not depend on the thread count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body);
int thread_count();

}  // namespace mcqw
