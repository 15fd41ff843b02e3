#pragma once
// Quantitative verification layer: KS distances between scaled walk
// distributions and limit laws, scaling-exponent fits, the (beta, theta)
// phase-diagram sweeps for the three growth assumptions, and the named
// verification suites consumed by the CLI and the acceptance runner.
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mcqw/limit_laws.hpp"
#include "mcqw/walk_engine.hpp"

namespace mcqw {

using ordered_json = nlohmann::ordered_json;

// Two-sided Kolmogorov-Smirnov distance between the empirical law of
// X_t / t^theta and a limit law. Every lattice jump is compared from both
// sides, and law atoms (mass at 0) are merged into the jump set, so a
// finite-t point mass at the origin is measured against the law's atom.
double ks_distance(const PositionDistribution& dist, double theta,
                   const Law& law);

// KS distance between two laws on a dense grid plus both atom sets.
double ks_between_laws(const Law& a, const Law& b, int grid_n = 4001);

// Least-squares slope of log std(X_t) against log t. Requires >= 4 points
// spanning at least one decade; rejects degenerate (zero-std) families.
double scaling_exponent(const std::vector<std::pair<double, double>>& t_std);

// One rung of a growth-assumption ladder with its realized integer split
// t = d*M + q; n_pure >= 0 only for assumption (b) mixtures.
struct Rung {
  int M = 0;
  long t = 0;
  long d = 0;
  long q = 0;
  int n_pure = -1;
};

// Geometric time ladders per assumption, chosen so the assumption's
// arithmetic is exact (perfect squares / fifth powers) wherever the swept
// beta allows it; t_max <= 0 leaves the ladder uncapped.
std::vector<Rung> assumption_ladder(char assumption, double beta, long t_max);
InitialSpec rung_init(char assumption, const Rung& r);

// Critical exponent and predicted limit law of the phase diagram row at
// (assumption, beta).
double critical_theta(char assumption, double beta);
LawPtr predicted_law(char assumption, double beta);

// Sweeps the phase diagram at the critical exponent for each beta: KS
// trajectory to the predicted law, exponent fit, and the above-critical
// (theta + 0.15) scaled-std decay for the degenerate region.
ordered_json phase_sweep(char assumption, const std::vector<double>& betas,
                         long t_max, double budget = 6e9);

// The two double-limit routes to the Gaussian-times-walk-density law and the
// balanced-growth product limits (symmetric and |+1> variants).
ordered_json double_limit_check(double budget = 6e9);

// Individual check groups (one per acceptance criterion).
ordered_json check_oracle_grid(double budget = 6e9);        // engine vs oracle
ordered_json check_binomial_regime();                       // t <= M regime
ordered_json check_lemma_identities();                      // spectral identities
ordered_json check_spectral_constants();                    // mu/nu/trace values
ordered_json check_moment_reproduction(double budget = 6e9);
ordered_json check_corollary(double budget = 6e9);

// Named suite dispatch: oracle | lemmas | moments | corollary |
// theorem:a|b|c | double-limit. Unknown names throw std::invalid_argument.
ordered_json run_suite(const std::string& name,
                       const std::vector<double>& betas = {}, long t_max = 0,
                       double budget = 6e9);

// Calibrated KS ceiling for a key like "theorem/a:0.5"; +inf (and a
// "calibrated: false" mark in reports) when the golden file lacks the key.
double golden_ceiling(const std::string& key);

}  // namespace mcqw
