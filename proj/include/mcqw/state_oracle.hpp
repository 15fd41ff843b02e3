#pragma once

// Reference evolution for small instances: the full register (position x
// lattice sites times M coin qubits) is stored densely and stepped one
// application at a time, with no Fourier analysis anywhere.  Mixed coins are
// handled by enumerating an orthonormal-basis unravelling of the maximally
// mixed state and averaging the resulting measurement distributions.  Used
// only to cross-check the production engine; cost grows like 2^M * t^2.

#include "mcqw/walk_engine.hpp"

namespace mcqw {

// Exact measurement distribution after t steps with cyclic coin driving.
// Throws BudgetError when the dense state would exceed roughly work_budget
// amplitude updates.
PositionDistribution oracle_distribution(const WalkSpec& spec,
                                         const InitialSpec& init,
                                         double work_budget = 2e9);

// Monte-Carlo estimate of the all-mixed-coins walk: basis assignments drawn
// i.i.d. uniform over the 2^M corners, one dense evolution each, averaged.
// When 2^M <= n_samples the average enumerates every assignment once and the
// result equals oracle_distribution exactly. Reproducible under seed.
PositionDistribution sample_case_b(int M, long t, long n_samples,
                                   std::uint64_t seed,
                                   double work_budget = 2e9);

}  // namespace mcqw
