#pragma once

#include <string>
#include <vector>

#include "core/bigfloat.hpp"

namespace steffkit {

// Efficiency index of the m-step scheme on an n-dimensional system,
// I = (2m)^(1/evals) with evals the scalar function evaluations per outer
// iteration: n^2 for m = 1 and 2n^2 + (m-2)n beyond.  Indices are computed
// at 256 bits so that I_1 = I_2 holds exactly (both are powers of two under
// exponents that differ by an exact factor of two) and comparisons between
// near-equal indices stay meaningful.
inline constexpr unsigned kEfficiencyBits = 256;

long evals_count(long m, long n);
BigReal efficiency_index(long m, long n);

// Real stationary point m_star of the index as a function of m, i.e. the
// root of (1 - ln(2m)) m = 2 - 2n, plus the best integer step count.  For
// n = 1 the stationary equation has no root with m >= 2 and the best choice
// is m = 1 (index exactly 2); m_star is reported as 1 in that case.
struct StepChoice {
  double m_star = 1.0;
  long m_best = 1;
  BigReal index_best;
};

StepChoice optimal_steps(long n);

// CSV with columns n,m,evals,index,is_best: one row per (n, m) with m up to
// m_max, then a summary row per n carrying m_best and is_best = 1.
std::string efficiency_table_csv(const std::vector<long>& n_values, long m_max);

}  // namespace steffkit
