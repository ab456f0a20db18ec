#include "core/efficiency.hpp"

#include <cmath>

namespace steffkit {

long evals_count(long m, long n) {
  if (m < 1) throw InvalidArgument("step count m must be at least 1");
  if (n < 1) throw InvalidArgument("dimension n must be at least 1");
  return m == 1 ? n * n : 2 * n * n + (m - 2) * n;
}

BigReal efficiency_index(long m, long n) {
  long evals = evals_count(m, n);
  BigReal base(2 * m, kEfficiencyBits);
  BigReal expo = BigReal(1l, kEfficiencyBits) / BigReal(evals, kEfficiencyBits);
  return pow(base, expo);
}

namespace {
double stationary_residual(double m, long n) {
  return (1.0 - std::log(2.0 * m)) * m - (2.0 - 2.0 * static_cast<double>(n));
}
}  // namespace

StepChoice optimal_steps(long n) {
  if (n < 1) throw InvalidArgument("dimension n must be at least 1");
  StepChoice out;
  if (n == 1) {
    out.m_star = 1.0;
    out.m_best = 1;
    out.index_best = efficiency_index(1, 1);
    return out;
  }

  // g(m) = (1 - ln 2m) m - (2 - 2n) decreases for m > 1/2 and is positive
  // at m = 2 for every n >= 2, so the root beyond 2 is unique.
  double lo = 2.0;
  double hi = 2.0 * static_cast<double>(n) + 2.0;
  while (stationary_residual(hi, n) > 0.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (stationary_residual(mid, n) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  out.m_star = 0.5 * (lo + hi);

  long flo = static_cast<long>(std::floor(out.m_star));
  long fhi = static_cast<long>(std::ceil(out.m_star));
  if (flo < 2) flo = 2;
  if (fhi < flo) fhi = flo;
  BigReal ilo = efficiency_index(flo, n);
  if (fhi == flo) {
    out.m_best = flo;
    out.index_best = ilo;
    return out;
  }
  BigReal ihi = efficiency_index(fhi, n);
  if (ilo >= ihi) {  // ties break toward fewer steps
    out.m_best = flo;
    out.index_best = ilo;
  } else {
    out.m_best = fhi;
    out.index_best = ihi;
  }
  return out;
}

std::string efficiency_table_csv(const std::vector<long>& n_values, long m_max) {
  if (n_values.empty()) throw InvalidArgument("efficiency table needs dimensions");
  if (m_max < 1) throw InvalidArgument("m_max must be at least 1");

  std::string out = "n,m,evals,index,is_best\n";
  for (long n : n_values) {
    for (long m = 1; m <= m_max; ++m) {
      out += std::to_string(n) + ',' + std::to_string(m) + ',' +
             std::to_string(evals_count(m, n)) + ',' +
             efficiency_index(m, n).to_string(12) + ",0\n";
    }
    StepChoice best = optimal_steps(n);
    out += std::to_string(n) + ',' + std::to_string(best.m_best) + ',' +
           std::to_string(evals_count(best.m_best, n)) + ',' +
           best.index_best.to_string(12) + ",1\n";
  }
  return out;
}

}  // namespace steffkit
