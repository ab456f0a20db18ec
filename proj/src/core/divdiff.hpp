#pragma once

#include "core/problems.hpp"

namespace steffkit {

// First-order divided difference operator [x, y; F] built column by column
// from points that telescope from y to x:
//   p_0 = y,  p_j = (x_1 .. x_j, y_{j+1} .. y_n),  p_n = x,
//   [x, y; F]_{.j} = (F(p_j) - F(p_{j-1})) / (x_j - y_j).
// Satisfies [x, y; F](x - y) = F(x) - F(y) identically, costs n + 1 system
// evaluations, and refuses nearly coincident components: the column scale
// collapses once |x_j - y_j| drops below 2^(16 - bits) * max(1, |x_j|).
template <class S>
Matrix<S> potra_dd(const SystemDef<S>& F, const Vector<S>& x, const Vector<S>& y) {
  using FT = FieldTraits<S>;
  using R = typename FT::Real;
  const std::size_t n = F.n;
  if (x.dim() != n) throw DimensionMismatch(x.dim(), n);
  if (y.dim() != n) throw DimensionMismatch(y.dim(), n);

  const unsigned bits = FT::precision(x[0]);
  const R one = FieldTraits<R>::one(bits);
  const R floor_rel = FT::real_two_pow(-static_cast<long>(bits) + 16, bits);
  for (std::size_t j = 0; j < n; ++j) {
    R scale = FT::abs(x[j]);
    if (scale < one) scale = one;
    if (FT::abs(x[j] - y[j]) < floor_rel * scale) throw CoincidentComponent(j);
  }

  Matrix<S> dd(n, n, FT::zero(bits));
  Vector<S> p = y;
  Vector<S> fp = F(p);
  for (std::size_t j = 0; j < n; ++j) {
    p[j] = x[j];
    Vector<S> fc = F(p);
    S denom = x[j] - y[j];
    for (std::size_t i = 0; i < n; ++i) dd(i, j) = (fc[i] - fp[i]) / denom;
    fp = std::move(fc);
  }
  return dd;
}

// Steffensen-type difference [x + beta*F(x), x; F] with a scalar shift.
template <class S>
Matrix<S> steffensen_dd(const SystemDef<S>& F, const Vector<S>& x, const S& beta) {
  Vector<S> w = x + beta * F(x);
  return potra_dd(F, w, x);
}

// Kurchatov difference [2*x_curr - x_prev, x_prev; F].
template <class S>
Matrix<S> kurchatov_dd(const SystemDef<S>& F, const Vector<S>& x_curr,
                       const Vector<S>& x_prev) {
  using FT = FieldTraits<S>;
  const S two = FT::from_double(2.0, FT::precision(x_curr[0]));
  return potra_dd(F, two * x_curr - x_prev, x_prev);
}

}  // namespace steffkit
