#include "core/weights.hpp"

#include <cmath>
#include <random>

namespace steffkit {

namespace {

BigReal frob_inner(const Matrix<BigReal>& a, const Matrix<BigReal>& b) {
  unsigned bits = a(0, 0).precision();
  BigReal acc(0.0, bits);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * b(i, j);
  return acc;
}

}  // namespace

ConditionReport check_conditions(const WeightSpec& w, unsigned bits) {
  if (bits < 256) bits = 256;
  constexpr std::size_t kDim = 4;
  constexpr int kTrials = 5;

  Matrix<BigReal> ident = Matrix<BigReal>::identity(kDim, bits);
  Matrix<BigReal> h_ident = eval_weight<BigReal>(w, ident);

  ConditionReport rep;
  rep.h_identity_deviation = frobenius_norm(h_ident - ident).to_double();

  const BigReal eps = BigReal::from_string("1e-4", bits);
  const BigReal one(1.0, bits);
  std::mt19937_64 rng(0x5eedf00dull);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  double h1_sum = 0.0, h2_sum = 0.0;
  for (int trial = 0; trial < kTrials; ++trial) {
    Matrix<BigReal> u(kDim, kDim, BigReal(0.0, bits));
    for (std::size_t i = 0; i < kDim; ++i)
      for (std::size_t j = 0; j < kDim; ++j) u(i, j) = BigReal(uni(rng), bits);
    u = (one / frobenius_norm(u)) * u;

    Matrix<BigReal> t1 = ident + eps * u;
    Matrix<BigReal> t2 = ident + (eps * 2.0) * u;
    Matrix<BigReal> e1 = eval_weight<BigReal>(w, t1) - h_ident;
    Matrix<BigReal> e2 = eval_weight<BigReal>(w, t2) - h_ident;

    // E(eps) = eps H'U + eps^2/2 H''U^2 + O(eps^3)
    Matrix<BigReal> d1 = (one / (eps * 2.0)) * (BigReal(4.0, bits) * e1 - e2);
    Matrix<BigReal> d2 = (one / (eps * eps)) * (e2 - BigReal(2.0, bits) * e1);

    Matrix<BigReal> u2 = u * u;
    h1_sum += (frob_inner(u, d1) / frob_inner(u, u)).to_double();
    h2_sum += (frob_inner(u2, d2) / frob_inner(u2, u2)).to_double();
  }

  rep.h1 = h1_sum / kTrials;
  rep.h2 = h2_sum / kTrials;
  rep.satisfies_theorem1 =
      rep.h_identity_deviation < 1e-20 && std::fabs(rep.h1 + 1.0) < 1e-3;
  rep.satisfies_memory = rep.satisfies_theorem1 && std::fabs(rep.h2 - 2.0) < 1e-2;
  return rep;
}

}  // namespace steffkit
