#pragma once

#include <cstdio>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

#include "core/linalg.hpp"

namespace steffkit {

// Weight function H applied to the operator ratio t = A^{-1}[z,v;F].
// The multi-step scheme keeps its order when H(I) = I and H'(I) = -1; the
// with-memory variants further want H''(I) = 2 (both satisfied by the
// built-ins).  Custom weights supply one evaluator per scalar type they
// intend to run under.
struct WeightSpec {
  enum class Kind { PolyInTminusI, Reciprocal, Custom };

  Kind kind = Kind::PolyInTminusI;
  std::vector<double> coeffs = {1.0, -1.0, 1.0};  // H(t) = sum c_k (t - I)^k
  std::string label = "paper-poly";

  std::function<Matrix<double>(const Matrix<double>&)> custom_f64;
  std::function<Matrix<std::complex<double>>(const Matrix<std::complex<double>>&)> custom_c64;
  std::function<Matrix<BigReal>(const Matrix<BigReal>&)> custom_big;
  std::function<Matrix<BigComplex>(const Matrix<BigComplex>&)> custom_bigc;

  static WeightSpec paper_poly() { return WeightSpec{}; }

  static WeightSpec reciprocal() {
    WeightSpec w;
    w.kind = Kind::Reciprocal;
    w.coeffs.clear();
    w.label = "reciprocal";
    return w;
  }

  static WeightSpec poly(std::vector<double> c) {
    if (c.empty()) throw InvalidArgument("polynomial weight needs coefficients");
    WeightSpec w;
    w.kind = Kind::PolyInTminusI;
    w.coeffs = std::move(c);
    w.label = "poly:";
    for (std::size_t i = 0; i < w.coeffs.size(); ++i) {
      if (i) w.label += ',';
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", w.coeffs[i]);
      w.label += buf;
    }
    return w;
  }

  static WeightSpec custom(std::string name) {
    WeightSpec w;
    w.kind = Kind::Custom;
    w.coeffs.clear();
    w.label = std::move(name);
    return w;
  }
};

namespace detail {
template <class S>
const std::function<Matrix<S>(const Matrix<S>&)>& custom_channel(const WeightSpec& w) {
  if constexpr (std::is_same_v<S, double>)
    return w.custom_f64;
  else if constexpr (std::is_same_v<S, std::complex<double>>)
    return w.custom_c64;
  else if constexpr (std::is_same_v<S, BigReal>)
    return w.custom_big;
  else
    return w.custom_bigc;
}
}  // namespace detail

template <class S>
Matrix<S> eval_weight(const WeightSpec& w, const Matrix<S>& t) {
  using FT = FieldTraits<S>;
  if (t.rows() != t.cols()) throw DimensionMismatch(t.cols(), t.rows());
  if (t.rows() == 0) throw InvalidArgument("weight of an empty matrix");
  const unsigned bits = FT::precision(t(0, 0));

  switch (w.kind) {
    case WeightSpec::Kind::PolyInTminusI: {
      if (w.coeffs.empty()) throw InvalidArgument("polynomial weight needs coefficients");
      Matrix<S> ident = Matrix<S>::identity(t.rows(), bits);
      Matrix<S> e = t - ident;
      Matrix<S> acc = FT::from_double(w.coeffs.back(), bits) * ident;
      for (std::size_t k = w.coeffs.size() - 1; k-- > 0;)
        acc = acc * e + FT::from_double(w.coeffs[k], bits) * ident;
      return acc;
    }
    case WeightSpec::Kind::Reciprocal: {
      auto f = lu_factor(t);
      if (f.singular) throw SingularOperator();
      return lu_inverse(f);
    }
    case WeightSpec::Kind::Custom: {
      const auto& fn = detail::custom_channel<S>(w);
      if (!fn)
        throw InvalidArgument("custom weight '" + w.label +
                              "' has no evaluator for this scalar type");
      Matrix<S> r = fn(t);
      if (r.rows() != t.rows() || r.cols() != t.cols())
        throw DimensionMismatch(r.rows(), t.rows());
      return r;
    }
  }
  throw Error("unreachable weight kind");
}

// Numerical check of the order conditions at the identity: Frobenius
// deviation of H(I) from I plus directional estimates of the first two
// derivatives from probes H(I + eps*U), H(I + 2*eps*U) over seeded random
// directions (4x4, Frobenius-normalized, >= 256 bits).
struct ConditionReport {
  double h_identity_deviation = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  bool satisfies_theorem1 = false;  // dev < 1e-20 and |h1 + 1| < 1e-3
  bool satisfies_memory = false;    // theorem1 and |h2 - 2| < 1e-2
};

ConditionReport check_conditions(const WeightSpec& w, unsigned bits = 256);

}  // namespace steffkit
