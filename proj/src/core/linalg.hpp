#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "core/scalars.hpp"

namespace steffkit {

// Global tally of lu_factor invocations, for instrumentation and for the
// operation-count checks in the test suite.
std::uint64_t lu_factor_count();
void reset_lu_factor_count();
namespace detail {
void bump_lu_factor_count();
}

template <class S>
class Vector {
 public:
  Vector() = default;
  Vector(std::size_t n, const S& fill) : e_(n, fill) {}
  explicit Vector(std::vector<S> e) : e_(std::move(e)) {}

  std::size_t dim() const { return e_.size(); }
  S& operator[](std::size_t i) { return e_[i]; }
  const S& operator[](std::size_t i) const { return e_[i]; }
  auto begin() { return e_.begin(); }
  auto end() { return e_.end(); }
  auto begin() const { return e_.begin(); }
  auto end() const { return e_.end(); }

  friend Vector operator+(const Vector& a, const Vector& b) {
    check_dims(a, b);
    Vector r = a;
    for (std::size_t i = 0; i < r.dim(); ++i) r[i] = r[i] + b[i];
    return r;
  }
  friend Vector operator-(const Vector& a, const Vector& b) {
    check_dims(a, b);
    Vector r = a;
    for (std::size_t i = 0; i < r.dim(); ++i) r[i] = r[i] - b[i];
    return r;
  }
  friend Vector operator*(const S& s, const Vector& v) {
    Vector r = v;
    for (auto& x : r) x = s * x;
    return r;
  }

 private:
  static void check_dims(const Vector& a, const Vector& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch(b.dim(), a.dim());
  }
  std::vector<S> e_;
};

template <class S>
typename FieldTraits<S>::Real norm2(const Vector<S>& v) {
  using FT = FieldTraits<S>;
  if (v.dim() == 0) throw InvalidArgument("norm of an empty vector");
  auto acc = FT::abs_sq(v[0]);
  for (std::size_t i = 1; i < v.dim(); ++i) acc = acc + FT::abs_sq(v[i]);
  return real_sqrt(acc);
}

template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const S& fill)
      : rows_(rows), cols_(cols), e_(rows * cols, fill) {}

  static Matrix identity(std::size_t n, unsigned bits) {
    using FT = FieldTraits<S>;
    Matrix m(n, n, FT::zero(bits));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = FT::one(bits);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  S& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    check_same(a, b);
    Matrix r = a;
    for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = r.e_[i] + b.e_[i];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    check_same(a, b);
    Matrix r = a;
    for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = r.e_[i] - b.e_[i];
    return r;
  }
  friend Matrix operator*(const S& s, const Matrix& m) {
    Matrix r = m;
    for (auto& x : r.e_) x = s * x;
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch(b.rows(), a.cols());
    using FT = FieldTraits<S>;
    unsigned bits = a.rows() ? FT::precision(a(0, 0)) : 64;
    Matrix r(a.rows(), b.cols(), FT::zero(bits));
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t k = 0; k < a.cols(); ++k)
        for (std::size_t j = 0; j < b.cols(); ++j)
          r(i, j) = r(i, j) + a(i, k) * b(k, j);
    return r;
  }
  friend Vector<S> operator*(const Matrix& a, const Vector<S>& v) {
    if (a.cols() != v.dim()) throw DimensionMismatch(v.dim(), a.cols());
    using FT = FieldTraits<S>;
    unsigned bits = a.rows() ? FT::precision(a(0, 0)) : 64;
    Vector<S> r(a.rows(), FT::zero(bits));
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        r[i] = r[i] + a(i, j) * v[j];
    return r;
  }

 private:
  static void check_same(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
      throw DimensionMismatch(b.rows() * b.cols(), a.rows() * a.cols());
  }
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<S> e_;
};

template <class S>
typename FieldTraits<S>::Real frobenius_norm(const Matrix<S>& m) {
  using FT = FieldTraits<S>;
  if (m.rows() == 0) throw InvalidArgument("norm of an empty matrix");
  auto acc = FT::abs_sq(m(0, 0));
  bool first = true;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (first) {
        first = false;
        continue;
      }
      acc = acc + FT::abs_sq(m(i, j));
    }
  return real_sqrt(acc);
}

template <class S>
typename FieldTraits<S>::Real max_abs(const Matrix<S>& m) {
  using FT = FieldTraits<S>;
  auto best = FT::abs(m(0, 0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      auto a = FT::abs(m(i, j));
      if (a > best) best = a;
    }
  return best;
}

// Row-pivoted LU decomposition, stored packed.  perm holds the source row of
// each pivoted row, i.e. the factored matrix row i came from a(perm[i], *).
// singular is set when some pivot falls below 2^(8 - bits) * max|a_ij| with
// bits the significand width of the entries.
template <class S>
struct LuFactors {
  Matrix<S> lu;
  std::vector<std::size_t> perm;
  bool singular = false;
};

template <class S>
LuFactors<S> lu_factor(Matrix<S> a) {
  using FT = FieldTraits<S>;
  if (a.rows() != a.cols()) throw DimensionMismatch(a.cols(), a.rows());
  if (a.rows() == 0) throw InvalidArgument("cannot factor an empty matrix");
  detail::bump_lu_factor_count();

  const std::size_t n = a.rows();
  const unsigned bits = FT::precision(a(0, 0));
  LuFactors<S> f;
  f.perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

  auto scale = max_abs(a);
  if (real_is_zero(scale) || !real_finite(scale)) {
    f.singular = true;
    f.lu = std::move(a);
    return f;
  }
  auto pivot_floor = FT::real_two_pow(-static_cast<long>(bits) + 8, bits) * scale;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    auto best = FT::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      auto cand = FT::abs(a(i, k));
      if (cand > best) {
        best = cand;
        p = i;
      }
    }
    if (!(best >= pivot_floor)) {
      f.singular = true;
      break;
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(f.perm[k], f.perm[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      a(i, k) = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = a(i, j) - a(i, k) * a(k, j);
    }
  }
  f.lu = std::move(a);
  return f;
}

template <class S>
Vector<S> lu_solve(const LuFactors<S>& f, const Vector<S>& b) {
  if (f.singular) throw SingularOperator();
  const std::size_t n = f.lu.rows();
  if (b.dim() != n) throw DimensionMismatch(b.dim(), n);

  Vector<S> y(n, b[0]);
  for (std::size_t i = 0; i < n; ++i) {
    S acc = b[f.perm[i]];
    for (std::size_t j = 0; j < i; ++j) acc = acc - f.lu(i, j) * y[j];
    y[i] = acc;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    S acc = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc = acc - f.lu(ii, j) * y[j];
    y[ii] = acc / f.lu(ii, ii);
  }
  return y;
}

template <class S>
Matrix<S> lu_solve(const LuFactors<S>& f, const Matrix<S>& b) {
  if (f.singular) throw SingularOperator();
  const std::size_t n = f.lu.rows();
  if (b.rows() != n) throw DimensionMismatch(b.rows(), n);

  Matrix<S> x = b;
  for (std::size_t c = 0; c < b.cols(); ++c) {
    Vector<S> col(n, b(0, c));
    for (std::size_t i = 0; i < n; ++i) col[i] = b(i, c);
    Vector<S> sol = lu_solve(f, col);
    for (std::size_t i = 0; i < n; ++i) x(i, c) = sol[i];
  }
  return x;
}

// A^{-1} via n unit solves against the identity.
template <class S>
Matrix<S> lu_inverse(const LuFactors<S>& f) {
  using FT = FieldTraits<S>;
  const std::size_t n = f.lu.rows();
  unsigned bits = FT::precision(f.lu(0, 0));
  return lu_solve(f, Matrix<S>::identity(n, bits));
}

}  // namespace steffkit
