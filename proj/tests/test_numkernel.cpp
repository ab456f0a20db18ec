#include <doctest.h>

#include <complex>
#include <random>

#include "core/linalg.hpp"

using namespace steffkit;

namespace {

Matrix<BigReal> random_dd_matrix(std::mt19937_64& rng, std::size_t n, unsigned bits) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Matrix<BigReal> a(n, n, BigReal(0.0, bits));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = BigReal(uni(rng), bits);
  // diagonal dominance keeps the conditioning mild
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i) + 2.0 * static_cast<double>(n);
  return a;
}

}  // namespace

TEST_CASE("precision context validates width") {
  CHECK_THROWS_AS(PrecisionContext(32, Field::Real), InvalidArgument);
  PrecisionContext ctx(64, Field::Complex);
  CHECK(ctx.bits == 64);
}

TEST_CASE("big reals honor their significand width") {
  // 1 + 2^-252 is representable at 256 bits but collapses to 1 at 64
  BigReal one256(1.0, 256);
  BigReal tiny256 = BigReal::two_pow(-252, 256);
  CHECK_FALSE(((one256 + tiny256) - one256).is_zero());

  BigReal one64(1.0, 64);
  BigReal tiny64 = BigReal::two_pow(-252, 64);
  CHECK(((one64 + tiny64) - one64).is_zero());
}

TEST_CASE("mixed precisions are rejected") {
  BigReal a(1.0, 128);
  BigReal b(1.0, 256);
  CHECK_THROWS_AS((void)(a + b), PrecisionMismatch);
  CHECK_THROWS_AS((void)(a * b), PrecisionMismatch);
}

TEST_CASE("big real parsing and formatting") {
  BigReal x = BigReal::from_string("2.5e-3", 256);
  CHECK(x.to_double() == doctest::Approx(2.5e-3).epsilon(1e-15));
  CHECK_THROWS_AS(BigReal::from_string("12beef", 256), InvalidArgument);
  CHECK_THROWS_AS(BigReal::from_string("", 256), InvalidArgument);
  BigReal half(0.5, 128);
  CHECK(half.to_string(3) == "5.00e-01");
}

TEST_CASE("norm2 over the four scalar types") {
  Vector<double> v(2, 3.0);
  v[1] = 4.0;
  CHECK(norm2(v) == 5.0);

  Vector<double> z(3, 0.0);
  CHECK(norm2(z) == 0.0);

  Vector<std::complex<double>> c(2, {0.0, 1.0});
  c[1] = {1.0, 0.0};
  CHECK(norm2(c) == doctest::Approx(std::sqrt(2.0)));

  Vector<BigReal> b(2, BigReal(3.0, 256));
  b[1] = BigReal(4.0, 256);
  CHECK(norm2(b) == BigReal(5.0, 256));

  Vector<BigComplex> bc(2, BigComplex(0.0, 1.0, 256));
  bc[1] = BigComplex(1.0, 0.0, 256);
  BigReal want = sqrt(BigReal(2.0, 256));
  CHECK(abs(norm2(bc) - want) < BigReal::two_pow(-250, 256));
}

TEST_CASE("vector arithmetic checks dimensions") {
  Vector<double> a(2, 1.0), b(3, 1.0);
  CHECK_THROWS_AS((void)(a + b), DimensionMismatch);
  CHECK_THROWS_AS((void)(a - b), DimensionMismatch);
}

TEST_CASE("lu of the identity is trivial") {
  auto f = lu_factor(Matrix<double>::identity(3, 53));
  CHECK_FALSE(f.singular);
  CHECK(f.perm == std::vector<std::size_t>{0, 1, 2});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(f.lu(i, j) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("lu pivots a row swap without declaring singularity") {
  Matrix<double> a(2, 2, 0.0);
  a(0, 1) = 1.0;
  a(1, 0) = 1.0;
  auto f = lu_factor(a);
  CHECK_FALSE(f.singular);
  CHECK(f.perm == std::vector<std::size_t>{1, 0});

  Vector<double> b(2, 1.0);
  b[1] = 2.0;
  Vector<double> x = lu_solve(f, b);
  CHECK(x[0] == 2.0);
  CHECK(x[1] == 1.0);
}

TEST_CASE("rank deficiency sets the singular flag") {
  Matrix<double> a(2, 2, 0.0);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  a(1, 0) = 2.0;
  a(1, 1) = 4.0;
  auto f = lu_factor(a);
  CHECK(f.singular);
  Vector<double> b(2, 1.0);
  CHECK_THROWS_AS((void)lu_solve(f, b), SingularOperator);

  Matrix<double> zero(3, 3, 0.0);
  CHECK(lu_factor(zero).singular);
}

TEST_CASE("diagonal solve is exact") {
  Matrix<double> a(2, 2, 0.0);
  a(0, 0) = 2.0;
  a(1, 1) = 5.0;
  Vector<double> b(2, 2.0);
  b[1] = 5.0;
  Vector<double> x = lu_solve(lu_factor(a), b);
  CHECK(x[0] == 1.0);
  CHECK(x[1] == 1.0);
}

TEST_CASE("solve leaves a tiny residual on well conditioned systems") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const unsigned bits = 512;
  for (std::size_t n : {3u, 5u, 8u}) {
    Matrix<BigReal> a = random_dd_matrix(rng, n, bits);
    Vector<BigReal> b(n, BigReal(0.0, bits));
    for (std::size_t i = 0; i < n; ++i) b[i] = BigReal(uni(rng), bits);
    Vector<BigReal> x = lu_solve(lu_factor(a), b);
    BigReal r = norm2(a * x - b);
    CHECK(r < BigReal::two_pow(-480, bits) * (norm2(b) + 1.0));
  }
}

TEST_CASE("factors reconstruct the permuted matrix") {
  std::mt19937_64 rng(7);
  const unsigned bits = 256;
  const std::size_t n = 6;
  Matrix<BigReal> a = random_dd_matrix(rng, n, bits);
  auto f = lu_factor(a);
  REQUIRE_FALSE(f.singular);

  Matrix<BigReal> l(n, n, BigReal(0.0, bits));
  Matrix<BigReal> u(n, n, BigReal(0.0, bits));
  for (std::size_t i = 0; i < n; ++i) {
    l(i, i) = BigReal(1.0, bits);
    for (std::size_t j = 0; j < i; ++j) l(i, j) = f.lu(i, j);
    for (std::size_t j = i; j < n; ++j) u(i, j) = f.lu(i, j);
  }
  Matrix<BigReal> pa(n, n, BigReal(0.0, bits));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) pa(i, j) = a(f.perm[i], j);
  CHECK(frobenius_norm(pa - l * u) < BigReal::two_pow(-128, bits));
}

TEST_CASE("real data run through the complex field matches the real field exactly") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const unsigned bits = 256;
  const std::size_t n = 5;

  Matrix<BigReal> ar = random_dd_matrix(rng, n, bits);
  Vector<BigReal> br(n, BigReal(0.0, bits));
  for (std::size_t i = 0; i < n; ++i) br[i] = BigReal(uni(rng), bits);

  Matrix<BigComplex> ac(n, n, BigComplex(bits));
  Vector<BigComplex> bc(n, BigComplex(bits));
  for (std::size_t i = 0; i < n; ++i) {
    bc[i] = BigComplex(br[i]);
    for (std::size_t j = 0; j < n; ++j) ac(i, j) = BigComplex(ar(i, j));
  }

  Vector<BigReal> xr = lu_solve(lu_factor(ar), br);
  Vector<BigComplex> xc = lu_solve(lu_factor(ac), bc);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(xc[i].imag().is_zero());
    CHECK(xc[i].real() == xr[i]);
  }
}

TEST_CASE("big complex arithmetic keeps real inputs on the real line") {
  const unsigned bits = 256;
  BigComplex a(1.75, 0.0, bits), b(0.3, 0.0, bits);
  BigReal ar(1.75, bits), br(0.3, bits);

  CHECK((a / b).imag().is_zero());
  CHECK((a / b).real() == ar / br);
  CHECK(sqrt(BigComplex(2.0, 0.0, bits)).real() == sqrt(BigReal(2.0, bits)));
  CHECK(sin(a).real() == sin(ar));
  CHECK(exp(a).real() == exp(ar));
  CHECK(abs(BigComplex(3.0, 4.0, bits)) == BigReal(5.0, bits));
}

TEST_CASE("matrix dimension mismatches throw") {
  Matrix<double> a(2, 3, 0.0);
  Matrix<double> b(2, 3, 0.0);
  CHECK_THROWS_AS((void)(a * b), DimensionMismatch);
  CHECK_THROWS_AS((void)lu_factor(a), DimensionMismatch);
  Vector<double> v(2, 0.0);
  CHECK_THROWS_AS((void)(a * v), DimensionMismatch);
}

TEST_CASE("lu call counter tallies factorizations") {
  reset_lu_factor_count();
  (void)lu_factor(Matrix<double>::identity(2, 53));
  (void)lu_factor(Matrix<double>::identity(3, 53));
  CHECK(lu_factor_count() == 2);
  reset_lu_factor_count();
  CHECK(lu_factor_count() == 0);
}
