#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kver/linalg.hpp"

using namespace kver;

namespace {

MatD mat3(std::initializer_list<double> vals) {
  MatD m = zero_mat<double>(3);
  int k = 0;
  for (double v : vals) {
    m(k / 3, k % 3) = v;
    ++k;
  }
  return m;
}

}  // namespace

TEST_CASE("inverse reproduces the identity") {
  MatD a = mat3({4, 1, 0.5, 1, 3, -0.2, 0.5, -0.2, 2});
  const MatD inv = inverse(a);
  const MatD prod = matmul(a, inv);
  const MatD err = prod - identity<double>(3);
  CHECK(max_abs(err) < 1e-13);
}

TEST_CASE("inverse of a dual matrix differentiates correctly") {
  // A(t) = [[2+t, 1], [1, 3]];  d/dt A^{-1} = -A^{-1} A' A^{-1}.
  Mat<D1> a = zero_mat<D1>(2);
  a(0, 0) = dual_var<D1>(2.0, 0);
  a(0, 1) = dual_const<D1>(1.0);
  a(1, 0) = dual_const<D1>(1.0);
  a(1, 1) = dual_const<D1>(3.0);
  const Mat<D1> inv = inverse(a);

  MatD a0 = zero_mat<double>(2);
  a0(0, 0) = 2.0;
  a0(0, 1) = 1.0;
  a0(1, 0) = 1.0;
  a0(1, 1) = 3.0;
  MatD ap = zero_mat<double>(2);
  ap(0, 0) = 1.0;
  const MatD inv0 = inverse(a0);
  const MatD expected = matmul(matmul(inv0, ap), inv0) * (-1.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(value_of(inv(i, j).d[0]) == doctest::Approx(expected(i, j)).epsilon(1e-12));
}

TEST_CASE("singular matrix is rejected") {
  MatD a = zero_mat<double>(2);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  a(1, 0) = 0.5;
  a(1, 1) = 1.0;
  CHECK_THROWS_AS((void)inverse(a), SingularMetric);
}

TEST_CASE("symmetric eigendecomposition: frozen 3x3 case") {
  // Eigenvalues of [[2,1,0],[1,2,0],[0,0,5]] are {1,3,5}.
  MatD a = mat3({2, 1, 0, 1, 2, 0, 0, 0, 5});
  const SymEigen e = sym_eigen(a);
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e.values[2] == doctest::Approx(5.0).epsilon(1e-12));
  // Residual A v = lambda v.
  for (int k = 0; k < 3; ++k) {
    VecD v = zero_vec<double>(3);
    for (int i = 0; i < 3; ++i) v[i] = e.vectors(i, k);
    const VecD av = matvec(a, v);
    for (int i = 0; i < 3; ++i) CHECK(av[i] == doctest::Approx(e.values[k] * v[i]).epsilon(1e-12));
  }
}

TEST_CASE("eigenvector sign fix is deterministic") {
  MatD a = mat3({2, 1, 0, 1, 2, 0, 0, 0, 5});
  const SymEigen e1 = sym_eigen(a);
  const SymEigen e2 = sym_eigen(a);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(e1.vectors(i, j) == e2.vectors(i, j));
  // Largest-magnitude entry of each column is positive.
  for (int k = 0; k < 3; ++k) {
    double best = 0.0;
    int arg = 0;
    for (int i = 0; i < 3; ++i)
      if (std::abs(e1.vectors(i, k)) > best) {
        best = std::abs(e1.vectors(i, k));
        arg = i;
      }
    CHECK(e1.vectors(arg, k) > 0.0);
  }
}

TEST_CASE("sym_sqrt squares back") {
  MatD a = mat3({4, 1, 0, 1, 3, 0.5, 0, 0.5, 2});
  const MatD r = sym_sqrt(a);
  const MatD err = matmul(r, r) - a;
  CHECK(max_abs(err) < 1e-12);
  const MatD ri = sym_inv_sqrt(a);
  const MatD err2 = matmul(matmul(ri, a), ri) - identity<double>(3);
  CHECK(max_abs(err2) < 1e-12);
}

TEST_CASE("determinant via LU") {
  MatD a = mat3({2, 0, 0, 0, 3, 0, 0, 0, -4});
  CHECK(determinant(a) == doctest::Approx(-24.0).epsilon(1e-14));
}
