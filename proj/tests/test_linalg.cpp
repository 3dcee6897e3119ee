#include <doctest/doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "xorsep/linalg.hpp"
#include "xorsep/rng.hpp"

using namespace xorsep;

namespace {

CMatrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  GaussianStream s(seed, "test/linalg");
  CMatrix m(rows, cols);
  std::uint64_t idx = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = Complex(s.normal(idx++), s.normal(idx++));
  return m;
}

}  // namespace

TEST_CASE("hermiticity defect and is_hermitian") {
  CMatrix h = random_matrix(4, 4, 1);
  h = (h + h.adjoint()).eval();
  CHECK(hermiticity_defect(h) < 1e-14);
  CHECK(is_hermitian(h));
  h(0, 1) += Complex(0, 1);
  CHECK(!is_hermitian(h));
}

TEST_CASE("operator and trace norms against singular values") {
  const CMatrix a = random_matrix(5, 5, 2);
  Eigen::JacobiSVD<CMatrix> svd(a);
  CHECK(operator_norm(a) == doctest::Approx(svd.singularValues()[0]).epsilon(1e-12));
  CHECK(trace_norm(a) == doctest::Approx(svd.singularValues().sum()).epsilon(1e-12));
  CHECK(frobenius_norm(a) == doctest::Approx(a.norm()).epsilon(1e-13));
}

TEST_CASE("hermitian_spectral reconstructs, eigenvalues descend") {
  CMatrix h = random_matrix(6, 6, 3);
  h = (h + h.adjoint()).eval();
  const Eigensystem eig = hermitian_spectral(h);
  CMatrix rebuilt = CMatrix::Zero(6, 6);
  for (Index i = 0; i < 6; ++i)
    rebuilt += eig.values[i] * eig.vectors.col(i) * eig.vectors.col(i).adjoint();
  CHECK((rebuilt - h).norm() < 1e-11);
  for (Index i = 0; i + 1 < 6; ++i) CHECK(eig.values[i] >= eig.values[i + 1]);
}

TEST_CASE("dual pairing is the transpose pairing") {
  const CMatrix a = random_matrix(3, 3, 4), b = random_matrix(3, 3, 5);
  const Complex direct = (a.transpose() * b).trace();
  CHECK(std::abs(dual_pair(a, b) - direct) < 1e-12);
}

TEST_CASE("clip_psd floors tiny negative eigenvalues") {
  CMatrix h = random_matrix(4, 4, 6);
  h = (h * h.adjoint()).eval();  // PSD
  h -= 1e-12 * CMatrix::Identity(4, 4);
  const CMatrix c = clip_psd(h, 1e-10);
  const Eigensystem eig = hermitian_spectral(c);
  for (Index i = 0; i < 4; ++i) CHECK(eig.values[i] >= -1e-14);
  CHECK((c - h).norm() < 1e-10);
}

TEST_CASE("partial_trace against an explicit Kronecker product") {
  const CMatrix a = random_matrix(2, 2, 7), b = random_matrix(3, 3, 8),
                c = random_matrix(2, 2, 9);
  const CMatrix full = kron_all({a, b, c});
  REQUIRE(full.rows() == 12);

  // Tracing out modes leaves the kept factors times the traces of the rest.
  const CMatrix keep_b = partial_trace(full, {2, 3, 2}, {false, true, false});
  CHECK((keep_b - a.trace() * c.trace() * b).norm() < 1e-11);
  const CMatrix keep_ac = partial_trace(full, {2, 3, 2}, {true, false, true});
  CHECK((keep_ac - b.trace() * kron_all({a, c})).norm() < 1e-11);
}

TEST_CASE("kron_all ordering: first factor slowest") {
  CMatrix e00 = CMatrix::Zero(2, 2), e11 = CMatrix::Zero(2, 2);
  e00(0, 0) = 1;
  e11(1, 1) = 1;
  const CMatrix k = kron_all({e00, e11});
  for (Index r = 0; r < 4; ++r)
    for (Index c = 0; c < 4; ++c) CHECK(k(r, c) == ((r == 1 && c == 1) ? 1.0 : 0.0));
}

TEST_CASE("apply_map_from_tensor matches the matrix-unit expansion") {
  // t_hat on l2^D (x) l2^m encodes x -> sum_{rs} x_rs * block(r, s).
  const Index d = 3, m = 2;
  const CMatrix t_hat = random_matrix(d * m, d * m, 10);
  const CMatrix x = random_matrix(d, d, 11);
  CMatrix expected = CMatrix::Zero(m, m);
  for (Index r = 0; r < d; ++r)
    for (Index s = 0; s < d; ++s)
      expected += x(r, s) * t_hat.block(r * m, s * m, m, m);
  const CMatrix got = apply_map_from_tensor(t_hat, m, x);
  CHECK((got - expected).norm() < 1e-12);
}
