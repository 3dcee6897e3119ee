#include <doctest/doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "xorsep/kron.hpp"
#include "xorsep/linalg.hpp"
#include "xorsep/rng.hpp"
#include "xorsep/tensor.hpp"

using namespace xorsep;

namespace {

CMatrix random_matrix(Index n, std::uint64_t seed, const char* label = "test/kron") {
  GaussianStream s(seed, label);
  CMatrix m(n, n);
  std::uint64_t idx = 0;
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) m(r, c) = Complex(s.normal(idx++), s.normal(idx++));
  return m;
}

CVector random_vector(Index n, std::uint64_t seed) {
  GaussianStream s(seed, "test/kronvec");
  CVector v(n);
  for (Index i = 0; i < n; ++i)
    v[i] = Complex(s.normal(2 * static_cast<std::uint64_t>(i)),
                   s.normal(2 * static_cast<std::uint64_t>(i) + 1));
  return v;
}

KronTermSum random_sum(std::vector<Index> dims, Index n_terms, std::uint64_t seed) {
  KronTermSum op;
  op.local_dims = std::move(dims);
  GaussianStream cs(seed, "test/kroncoeff");
  for (Index t = 0; t < n_terms; ++t) {
    KronTerm term;
    term.coeff = Complex(cs.normal(2 * static_cast<std::uint64_t>(t)),
                         cs.normal(2 * static_cast<std::uint64_t>(t) + 1));
    for (std::size_t j = 0; j < op.local_dims.size(); ++j)
      term.factors.push_back(
          random_matrix(op.local_dims[j], seed + 100 * t + static_cast<std::uint64_t>(j) + 1));
    op.terms.push_back(std::move(term));
  }
  return op;
}

// Same factor pool reused across many terms, the shape dedup is built for.
KronTermSum pooled_sum(std::vector<Index> dims, Index n_terms, Index pool, std::uint64_t seed) {
  std::vector<std::vector<CMatrix>> blocks(dims.size());
  for (std::size_t j = 0; j < dims.size(); ++j)
    for (Index u = 0; u < pool; ++u)
      blocks[j].push_back(random_matrix(dims[j], seed + 17 * u + static_cast<std::uint64_t>(j)));
  KronTermSum op;
  op.local_dims = std::move(dims);
  GaussianStream cs(seed, "test/pool");
  for (Index t = 0; t < n_terms; ++t) {
    KronTerm term;
    term.coeff = Complex(cs.normal(2 * static_cast<std::uint64_t>(t)),
                         cs.normal(2 * static_cast<std::uint64_t>(t) + 1));
    for (std::size_t j = 0; j < op.local_dims.size(); ++j) {
      const Index pick = (t + 2 * static_cast<Index>(j)) % pool;
      term.factors.push_back(blocks[j][pick]);
    }
    op.terms.push_back(std::move(term));
  }
  return op;
}

}  // namespace

TEST_CASE("densify against kron_all term by term") {
  const KronTermSum op = random_sum({2, 3}, 4, 1);
  CMatrix expected = CMatrix::Zero(6, 6);
  for (const KronTerm& t : op.terms)
    expected += t.coeff * kron_all({t.factors[0], t.factors[1]});
  CHECK((densify(op) - expected).norm() < 1e-12);
}

TEST_CASE("kron_matvec matches dense multiplication") {
  const KronTermSum op = random_sum({2, 3, 2}, 5, 2);
  const CMatrix dense = densify(op);
  const CVector x = random_vector(12, 3);
  CHECK((kron_matvec(op, x) - dense * x).norm() < 1e-11 * dense.norm());
  CHECK((kron_matvec_adjoint(op, x) - dense.adjoint() * x).norm() < 1e-11 * dense.norm());
}

TEST_CASE("kron_adjoint densifies to the adjoint") {
  const KronTermSum op = random_sum({3, 2}, 4, 4);
  CHECK((densify(kron_adjoint(op)) - densify(op).adjoint()).norm() < 1e-12);
}

TEST_CASE("kron_to_tensor matches the kron-matrix identification") {
  const KronTermSum op = random_sum({2, 3}, 3, 5);
  const DenseTensor t = kron_to_tensor(op);
  REQUIRE(t.dims == std::vector<Index>{4, 9});
  const CMatrix m = tensor_to_kron_matrix(t, {2, 3}, {2, 3});
  CHECK((m - densify(op)).norm() < 1e-12);
}

TEST_CASE("dual_pair equals the dense transpose pairing") {
  const KronTermSum a = random_sum({2, 2}, 3, 6), b = random_sum({2, 2}, 4, 7);
  const Complex direct = (densify(a).transpose() * densify(b)).trace();
  CHECK(std::abs(dual_pair(a, b) - direct) < 1e-11);
}

TEST_CASE("dedup_factors reconstructs every term") {
  const KronTermSum op = pooled_sum({2, 3}, 40, 3, 8);
  const FactorDedup dd = dedup_factors(op);
  REQUIRE(dd.unique.size() == 2);
  REQUIRE(dd.map.size() == 2);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(dd.unique[j].size() == 3);  // pool size, all distinct
    REQUIRE(dd.map[j].size() == 40);
    for (std::size_t t = 0; t < 40; ++t) {
      const CMatrix& u = dd.unique[j][static_cast<std::size_t>(dd.map[j][t])];
      CHECK((u - op.terms[t].factors[j]).norm() == 0.0);  // bitwise copies
    }
  }
}

TEST_CASE("frobenius_norm: direct and dedup paths match the dense norm") {
  // 5 terms stays on the pairwise path, 40 crosses the dedup threshold.
  for (Index n_terms : {Index(5), Index(40)}) {
    const KronTermSum op = pooled_sum({2, 3}, n_terms, 3, 9);
    CHECK(frobenius_norm(op) == doctest::Approx(densify(op).norm()).epsilon(1e-11));
  }
}

TEST_CASE("trace_norm_triangle_ub bounds the dense trace norm, tight on one term") {
  const KronTermSum big = pooled_sum({2, 2, 2}, 30, 2, 10);
  CHECK(trace_norm_triangle_ub(big) >= trace_norm(densify(big)) - 1e-10);

  KronTermSum single = random_sum({2, 3}, 1, 11);
  const double tn = trace_norm(densify(single));
  CHECK(trace_norm_triangle_ub(single) == doctest::Approx(tn).epsilon(1e-10));
}

TEST_CASE("operator_norm dense and matrix-free routes agree") {
  const KronTermSum op = random_sum({2, 3, 2}, 4, 12);
  Eigen::JacobiSVD<CMatrix> svd(densify(op));
  const double exact = svd.singularValues()[0];
  const OperatorNormResult dense = operator_norm(op, 1e-12, 500, 4096);
  CHECK(dense.value == doctest::Approx(exact).epsilon(1e-10));
  const OperatorNormResult free = operator_norm(op, 1e-12, 2000, 1);  // force iteration
  REQUIRE(free.converged);
  CHECK(free.value == doctest::Approx(exact).epsilon(1e-7));
}

TEST_CASE("densify refuses dimensions beyond the cap") {
  KronTermSum op;
  op.local_dims = {256, 256};  // 65536 > kDensifyCap
  KronTerm t;
  t.coeff = 1.0;
  t.factors = {CMatrix::Identity(256, 256), CMatrix::Identity(256, 256)};
  op.terms.push_back(std::move(t));
  CHECK_THROWS_AS((void)densify(op), std::length_error);
}

TEST_CASE("check_shapes rejects mismatched factors") {
  KronTermSum op = random_sum({2, 2}, 2, 13);
  op.terms[1].factors[0] = CMatrix::Identity(3, 3);
  CHECK_THROWS_AS(op.check_shapes(), std::invalid_argument);
}
