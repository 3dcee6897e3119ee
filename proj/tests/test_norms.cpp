#include <doctest/doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "xorsep/ensembles.hpp"
#include "xorsep/kron.hpp"
#include "xorsep/linalg.hpp"
#include "xorsep/norms.hpp"
#include "xorsep/rng.hpp"
#include "xorsep/tensor.hpp"

using namespace xorsep;

namespace {

CMatrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  GaussianStream s(seed, "test/norms");
  CMatrix m(rows, cols);
  std::uint64_t idx = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = Complex(s.normal(idx++), s.normal(idx++));
  return m;
}

CVector random_unit(Index n, std::uint64_t seed) {
  GaussianStream s(seed, "test/normsvec");
  CVector v(n);
  for (Index i = 0; i < n; ++i)
    v[i] = Complex(s.normal(2 * static_cast<std::uint64_t>(i)),
                   s.normal(2 * static_cast<std::uint64_t>(i) + 1));
  return v / v.norm();
}

CMatrix random_unitary(Index n, std::uint64_t seed) {
  const CMatrix g = random_matrix(n, n, seed);
  return Eigen::HouseholderQR<CMatrix>(g).householderQ();
}

KronTermSum random_sum(std::vector<Index> dims, Index n_terms, std::uint64_t seed) {
  KronTermSum op;
  op.local_dims = std::move(dims);
  GaussianStream cs(seed, "test/normcoeff");
  for (Index t = 0; t < n_terms; ++t) {
    KronTerm term;
    term.coeff = Complex(cs.normal(2 * static_cast<std::uint64_t>(t)),
                         cs.normal(2 * static_cast<std::uint64_t>(t) + 1));
    for (std::size_t j = 0; j < op.local_dims.size(); ++j)
      term.factors.push_back(
          random_matrix(op.local_dims[j], op.local_dims[j],
                        seed + 100 * static_cast<std::uint64_t>(t) + j + 1));
    op.terms.push_back(std::move(term));
  }
  return op;
}

double sigma_max(const CMatrix& m) {
  return Eigen::JacobiSVD<CMatrix>(m).singularValues()[0];
}

// Best unfolding operator norm computed densely, the oracle for the chain.
double dense_unfolding_min(const KronTermSum& z) {
  const DenseTensor t = kron_to_tensor(z);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& cut : bipartitions(static_cast<int>(t.order())))
    best = std::min(best, sigma_max(matricize(t, cut)));
  return best;
}

}  // namespace

TEST_CASE("order-2 l2 injective norm equals sigma_max") {
  AlsOptions opt{12, 300, 1e-11, 0};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const CMatrix m = random_matrix(6, 6, seed);
    DenseTensor t = zeros_tensor({6, 6});
    for (Index r = 0; r < 6; ++r)
      for (Index c = 0; c < 6; ++c) t.at({r, c}) = m(r, c);
    const double exact = sigma_max(m);
    const L2Result lb = l2_injective_lb(t, opt);
    CHECK(lb.estimate.value == doctest::Approx(exact).epsilon(1e-8));
    CHECK(l2_injective_ub_unfolding(t).value == doctest::Approx(exact).epsilon(1e-10));
    // The certificate replays to the reported value.
    CHECK(l2_certificate_value(t, lb.certificate) ==
          doctest::Approx(lb.estimate.value).epsilon(1e-11));
  }
}

TEST_CASE("l2 ALS trace is monotone") {
  const KronTermSum z = random_sum({2, 2, 2}, 6, 11);
  const L2Result res = l2_injective_lb(kron_to_tensor(z), AlsOptions{6, 200, 1e-9, 0});
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    CHECK(res.trace[i] >= res.trace[i - 1] - 1e-11 * std::max(1.0, res.trace[i - 1]));
}

TEST_CASE("CP and dense l2 routes agree through certificates") {
  const KronTermSum z = random_sum({2, 2, 2}, 5, 12);
  const DenseTensor t = kron_to_tensor(z);
  const CpForm cp = cp_from_kron(z);
  const AlsOptions opt{16, 300, 1e-10, 0};
  const L2Result from_cp = l2_injective_lb(cp, opt);
  const L2Result from_dense = l2_injective_lb(t, opt);
  // A CP certificate is a set of mode vectors, valid on the dense tensor too.
  CHECK(l2_certificate_value(t, from_cp.certificate) ==
        doctest::Approx(from_cp.estimate.value).epsilon(1e-9));
  CHECK(from_cp.estimate.value ==
        doctest::Approx(from_dense.estimate.value).epsilon(1e-6));
  // Same unfolding norms from Gram matrices and from the dense matrix.
  CHECK(l2_injective_ub_unfolding(cp).value ==
        doctest::Approx(l2_injective_ub_unfolding(t).value).epsilon(1e-10));
}

TEST_CASE("eps norm of an elementary tensor") {
  KronTermSum z;
  z.local_dims = {3, 2, 3};
  KronTerm term;
  term.coeff = Complex(0.7, -0.4);
  term.factors = {random_matrix(3, 3, 21), random_matrix(2, 2, 22), random_matrix(3, 3, 23)};
  z.terms.push_back(term);

  double prod_op = std::abs(term.coeff), prod_fro = std::abs(term.coeff);
  for (const CMatrix& f : term.factors) {
    prod_op *= sigma_max(f);
    prod_fro *= f.norm();
  }
  const EpsResult lb = eps_sinfty_lb(z, AlsOptions{8, 200, 1e-11, 0});
  CHECK(lb.estimate.value == doctest::Approx(prod_op).epsilon(1e-9));
  // Every unfolding of an elementary tensor is rank one with Frobenius factors.
  CHECK(eps_sinfty_ub_chain(z).value == doctest::Approx(prod_fro).epsilon(1e-10));
}

TEST_CASE("eps chain equals the dense unfolding minimum") {
  // Distinct factors per term: composite indices stay per-term.
  const KronTermSum z1 = random_sum({2, 2, 2}, 5, 31);
  CHECK(eps_sinfty_ub_chain(z1).value ==
        doctest::Approx(dense_unfolding_min(z1)).epsilon(1e-9));

  // Shared factor pool: the reduced composite-Gram route.
  const RawInstance inst = sample_f_blocks({3, 2, 2, 77});
  const TauSample tau = sample_tau(2, 3, 77);
  const KronTermSum z2 = hermitize(build_z(inst, tau));
  REQUIRE(z2.terms.size() == 64);
  CHECK(eps_sinfty_ub_chain(z2).value ==
        doctest::Approx(dense_unfolding_min(z2)).epsilon(1e-9));
}

TEST_CASE("eps chain bounds the eps ALS estimate") {
  for (std::uint64_t seed : {41, 42, 43}) {
    const KronTermSum z = random_sum({2, 2, 2}, 6, seed);
    const EpsResult lb = eps_sinfty_lb(z, AlsOptions{8, 200, 1e-9, 0});
    CHECK(lb.estimate.value <= eps_sinfty_ub_chain(z).value + 1e-9);
    for (std::size_t i = 1; i < lb.trace.size(); ++i)
      CHECK(lb.trace[i] >= lb.trace[i - 1] - 1e-11 * std::max(1.0, lb.trace[i - 1]));
  }
}

TEST_CASE("eps certificate replays and validates") {
  const KronTermSum z = random_sum({2, 3}, 4, 51);
  const EpsResult res = eps_sinfty_lb(z, AlsOptions{6, 150, 1e-10, 0});
  CHECK(eps_certificate_value(z, res.certificate) ==
        doctest::Approx(res.estimate.value).epsilon(1e-12));
  EpsCertificate bad = res.certificate;
  bad.left[0] *= 2.0;
  CHECK_THROWS_AS((void)eps_certificate_value(z, bad), std::invalid_argument);
}

TEST_CASE("k=1 eps chain is the dense operator norm") {
  const KronTermSum z = random_sum({4}, 3, 61);
  CMatrix dense = CMatrix::Zero(4, 4);
  for (const auto& t : z.terms) dense += t.coeff * t.factors[0];
  CHECK(eps_sinfty_ub_chain(z).value == doctest::Approx(sigma_max(dense)).epsilon(1e-10));
}

TEST_CASE("ancilla operator against kron_all plus partial_trace") {
  const KronTermSum z = random_sum({2, 3}, 4, 71);
  const Index anc = 2;
  const std::vector<CMatrix> u = {random_unitary(4, 72), random_unitary(6, 73)};

  CMatrix manual = CMatrix::Zero(anc * anc, anc * anc);
  for (const auto& term : z.terms) {
    std::vector<CMatrix> traced;
    for (std::size_t i = 0; i < 2; ++i) {
      const Index d = z.local_dims[i];
      const CMatrix big = u[i] * kron_all({term.factors[i], CMatrix::Identity(anc, anc)});
      traced.push_back(partial_trace(big, {d, anc}, {false, true}));
    }
    manual += term.coeff * kron_all(traced);
  }
  const CMatrix got = min_norm_ancilla_operator(z, u, anc);
  CHECK((got - manual).norm() < 1e-11 * std::max(1.0, manual.norm()));
}

TEST_CASE("min-norm certificate replays through the dense oracle") {
  const KronTermSum z = random_sum({2, 3}, 4, 81);
  MinNormCertificate cert;
  cert.ancilla_dim = 2;
  cert.unitaries = {random_unitary(4, 82), random_unitary(6, 83)};
  cert.psi = random_unit(4, 84);
  cert.eta = random_unit(4, 85);
  const CMatrix n = min_norm_ancilla_operator(z, cert.unitaries, cert.ancilla_dim);
  cert.value = std::abs(cert.psi.dot(n * cert.eta));
  CHECK(min_norm_certificate_value(z, cert) == doctest::Approx(cert.value).epsilon(1e-12));

  MinNormCertificate bad = cert;
  bad.unitaries[0] *= 1.01;
  CHECK_THROWS_AS((void)min_norm_certificate_value(z, bad), std::invalid_argument);
}

TEST_CASE("min-norm see-saw: monotone, replayable, below the trace norm") {
  const RawInstance inst = sample_f_blocks({3, 2, 2, 91});
  const TauSample tau = sample_tau(2, 3, 91);
  const KronTermSum z = hermitize(build_z(inst, tau));  // dims {4,4,4}
  const AlsOptions opt{4, 120, 1e-8, 0};
  const MinNormResult res = min_norm_seesaw(z, 2, opt);
  REQUIRE(res.estimate.value > 0.0);
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    CHECK(res.trace[i] >= res.trace[i - 1] - 1e-11 * std::max(1.0, res.trace[i - 1]));
  CHECK(min_norm_certificate_value(z, res.certificate) ==
        doctest::Approx(res.estimate.value).epsilon(1e-11));
  CHECK(res.estimate.value <= trace_norm(densify(z)) + 1e-8);
}

TEST_CASE("warm start value is dominated by construction") {
  const RawInstance inst = sample_f_blocks({3, 2, 2, 95});
  const TauSample tau = sample_tau(2, 3, 95);
  const KronTermSum z = hermitize(build_z(inst, tau));
  const Index d = z.local_dims[0], anc = 2;

  // Hermitian unitary observables: signs of random hermitian matrices.
  std::vector<CMatrix> obs;
  std::vector<CMatrix> warm;
  for (std::uint64_t i = 0; i < 3; ++i) {
    CMatrix g = random_matrix(d, d, 96 + i);
    g = 0.5 * (g + g.adjoint()).eval();
    const Eigensystem eig = hermitian_spectral(g);
    CMatrix sign = CMatrix::Zero(d, d);
    for (Index e = 0; e < d; ++e)
      sign += (eig.values[e] < 0 ? -1.0 : 1.0) * eig.vectors.col(e) * eig.vectors.col(e).adjoint();
    obs.push_back(sign);
    warm.push_back(kron_all({sign, CMatrix::Identity(anc, anc)}));
  }
  // The first state update of the warm restart lands on |sum_t c_t prod_i tr(A_i A_ti)|.
  Complex f_prod(0, 0);
  for (const auto& term : z.terms) {
    Complex p = term.coeff;
    for (std::size_t i = 0; i < 3; ++i) p *= (obs[i] * term.factors[i]).trace();
    f_prod += p;
  }
  const MinNormResult res = min_norm_seesaw(z, anc, AlsOptions{0, 100, 1e-9, 0}, {warm});
  CHECK(res.estimate.value >= std::abs(f_prod) - 1e-9);
}

TEST_CASE("warm start validation") {
  const KronTermSum z = random_sum({2, 2}, 3, 101);
  std::vector<CMatrix> warm = {random_unitary(4, 102), random_unitary(4, 103)};
  CHECK_NOTHROW((void)min_norm_seesaw(z, 2, AlsOptions{0, 10, 1e-6, 0}, {warm}));
  warm[1] *= 1.5;
  CHECK_THROWS_AS((void)min_norm_seesaw(z, 2, AlsOptions{0, 10, 1e-6, 0}, {warm}),
                  std::invalid_argument);
}

TEST_CASE("cb norm of a tensor map is its operator norm") {
  const CMatrix t_hat = random_matrix(6, 6, 111);
  CHECK(cb_norm_s1_to_sinf(t_hat) == doctest::Approx(sigma_max(t_hat)).epsilon(1e-10));
}

TEST_CASE("projective_ub verifies the decomposition and bounds the trace norm") {
  const KronTermSum z = random_sum({2, 2}, 4, 121);
  const CMatrix dense = densify(z);
  const NormEstimate ub = projective_ub(z, dense);
  CHECK(ub.value >= trace_norm(dense) - 1e-10);
  CHECK_THROWS_AS((void)projective_ub(z, 2.0 * dense), std::invalid_argument);
}

TEST_CASE("trace of the tau matrix norm identity at small scale") {
  // Operator norm of the rank-one tau matrix equals ||g|| ||g'||.
  for (std::uint64_t seed : {131, 132, 133}) {
    const TauSample tau = sample_tau(3, 3, seed);
    const CMatrix m = tau.matrix();
    CHECK(operator_norm(m) ==
          doctest::Approx(tau.g.norm() * tau.gp.norm()).epsilon(1e-10));
  }
}
