#include <doctest/doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "xorsep/ensembles.hpp"
#include "xorsep/kron.hpp"
#include "xorsep/linalg.hpp"
#include "xorsep/norms.hpp"
#include "xorsep/rng.hpp"

using namespace xorsep;

TEST_CASE("f blocks replay their stream in (r,s,t,v) order") {
  const InstanceParams params{3, 2, 3, 5};
  const RawInstance inst = sample_f_blocks(params);
  REQUIRE(inst.f_blocks.size() == 4);
  GaussianStream s(5, "f/g");
  const double scale = std::pow(3.0, -1.5);
  std::uint64_t idx = 0;
  for (Index r = 0; r < 3; ++r)
    for (Index ss = 0; ss < 3; ++ss)
      for (Index t = 0; t < 2; ++t)
        for (Index v = 0; v < 2; ++v) {
          const Complex got = inst.f(t, v)(r, ss);
          CHECK(got.real() == doctest::Approx(scale * s.normal(idx)).epsilon(1e-14));
          CHECK(got.imag() == 0.0);
          ++idx;
        }
}

TEST_CASE("phi_hat stacks the blocks with the D-major convention") {
  const RawInstance inst = sample_f_blocks({3, 2, 4, 6});
  const CMatrix phi = phi_hat_matrix(inst);
  REQUIRE(phi.rows() == 8);
  // phi_hat[(r m + t), (s m + v)] = D * f_tv(r, s) with the D^{-3/2} in f.
  for (Index r = 0; r < 4; ++r)
    for (Index s = 0; s < 4; ++s)
      for (Index t = 0; t < 2; ++t)
        for (Index v = 0; v < 2; ++v)
          CHECK(std::abs(phi(r * 2 + t, s * 2 + v) - 4.0 * inst.f(t, v)(r, s)) < 1e-15);
}

TEST_CASE("u map tensor holds the blocks along mode 0") {
  const RawInstance inst = sample_f_blocks({3, 2, 3, 7});
  const DenseTensor w = u_map_tensor(inst);
  REQUIRE(w.dims == std::vector<Index>{4, 3, 3});
  for (Index t = 0; t < 2; ++t)
    for (Index v = 0; v < 2; ++v)
      for (Index r = 0; r < 3; ++r)
        for (Index s = 0; s < 3; ++s) CHECK(w.at({t * 2 + v, r, s}) == inst.f(t, v)(r, s));
}

TEST_CASE("tau tensor and matrix agree with the rank-one identity") {
  const TauSample tau = sample_tau(2, 3, 9);
  REQUIRE(tau.g.size() == 8);
  const CMatrix m = tau.matrix();
  REQUIRE(m.rows() == 8);
  // m = g gp^T: rank one.
  for (Index i = 0; i < 8; ++i)
    for (Index j = 0; j < 8; ++j) CHECK(m(i, j) == Complex(tau.g[i] * tau.gp[j], 0.0));
  CHECK(operator_norm(m) == doctest::Approx(tau.g.norm() * tau.gp.norm()).epsilon(1e-12));

  // Tensor arrangement: mode j holds the pair (i_j, i'_j) as i_j * n + i'_j.
  const DenseTensor t = tau.tensor();
  REQUIRE(t.dims == std::vector<Index>{4, 4, 4});
  const CMatrix back = tensor_to_kron_matrix(t, {2, 2, 2}, {2, 2, 2});
  CHECK((back - m).norm() == 0.0);
}

TEST_CASE("tau draws use the documented streams") {
  const TauSample tau = sample_tau(3, 2, 11);
  GaussianStream g(11, "tau/g"), gp(11, "tau/gp");
  for (Index i = 0; i < tau.g.size(); ++i) {
    CHECK(tau.g[i] == g.normal(static_cast<std::uint64_t>(i)));
    CHECK(tau.gp[i] == gp.normal(static_cast<std::uint64_t>(i)));
  }
}

TEST_CASE("threshold formulas") {
  const TauThresholds th = tau_thresholds_from_constants(3, 3, 2.0, 0.5);
  CHECK(th.eps_ub == doctest::Approx(2.0 * 3.0 * std::pow(std::log(3.0), 1.5)).epsilon(1e-12));
  CHECK(th.op_lb == doctest::Approx(0.5 * 27.0).epsilon(1e-12));
  // n = 1 uses log(2) to avoid a vanishing threshold.
  CHECK(tau_thresholds_from_constants(1, 2, 1.0, 1.0).eps_ub ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("resample_good_tau honors thresholds and reports tries") {
  const AlsOptions opt{8, 200, 1e-8, 0};
  // Accepting thresholds: trivially satisfied, one try.
  TauThresholds loose{1e9, 0.0};
  const TauAcceptance a = resample_good_tau(2, 3, 3, loose, 5, opt);
  CHECK(a.accepted);
  CHECK(a.tries == 1);
  CHECK(a.sample.seed == 3);

  // Impossible thresholds: exhausts the budget, last draw returned.
  TauThresholds impossible{0.0, 1e9};
  const TauAcceptance b = resample_good_tau(2, 3, 3, impossible, 4, opt);
  CHECK(!b.accepted);
  CHECK(b.tries == 4);
  CHECK(b.sample.seed == 6);  // seed + (tries - 1)

  // Default thresholds at desk scale accept within the documented budget.
  int accepted = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const TauAcceptance c =
        resample_good_tau(2, 3, seed, default_tau_thresholds(2, 3), 4, opt);
    accepted += c.accepted ? 1 : 0;
  }
  CHECK(accepted >= 18);  // >= 90% within 4 tries
}

TEST_CASE("acceptance fields match recomputation") {
  const AlsOptions opt{8, 200, 1e-8, 0};
  const TauAcceptance a = resample_good_tau(2, 3, 12, default_tau_thresholds(2, 3), 8, opt);
  CHECK(a.op_norm == doctest::Approx(a.sample.g.norm() * a.sample.gp.norm()).epsilon(1e-12));
  const L2Result eps = l2_injective_lb(a.sample.tensor(), opt);
  CHECK(a.eps_estimate == doctest::Approx(eps.estimate.value).epsilon(1e-12));
  if (a.accepted) {
    CHECK(a.eps_estimate <= a.thresholds.eps_ub);
    CHECK(a.op_norm >= a.thresholds.op_lb);
  }
}

TEST_CASE("calibrate_tau_constants returns the documented margins") {
  const AlsOptions opt{6, 150, 1e-7, 0};
  const auto [c_eps, c_op] = calibrate_tau_constants({2}, 3, 21, 5, opt);
  CHECK(c_eps > 0.0);
  CHECK(c_op > 0.0);

  // Recompute the two medians directly.
  std::vector<double> eps_rates, op_rates;
  for (int t = 0; t < 21; ++t) {
    const TauSample tau = sample_tau(2, 3, 5 * 1000000 + 2 * 10000 + static_cast<std::uint64_t>(t));
    const double denom = 2.0 * std::pow(std::log(2.0), 1.5);
    eps_rates.push_back(l2_injective_lb(tau.tensor(), opt).estimate.value / denom);
    op_rates.push_back(tau.g.norm() * tau.gp.norm() / 8.0);
  }
  std::sort(eps_rates.begin(), eps_rates.end());
  std::sort(op_rates.begin(), op_rates.end());
  CHECK(c_eps == doctest::Approx(1.5 * eps_rates[10]).epsilon(1e-12));
  CHECK(c_op == doctest::Approx(op_rates[10] / 1.5).epsilon(1e-12));
}

TEST_CASE("build_z lists terms with coefficients g[t] g'[v]") {
  const RawInstance inst = sample_f_blocks({2, 2, 2, 31});
  const TauSample tau = sample_tau(2, 2, 31);
  const KronTermSum z = build_z(inst, tau);
  REQUIRE(z.terms.size() == 16);
  REQUIRE(z.local_dims == std::vector<Index>{2, 2});
  // Term (t_vec, v_vec) in lexicographic order: flat(t_vec) * m^k + flat(v_vec).
  std::size_t idx = 0;
  for (Index t0 = 0; t0 < 2; ++t0)
    for (Index t1 = 0; t1 < 2; ++t1)
      for (Index v0 = 0; v0 < 2; ++v0)
        for (Index v1 = 0; v1 < 2; ++v1) {
          const KronTerm& term = z.terms[idx++];
          const Complex expect(tau.g[t0 * 2 + t1] * tau.gp[v0 * 2 + v1], 0.0);
          CHECK(term.coeff == expect);
          CHECK((term.factors[0] - inst.f(t0, v0)).norm() == 0.0);
          CHECK((term.factors[1] - inst.f(t1, v1)).norm() == 0.0);
        }
}

TEST_CASE("hermitize doubles dimensions and produces a hermitian element") {
  const RawInstance inst = sample_f_blocks({2, 2, 3, 33});
  const TauSample tau = sample_tau(2, 2, 33);
  const KronTermSum z = build_z(inst, tau);
  const KronTermSum zh = hermitize(z);
  REQUIRE(zh.local_dims == std::vector<Index>{6, 6});
  const CMatrix dense = densify(zh);
  CHECK(hermiticity_defect(dense) < 1e-13);

  // j(x) = [[0, x], [x^dag, 0]] per factor.
  const CMatrix f = inst.f(0, 1);
  const CMatrix hf = hermitize_factor(f);
  REQUIRE(hf.rows() == 6);
  CHECK((hf.block(0, 3, 3, 3) - f).norm() == 0.0);
  CHECK((hf.block(3, 0, 3, 3) - f.adjoint()).norm() == 0.0);
  CHECK(hf.block(0, 0, 3, 3).norm() == 0.0);
  CHECK(hf.block(3, 3, 3, 3).norm() == 0.0);
  CHECK(operator_norm(hf) == doctest::Approx(operator_norm(f)).epsilon(1e-12));
}

TEST_CASE("state phi: sector layout, unit norm, exact sector orthogonality") {
  const TauSample tau = sample_tau(2, 3, 41);
  const StateVector phi = build_state_phi(tau);
  REQUIRE(phi.main_dim == 8);
  REQUIRE(phi.amplitudes.size() == 64);
  CHECK(phi.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const double nrm = std::sqrt(tau.g.squaredNorm() + tau.gp.squaredNorm());
  CHECK(phi.normalization == doctest::Approx(nrm).epsilon(1e-12));
  for (Index i = 0; i < 8; ++i)
    for (Index a = 0; a < 8; ++a) {
      const Complex amp = phi.amplitudes[i * 8 + a];
      if (a == 0)
        CHECK(std::abs(amp - Complex(tau.g[i] / nrm, 0.0)) < 1e-14);
      else if (a == 7)
        CHECK(std::abs(amp - Complex(tau.gp[i] / nrm, 0.0)) < 1e-14);
      else
        CHECK(amp == Complex(0.0, 0.0));
    }
}

TEST_CASE("state phi reduced main-system state for orthogonal sectors") {
  TauSample tau = sample_tau(2, 2, 43);
  // Rig g perpendicular to g' so the reduced state has the two masses as
  // eigenvalues exactly.
  tau.g = RVector::Zero(4);
  tau.gp = RVector::Zero(4);
  tau.g[0] = 2.0;
  tau.gp[1] = 1.0;
  const StateVector phi = build_state_phi(tau);
  CMatrix rho = CMatrix::Zero(4, 4);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) {
      Complex acc(0, 0);
      for (Index a = 0; a < 4; ++a)
        acc += phi.amplitudes[i * 4 + a] * std::conj(phi.amplitudes[j * 4 + a]);
      rho(i, j) = acc;
    }
  const Eigensystem eig = hermitian_spectral(rho);
  CHECK(eig.values[0] == doctest::Approx(0.8).epsilon(1e-12));  // ||g||^2 / (4+1)
  CHECK(eig.values[1] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("explicit game element equals densified hermitized z up to trace norm") {
  const InstanceParams params{2, 2, 3, 51};
  const RawInstance inst = sample_f_blocks(params);
  const TauSample tau = sample_tau(2, 2, 51);
  const ExplicitGameElement element = build_explicit_game_element(inst, tau);
  const CMatrix direct = densify(hermitize(build_z(inst, tau)));
  CHECK(element.trace_norm == doctest::Approx(trace_norm(direct)).epsilon(1e-10));
  CHECK((element.matrix * element.trace_norm - direct).norm() < 1e-9 * direct.norm());
  CHECK(trace_norm(element.matrix) == doctest::Approx(1.0).epsilon(1e-10));
}
