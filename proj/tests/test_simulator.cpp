#include <doctest/doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "xorsep/games.hpp"
#include "xorsep/linalg.hpp"
#include "xorsep/rng.hpp"
#include "xorsep/simulator.hpp"

using namespace xorsep;

namespace {

CMatrix random_matrix(Index n, std::uint64_t seed) {
  GaussianStream s(seed, "test/sim");
  CMatrix m(n, n);
  std::uint64_t idx = 0;
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) m(r, c) = Complex(s.normal(idx++), s.normal(idx++));
  return m;
}

QuantumXorGame random_game(int k, Index d, std::uint64_t seed) {
  const Index n = static_cast<Index>(std::pow(static_cast<double>(d), k));
  CMatrix h = random_matrix(n, seed);
  h = 0.5 * (h + h.adjoint()).eval();
  return game_from_hermitian(h, std::vector<Index>(static_cast<std::size_t>(k), d));
}

CMatrix random_state(Index n, std::uint64_t seed) {
  CMatrix g = random_matrix(n, seed);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

}  // namespace

TEST_CASE("outcome distribution is a probability vector with matching correlation") {
  ProductStrategy strat;
  strat.local_dims = {2, 2};
  CMatrix a = random_matrix(2, 1), b = random_matrix(2, 2);
  a = 0.5 * (a + a.adjoint()).eval();
  b = 0.5 * (b + b.adjoint()).eval();
  a /= operator_norm(a);
  b /= operator_norm(b);
  strat.observables = {a, b};
  const CMatrix rho = random_state(4, 3);

  const OutcomeTable table = outcome_distribution(strat, rho);
  REQUIRE(table.k == 2);
  REQUIRE(table.probs.size() == 4);
  double sum = 0.0, corr = 0.0;
  for (Index i = 0; i < 4; ++i) {
    CHECK(table.probs[i] >= 0.0);
    sum += table.probs[i];
    const int parity = ((i & 1) ? -1 : 1) * ((i & 2) ? -1 : 1);
    corr += parity * table.probs[i];
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(corr == doctest::Approx(table.correlation).epsilon(1e-12));

  // The correlation is the observable expectation.
  const double expect = (kron_all({a, b}) * rho).trace().real();
  CHECK(table.correlation == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("identity observables give a deterministic +1 outcome") {
  ProductStrategy strat;
  strat.local_dims = {2, 2};
  strat.observables = {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)};
  const OutcomeTable table = outcome_distribution(strat, random_state(4, 4));
  CHECK(table.probs[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(table.correlation == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("entangled outcome tables agree with the bias contraction") {
  const QuantumXorGame game = random_game(2, 2, 5);
  const EntangledBiasResult res = entangled_bias_lb(game, 2, AlsOptions{4, 100, 1e-9, 0});
  const GameDecomposition dec = decompose_two_question(game);
  double bias = 0.0;
  for (std::size_t x = 0; x < dec.prob.size(); ++x) {
    const OutcomeTable t = outcome_distribution(res.strategy, dec.states[x]);
    bias += dec.sign[x] * dec.prob[x] * t.correlation;
  }
  CHECK(bias == doctest::Approx(res.estimate.value).epsilon(1e-8));
}

TEST_CASE("play is deterministic in the seed and logs one line per round") {
  const QuantumXorGame game = random_game(2, 2, 6);
  const ProductBiasResult prod = product_bias_lb(game, AlsOptions{4, 100, 1e-9, 0});
  const PlayResult r1 = play(game, prod.strategy, 500, 11);
  const PlayResult r2 = play(game, prod.strategy, 500, 11);
  CHECK(r1.empirical_bias == r2.empirical_bias);
  CHECK(r1.analytic_bias == r2.analytic_bias);

  std::ostringstream log_a, log_b, log_c;
  (void)play(game, prod.strategy, 200, 13, &log_a);
  (void)play(game, prod.strategy, 200, 13, &log_b);
  (void)play(game, prod.strategy, 200, 14, &log_c);
  CHECK(log_a.str() == log_b.str());
  CHECK(log_a.str() != log_c.str());

  std::ostringstream log;
  (void)play(game, prod.strategy, 25, 13, &log);
  Index lines = 0;
  for (char c : log.str())
    if (c == '\n') ++lines;
  CHECK(lines == 25);
}

TEST_CASE("deterministic tables yield zero z-score") {
  ProductStrategy strat;
  strat.local_dims = {2, 2};
  strat.observables = {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)};
  // One-question game: any PSD game works.
  CMatrix h = random_matrix(4, 7);
  h = (h * h.adjoint()).eval();
  const QuantumXorGame game = game_from_hermitian(h, {2, 2});
  const PlayResult r = play(game, strat, 200, 3);
  CHECK(r.empirical_bias == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.analytic_bias == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empirical bias concentrates at CLT rate") {
  const QuantumXorGame game = random_game(3, 2, 8);
  const EntangledBiasResult res = entangled_bias_lb(game, 2, AlsOptions{4, 120, 1e-9, 0});
  int inside = 0;
  for (std::uint64_t run = 0; run < 20; ++run) {
    const PlayResult r = play(game, res.strategy, 20000, 100 + run);
    if (std::abs(r.z_score) < 4.0) ++inside;
    CHECK(r.analytic_bias == doctest::Approx(res.estimate.value).epsilon(1e-8));
  }
  CHECK(inside >= 19);  // 4 sigma misses are ~6e-5 per run
}
