#include "xorsep/simulator.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "xorsep/rng.hpp"
#include "xorsep/tensor.hpp"

namespace xorsep {
namespace {

// tr[((x)_i X_i)(rho_q interleaved with rho_shared)] through per-player
// transfer maps; X_i acts on H_i (x) H''_i.
double interleaved_value(const std::vector<Index>& local_dims,
                         const std::vector<Index>& anc_dims, const std::vector<CMatrix>& ops,
                         const CMatrix& rho_q, const CMatrix& rho_shared) {
  const int k = static_cast<int>(local_dims.size());
  DenseTensor acc = kron_matrix_to_tensor(rho_shared, anc_dims, anc_dims);
  for (int i = 0; i < k; ++i) {
    const Index d = local_dims[i], anc = anc_dims[i];
    const CMatrix& x = ops[i];
    CMatrix m(d * d, anc * anc);
    for (Index r = 0; r < d; ++r)
      for (Index s = 0; s < d; ++s)
        for (Index b = 0; b < anc; ++b)
          for (Index a = 0; a < anc; ++a) m(r * d + s, b * anc + a) = x(r * anc + a, s * anc + b);
    acc = apply_mode(acc, i, m);
  }
  const CMatrix k_mat = tensor_to_kron_matrix(acc, local_dims, local_dims);
  return ((rho_q.array() * k_mat.transpose().array()).sum()).real();
}

// tr[((x)_i X_i) rho] for ancilla-free players.
double plain_value(const std::vector<Index>& local_dims, const std::vector<CMatrix>& ops,
                   const CMatrix& rho) {
  const int k = static_cast<int>(local_dims.size());
  DenseTensor acc = kron_matrix_to_tensor(rho, local_dims, local_dims);
  for (int j = k - 1; j >= 0; --j) {
    const Index d = local_dims[j];
    // w[x*d+y] = X[y,x]: column-major storage
    const CVector w = Eigen::Map<const CVector>(ops[j].data(), d * d);
    acc = contract_mode(acc, j, w);
  }
  return acc.data[0].real();
}

// Assembles the table from subset correlations V_S via
// P(a) = 2^{-k} sum_S prod_{i in S} a_i V_S; V_empty = 1 up to trace error.
OutcomeTable table_from_subset_values(int k, const std::vector<double>& subset_values) {
  const Index n = Index(1) << k;
  OutcomeTable table;
  table.k = k;
  table.probs = RVector::Zero(n);
  for (Index p = 0; p < n; ++p) {
    double sum = 0.0;
    for (Index s = 0; s < n; ++s) {
      // player i in subset iff bit (k-1-i) of s; sign product over members
      const int parity = std::popcount(static_cast<std::uint64_t>(s & p));
      sum += (parity % 2 == 0 ? 1.0 : -1.0) * subset_values[s];
    }
    table.probs[p] = sum / static_cast<double>(n);
  }

  double mass = 0.0;
  for (Index p = 0; p < n; ++p) {
    double& q = table.probs[p];
    if (q < -1e-10 || q > 1.0 + 1e-10)
      throw std::runtime_error("outcome_distribution: probability outside [0,1]");
    q = std::min(std::max(q, 0.0), 1.0);
    mass += q;
  }
  table.clip_drift = std::abs(1.0 - mass);
  if (table.clip_drift > 1e-8)
    throw std::runtime_error("outcome_distribution: probability mass drift");
  table.probs /= mass;

  table.correlation = 0.0;
  for (Index p = 0; p < n; ++p) {
    const int parity = std::popcount(static_cast<std::uint64_t>(p));
    table.correlation += (parity % 2 == 0 ? 1.0 : -1.0) * table.probs[p];
  }
  return table;
}

}  // namespace

OutcomeTable outcome_distribution(const EntangledStrategy& strat, const CMatrix& rho) {
  const int k = static_cast<int>(strat.local_dims.size());
  const Index n = Index(1) << k;
  std::vector<double> subset_values(n);
  std::vector<CMatrix> ops(k);
  for (Index s = 0; s < n; ++s) {
    for (int i = 0; i < k; ++i) {
      const Index dim = strat.local_dims[i] * strat.ancilla_dims[i];
      const bool member = (s >> (k - 1 - i)) & 1;
      ops[i] = member ? strat.observables[i] : CMatrix::Identity(dim, dim);
    }
    subset_values[s] =
        interleaved_value(strat.local_dims, strat.ancilla_dims, ops, rho, strat.shared_state);
  }
  return table_from_subset_values(k, subset_values);
}

OutcomeTable outcome_distribution(const ProductStrategy& strat, const CMatrix& rho) {
  const int k = static_cast<int>(strat.local_dims.size());
  const Index n = Index(1) << k;
  std::vector<double> subset_values(n);
  std::vector<CMatrix> ops(k);
  for (Index s = 0; s < n; ++s) {
    for (int i = 0; i < k; ++i) {
      const Index dim = strat.local_dims[i];
      const bool member = (s >> (k - 1 - i)) & 1;
      ops[i] = member ? strat.observables[i] : CMatrix::Identity(dim, dim);
    }
    subset_values[s] = plain_value(strat.local_dims, ops, rho);
  }
  return table_from_subset_values(k, subset_values);
}

PlayResult play_tables(const GameDecomposition& decomposition,
                       const std::vector<OutcomeTable>& tables, std::uint64_t rounds,
                       std::uint64_t seed, std::ostream* round_log) {
  if (tables.size() != decomposition.prob.size())
    throw std::invalid_argument("play_tables: one table per question required");
  PlayResult out;
  out.rounds = rounds;
  for (std::size_t x = 0; x < tables.size(); ++x)
    out.analytic_bias += decomposition.prob[x] * decomposition.sign[x] * tables[x].correlation;

  GaussianStream stream(seed, "sim/play");
  double payoff_sum = 0.0;
  for (std::uint64_t r = 0; r < rounds; ++r) {
    const double u_question = stream.uniform(2 * r);
    std::size_t x = 0;
    double cum = 0.0;
    for (; x < decomposition.prob.size(); ++x) {
      cum += decomposition.prob[x];
      if (u_question <= cum) break;
    }
    if (x == decomposition.prob.size()) x -= 1;  // guard against fp shortfall

    const double u_outcome = stream.uniform(2 * r + 1);
    const RVector& probs = tables[x].probs;
    Index p = 0;
    cum = 0.0;
    for (; p < probs.size(); ++p) {
      cum += probs[p];
      if (u_outcome <= cum) break;
    }
    if (p == probs.size()) p -= 1;

    const int parity = std::popcount(static_cast<std::uint64_t>(p));
    const double payoff = decomposition.sign[x] * (parity % 2 == 0 ? 1.0 : -1.0);
    payoff_sum += payoff;
    if (round_log) (*round_log) << r << ' ' << x << ' ' << p << ' ' << payoff << '\n';
  }
  out.empirical_bias = rounds ? payoff_sum / static_cast<double>(rounds) : 0.0;

  const double var_unit = std::max(1.0 - out.analytic_bias * out.analytic_bias, 0.0);
  if (var_unit == 0.0 || rounds == 0) {
    const double diff = out.empirical_bias - out.analytic_bias;
    out.z_score = diff == 0.0 ? 0.0
                              : std::copysign(std::numeric_limits<double>::infinity(), diff);
  } else {
    out.z_score = (out.empirical_bias - out.analytic_bias) /
                  std::sqrt(var_unit / static_cast<double>(rounds));
  }
  return out;
}

PlayResult play(const QuantumXorGame& game, const EntangledStrategy& strat,
                std::uint64_t rounds, std::uint64_t seed, std::ostream* round_log) {
  const GameDecomposition decomposition = decompose_two_question(game);
  std::vector<OutcomeTable> tables;
  tables.reserve(decomposition.states.size());
  for (const auto& state : decomposition.states)
    tables.push_back(outcome_distribution(strat, state));
  return play_tables(decomposition, tables, rounds, seed, round_log);
}

PlayResult play(const QuantumXorGame& game, const ProductStrategy& strat, std::uint64_t rounds,
                std::uint64_t seed, std::ostream* round_log) {
  const GameDecomposition decomposition = decompose_two_question(game);
  std::vector<OutcomeTable> tables;
  tables.reserve(decomposition.states.size());
  for (const auto& state : decomposition.states)
    tables.push_back(outcome_distribution(strat, state));
  return play_tables(decomposition, tables, rounds, seed, round_log);
}

}  // namespace xorsep
