#pragma once

#include <functional>
#include <vector>

#include "xorsep/kron.hpp"
#include "xorsep/norms.hpp"
#include "xorsep/types.hpp"

namespace xorsep {

// k-player quantum XOR game: hermitian element of unit trace norm on the
// tensor product of the local spaces.
struct QuantumXorGame {
  int k = 1;
  std::vector<Index> local_dims;
  CMatrix g;

  Index total_dim() const;
};

// Validates hermiticity (relative defect <= herm_tol) and divides out the
// trace norm. Throws on a non-hermitian or zero input.
QuantumXorGame game_from_hermitian(const CMatrix& h, std::vector<Index> local_dims,
                                   double herm_tol = 1e-10);

// Two-question spectral form: G = sum_x c_x p_x rho_x with c = (+1, -1),
// p the positive/negative spectral masses (p sums to 1 for a unit-trace-norm
// game) and rho_x the normalized spectral parts. A semidefinite game
// degenerates to a single question.
struct GameDecomposition {
  std::vector<double> prob;
  std::vector<double> sign;
  std::vector<CMatrix> states;  // density matrices (PSD after 1e-10 clip)
};

GameDecomposition decompose_two_question(const QuantumXorGame& game);

// sum_x p_x c_x gamma(rho_x) for a correlation functional gamma.
double bias_of_correlation(const GameDecomposition& decomposition,
                           const std::function<double(const CMatrix&)>& gamma);

// Entangled strategy: per player a hermitian observable of operator norm
// <= 1 on H_i (x) H''_i, plus a shared density matrix on (x)_i H''_i.
struct EntangledStrategy {
  std::vector<Index> local_dims;    // H_i
  std::vector<Index> ancilla_dims;  // H''_i
  std::vector<CMatrix> observables;
  CMatrix shared_state;
};

// Dilation of a min-norm certificate: per player the hermitian unitary
// A_i = U_i (x) e01 + U_i^dag (x) e10 (ancilla d' * 2), shared state the pure
// (|psi>|0..0> + |eta>|1..1>)/sqrt(2) with per-player ancilla legs. On a
// hermitian game the strategy's bias equals Re of the certificate sandwich,
// i.e. the stored (phase-absorbed) certificate value.
EntangledStrategy certificate_to_strategy(const MinNormCertificate& cert,
                                          const std::vector<Index>& local_dims);

// tr((A_1 (x) ... (x) A_k)(G (x) rho')) with interleaved player-local legs.
double entangled_bias_value(const QuantumXorGame& game, const EntangledStrategy& strat);

// See-saw lower bound on the entangled bias; certificate convertible to a
// strategy achieving the value.
struct EntangledBiasResult {
  NormEstimate estimate;
  MinNormCertificate certificate;
  EntangledStrategy strategy;
  std::vector<double> trace;
};

EntangledBiasResult entangled_bias_lb(const QuantumXorGame& game, Index ancilla_dim,
                                      const AlsOptions& opt = {});

// Product (unentangled, ancilla-free) strategy: one hermitian observable of
// norm <= 1 per player; POVM effects are (1 +/- A_i)/2.
struct ProductStrategy {
  std::vector<Index> local_dims;
  std::vector<CMatrix> observables;
};

struct ProductBiasResult {
  NormEstimate estimate;
  ProductStrategy strategy;
  std::vector<double> trace;
};

// See-saw over product observables; per-player update is the sign of the
// hermitian environment (exact partial maximizer, monotone).
ProductBiasResult product_bias_lb(const QuantumXorGame& game, const AlsOptions& opt = {});

// Upper bounds on the separable bias: (prod local_dims) * epsilon-norm
// bounds of G. The certified column uses the unfolding chain, the heuristic
// one the ALS estimate (labeled heuristic: it mixes a heuristic value into an
// upper-bound role).
struct SepBiasBounds {
  NormEstimate certified;
  NormEstimate heuristic;
};

SepBiasBounds sep_bias_ub(const QuantumXorGame& game, const AlsOptions& opt = {});

// Matrix-unit expansion of a dense operator into a KronTermSum (one term per
// nonzero entry). Intended for small dense games feeding structured solvers.
KronTermSum kron_from_dense_game(const QuantumXorGame& game);

}  // namespace xorsep
