#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xorsep/kron.hpp"
#include "xorsep/norms.hpp"
#include "xorsep/tensor.hpp"
#include "xorsep/types.hpp"

namespace xorsep {

struct InstanceParams {
  int k = 3;
  Index m = 2;  // block index range; f_tv for t,v in [m]
  Index D = 8;  // local dimension of the raw factors
  std::uint64_t seed = 0;
};

// Gaussian coefficients g_{rs}^{tv} and the normalized blocks
// f_tv = D^{-3/2} sum_rs g_{rs}^{tv} e_rs. Entries are real (zero imaginary
// part); draw order is index (r, s, t, v) lexicographic on stream "f/g".
struct RawInstance {
  InstanceParams params;
  std::vector<CMatrix> f_blocks;  // m*m blocks, index t*m + v, each D x D

  const CMatrix& f(Index t, Index v) const { return f_blocks[t * params.m + v]; }
};

RawInstance sample_f_blocks(const InstanceParams& params);

// u: l2^{m^2} -> S_inf^D, u(e_tv) = f_tv, as the 3-way tensor
// W[(tv), r, s] = f_tv[r, s]. Its norm is the l2 injective norm of W.
DenseTensor u_map_tensor(const RawInstance& inst);
L2Result u_map_norm(const RawInstance& inst, const AlsOptions& opt = {});

// phi_hat = D^{-1/2} sum g_{rs}^{tv} e_rs (x) e_tv as a Dm x Dm matrix
// (l2^D-major index). The map phi: S_1^D -> S_inf^m acts through
// apply_map_from_tensor(phi_hat, m, x); cb norm = operator_norm(phi_hat).
CMatrix phi_hat_matrix(const RawInstance& inst);

// tau = sum g_i g'_{i'} e_{i_1 i'_1} (x) ... (x) e_{i_k i'_k}: k-way tensor
// over l2^{n^2} factors; as an n^k x n^k matrix it is the rank-one g g'^T.
struct TauSample {
  Index n = 2;
  int k = 3;
  std::uint64_t seed = 0;
  RVector g, gp;  // length n^k, streams "tau/g" and "tau/gp"

  DenseTensor tensor() const;
  CMatrix matrix() const;
};

TauSample sample_tau(Index n, int k, std::uint64_t seed);

// Acceptance thresholds for tau: the injective estimate must not exceed
// c_eps * n * log(max(n,2))^{k/2} and the operator norm must reach
// c_op * n^k. Defaults are fitted medians at desk scale inflated/deflated by
// the 1.5 safety factor; calibrate_tau_constants refits them from samples.
struct TauThresholds {
  double eps_ub = 0.0;
  double op_lb = 0.0;
};

TauThresholds default_tau_thresholds(Index n, int k);
TauThresholds tau_thresholds_from_constants(Index n, int k, double c_eps, double c_op);

// Refit (c_eps, c_op) from fresh draws: 1.5 * worst lower-median eps rate over
// the given n, and worst lower-median operator-norm rate divided by 1.5. The
// shipped default constants were frozen from this procedure.
std::pair<double, double> calibrate_tau_constants(const std::vector<Index>& ns, int k,
                                                  int trials, std::uint64_t seed,
                                                  const AlsOptions& opt = {});

struct TauAcceptance {
  TauSample sample;
  TauThresholds thresholds;
  double eps_estimate = 0.0;
  double op_norm = 0.0;
  int tries = 0;
  bool accepted = false;
};

// Draws tau with sub-seeds seed, seed+1, ... until both thresholds hold or
// max_tries is exhausted; the last draw is returned either way.
TauAcceptance resample_good_tau(Index n, int k, std::uint64_t seed,
                                const TauThresholds& thresholds, int max_tries = 16,
                                const AlsOptions& eps_opt = {});

// z = (u (x) ... (x) u)(tau): m^{2k} terms, term (t_vec, v_vec) has
// coefficient g[t_vec] g'[v_vec] and factors f_{t_j v_j}. Requires tau.n == m.
KronTermSum build_z(const RawInstance& inst, const TauSample& tau);

// j(x) = [[0, x], [x^dag, 0]] per factor; doubles each local dimension and
// preserves factor operator norms. The result is hermitian whenever all
// coefficients are real (every ensemble element here is).
CMatrix hermitize_factor(const CMatrix& x);
KronTermSum hermitize(const KronTermSum& z);

// |phi> = (sum_i g_i |i>|0..0> + sum_i g'_i |i>|1..1>) / sqrt(||g||^2+||g'||^2)
// on l2^{m^k} (x) (l2^2)^{(x) k}; the two sector overlaps vanish exactly.
struct StateVector {
  CVector amplitudes;
  double normalization = 1.0;  // sqrt(||g||^2 + ||g'||^2), divided out
  Index main_dim = 1;          // m^k; ancilla part is 2^k
};

StateVector build_state_phi(const TauSample& tau);

// Direct densification of the hermitized game element by mode-wise
// contraction (an independent code path from densify + hermitize), normalized
// to unit trace norm. Requires (2D)^k within the densification cap.
struct ExplicitGameElement {
  CMatrix matrix;       // hermitian, trace norm 1
  double trace_norm;    // of the unnormalized element
  InstanceParams params;
};

ExplicitGameElement build_explicit_game_element(const RawInstance& inst,
                                                const TauSample& tau);

}  // namespace xorsep
