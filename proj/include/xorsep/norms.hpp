#pragma once

#include <vector>

#include "xorsep/kron.hpp"
#include "xorsep/tensor.hpp"
#include "xorsep/types.hpp"

namespace xorsep {

// ---------------------------------------------------------------------------
// l2 injective norm: sup |<t, a_1 (x) ... (x) a_k>| over unit vectors,
// bilinear pairing. Lower bounds come from alternating maximization (each
// sweep is exact per mode, so the objective is monotone and any iterate is a
// certificate); upper bounds from unfolding operator norms.
// ---------------------------------------------------------------------------

struct L2Certificate {
  std::vector<CVector> vectors;  // unit per mode
  double value = 0.0;
};

struct L2Result {
  NormEstimate estimate;
  L2Certificate certificate;
  std::vector<double> trace;  // objective after every update, monotone
};

L2Result l2_injective_lb(const DenseTensor& t, const AlsOptions& opt = {});
double l2_certificate_value(const DenseTensor& t, const L2Certificate& cert);

NormEstimate l2_injective_ub_unfolding(const DenseTensor& t);

// CP form: term t contributes coeff[t] * (x)_j modes[j].col(t). KronTermSum
// maps onto this with vec'd factors; rank stays at the term count, which keeps
// unfolding norms computable through T x T Gram matrices at any dimension.
struct CpForm {
  CVector coeff;
  std::vector<CMatrix> modes;  // modes[j]: n_j x T

  int order() const { return static_cast<int>(modes.size()); }
  Index term_count() const { return coeff.size(); }
};

CpForm cp_from_kron(const KronTermSum& op);

L2Result l2_injective_lb(const CpForm& t, const AlsOptions& opt = {});
NormEstimate l2_injective_ub_unfolding(const CpForm& t);

// ---------------------------------------------------------------------------
// Injective (epsilon) norm with S_inf factors: sup over product functionals
// from the S_1 unit balls. Extreme points are rank-one, so a certificate is a
// pair of unit vectors per factor and evaluates as
//   |sum_t c_t prod_j <left_j| A_tj |right_j>|.
// ---------------------------------------------------------------------------

struct EpsCertificate {
  std::vector<CVector> left, right;  // unit vectors per factor
  double value = 0.0;
};

struct EpsResult {
  NormEstimate estimate;
  EpsCertificate certificate;
  std::vector<double> trace;
};

// Alternating rank-one ascent; per-factor update is the leading singular pair
// of the effective matrix, ties broken at the smallest index. Certified lower
// bound on the epsilon norm.
EpsResult eps_sinfty_lb(const KronTermSum& z, const AlsOptions& opt = {});

// Replays a certificate; throws if the vectors are not unit within 1e-8.
double eps_certificate_value(const KronTermSum& z, const EpsCertificate& cert);

// Certified upper chain: Ball(S_1^d) is contained in Ball(S_2^d), so the
// epsilon norm is at most the l2 injective norm of the vec'd tensor, which is
// at most the best unfolding operator norm (computed rank-aware).
NormEstimate eps_sinfty_ub_chain(const KronTermSum& z);

// ---------------------------------------------------------------------------
// Minimal tensor norm of S_1 factors, unitary-certificate form: with one
// ancilla of dimension d' per factor,
//   F(U, psi, eta) = <psi| (x)_i tr_{H_i}(U_i (A_i (x) 1)) |eta>
// extended linearly over terms; the norm is the sup over unitaries and unit
// vectors, and any evaluation is a certified lower bound.
// ---------------------------------------------------------------------------

struct MinNormCertificate {
  std::vector<CMatrix> unitaries;  // U_i on H_i (x) C^{d'}, H_i-major index
  CVector psi, eta;                // unit, on (C^{d'})^{(x) k}
  Index ancilla_dim = 1;
  double value = 0.0;  // phase absorbed into eta: the sandwich is real >= 0
};

struct MinNormResult {
  NormEstimate estimate;
  MinNormCertificate certificate;
  std::vector<double> trace;
};

// See-saw: unitary updates via polar part of the effective matrix (value
// becomes its trace norm), state updates via the leading singular pair of the
// effective ancilla operator. Both are exact partial maximizers, so the trace
// is monotone.
MinNormResult min_norm_seesaw(const KronTermSum& z, Index ancilla_dim,
                              const AlsOptions& opt = {});

// As above, with deterministic warm starts ahead of the random restarts. Each
// entry is one tuple of k unitaries on local_dim * ancilla_dim; the see-saw
// state update then starts each warm restart at the value that tuple already
// certifies, so the result dominates it.
MinNormResult min_norm_seesaw(const KronTermSum& z, Index ancilla_dim, const AlsOptions& opt,
                              const std::vector<std::vector<CMatrix>>& warm_starts);

// Replays a certificate. Throws if any U_i is not unitary within 1e-8 or
// psi/eta are not unit within 1e-8. Returns |F|.
double min_norm_certificate_value(const KronTermSum& z, const MinNormCertificate& cert);

// Effective ancilla operator N = sum_t c_t (x)_i tr_{H_i}(U_i (A_ti (x) 1)):
// the partial-trace object the certificate sandwiches. Exposed for strategy
// construction and oracle tests.
CMatrix min_norm_ancilla_operator(const KronTermSum& z,
                                  const std::vector<CMatrix>& unitaries,
                                  Index ancilla_dim);

// ---------------------------------------------------------------------------
// Remaining norm interfaces.
// ---------------------------------------------------------------------------

// cb norm of the map S_1^D -> S_inf^m with tensor t_hat: equals the operator
// norm of t_hat.
double cb_norm_s1_to_sinf(const CMatrix& t_hat);

// Projective upper bound from an explicit decomposition: sum_t |c_t| prod_j
// ||factor||_1. Verifies that the decomposition densifies to `target` within
// `check_tol` (absolute, entrywise) and throws otherwise.
NormEstimate projective_ub(const KronTermSum& decomposition, const CMatrix& target,
                           double check_tol = 1e-10);

}  // namespace xorsep
