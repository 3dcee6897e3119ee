#pragma once

#include <vector>

#include "xorsep/tensor.hpp"
#include "xorsep/types.hpp"

namespace xorsep {

// Sum of Kronecker products of square factors on a fixed k-fold tensor
// product; the structured representation of game elements. Kept structured:
// densification is on demand and capped.
struct KronTerm {
  Complex coeff;
  std::vector<CMatrix> factors;  // factors[j] is local_dims[j] x local_dims[j]
};

struct KronTermSum {
  std::vector<Index> local_dims;
  std::vector<KronTerm> terms;

  int order() const { return static_cast<int>(local_dims.size()); }
  Index total_dim() const;
  void check_shapes() const;  // throws on factor shape mismatch
};

// Hard cap on densified total dimension.
inline constexpr Index kDensifyCap = 16384;

// y = op x without materializing op.
CVector kron_matvec(const KronTermSum& op, const CVector& x);
CVector kron_matvec_adjoint(const KronTermSum& op, const CVector& x);

KronTermSum kron_adjoint(const KronTermSum& op);

// Dense materialization; throws if total_dim() > kDensifyCap.
CMatrix densify(const KronTermSum& op);

// View as a k-way tensor over the factor spaces l2^{d_j^2} (factor vec'd
// row-major). The CP column layout of the same data lives in norms.hpp.
DenseTensor kron_to_tensor(const KronTermSum& op);

// Per-mode bitwise dedup of term factors. Pipeline elements reuse a handful
// of blocks across many terms; collapsing them turns T x T Gram work into
// unique x unique work.
struct FactorDedup {
  std::vector<std::vector<CMatrix>> unique;  // [mode][u]
  std::vector<std::vector<Index>> map;       // [mode][term] -> u
};
FactorDedup dedup_factors(const KronTermSum& op);

// <a, b> = tr(a^T b) on the big space, computed term-pairwise.
Complex dual_pair(const KronTermSum& a, const KronTermSum& b);

// Frobenius norm on the big space via factor Gram matrices.
double frobenius_norm(const KronTermSum& op);

// sum_t |c_t| prod_j ||factor_tj||_1: triangle-inequality upper bound on the
// trace norm of the big matrix.
double trace_norm_triangle_ub(const KronTermSum& op);

struct OperatorNormResult {
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
};

// Largest singular value. Dense SVD when total_dim() <= dense_cutoff,
// otherwise power iteration on op^dag op with a deterministic seeded start;
// non-convergence is reported, not thrown.
OperatorNormResult operator_norm(const KronTermSum& op, double tol = 1e-10,
                                 int max_iterations = 500, Index dense_cutoff = 4096,
                                 std::uint64_t seed = 0);

}  // namespace xorsep
