#pragma once

#include <vector>

#include "xorsep/types.hpp"

namespace xorsep {

// Relative hermiticity defect: max|A - A^dag| / max(1, max|A|).
double hermiticity_defect(const CMatrix& a);
bool is_hermitian(const CMatrix& a, double rel_tol = 1e-10);

// Largest singular value (dense SVD).
double operator_norm(const CMatrix& a);

// Sum of singular values. Uses |eigenvalues| when `a` is hermitian.
double trace_norm(const CMatrix& a);

double frobenius_norm(const CMatrix& a);

// Eigensystem of a hermitian matrix, eigenvalues descending, eigenvector k in
// column k. Throws std::invalid_argument if the hermiticity defect exceeds
// rel_tol.
struct Eigensystem {
  RVector values;
  CMatrix vectors;
};
Eigensystem hermitian_spectral(const CMatrix& a, double rel_tol = 1e-10);

// Transpose dual pairing <a, b> = tr(a^T b) = sum_ij a_ij b_ij. Every pairing
// between an element and a functional in this library routes through here.
Complex dual_pair(const CMatrix& a, const CMatrix& b);

// Map associated to a tensor t_hat on H (x) H' (H-major index r*dim_out + t):
//   T(x)[t, v] = sum_{r,s} t_hat[(r,t), (s,v)] x[r,s],
// i.e. T(x) = tr_H(t_hat (x^T (x) 1)). `dim_out` divides t_hat rows/cols.
CMatrix apply_map_from_tensor(const CMatrix& t_hat, Index dim_out, const CMatrix& x);

// Clamp tiny negative eigenvalues of a hermitian matrix to exactly 0.
// Eigenvalues in [-floor, 0) are clipped; anything below -floor throws.
CMatrix clip_psd(const CMatrix& a, double floor = 1e-10);

// Partial trace of `a` over the legs with keep[i] == false. `dims` are the
// per-leg dimensions, lexicographic order, first leg slowest.
CMatrix partial_trace(const CMatrix& a, const std::vector<Index>& dims,
                      const std::vector<bool>& keep);

// Dense Kronecker product of a list of matrices, first factor slowest index.
CMatrix kron_all(const std::vector<CMatrix>& factors);

}  // namespace xorsep
