#pragma once

#include <vector>

#include "xorsep/types.hpp"

namespace xorsep {

// Dense k-way tensor, entries flattened lexicographically (first mode
// slowest). Modes may have distinct dimensions.
struct DenseTensor {
  std::vector<Index> dims;
  CVector data;

  Index order() const { return static_cast<Index>(dims.size()); }
  Index size() const { return data.size(); }
  Complex& at(const std::vector<Index>& idx) { return data[flat_index(idx)]; }
  Complex at(const std::vector<Index>& idx) const { return data[flat_index(idx)]; }
  Index flat_index(const std::vector<Index>& idx) const;
};

DenseTensor zeros_tensor(std::vector<Index> dims);

// y[..., i', ...] = sum_i m[i', i] x[..., i, ...] on the given mode. The mode
// dimension may change (m need not be square); dims describes x.
CVector apply_mode(const CVector& x, const std::vector<Index>& dims, int mode,
                   const CMatrix& m);
DenseTensor apply_mode(const DenseTensor& t, int mode, const CMatrix& m);

// Bilinear contraction with a vector (no conjugation): removes `mode`.
DenseTensor contract_mode(const DenseTensor& t, int mode, const CVector& v);

// Unfolding: rows indexed by `row_modes` (ascending), columns by the
// complement (ascending), both lexicographic.
CMatrix matricize(const DenseTensor& t, const std::vector<int>& row_modes);

// All mode bipartitions up to complement (row side contains mode 0), so every
// unfolding operator norm appears exactly once.
std::vector<std::vector<int>> bipartitions(int order);

// Reinterprets a tensor whose mode j has dimension rows[j]*cols[j] (each index
// i_j = r_j*cols[j] + s_j) as the matrix M[(r_1..r_k), (s_1..s_k)]. This is
// the tensor-of-matrices to big-matrix identification used for operators on
// tensor products.
CMatrix tensor_to_kron_matrix(const DenseTensor& t, const std::vector<Index>& rows,
                              const std::vector<Index>& cols);

// Inverse of tensor_to_kron_matrix: a matrix on a k-fold tensor product
// becomes the k-way tensor of its index pairs, mode j of dimension
// rows[j]*cols[j] with pair index r_j*cols[j] + s_j.
DenseTensor kron_matrix_to_tensor(const CMatrix& m, const std::vector<Index>& rows,
                                  const std::vector<Index>& cols);

}  // namespace xorsep
