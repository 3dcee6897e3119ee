#include "xorsep/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace xorsep {
namespace {

Index product(const std::vector<Index>& dims) {
  return std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
}

}  // namespace

Index DenseTensor::flat_index(const std::vector<Index>& idx) const {
  if (idx.size() != dims.size()) throw std::invalid_argument("flat_index: order mismatch");
  Index flat = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= dims[i]) throw std::out_of_range("flat_index: out of range");
    flat = flat * dims[i] + idx[i];
  }
  return flat;
}

DenseTensor zeros_tensor(std::vector<Index> dims) {
  DenseTensor t;
  t.data = CVector::Zero(product(dims));
  t.dims = std::move(dims);
  return t;
}

CVector apply_mode(const CVector& x, const std::vector<Index>& dims, int mode,
                   const CMatrix& m) {
  const int k = static_cast<int>(dims.size());
  if (mode < 0 || mode >= k) throw std::invalid_argument("apply_mode: bad mode");
  if (x.size() != product(dims)) throw std::invalid_argument("apply_mode: size mismatch");
  if (m.cols() != dims[mode]) throw std::invalid_argument("apply_mode: matrix mismatch");

  Index left = 1, right = 1;
  for (int i = 0; i < mode; ++i) left *= dims[i];
  for (int i = mode + 1; i < k; ++i) right *= dims[i];
  const Index d_in = dims[mode], d_out = m.rows();

  CVector y(left * d_out * right);
  using Slab = Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                              Eigen::RowMajor>>;
  using SlabOut =
      Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  for (Index l = 0; l < left; ++l) {
    Slab xin(x.data() + l * d_in * right, d_in, right);
    SlabOut yout(y.data() + l * d_out * right, d_out, right);
    yout = m * xin;
  }
  return y;
}

DenseTensor apply_mode(const DenseTensor& t, int mode, const CMatrix& m) {
  DenseTensor out;
  out.data = apply_mode(t.data, t.dims, mode, m);
  out.dims = t.dims;
  out.dims[mode] = m.rows();
  return out;
}

DenseTensor contract_mode(const DenseTensor& t, int mode, const CVector& v) {
  if (v.size() != t.dims[mode]) throw std::invalid_argument("contract_mode: size mismatch");
  DenseTensor out;
  out.data = apply_mode(t.data, t.dims, mode, v.transpose());
  out.dims = t.dims;
  out.dims.erase(out.dims.begin() + mode);
  if (out.dims.empty()) out.dims = {};  // scalar: data has one entry
  return out;
}

CMatrix matricize(const DenseTensor& t, const std::vector<int>& row_modes) {
  const int k = static_cast<int>(t.dims.size());
  std::vector<bool> is_row(k, false);
  for (int m : row_modes) {
    if (m < 0 || m >= k || is_row[m]) throw std::invalid_argument("matricize: bad row modes");
    is_row[m] = true;
  }
  std::vector<int> rows = row_modes, cols;
  std::sort(rows.begin(), rows.end());
  for (int i = 0; i < k; ++i)
    if (!is_row[i]) cols.push_back(i);

  Index nr = 1, nc = 1;
  for (int m : rows) nr *= t.dims[m];
  for (int m : cols) nc *= t.dims[m];

  CMatrix out(nr, nc);
  std::vector<Index> idx(k, 0);
  for (Index flat = 0; flat < t.size(); ++flat) {
    Index tmp = flat;
    for (int i = k - 1; i >= 0; --i) {
      idx[i] = tmp % t.dims[i];
      tmp /= t.dims[i];
    }
    Index r = 0, c = 0;
    for (int m : rows) r = r * t.dims[m] + idx[m];
    for (int m : cols) c = c * t.dims[m] + idx[m];
    out(r, c) = t.data[flat];
  }
  return out;
}

std::vector<std::vector<int>> bipartitions(int order) {
  if (order < 2) throw std::invalid_argument("bipartitions: order must be >= 2");
  std::vector<std::vector<int>> out;
  // Subsets containing mode 0, excluding the full set: each cut once.
  const int n = order - 1;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (mask == (1 << n) - 1) continue;  // complement empty
    std::vector<int> rows = {0};
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) rows.push_back(i + 1);
    out.push_back(std::move(rows));
  }
  return out;
}

CMatrix tensor_to_kron_matrix(const DenseTensor& t, const std::vector<Index>& rows,
                              const std::vector<Index>& cols) {
  const int k = static_cast<int>(t.dims.size());
  if (static_cast<int>(rows.size()) != k || static_cast<int>(cols.size()) != k)
    throw std::invalid_argument("tensor_to_kron_matrix: order mismatch");
  Index nr = 1, nc = 1;
  for (int i = 0; i < k; ++i) {
    if (rows[i] * cols[i] != t.dims[i])
      throw std::invalid_argument("tensor_to_kron_matrix: mode does not split");
    nr *= rows[i];
    nc *= cols[i];
  }
  CMatrix out(nr, nc);
  std::vector<Index> idx(k, 0);
  for (Index flat = 0; flat < t.size(); ++flat) {
    Index tmp = flat;
    for (int i = k - 1; i >= 0; --i) {
      idx[i] = tmp % t.dims[i];
      tmp /= t.dims[i];
    }
    Index r = 0, c = 0;
    for (int i = 0; i < k; ++i) {
      r = r * rows[i] + idx[i] / cols[i];
      c = c * cols[i] + idx[i] % cols[i];
    }
    out(r, c) = t.data[flat];
  }
  return out;
}

DenseTensor kron_matrix_to_tensor(const CMatrix& m, const std::vector<Index>& rows,
                                  const std::vector<Index>& cols) {
  const int k = static_cast<int>(rows.size());
  if (static_cast<int>(cols.size()) != k)
    throw std::invalid_argument("kron_matrix_to_tensor: order mismatch");
  std::vector<Index> dims(k);
  Index nr = 1, nc = 1;
  for (int i = 0; i < k; ++i) {
    dims[i] = rows[i] * cols[i];
    nr *= rows[i];
    nc *= cols[i];
  }
  if (m.rows() != nr || m.cols() != nc)
    throw std::invalid_argument("kron_matrix_to_tensor: matrix does not match dims");
  DenseTensor t = zeros_tensor(dims);
  std::vector<Index> ridx(k, 0), cidx(k, 0);
  for (Index r = 0; r < nr; ++r) {
    Index tmp = r;
    for (int i = k - 1; i >= 0; --i) {
      ridx[i] = tmp % rows[i];
      tmp /= rows[i];
    }
    for (Index c = 0; c < nc; ++c) {
      Index tmp2 = c;
      for (int i = k - 1; i >= 0; --i) {
        cidx[i] = tmp2 % cols[i];
        tmp2 /= cols[i];
      }
      Index flat = 0;
      for (int i = 0; i < k; ++i) flat = flat * dims[i] + ridx[i] * cols[i] + cidx[i];
      t.data[flat] = m(r, c);
    }
  }
  return t;
}

}  // namespace xorsep
