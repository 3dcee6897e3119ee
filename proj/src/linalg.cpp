#include "xorsep/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <stdexcept>

namespace xorsep {
namespace {

Eigen::VectorXd singular_values(const CMatrix& a) {
  // Jacobi is more accurate for small blocks; BDC scales better.
  if (std::max(a.rows(), a.cols()) <= 32)
    return Eigen::JacobiSVD<CMatrix>(a).singularValues();
  return Eigen::BDCSVD<CMatrix>(a).singularValues();
}

}  // namespace

double hermiticity_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("hermiticity_defect: not square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

bool is_hermitian(const CMatrix& a, double rel_tol) {
  return a.rows() == a.cols() && hermiticity_defect(a) <= rel_tol;
}

double operator_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

double trace_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == a.cols() && hermiticity_defect(a) <= 1e-12) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  return singular_values(a).sum();
}

double frobenius_norm(const CMatrix& a) { return a.norm(); }

Eigensystem hermitian_spectral(const CMatrix& a, double rel_tol) {
  if (!is_hermitian(a, rel_tol))
    throw std::invalid_argument("hermitian_spectral: hermiticity defect above tolerance");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("hermitian_spectral: eigensolver failed");
  const Index n = a.rows();
  Eigensystem out{RVector(n), CMatrix(n, n)};
  for (Index i = 0; i < n; ++i) {  // ascending -> descending
    out.values[i] = es.eigenvalues()[n - 1 - i];
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

Complex dual_pair(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("dual_pair: shape mismatch");
  return a.cwiseProduct(b).sum();
}

CMatrix apply_map_from_tensor(const CMatrix& t_hat, Index dim_out, const CMatrix& x) {
  if (t_hat.rows() != t_hat.cols() || t_hat.rows() % dim_out != 0)
    throw std::invalid_argument("apply_map_from_tensor: bad shapes");
  const Index dim_in = t_hat.rows() / dim_out;
  if (x.rows() != dim_in || x.cols() != dim_in)
    throw std::invalid_argument("apply_map_from_tensor: x must be dim_in x dim_in");
  CMatrix out = CMatrix::Zero(dim_out, dim_out);
  for (Index r = 0; r < dim_in; ++r)
    for (Index s = 0; s < dim_in; ++s)
      if (x(r, s) != 0.0) out += x(r, s) * t_hat.block(r * dim_out, s * dim_out, dim_out, dim_out);
  return out;
}

CMatrix clip_psd(const CMatrix& a, double floor) {
  const Eigensystem es = hermitian_spectral(a, 1e-8);
  RVector vals = es.values;
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals[i] < -floor)
      throw std::invalid_argument("clip_psd: eigenvalue below -floor");
    if (vals[i] < 0.0) vals[i] = 0.0;
  }
  return es.vectors * vals.asDiagonal() * es.vectors.adjoint();
}

CMatrix partial_trace(const CMatrix& a, const std::vector<Index>& dims,
                      const std::vector<bool>& keep) {
  const Index k = static_cast<Index>(dims.size());
  if (static_cast<Index>(keep.size()) != k)
    throw std::invalid_argument("partial_trace: dims/keep mismatch");
  Index total = 1, kept = 1;
  for (Index i = 0; i < k; ++i) {
    total *= dims[i];
    if (keep[i]) kept *= dims[i];
  }
  if (a.rows() != total || a.cols() != total)
    throw std::invalid_argument("partial_trace: matrix does not match dims");

  CMatrix out = CMatrix::Zero(kept, kept);
  std::vector<Index> idx_r(k, 0), idx_c(k, 0);
  // Iterate all (row, col) pairs; fold kept legs into output indices and
  // require traced legs to coincide. Desk-scale dimensions only.
  for (Index r = 0; r < total; ++r) {
    Index tmp = r;
    for (Index i = k - 1; i >= 0; --i) {
      idx_r[i] = tmp % dims[i];
      tmp /= dims[i];
    }
    for (Index c = 0; c < total; ++c) {
      Index tmp2 = c;
      for (Index i = k - 1; i >= 0; --i) {
        idx_c[i] = tmp2 % dims[i];
        tmp2 /= dims[i];
      }
      bool diag = true;
      for (Index i = 0; i < k && diag; ++i)
        if (!keep[i] && idx_r[i] != idx_c[i]) diag = false;
      if (!diag) continue;
      Index ro = 0, co = 0;
      for (Index i = 0; i < k; ++i) {
        if (!keep[i]) continue;
        ro = ro * dims[i] + idx_r[i];
        co = co * dims[i] + idx_c[i];
      }
      out(ro, co) += a(r, c);
    }
  }
  return out;
}

CMatrix kron_all(const std::vector<CMatrix>& factors) {
  if (factors.empty()) return CMatrix::Ones(1, 1);
  CMatrix acc = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) {
    const CMatrix& b = factors[i];
    CMatrix next(acc.rows() * b.rows(), acc.cols() * b.cols());
    for (Index r = 0; r < acc.rows(); ++r)
      for (Index c = 0; c < acc.cols(); ++c)
        next.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = acc(r, c) * b;
    acc = std::move(next);
  }
  return acc;
}

}  // namespace xorsep
