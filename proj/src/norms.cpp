#include "xorsep/norms.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "xorsep/linalg.hpp"
#include "xorsep/rng.hpp"

namespace xorsep {
namespace {

CVector random_unit_vector(const GaussianStream& stream, Index n, std::uint64_t& counter) {
  CVector v(n);
  for (Index i = 0; i < n; ++i) {
    v[i] = Complex(stream.normal(counter), stream.normal(counter + 1));
    counter += 2;
  }
  const double norm = v.norm();
  if (norm == 0.0) return CVector::Unit(n, 0);
  return v / norm;
}

CMatrix random_unitary(const GaussianStream& stream, Index n, std::uint64_t& counter) {
  CMatrix g(n, n);
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < n; ++r) {
      g(r, c) = Complex(stream.normal(counter), stream.normal(counter + 1));
      counter += 2;
    }
  return Eigen::HouseholderQR<CMatrix>(g).householderQ();
}

// Leading singular triple, ties at the smallest index (Eigen sorts descending).
struct LeadingPair {
  double sigma;
  CVector left, right;
};

LeadingPair leading_singular_pair(const CMatrix& m) {
  if (std::max(m.rows(), m.cols()) <= 32) {
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.singularValues()(0), svd.matrixU().col(0), svd.matrixV().col(0)};
  }
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.singularValues()(0), svd.matrixU().col(0), svd.matrixV().col(0)};
}

bool is_unit(const CVector& v, double tol) { return std::abs(v.norm() - 1.0) <= tol; }

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

double relative_change(double prev, double next) {
  return std::abs(next - prev) / std::max({std::abs(next), std::abs(prev), 1e-300});
}

// lambda_max(a b) for hermitian psd a, b, via the symmetric sandwich
// b^{1/2} a b^{1/2}; clipping keeps eigen-roundoff from turning it negative.
double psd_product_lambda_max(const CMatrix& a, const CMatrix& b) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eb((b + b.adjoint()) / 2.0);
  const CMatrix sqrt_b = eb.eigenvectors() *
                         eb.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                         eb.eigenvectors().adjoint();
  const CMatrix m = sqrt_b * ((a + a.adjoint()) / 2.0) * sqrt_b;
  Eigen::SelfAdjointEigenSolver<CMatrix> em((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return std::max(0.0, em.eigenvalues().maxCoeff());
}

}  // namespace

// ---------------------------------------------------------------------------
// l2 injective, dense tensors
// ---------------------------------------------------------------------------

double l2_certificate_value(const DenseTensor& t, const L2Certificate& cert) {
  if (static_cast<Index>(cert.vectors.size()) != t.order())
    throw std::invalid_argument("l2_certificate_value: order mismatch");
  DenseTensor acc = t;
  for (int j = t.order() - 1; j >= 0; --j) acc = contract_mode(acc, j, cert.vectors[j]);
  return std::abs(acc.data[0]);
}

L2Result l2_injective_lb(const DenseTensor& t, const AlsOptions& opt) {
  const int k = static_cast<int>(t.dims.size());
  L2Result best;
  best.estimate = {0.0, BoundKind::CertifiedLower, opt.restarts, 0, opt.tol, false};
  if (k == 0 || t.size() == 0) {
    best.estimate.value = k == 0 && t.size() ? std::abs(t.data[0]) : 0.0;
    best.estimate.converged = true;
    return best;
  }
  if (k == 1) {
    best.estimate.value = t.data.norm();
    best.estimate.converged = true;
    best.certificate.vectors = {t.data.conjugate() / std::max(t.data.norm(), 1e-300)};
    best.certificate.value = best.estimate.value;
    best.trace = {best.estimate.value};
    return best;
  }

  int total_iters = 0;
  for (int r = 0; r < opt.restarts; ++r) {
    GaussianStream stream(opt.seed, "l2/restart/" + std::to_string(r));
    std::uint64_t counter = 0;
    std::vector<CVector> a(k);
    for (int j = 0; j < k; ++j) a[j] = random_unit_vector(stream, t.dims[j], counter);

    std::vector<double> trace;
    double value = 0.0;
    bool converged = false;
    int it = 0;
    for (; it < opt.max_iterations && !converged; ++it) {
      const double prev = value;
      for (int i = 0; i < k; ++i) {
        // Contract every mode but i, highest first; descending order keeps
        // the pending mode index equal to the original one.
        DenseTensor acc = t;
        for (int j = k - 1; j >= 0; --j)
          if (j != i) acc = contract_mode(acc, j, a[j]);
        CVector w = acc.data;
        const double norm = w.norm();
        if (norm > 0.0) {
          a[i] = w.conjugate() / norm;
          value = norm;
        }
        trace.push_back(value);
      }
      converged = relative_change(prev, value) <= opt.tol;
    }
    total_iters += it;
    if (value > best.estimate.value) {
      best.estimate.value = value;
      best.estimate.converged = converged;
      best.certificate = {a, value};
      best.trace = std::move(trace);
    }
  }
  best.estimate.iterations = total_iters;
  return best;
}

NormEstimate l2_injective_ub_unfolding(const DenseTensor& t) {
  NormEstimate out{0.0, BoundKind::CertifiedUpper, 0, 0, 0.0, true};
  if (t.order() <= 1) {
    out.value = t.data.norm();
    return out;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& cut : bipartitions(static_cast<int>(t.order())))
    best = std::min(best, operator_norm(matricize(t, cut)));
  out.value = best;
  return out;
}

// ---------------------------------------------------------------------------
// l2 injective, CP form
// ---------------------------------------------------------------------------

CpForm cp_from_kron(const KronTermSum& op) {
  op.check_shapes();
  CpForm cp;
  const Index t_count = static_cast<Index>(op.terms.size());
  cp.coeff = CVector(t_count);
  cp.modes.assign(op.local_dims.size(), CMatrix());
  for (std::size_t j = 0; j < op.local_dims.size(); ++j)
    cp.modes[j] = CMatrix(op.local_dims[j] * op.local_dims[j], t_count);
  for (Index t = 0; t < t_count; ++t) {
    cp.coeff[t] = op.terms[t].coeff;
    for (std::size_t j = 0; j < op.local_dims.size(); ++j) {
      CMatrix ft = op.terms[t].factors[j].transpose();  // row-major vec
      cp.modes[j].col(t) = Eigen::Map<const CVector>(ft.data(), ft.size());
    }
  }
  return cp;
}

L2Result l2_injective_lb(const CpForm& t, const AlsOptions& opt) {
  const int k = t.order();
  const Index t_count = t.term_count();
  L2Result best;
  best.estimate = {0.0, BoundKind::CertifiedLower, opt.restarts, 0, opt.tol, false};
  if (k == 0 || t_count == 0) {
    best.estimate.converged = true;
    return best;
  }
  if (k == 1) {
    const CVector w = t.modes[0] * t.coeff;
    best.estimate.value = w.norm();
    best.estimate.converged = true;
    best.certificate = {{w.conjugate() / std::max(w.norm(), 1e-300)}, w.norm()};
    best.trace = {w.norm()};
    return best;
  }

  int total_iters = 0;
  for (int r = 0; r < opt.restarts; ++r) {
    GaussianStream stream(opt.seed, "l2cp/restart/" + std::to_string(r));
    std::uint64_t counter = 0;
    std::vector<CVector> a(k);
    CMatrix dots(t_count, k);  // dots(t, j) = modes[j].col(t) . a_j (bilinear)
    for (int j = 0; j < k; ++j) {
      a[j] = random_unit_vector(stream, t.modes[j].rows(), counter);
      dots.col(j) = t.modes[j].transpose() * a[j];
    }

    std::vector<double> trace;
    double value = 0.0;
    bool converged = false;
    int it = 0;
    for (; it < opt.max_iterations && !converged; ++it) {
      const double prev = value;
      for (int i = 0; i < k; ++i) {
        CVector weights = t.coeff;
        for (int j = 0; j < k; ++j)
          if (j != i) weights.array() *= dots.col(j).array();
        const CVector w = t.modes[i] * weights;
        const double norm = w.norm();
        if (norm > 0.0) {
          a[i] = w.conjugate() / norm;
          dots.col(i) = t.modes[i].transpose() * a[i];
          value = norm;
        }
        trace.push_back(value);
      }
      converged = relative_change(prev, value) <= opt.tol;
    }
    total_iters += it;
    if (value > best.estimate.value) {
      best.estimate.value = value;
      best.estimate.converged = converged;
      best.certificate = {a, value};
      best.trace = std::move(trace);
    }
  }
  best.estimate.iterations = total_iters;
  return best;
}

NormEstimate l2_injective_ub_unfolding(const CpForm& t) {
  NormEstimate out{0.0, BoundKind::CertifiedUpper, 0, 0, 0.0, true};
  const int k = t.order();
  if (k == 0 || t.term_count() == 0) return out;
  if (k == 1) {
    out.value = (t.modes[0] * t.coeff).norm();
    return out;
  }
  // Gram matrices G_j[s,t] = <u_sj, u_tj>; for a cut (L|R) the unfolding is
  // M = sum_t c_t x_t y_t^T with Gram(x) = hadamard_L G, Gram(y) = hadamard_R G,
  // and sigma_max(M)^2 = lambda_max(diag(c)^dag GL diag(c) conj(GR)).
  std::vector<CMatrix> gram(k);
  for (int j = 0; j < k; ++j) gram[j] = t.modes[j].adjoint() * t.modes[j];

  double best = std::numeric_limits<double>::infinity();
  for (const auto& cut : bipartitions(k)) {
    std::vector<bool> in_row(k, false);
    for (int m : cut) in_row[m] = true;
    CMatrix gl = CMatrix::Ones(t.term_count(), t.term_count());
    CMatrix gr = gl;
    for (int j = 0; j < k; ++j)
      (in_row[j] ? gl : gr).array() *= gram[j].array();
    const CMatrix a = t.coeff.conjugate().asDiagonal() * gl * t.coeff.asDiagonal();
    best = std::min(best, std::sqrt(psd_product_lambda_max(a, gr.conjugate())));
  }
  out.value = best;
  return out;
}

// ---------------------------------------------------------------------------
// epsilon norm with S_inf factors
// ---------------------------------------------------------------------------

namespace {

// sandwich(t, j) = <left_j| A_tj |right_j>
CMatrix all_sandwiches(const KronTermSum& z, const std::vector<CVector>& left,
                       const std::vector<CVector>& right) {
  const Index t_count = static_cast<Index>(z.terms.size());
  CMatrix s(t_count, z.order());
  for (Index t = 0; t < t_count; ++t)
    for (int j = 0; j < z.order(); ++j)
      s(t, j) = left[j].dot(z.terms[t].factors[j] * right[j]);  // dot conjugates left
  return s;
}

Complex product_excluding(const CMatrix& s, Index t, int skip) {
  Complex prod = 1.0;
  for (int j = 0; j < s.cols(); ++j)
    if (j != skip) prod *= s(t, j);
  return prod;
}

}  // namespace

double eps_certificate_value(const KronTermSum& z, const EpsCertificate& cert) {
  if (static_cast<int>(cert.left.size()) != z.order() ||
      static_cast<int>(cert.right.size()) != z.order())
    throw std::invalid_argument("eps_certificate_value: order mismatch");
  for (int j = 0; j < z.order(); ++j)
    if (!is_unit(cert.left[j], 1e-8) || !is_unit(cert.right[j], 1e-8))
      throw std::invalid_argument("eps_certificate_value: non-unit certificate vector");
  const CMatrix s = all_sandwiches(z, cert.left, cert.right);
  Complex total = 0.0;
  for (Index t = 0; t < s.rows(); ++t) total += z.terms[t].coeff * product_excluding(s, t, -1);
  return std::abs(total);
}

EpsResult eps_sinfty_lb(const KronTermSum& z, const AlsOptions& opt) {
  z.check_shapes();
  const int k = z.order();
  const Index t_count = static_cast<Index>(z.terms.size());
  EpsResult best;
  best.estimate = {0.0, BoundKind::CertifiedLower, opt.restarts, 0, opt.tol, false};
  if (t_count == 0) {
    best.estimate.converged = true;
    return best;
  }

  // Factor reuse across terms: sandwiches and the effective matrix are
  // accumulated per unique block, with T-length lookups in between.
  const FactorDedup dd = dedup_factors(z);
  int total_iters = 0;
  for (int r = 0; r < opt.restarts; ++r) {
    GaussianStream stream(opt.seed, "eps/restart/" + std::to_string(r));
    std::uint64_t counter = 0;
    std::vector<CVector> left(k), right(k);
    for (int j = 0; j < k; ++j) {
      left[j] = random_unit_vector(stream, z.local_dims[j], counter);
      right[j] = random_unit_vector(stream, z.local_dims[j], counter);
    }
    CMatrix s(t_count, k);  // s(t, j) = <left_j| A_tj |right_j>
    const auto refresh_mode = [&](int j) {
      const auto& uf = dd.unique[static_cast<std::size_t>(j)];
      CVector val(static_cast<Index>(uf.size()));
      for (std::size_t x = 0; x < uf.size(); ++x)
        val[static_cast<Index>(x)] = left[j].dot(uf[x] * right[j]);
      for (Index t = 0; t < t_count; ++t)
        s(t, j) = val[dd.map[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)]];
    };
    for (int j = 0; j < k; ++j) refresh_mode(j);

    std::vector<double> trace;
    double value = 0.0;
    bool converged = false;
    int it = 0;
    for (; it < opt.max_iterations && !converged; ++it) {
      const double prev = value;
      for (int i = 0; i < k; ++i) {
        const auto& uf = dd.unique[static_cast<std::size_t>(i)];
        const auto& map = dd.map[static_cast<std::size_t>(i)];
        CVector weights = CVector::Zero(static_cast<Index>(uf.size()));
        for (Index t = 0; t < t_count; ++t)
          weights[map[static_cast<std::size_t>(t)]] +=
              z.terms[t].coeff * product_excluding(s, t, i);
        CMatrix m = CMatrix::Zero(z.local_dims[i], z.local_dims[i]);
        for (std::size_t x = 0; x < uf.size(); ++x)
          m += weights[static_cast<Index>(x)] * uf[x];
        const LeadingPair pair = leading_singular_pair(m);
        if (pair.sigma > 0.0) {
          left[i] = pair.left;
          right[i] = pair.right;
          refresh_mode(i);
          value = pair.sigma;
        }
        trace.push_back(value);
      }
      converged = relative_change(prev, value) <= opt.tol;
    }
    total_iters += it;
    if (value > best.estimate.value) {
      best.estimate.value = value;
      best.estimate.converged = converged;
      best.certificate = {left, right, value};
      best.trace = std::move(trace);
    }
  }
  best.estimate.iterations = total_iters;
  return best;
}

NormEstimate eps_sinfty_ub_chain(const KronTermSum& z) {
  z.check_shapes();
  const int k = z.order();
  if (k == 1) {
    // Single factor: the epsilon norm is the operator norm itself.
    CMatrix sum = CMatrix::Zero(z.local_dims[0], z.local_dims[0]);
    for (const auto& term : z.terms) sum += term.coeff * term.factors[0];
    return {operator_norm(sum), BoundKind::CertifiedUpper, 0, 0, 0.0, true};
  }
  NormEstimate out{0.0, BoundKind::CertifiedUpper, 0, 0, 0.0, true};
  const Index t_count = static_cast<Index>(z.terms.size());
  if (t_count == 0) return out;

  // Unfolding norms through factor Grams. Terms reuse factor blocks, so per
  // cut (L|R) the unfolding collapses to M = sum_{a,b} C[a,b] X_a Y_b^T over
  // composite unique indices, and
  //   sigma_max(M)^2 = lambda_max(C conj(GY) C^dag . GX)
  // with GX, GY the composite Grams. Falls back to the T x T route when the
  // composite index spaces are large but the term count still is not.
  constexpr Index kGramCap = 1024;
  const FactorDedup dd = dedup_factors(z);
  std::vector<CMatrix> gu(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const auto& uf = dd.unique[static_cast<std::size_t>(j)];
    CMatrix g(uf.size(), uf.size());
    for (std::size_t u = 0; u < uf.size(); ++u)
      for (std::size_t v = 0; v < uf.size(); ++v)
        g(static_cast<Index>(u), static_cast<Index>(v)) =
            uf[u].conjugate().cwiseProduct(uf[v]).sum();
    gu[static_cast<std::size_t>(j)] = std::move(g);
  }
  const auto composite_count = [&](const std::vector<int>& modes) {
    Index n = 1;
    for (int m : modes) {
      n *= static_cast<Index>(dd.unique[static_cast<std::size_t>(m)].size());
      if (n > kGramCap) return kGramCap + 1;
    }
    return n;
  };
  const auto composite_index = [&](const std::vector<int>& modes, Index t) {
    Index a = 0;
    for (int m : modes)
      a = a * static_cast<Index>(dd.unique[static_cast<std::size_t>(m)].size()) +
          dd.map[static_cast<std::size_t>(m)][static_cast<std::size_t>(t)];
    return a;
  };
  // GX[a, a'] = prod_{m in modes} GU_m[a_m, a'_m], digits decoded last mode fastest.
  const auto composite_gram = [&](const std::vector<int>& modes, Index n) {
    CMatrix g = CMatrix::Ones(n, n);
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b) {
        Index ra = a, rb = b;
        Complex prod = 1.0;
        for (auto it = modes.rbegin(); it != modes.rend(); ++it) {
          const Index um = static_cast<Index>(dd.unique[static_cast<std::size_t>(*it)].size());
          prod *= gu[static_cast<std::size_t>(*it)](ra % um, rb % um);
          ra /= um;
          rb /= um;
        }
        g(a, b) = prod;
      }
    return g;
  };

  double best = std::numeric_limits<double>::infinity();
  for (const auto& cut : bipartitions(k)) {
    std::vector<bool> in_row(k, false);
    for (int m : cut) in_row[m] = true;
    std::vector<int> col_modes;
    for (int j = 0; j < k; ++j)
      if (!in_row[j]) col_modes.push_back(j);

    const Index u_row = composite_count(cut);
    const Index u_col = composite_count(col_modes);
    if (u_row <= kGramCap && u_col <= kGramCap) {
      CMatrix c = CMatrix::Zero(u_row, u_col);
      for (Index t = 0; t < t_count; ++t)
        c(composite_index(cut, t), composite_index(col_modes, t)) += z.terms[t].coeff;
      const CMatrix gx = composite_gram(cut, u_row);
      const CMatrix gy = composite_gram(col_modes, u_col);
      const CMatrix a = c * gy.conjugate() * c.adjoint();
      best = std::min(best, std::sqrt(psd_product_lambda_max(a, gx)));
    } else if (t_count <= kGramCap) {
      CMatrix gl = CMatrix::Ones(t_count, t_count);
      CMatrix gr = gl;
      for (int j = 0; j < k; ++j) {
        CMatrix& target = in_row[j] ? gl : gr;
        const auto& g = gu[static_cast<std::size_t>(j)];
        const auto& map = dd.map[static_cast<std::size_t>(j)];
        for (Index s = 0; s < t_count; ++s)
          for (Index t = 0; t < t_count; ++t)
            target(s, t) *= g(map[static_cast<std::size_t>(s)], map[static_cast<std::size_t>(t)]);
      }
      CVector coeff(t_count);
      for (Index t = 0; t < t_count; ++t) coeff[t] = z.terms[t].coeff;
      const CMatrix a = coeff.conjugate().asDiagonal() * gl * coeff.asDiagonal();
      best = std::min(best, std::sqrt(psd_product_lambda_max(a, gr.conjugate())));
    } else {
      throw std::length_error("eps_sinfty_ub_chain: unfolding Gram exceeds cap");
    }
  }
  out.value = best;
  return out;
}

// ---------------------------------------------------------------------------
// minimal tensor norm see-saw
// ---------------------------------------------------------------------------

namespace {

// B = tr_H(U (A (x) 1_{d'})), i.e. B[a, b] = sum_{r,s} U[(r,a),(s,b)] A[s, r].
CMatrix traced_factor(const CMatrix& u, const CMatrix& a, Index d_loc, Index d_anc) {
  CMatrix b = CMatrix::Zero(d_anc, d_anc);
  for (Index r = 0; r < d_loc; ++r)
    for (Index s = 0; s < d_loc; ++s)
      if (a(s, r) != 0.0) b += a(s, r) * u.block(r * d_anc, s * d_anc, d_anc, d_anc);
  return b;
}

// Terms reuse factor blocks heavily, so traced factors are kept per unique
// block, not per term.
struct SeesawWork {
  FactorDedup dd;
  std::vector<std::vector<CMatrix>> b;  // b[i][x] = traced unique block x, player i
};

SeesawWork make_work(const KronTermSum& z) {
  SeesawWork w;
  w.dd = dedup_factors(z);
  w.b.resize(static_cast<std::size_t>(z.order()));
  return w;
}

void refresh_traced(const KronTermSum& z, const std::vector<CMatrix>& u, Index d_anc,
                    int player, SeesawWork& w) {
  const auto& uf = w.dd.unique[static_cast<std::size_t>(player)];
  auto& out = w.b[static_cast<std::size_t>(player)];
  out.resize(uf.size());
  for (std::size_t x = 0; x < uf.size(); ++x)
    out[x] = traced_factor(u[static_cast<std::size_t>(player)], uf[x], z.local_dims[player],
                           d_anc);
}

const CMatrix& traced(const SeesawWork& w, std::size_t t, int i) {
  return w.b[static_cast<std::size_t>(i)][w.dd.map[static_cast<std::size_t>(i)][t]];
}

CMatrix ancilla_operator(const KronTermSum& z, const SeesawWork& w, Index d_anc) {
  const int k = z.order();
  const Index n = static_cast<Index>(std::pow(static_cast<double>(d_anc), k) + 0.5);
  CMatrix big = CMatrix::Zero(n, n);
  std::vector<CMatrix> fac(k);
  for (std::size_t t = 0; t < z.terms.size(); ++t) {
    for (int i = 0; i < k; ++i) fac[i] = traced(w, t, i);
    big += z.terms[t].coeff * kron_all(fac);
  }
  return big;
}

// Environment W[a, b] for (term t, player i): the sandwich with slot i open.
CMatrix environment(const SeesawWork& w, const KronTermSum& z, std::size_t t, int i,
                    const CVector& psi, const CVector& eta, Index d_anc) {
  const int k = z.order();
  const std::vector<Index> anc_dims(k, d_anc);
  CVector u = eta;
  for (int j = 0; j < k; ++j)
    if (j != i) u = apply_mode(u, anc_dims, j, traced(w, t, j));
  Index left = 1, right = 1;
  for (int j = 0; j < i; ++j) left *= d_anc;
  for (int j = i + 1; j < k; ++j) right *= d_anc;
  CMatrix env = CMatrix::Zero(d_anc, d_anc);
  for (Index l = 0; l < left; ++l)
    for (Index a = 0; a < d_anc; ++a)
      for (Index b = 0; b < d_anc; ++b) {
        Complex acc = 0.0;
        const Index base_a = (l * d_anc + a) * right;
        const Index base_b = (l * d_anc + b) * right;
        for (Index rgt = 0; rgt < right; ++rgt)
          acc += std::conj(psi[base_a + rgt]) * u[base_b + rgt];
        env(a, b) += acc;
      }
  return env;
}

}  // namespace

CMatrix min_norm_ancilla_operator(const KronTermSum& z, const std::vector<CMatrix>& unitaries,
                                  Index ancilla_dim) {
  z.check_shapes();
  SeesawWork w = make_work(z);
  for (int i = 0; i < z.order(); ++i) refresh_traced(z, unitaries, ancilla_dim, i, w);
  return ancilla_operator(z, w, ancilla_dim);
}

double min_norm_certificate_value(const KronTermSum& z, const MinNormCertificate& cert) {
  z.check_shapes();
  const int k = z.order();
  if (static_cast<int>(cert.unitaries.size()) != k)
    throw std::invalid_argument("min_norm_certificate_value: order mismatch");
  for (int i = 0; i < k; ++i) {
    if (cert.unitaries[i].rows() != z.local_dims[i] * cert.ancilla_dim)
      throw std::invalid_argument("min_norm_certificate_value: unitary dimension mismatch");
    if (!is_unitary(cert.unitaries[i], 1e-8))
      throw std::invalid_argument("min_norm_certificate_value: non-unitary certificate");
  }
  if (!is_unit(cert.psi, 1e-8) || !is_unit(cert.eta, 1e-8))
    throw std::invalid_argument("min_norm_certificate_value: non-unit state");
  const CMatrix n = min_norm_ancilla_operator(z, cert.unitaries, cert.ancilla_dim);
  return std::abs(cert.psi.dot(n * cert.eta));
}

MinNormResult min_norm_seesaw(const KronTermSum& z, Index ancilla_dim, const AlsOptions& opt) {
  return min_norm_seesaw(z, ancilla_dim, opt, {});
}

MinNormResult min_norm_seesaw(const KronTermSum& z, Index ancilla_dim, const AlsOptions& opt,
                              const std::vector<std::vector<CMatrix>>& warm_starts) {
  z.check_shapes();
  const int k = z.order();
  const Index t_count = static_cast<Index>(z.terms.size());
  const Index anc_total = static_cast<Index>(std::pow(static_cast<double>(ancilla_dim), k) + 0.5);
  const int warm = static_cast<int>(warm_starts.size());
  for (const auto& tuple : warm_starts) {
    if (static_cast<int>(tuple.size()) != k)
      throw std::invalid_argument("min_norm_seesaw: warm start order mismatch");
    for (int i = 0; i < k; ++i)
      if (tuple[i].rows() != z.local_dims[i] * ancilla_dim || !is_unitary(tuple[i], 1e-8))
        throw std::invalid_argument("min_norm_seesaw: warm start is not unitary");
  }
  MinNormResult best;
  best.estimate = {0.0, BoundKind::CertifiedLower, warm + opt.restarts, 0, opt.tol, false};
  if (t_count == 0) {
    best.estimate.converged = true;
    return best;
  }

  int total_iters = 0;
  for (int r = 0; r < warm + opt.restarts; ++r) {
    std::vector<CMatrix> u(k);
    CVector psi, eta;
    if (r < warm) {
      // The first state update overwrites psi/eta, so only the unitaries seed.
      u = warm_starts[r];
      psi = CVector::Unit(anc_total, 0);
      eta = CVector::Unit(anc_total, 0);
    } else {
      GaussianStream stream(opt.seed, "min/restart/" + std::to_string(r - warm));
      std::uint64_t counter = 0;
      for (int i = 0; i < k; ++i)
        u[i] = random_unitary(stream, z.local_dims[i] * ancilla_dim, counter);
      psi = random_unit_vector(stream, anc_total, counter);
      eta = random_unit_vector(stream, anc_total, counter);
    }

    SeesawWork w = make_work(z);
    for (int i = 0; i < k; ++i) refresh_traced(z, u, ancilla_dim, i, w);

    std::vector<double> trace;
    double value = 0.0;
    bool converged = false;
    int it = 0;
    for (; it < opt.max_iterations && !converged; ++it) {
      const double prev = value;
      {  // state update: leading singular pair of the ancilla operator
        const LeadingPair pair = leading_singular_pair(ancilla_operator(z, w, ancilla_dim));
        psi = pair.left;
        eta = pair.right;
        value = pair.sigma;
        trace.push_back(value);
      }
      for (int i = 0; i < k; ++i) {  // unitary updates: polar part, value = ||E||_1
        const Index d_loc = z.local_dims[i];
        const auto& uf = w.dd.unique[static_cast<std::size_t>(i)];
        const auto& map = w.dd.map[static_cast<std::size_t>(i)];
        // E = sum_t c_t A_ti^T (x) env_t, with env sums bucketed per unique block.
        std::vector<CMatrix> env_sum(uf.size(), CMatrix::Zero(ancilla_dim, ancilla_dim));
        for (Index t = 0; t < t_count; ++t)
          env_sum[map[static_cast<std::size_t>(t)]] +=
              z.terms[t].coeff *
              environment(w, z, static_cast<std::size_t>(t), i, psi, eta, ancilla_dim);
        CMatrix e = CMatrix::Zero(d_loc * ancilla_dim, d_loc * ancilla_dim);
        for (std::size_t x = 0; x < uf.size(); ++x)
          for (Index rr = 0; rr < d_loc; ++rr)
            for (Index ss = 0; ss < d_loc; ++ss) {
              const Complex wgt = uf[x](ss, rr);  // transpose entry (rr, ss)
              if (wgt != 0.0)
                e.block(rr * ancilla_dim, ss * ancilla_dim, ancilla_dim, ancilla_dim) +=
                    wgt * env_sum[x];
            }
        CMatrix pu, pv;
        double sigma_sum = 0.0;
        if (e.rows() <= 32) {
          Eigen::JacobiSVD<CMatrix> svd(e, Eigen::ComputeFullU | Eigen::ComputeFullV);
          pu = svd.matrixU();
          pv = svd.matrixV();
          sigma_sum = svd.singularValues().sum();
        } else {
          Eigen::BDCSVD<CMatrix> svd(e, Eigen::ComputeFullU | Eigen::ComputeFullV);
          pu = svd.matrixU();
          pv = svd.matrixV();
          sigma_sum = svd.singularValues().sum();
        }
        u[i] = pu.conjugate() * pv.transpose();
        refresh_traced(z, u, ancilla_dim, i, w);
        value = sigma_sum;
        trace.push_back(value);
      }
      converged = relative_change(prev, value) <= opt.tol;
    }
    {  // final state update: realizes the value and absorbs the phase
      const LeadingPair pair = leading_singular_pair(ancilla_operator(z, w, ancilla_dim));
      psi = pair.left;
      eta = pair.right;
      value = pair.sigma;
      trace.push_back(value);
    }
    total_iters += it;
    if (value > best.estimate.value) {
      best.estimate.value = value;
      best.estimate.converged = converged;
      best.certificate = {u, psi, eta, ancilla_dim, value};
      best.trace = std::move(trace);
    }
  }
  best.estimate.iterations = total_iters;
  return best;
}

// ---------------------------------------------------------------------------
// remaining interfaces
// ---------------------------------------------------------------------------

double cb_norm_s1_to_sinf(const CMatrix& t_hat) { return operator_norm(t_hat); }

NormEstimate projective_ub(const KronTermSum& decomposition, const CMatrix& target,
                           double check_tol) {
  const CMatrix dense = densify(decomposition);
  if (dense.rows() != target.rows() || dense.cols() != target.cols())
    throw std::invalid_argument("projective_ub: target shape mismatch");
  const double defect = (dense - target).cwiseAbs().maxCoeff();
  if (defect > check_tol)
    throw std::invalid_argument("projective_ub: decomposition does not reproduce target");
  return {trace_norm_triangle_ub(decomposition), BoundKind::CertifiedUpper, 0, 0, 0.0, true};
}

}  // namespace xorsep
