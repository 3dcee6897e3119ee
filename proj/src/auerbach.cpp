#include "xorsep/auerbach.hpp"

#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

#include "xorsep/kron.hpp"
#include "xorsep/linalg.hpp"
#include "xorsep/norms.hpp"

namespace xorsep {
namespace {

CVector vec_row_major(const CMatrix& x) {
  CMatrix t = x.transpose();
  return Eigen::Map<const CVector>(t.data(), t.size());
}

CMatrix unvec_row_major(const CVector& v, Index rows, Index cols) {
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMat>(v.data(), rows, cols);
}

}  // namespace

PerturbationIso perturbation_iso(Index m, const std::vector<CMatrix>& targets) {
  if (static_cast<Index>(targets.size()) != m * m)
    throw std::invalid_argument("perturbation_iso: need m^2 targets");
  PerturbationIso iso;
  iso.m = m;
  iso.psi_action = CMatrix(m * m, m * m);
  double max_dev = 0.0;
  for (Index t = 0; t < m; ++t)
    for (Index v = 0; v < m; ++v) {
      const CMatrix& c = targets[t * m + v];
      if (c.rows() != m || c.cols() != m)
        throw std::invalid_argument("perturbation_iso: target shape mismatch");
      iso.psi_action.col(t * m + v) = vec_row_major(c);
      CMatrix dev = c;
      dev(t, v) -= 1.0;  // b_j - c_j with b_j = e_tv
      max_dev = std::max(max_dev, operator_norm(dev));
    }
  iso.eps_actual = static_cast<double>(m) * static_cast<double>(m) * max_dev;
  iso.psi_cb_ub = 1.0 + iso.eps_actual;
  iso.certified = iso.eps_actual < 1.0;
  iso.psi_inv_cb_ub = iso.certified ? 1.0 / (1.0 - iso.eps_actual)
                                    : std::numeric_limits<double>::infinity();

  Eigen::FullPivLU<CMatrix> lu(iso.psi_action);
  if (!lu.isInvertible()) throw std::invalid_argument("perturbation_iso: singular action");
  iso.psi_inv_action = lu.inverse();
  return iso;
}

CMatrix apply_iso(const PerturbationIso& iso, const CMatrix& x) {
  return unvec_row_major(iso.psi_action * vec_row_major(x), iso.m, iso.m);
}

CMatrix apply_iso_inverse(const PerturbationIso& iso, const CMatrix& x) {
  return unvec_row_major(iso.psi_inv_action * vec_row_major(x), iso.m, iso.m);
}

EtaMap build_eta(const RawInstance& inst) {
  const Index m = inst.params.m, d = inst.params.D;
  EtaMap eta;
  eta.in_dim = d;
  eta.out_dim = m;

  const CMatrix phi_hat = phi_hat_matrix(inst);
  eta.phi_op_norm = operator_norm(phi_hat);

  std::vector<CMatrix> targets(m * m);
  double deviation = 0.0;
  for (Index t = 0; t < m; ++t)
    for (Index v = 0; v < m; ++v) {
      targets[t * m + v] = apply_map_from_tensor(phi_hat, m, inst.f(t, v));
      CMatrix dev = targets[t * m + v];
      dev(t, v) -= 1.0;
      deviation = std::max(deviation, operator_norm(dev));
    }
  eta.deviation = deviation;
  eta.iso = perturbation_iso(m, targets);

  // eta(e_rs) = psi^{-1}(phi(e_rs)) block by block.
  eta.eta_hat = CMatrix(d * m, d * m);
  for (Index r = 0; r < d; ++r)
    for (Index s = 0; s < d; ++s)
      eta.eta_hat.block(r * m, s * m, m, m) =
          apply_iso_inverse(eta.iso, phi_hat.block(r * m, s * m, m, m));

  eta.certified = deviation <= 1.0 / (2.0 * static_cast<double>(m * m));
  eta.cb_ub = eta.iso.psi_inv_cb_ub * eta.phi_op_norm;
  return eta;
}

CMatrix apply_eta(const EtaMap& eta, const CMatrix& x) {
  if (x.rows() != eta.in_dim || x.cols() != eta.in_dim)
    throw std::invalid_argument("apply_eta: input shape mismatch");
  return apply_map_from_tensor(eta.eta_hat, eta.out_dim, x);
}

EtaCertificateValue eta_certificate_value(const EtaMap& eta, const KronTermSum& z) {
  z.check_shapes();
  const int k = z.order();
  for (Index d : z.local_dims)
    if (d != eta.in_dim) throw std::invalid_argument("eta_certificate_value: dim mismatch");

  const Index out_total = static_cast<Index>(std::pow(static_cast<double>(eta.out_dim), k) + 0.5);
  CMatrix pushed = CMatrix::Zero(out_total, out_total);
  std::vector<CMatrix> mapped(k);
  for (const auto& term : z.terms) {
    for (int j = 0; j < k; ++j) mapped[j] = apply_eta(eta, term.factors[j]);
    pushed += term.coeff * kron_all(mapped);
  }

  EtaCertificateValue out;
  out.numerator = operator_norm(pushed);
  out.cb_ub = eta.cb_ub;
  out.certified = eta.certified;
  if (!(eta.cb_ub > 0.0)) throw std::invalid_argument("eta_certificate_value: zero cb bound");
  out.value = out.numerator / std::pow(eta.cb_ub, k);
  return out;
}

}  // namespace xorsep
