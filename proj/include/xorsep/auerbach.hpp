#pragma once

#include <vector>

#include "xorsep/ensembles.hpp"
#include "xorsep/types.hpp"

namespace xorsep {

// Perturbed-basis isomorphism on S_inf^m: psi = Id - R with
// R = sum_j b_j^* (x) (b_j - c_j) over the Auerbach system b_j = e_tv,
// b_j^* = coordinate functionals. psi(e_tv) = c_tv. With
// eps_actual = m^2 * max_j ||b_j - c_j||_inf < 1 the Neumann series certifies
// ||psi||_cb <= 1 + eps_actual and ||psi^{-1}||_cb <= 1 / (1 - eps_actual).
struct PerturbationIso {
  Index m = 1;
  CMatrix psi_action;      // m^2 x m^2 on e_tv coordinates (column tv = vec c_tv)
  CMatrix psi_inv_action;
  double eps_actual = 0.0;
  double psi_cb_ub = 1.0;
  double psi_inv_cb_ub = 1.0;
  bool certified = false;  // eps_actual < 1
};

// targets[t*m + v] = c_tv, each m x m. Throws if psi is numerically singular.
PerturbationIso perturbation_iso(Index m, const std::vector<CMatrix>& targets);

CMatrix apply_iso(const PerturbationIso& iso, const CMatrix& x);
CMatrix apply_iso_inverse(const PerturbationIso& iso, const CMatrix& x);

// eta = psi^{-1} o phi: S_1^D -> S_inf^m with eta(f_tv) = e_tv when psi was
// built on targets phi(f_tv). cb_ub = psi_inv_cb_ub * operator_norm(phi_hat)
// is a certified upper bound on ||eta||_cb whenever `certified` holds, i.e.
// when the deviation max_tv ||phi(f_tv) - e_tv||_inf is at most 1/(2m^2).
struct EtaMap {
  Index in_dim = 1;    // D
  Index out_dim = 1;   // m
  CMatrix eta_hat;     // Dm x Dm tensor of eta
  double phi_op_norm = 0.0;
  double deviation = 0.0;
  double cb_ub = 0.0;
  bool certified = false;
  PerturbationIso iso;
};

EtaMap build_eta(const RawInstance& inst);

CMatrix apply_eta(const EtaMap& eta, const CMatrix& x);

// (eta (x) ... (x) eta)(z) pushed through term-wise, then
// value = operator_norm of the resulting m^k matrix divided by cb_ub^k:
// a lower bound on the minimal tensor norm of z, certified iff eta is.
struct EtaCertificateValue {
  double value = 0.0;
  double numerator = 0.0;  // ||(eta tensor power)(z)||_inf
  double cb_ub = 0.0;
  bool certified = false;
};

EtaCertificateValue eta_certificate_value(const EtaMap& eta, const KronTermSum& z);

}  // namespace xorsep
