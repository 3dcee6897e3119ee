#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace xorsep {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Certification level of a numeric bound. Certified bounds are valid one-sided
// statements about the exact quantity up to floating-point roundoff; heuristic
// values carry no such guarantee. Quantities mixing kinds must be Heuristic.
enum class BoundKind { CertifiedLower, CertifiedUpper, Heuristic };

inline const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::CertifiedLower: return "certified_lower";
    case BoundKind::CertifiedUpper: return "certified_upper";
    default: return "heuristic";
  }
}

inline BoundKind bound_kind_from_string(const std::string& s) {
  if (s == "certified_lower") return BoundKind::CertifiedLower;
  if (s == "certified_upper") return BoundKind::CertifiedUpper;
  if (s == "heuristic") return BoundKind::Heuristic;
  throw std::invalid_argument("unknown bound kind: " + s);
}

struct NormEstimate {
  double value = 0.0;
  BoundKind kind = BoundKind::Heuristic;
  int restarts = 0;    // restarts actually used (0 for closed-form bounds)
  int iterations = 0;  // total sweeps across restarts (0 for closed-form)
  double tol = 0.0;
  bool converged = true;
};

// Shared knobs for every alternating solver (ALS / see-saw). Restart r draws
// its starting point from stream (seed, label + "/restart/<r>"), so enlarging
// `restarts` keeps earlier starts as a prefix and best-of never decreases.
struct AlsOptions {
  int restarts = 32;
  int max_iterations = 500;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

}  // namespace xorsep
