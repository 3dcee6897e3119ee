#include "xorsep/games.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <string>

#include "xorsep/linalg.hpp"
#include "xorsep/rng.hpp"
#include "xorsep/tensor.hpp"

namespace xorsep {
namespace {

std::vector<Index> decode_multi(Index flat, const std::vector<Index>& dims) {
  std::vector<Index> idx(dims.size());
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    idx[i] = flat % dims[i];
    flat /= dims[i];
  }
  return idx;
}

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

// sign of a hermitian matrix; zero eigenvalues map to +1 so the result is a
// hermitian unitary either way.
CMatrix hermitian_sign(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0);
  RVector s = es.eigenvalues();
  for (Index i = 0; i < s.size(); ++i) s[i] = s[i] < 0.0 ? -1.0 : 1.0;
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

double relative_change(double prev, double next) {
  return std::abs(next - prev) / std::max({std::abs(next), std::abs(prev), 1e-300});
}

CMatrix unvec_row_major(const CVector& v, Index rows, Index cols) {
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMat>(v.data(), rows, cols);
}

}  // namespace

Index QuantumXorGame::total_dim() const {
  Index n = 1;
  for (Index d : local_dims) n *= d;
  return n;
}

QuantumXorGame game_from_hermitian(const CMatrix& h, std::vector<Index> local_dims,
                                   double herm_tol) {
  Index n = 1;
  for (Index d : local_dims) {
    if (d <= 0) throw std::invalid_argument("game_from_hermitian: bad local dim");
    n *= d;
  }
  if (h.rows() != n || h.cols() != n)
    throw std::invalid_argument("game_from_hermitian: dims do not factor the matrix");
  if (hermiticity_defect(h) > herm_tol)
    throw std::invalid_argument("game_from_hermitian: not hermitian");
  const double tn = trace_norm(h);
  if (tn < 1e-14) throw std::invalid_argument("game_from_hermitian: zero element");
  QuantumXorGame game;
  game.k = static_cast<int>(local_dims.size());
  game.local_dims = std::move(local_dims);
  game.g = h / tn;
  return game;
}

GameDecomposition decompose_two_question(const QuantumXorGame& game) {
  const Eigensystem es = hermitian_spectral(game.g);
  const Index n = es.values.size();
  CMatrix pos = CMatrix::Zero(n, n), neg = CMatrix::Zero(n, n);
  double p_plus = 0.0, p_minus = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double lam = es.values[i];
    const CMatrix vv = es.vectors.col(i) * es.vectors.col(i).adjoint();
    if (lam > 0.0) {
      pos += lam * vv;
      p_plus += lam;
    } else if (lam < 0.0) {
      neg += (-lam) * vv;
      p_minus += -lam;
    }
  }
  GameDecomposition out;
  const double tiny = 1e-12;
  if (p_minus <= tiny * std::max(1.0, p_plus)) {
    out.prob = {1.0};
    out.sign = {1.0};
    out.states = {clip_psd(pos / p_plus)};
    return out;
  }
  if (p_plus <= tiny * std::max(1.0, p_minus)) {
    out.prob = {1.0};
    out.sign = {-1.0};
    out.states = {clip_psd(neg / p_minus)};
    return out;
  }
  out.prob = {p_plus, p_minus};
  out.sign = {1.0, -1.0};
  out.states = {clip_psd(pos / p_plus), clip_psd(neg / p_minus)};
  return out;
}

double bias_of_correlation(const GameDecomposition& decomposition,
                           const std::function<double(const CMatrix&)>& gamma) {
  double total = 0.0;
  for (std::size_t x = 0; x < decomposition.prob.size(); ++x)
    total += decomposition.prob[x] * decomposition.sign[x] * gamma(decomposition.states[x]);
  return total;
}

EntangledStrategy certificate_to_strategy(const MinNormCertificate& cert,
                                          const std::vector<Index>& local_dims) {
  const int k = static_cast<int>(local_dims.size());
  if (static_cast<int>(cert.unitaries.size()) != k)
    throw std::invalid_argument("certificate_to_strategy: order mismatch");
  const Index dp = cert.ancilla_dim;
  CMatrix e01 = CMatrix::Zero(2, 2), e10 = CMatrix::Zero(2, 2);
  e01(0, 1) = 1.0;
  e10(1, 0) = 1.0;

  EntangledStrategy strat;
  strat.local_dims = local_dims;
  strat.ancilla_dims.assign(k, 2 * dp);
  strat.observables.resize(k);
  for (int i = 0; i < k; ++i) {
    if (cert.unitaries[i].rows() != local_dims[i] * dp)
      throw std::invalid_argument("certificate_to_strategy: unitary dim mismatch");
    strat.observables[i] = kron_all({cert.unitaries[i], e01}) +
                           kron_all({cert.unitaries[i].adjoint(), e10});
  }

  // (|psi>|0..0> + |eta>|1..1>)/sqrt(2) with the dilation qubit riding as the
  // fast leg of each player's ancilla.
  Index anc_total = 1;
  for (int i = 0; i < k; ++i) anc_total *= 2 * dp;
  Index core = 1;
  for (int i = 0; i < k; ++i) core *= dp;
  if (cert.psi.size() != core || cert.eta.size() != core)
    throw std::invalid_argument("certificate_to_strategy: state dim mismatch");
  CVector amp = CVector::Zero(anc_total);
  const double root_half = std::sqrt(0.5);
  std::vector<Index> dp_dims(k, dp);
  for (Index flat = 0; flat < core; ++flat) {
    const std::vector<Index> alpha = decode_multi(flat, dp_dims);
    Index idx0 = 0, idx1 = 0;
    for (int i = 0; i < k; ++i) {
      idx0 = idx0 * (2 * dp) + alpha[i] * 2;
      idx1 = idx1 * (2 * dp) + alpha[i] * 2 + 1;
    }
    amp[idx0] += root_half * cert.psi[flat];
    amp[idx1] += root_half * cert.eta[flat];
  }
  strat.shared_state = amp * amp.adjoint();
  return strat;
}

double entangled_bias_value(const QuantumXorGame& game, const EntangledStrategy& strat) {
  const int k = game.k;
  if (static_cast<int>(strat.local_dims.size()) != k || strat.local_dims != game.local_dims)
    throw std::invalid_argument("entangled_bias_value: local dims mismatch");

  DenseTensor acc = kron_matrix_to_tensor(strat.shared_state, strat.ancilla_dims,
                                          strat.ancilla_dims);
  for (int i = 0; i < k; ++i) {
    const Index d = game.local_dims[i], anc = strat.ancilla_dims[i];
    const CMatrix& a = strat.observables[i];
    if (a.rows() != d * anc) throw std::invalid_argument("entangled_bias_value: observable dim");
    // transfer M[(r,s), (b,a)] = A[(r,a), (s,b)], H-major player index
    CMatrix m(d * d, anc * anc);
    for (Index r = 0; r < d; ++r)
      for (Index s = 0; s < d; ++s)
        for (Index b = 0; b < anc; ++b)
          for (Index aa = 0; aa < anc; ++aa)
            m(r * d + s, b * anc + aa) = a(r * anc + aa, s * anc + b);
    acc = apply_mode(acc, i, m);
  }
  const CMatrix k_mat = tensor_to_kron_matrix(acc, game.local_dims, game.local_dims);
  const Complex value = (game.g.array() * k_mat.transpose().array()).sum();
  return value.real();
}

EntangledBiasResult entangled_bias_lb(const QuantumXorGame& game, Index ancilla_dim,
                                      const AlsOptions& opt) {
  const KronTermSum z = kron_from_dense_game(game);
  // One warm start dilated from the product see-saw (U_i = A_i (x) 1): its
  // first state update lands exactly on the product value, so the entangled
  // bound dominates the product bound by construction.
  const ProductBiasResult prod = product_bias_lb(game, opt);
  std::vector<CMatrix> warm(static_cast<std::size_t>(game.k));
  for (int i = 0; i < game.k; ++i)
    warm[static_cast<std::size_t>(i)] = kron_all(
        {prod.strategy.observables[static_cast<std::size_t>(i)],
         CMatrix::Identity(ancilla_dim, ancilla_dim)});
  MinNormResult res = min_norm_seesaw(z, ancilla_dim, opt, {warm});
  EntangledBiasResult out;
  out.estimate = res.estimate;
  out.certificate = res.certificate;
  out.strategy = certificate_to_strategy(res.certificate, game.local_dims);
  out.trace = std::move(res.trace);
  return out;
}

ProductBiasResult product_bias_lb(const QuantumXorGame& game, const AlsOptions& opt) {
  const int k = game.k;
  const DenseTensor v = kron_matrix_to_tensor(game.g, game.local_dims, game.local_dims);

  ProductBiasResult best;
  best.estimate = {0.0, BoundKind::CertifiedLower, opt.restarts, 0, opt.tol, false};
  best.strategy.local_dims = game.local_dims;

  int total_iters = 0;
  for (int r = 0; r < opt.restarts; ++r) {
    GaussianStream stream(opt.seed, "prod/restart/" + std::to_string(r));
    std::uint64_t counter = 0;
    std::vector<CMatrix> obs(k);
    std::vector<CVector> w(k);  // w_j = vec_rowmajor(obs_j^T)
    for (int j = 0; j < k; ++j) {
      const Index d = game.local_dims[j];
      CMatrix g(d, d);
      for (Index c = 0; c < d; ++c)
        for (Index rr = 0; rr < d; ++rr) {
          g(rr, c) = Complex(stream.normal(counter), stream.normal(counter + 1));
          counter += 2;
        }
      obs[j] = hermitian_sign(g + g.adjoint());
      // need w[x*d+y] = A[y,x], which is A's column-major storage
      w[j] = Eigen::Map<const CVector>(obs[j].data(), d * d);
    }

    std::vector<double> trace;
    double value = 0.0;
    bool converged = false;
    int it = 0;
    for (; it < opt.max_iterations && !converged; ++it) {
      const double prev = value;
      for (int i = 0; i < k; ++i) {
        DenseTensor acc = v;
        for (int j = k - 1; j >= 0; --j)
          if (j != i) acc = contract_mode(acc, j, w[j]);
        const Index d = game.local_dims[i];
        const CMatrix env = unvec_row_major(acc.data, d, d);
        const CMatrix env_h = (env + env.adjoint()) / 2.0;
        obs[i] = hermitian_sign(env_h);
        w[i] = Eigen::Map<const CVector>(obs[i].data(), d * d);
        value = trace_norm(env_h);
        trace.push_back(value);
      }
      converged = relative_change(prev, value) <= opt.tol;
    }
    total_iters += it;
    if (value > best.estimate.value) {
      best.estimate.value = value;
      best.estimate.converged = converged;
      best.strategy.observables = obs;
      best.trace = std::move(trace);
    }
  }
  best.estimate.iterations = total_iters;
  return best;
}

SepBiasBounds sep_bias_ub(const QuantumXorGame& game, const AlsOptions& opt) {
  const int k = game.k;
  const DenseTensor v = kron_matrix_to_tensor(game.g, game.local_dims, game.local_dims);
  const double prod_d = static_cast<double>(game.total_dim());

  SepBiasBounds out;
  out.certified = l2_injective_ub_unfolding(v);
  out.certified.value *= prod_d;

  // Heuristic: product-functional ascent on the vec'd tensor; per-mode update
  // is the leading singular pair of the reshaped environment.
  double best = 0.0;
  bool best_converged = false;
  int total_iters = 0;
  for (int r = 0; r < opt.restarts; ++r) {
    GaussianStream stream(opt.seed, "epsdense/restart/" + std::to_string(r));
    std::uint64_t counter = 0;
    std::vector<CVector> a(k), b(k), w(k);
    for (int j = 0; j < k; ++j) {
      const Index d = game.local_dims[j];
      a[j] = random_unit_vector(stream, d, counter);
      b[j] = random_unit_vector(stream, d, counter);
      // need w[x*d+y] = conj(a[x]) b[y]: column-major storage of b a^dag
      CMatrix rank1 = b[j] * a[j].adjoint();
      w[j] = Eigen::Map<const CVector>(rank1.data(), d * d);
    }
    double value = 0.0;
    bool converged = false;
    int it = 0;
    for (; it < opt.max_iterations && !converged; ++it) {
      const double prev = value;
      for (int i = 0; i < k; ++i) {
        DenseTensor acc = v;
        for (int j = k - 1; j >= 0; --j)
          if (j != i) acc = contract_mode(acc, j, w[j]);
        const Index d = game.local_dims[i];
        const CMatrix env = unvec_row_major(acc.data, d, d);
        Eigen::JacobiSVD<CMatrix> svd(env, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.singularValues()(0) > 0.0) {
          a[i] = svd.matrixU().col(0);
          b[i] = svd.matrixV().col(0);
          CMatrix rank1 = b[i] * a[i].adjoint();
          w[i] = Eigen::Map<const CVector>(rank1.data(), d * d);
          value = svd.singularValues()(0);
        }
      }
      converged = relative_change(prev, value) <= opt.tol;
    }
    total_iters += it;
    if (value > best) {
      best = value;
      best_converged = converged;
    }
  }
  out.heuristic = {best * prod_d, BoundKind::Heuristic, opt.restarts, total_iters, opt.tol,
                   best_converged};
  return out;
}

KronTermSum kron_from_dense_game(const QuantumXorGame& game) {
  const Index n = game.total_dim();
  Index nnz = 0;
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c)
      if (game.g(r, c) != 0.0) ++nnz;
  if (nnz > (Index(1) << 16))
    throw std::invalid_argument("kron_from_dense_game: too many nonzero entries");

  KronTermSum out;
  out.local_dims = game.local_dims;
  out.terms.reserve(static_cast<std::size_t>(nnz));
  for (Index r = 0; r < n; ++r) {
    const std::vector<Index> ridx = decode_multi(r, game.local_dims);
    for (Index c = 0; c < n; ++c) {
      if (game.g(r, c) == 0.0) continue;
      const std::vector<Index> cidx = decode_multi(c, game.local_dims);
      KronTerm term;
      term.coeff = game.g(r, c);
      term.factors.reserve(game.local_dims.size());
      for (std::size_t j = 0; j < game.local_dims.size(); ++j) {
        CMatrix unit = CMatrix::Zero(game.local_dims[j], game.local_dims[j]);
        unit(ridx[j], cidx[j]) = 1.0;
        term.factors.push_back(std::move(unit));
      }
      out.terms.push_back(std::move(term));
    }
  }
  return out;
}

}  // namespace xorsep
