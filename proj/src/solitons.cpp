#include "liecurve/solitons.hpp"

#include <Eigen/SVD>
#include <atomic>
#include <thread>

#include "liecurve/errors.hpp"
#include "liecurve/tolerances.hpp"

namespace liecurve {

double SolitonCertificate::reevaluate(const Matrix& P, const Matrix& g) const {
  Matrix E;
  if (symmetric_D)
    E = P - lambda * g - g * D;  // g D is symmetric for a g-symmetric D
  else
    E = P - lambda * g - g * D - D.transpose() * g;
  return 0.5 * (E + E.transpose().eval()).norm() / std::max(P.norm(), 1e-300);
}

Matrix soliton_operator_tensor(const SolitonProblem& p) {
  switch (p.op) {
    case SolitonOperator::M:
      return m_tensor(p.bracket, p.g);
    case SolitonOperator::K:
    case SolitonOperator::Kx: {
      if (!p.J) throw NotAdapted("K operator needs a complex structure");
      const ComplexFrameBracket cb = complexify(p.bracket, *p.J, p.frame);
      const CMatrix h = hermitian_of_real_form(p.g, *p.J, p.frame);
      const UnitaryFrameData u = unitary_frame(cb, HermitianMetric(h));
      const CMatrix Ku = p.op == SolitonOperator::K ? hcf_K(u) : k_x(u, p.x);
      return real_form_of_hermitian(u.to_reference(Ku), *p.J, p.frame);
    }
  }
  throw ConfigError("unknown soliton operator");
}

SolitonCertificate solve_algebraic_soliton(const SolitonProblem& p) {
  const int n = p.bracket.dim;
  const Matrix P = soliton_operator_tensor(p);
  const DerivationSpace der = derivation_space(p.bracket);
  const int m = der.dim();

  // Columns: lambda, then derivation coordinates. Rows: vec of the symmetric
  // residual matrix; the Frobenius norm of the residual is the LS objective.
  Matrix A(n * n, m + 1);
  Vector rhs(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rhs[i * n + j] = P(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i * n + j, 0) = p.g(i, j);
  for (int a = 0; a < m; ++a) {
    const Matrix S = p.g * der.basis[a] + der.basis[a].transpose() * p.g;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i * n + j, a + 1) = S(i, j);
  }
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  const Vector sol = svd.solve(rhs);

  SolitonCertificate cert;
  cert.lambda = sol[0];
  Matrix D2 = Matrix::Zero(n, n);  // two-sided derivation
  for (int a = 0; a < m; ++a) D2 += sol[a + 1] * der.basis[a];
  cert.residual = (A * sol - rhs).norm() / std::max(P.norm(), 1e-300);

  const double mu_norm = std::max(p.bracket.norm(), 1e-300);
  const Matrix g_inv = p.g.inverse();

  // One-sided normal form: g(D.,.) with D = D2 + g^{-1} D2^t g. Its
  // g-transpose is again a derivation exactly in the soliton regime.
  Matrix D1 = D2 + g_inv * D2.transpose() * p.g;
  const double der_res_sym = pi_action(D1, p.bracket).norm() / mu_norm;

  if (cert.residual <= kTolSol) {
    if (der_res_sym <= tau_alg()) {
      cert.D = D1;
      cert.symmetric_D = true;
      cert.derivation_residual = der_res_sym;
    } else {
      cert.D = D2;
      cert.symmetric_D = false;
      cert.derivation_residual = pi_action(D2, p.bracket).norm() / mu_norm;
    }
    const double d_scale = cert.D.norm() / std::max(P.norm(), 1e-300);
    cert.kind = d_scale <= tau_alg() ? SolitonCertificate::Kind::Static
                                     : SolitonCertificate::Kind::Soliton;
    if (cert.kind == SolitonCertificate::Kind::Static) cert.D.setZero();
  } else {
    cert.kind = SolitonCertificate::Kind::None;
    cert.D = D2;
    cert.derivation_residual = pi_action(D2, p.bracket).norm() / mu_norm;
  }
  return cert;
}

std::pair<bool, double> check_static(const SolitonProblem& p) {
  const Matrix P = soliton_operator_tensor(p);
  const Matrix g_inv_P = p.g.ldlt().solve(P);
  const double lambda = g_inv_P.trace() / p.bracket.dim;
  const double res = (P - lambda * p.g).norm() / std::max(P.norm(), 1e-300);
  return {res <= kTolSol, lambda};
}

Matrix canonical_metric(const RealBracket& b, const CartanDecomposition& cd) {
  const int n = b.dim;
  const Matrix B = killing_form(b);
  const Matrix& K = cd.k_basis;
  const Matrix& Pp = cd.p_basis;
  if (K.rows() != n || Pp.rows() != n || K.cols() + Pp.cols() != n)
    throw InvalidCartan("basis sizes");
  const Matrix bk = K.transpose() * B * K;
  const Matrix bp = Pp.transpose() * B * Pp;
  const Matrix cross = K.transpose() * B * Pp;
  Eigen::SelfAdjointEigenSolver<Matrix> esk(bk), esp(bp);
  if (esk.eigenvalues().maxCoeff() >= -1e-12 || esp.eigenvalues().minCoeff() <= 1e-12)
    throw InvalidCartan("Killing form signature");
  if (cross.cwiseAbs().maxCoeff() > 1e-9 * B.norm()) throw InvalidCartan("B(k,p) != 0");
  // Verify the bracket relations.
  auto in_span = [&](const Vector& v, const Matrix& S) {
    Eigen::ColPivHouseholderQR<Matrix> qr(S);
    const Vector sol = qr.solve(v);
    return (S * sol - v).norm() <= 1e-8 * std::max(1.0, v.norm());
  };
  for (int a = 0; a < K.cols(); ++a) {
    for (int c = 0; c < K.cols(); ++c)
      if (!in_span(b.apply(K.col(a), K.col(c)), K)) throw InvalidCartan("[k,k] not in k");
    for (int c = 0; c < Pp.cols(); ++c)
      if (!in_span(b.apply(K.col(a), Pp.col(c)), Pp)) throw InvalidCartan("[k,p] not in p");
  }
  for (int a = 0; a < Pp.cols(); ++a)
    for (int c = 0; c < Pp.cols(); ++c)
      if (!in_span(b.apply(Pp.col(a), Pp.col(c)), K)) throw InvalidCartan("[p,p] not in k");

  Matrix V(n, n);
  V << K, Pp;
  Matrix Gv = Matrix::Zero(n, n);
  Gv.topLeftCorner(K.cols(), K.cols()) = -bk;
  Gv.bottomRightCorner(Pp.cols(), Pp.cols()) = bp;
  const Matrix Vinv = V.inverse();
  Matrix G = Vinv.transpose() * Gv * Vinv;
  G = 0.5 * (G + G.transpose().eval());
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success) throw InvalidCartan("canonical metric not positive definite");
  return G;
}

StaticScanReport kx_static_scan(const CatalogEntry& entry, const std::array<double, 4>& x,
                                int samples, uint64_t seed, int jobs) {
  if (!(x[0] <= 1.0 && x[1] <= 0.0 && x[2] <= 0.0 && x[0] + x[1] > 0.0 && x[3] + x[2] >= 0.0))
    throw HypothesisViolated("x outside the admissible range");
  if (!entry.J) throw HypothesisViolated("entry has no complex structure");
  if (entry.facts.center_cap_j_center_dim == 0)
    throw HypothesisViolated("center does not meet its J-image");

  StaticScanReport rep;
  rep.samples = samples;
  rep.x = x;
  rep.rows.resize(samples);
  const ComplexFrameBracket cb = entry.complexified();

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= samples) return;
      StaticScanSample row;
      row.seed = seed + static_cast<uint64_t>(i);
      const HermitianMetric h = random_metric(cb.n, row.seed);
      const UnitaryFrameData u = unitary_frame(cb, h);
      const CMatrix Kx = k_x(u, x);
      const double lambda = Kx.trace().real() / cb.n;
      row.lambda = lambda;
      row.residual =
          (Kx - lambda * CMatrix::Identity(cb.n, cb.n)).norm() / std::max(Kx.norm(), 1e-300);
      row.is_static = row.residual <= kTolSol;
      const QTensors q = q_tensors(u);
      row.s = chern_S(u).trace().real();
      row.q1 = q.q1.trace().real();
      row.q3 = q.q3.trace().real();
      row.trace_kx = Kx.trace().real();
      rep.rows[i] = row;
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  rep.min_q1 = std::numeric_limits<double>::infinity();
  rep.max_trace_kx = -std::numeric_limits<double>::infinity();
  for (const auto& row : rep.rows) {
    if (row.is_static) ++rep.hits;
    rep.min_q1 = std::min(rep.min_q1, row.q1);
    // Obstruction chain: with s <= 0 the trace identity
    // tr K^x = s - (x1+x2) q1 - (x3+x4) q3 keeps tr K^x <= 0, so a static hit
    // would force q1 = 0 and T = 0.
    rep.max_trace_kx = std::max(rep.max_trace_kx, row.trace_kx);
    const double chain = row.trace_kx - (row.s - (x[0] + x[1]) * row.q1 - (x[2] + x[3]) * row.q3);
    rep.chain_identity_residual = std::max(rep.chain_identity_residual, std::abs(chain));
  }
  return rep;
}

}  // namespace liecurve
