#include "liecurve/hermitian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "liecurve/errors.hpp"
#include "liecurve/tolerances.hpp"

namespace liecurve {

HermitianMetric::HermitianMetric(CMatrix m) : h(std::move(m)) {
  if (h.rows() != h.cols()) throw DimensionMismatch("metric must be square");
  if (hermiticity_residual() > 1e-10 * std::max(1.0, h.cwiseAbs().maxCoeff()))
    throw NotHermitian("metric matrix");
  h = 0.5 * (h + h.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= kDegenerateEig * std::max(hi, 1.0))
    throw NotPositiveDefinite("metric eigenvalue " + std::to_string(lo));
}

HermitianMetric HermitianMetric::diagonal(const Vector& d) {
  CMatrix m = CMatrix::Zero(d.size(), d.size());
  for (int i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianMetric(std::move(m));
}

CMatrix UnitaryFrameData::to_reference(const CMatrix& tensor_unitary) const {
  return frame_change_inv * tensor_unitary * frame_change_inv.adjoint();
}

CMatrix UnitaryFrameData::to_unitary(const CMatrix& tensor_reference) const {
  return frame_change * tensor_reference * frame_change.adjoint();
}

namespace {

// h = U U^* with U upper triangular (Cholesky of the index-reversed matrix),
// so that F = U^{-1} is upper triangular and F h F^* = Id.
CMatrix reversed_cholesky_inverse(const CMatrix& h) {
  const int n = static_cast<int>(h.rows());
  CMatrix P = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) P(i, n - 1 - i) = 1.0;
  const CMatrix hp = P * h * P;
  Eigen::LLT<CMatrix> llt(hp);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("unitary_frame: Cholesky failed");
  const CMatrix L = llt.matrixL();
  return P * L.triangularView<Eigen::Lower>().solve(CMatrix::Identity(n, n)) * P;
}

void transform_bracket(const ComplexFrameBracket& in, const CMatrix& F, const CMatrix& Finv,
                       ComplexFrameBracket& out) {
  const int n = in.n;
  const CMatrix Fc = F.conjugate();
  // temp(a,b,s) = sum_d X(a,b,d) M(d,s)
  auto contract_out = [&](const CTensor3& X, const CMatrix& M, CTensor3& res) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int s = 0; s < n; ++s) {
          Complex acc = 0;
          for (int d = 0; d < n; ++d) acc += X(a, b, d) * M(d, s);
          res(a, b, s) = acc;
        }
  };
  auto contract_in = [&](const CMatrix& Ml, const CMatrix& Mr, const CTensor3& X, CTensor3& res) {
    CTensor3 tmp(n);
    for (int p = 0; p < n; ++p)
      for (int b = 0; b < n; ++b)
        for (int s = 0; s < n; ++s) {
          Complex acc = 0;
          for (int a = 0; a < n; ++a) acc += Ml(p, a) * X(a, b, s);
          tmp(p, b, s) = acc;
        }
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int s = 0; s < n; ++s) {
          Complex acc = 0;
          for (int b = 0; b < n; ++b) acc += Mr(q, b) * tmp(p, b, s);
          res(p, q, s) = acc;
        }
  };
  CTensor3 t(n);
  contract_out(in.hol, Finv, t);
  contract_in(F, F, t, out.hol);
  contract_out(in.mixed_hol, Finv, t);
  contract_in(F, Fc, t, out.mixed_hol);
  contract_out(in.mixed_anti, Finv.conjugate(), t);
  contract_in(F, Fc, t, out.mixed_anti);
  out.nijenhuis_residual = in.nijenhuis_residual;
}

}  // namespace

UnitaryFrameData unitary_frame(const ComplexFrameBracket& b, const HermitianMetric& g) {
  if (b.n != g.n()) throw DimensionMismatch("bracket vs metric");
  UnitaryFrameData u;
  u.frame_change = reversed_cholesky_inverse(g.h);
  u.frame_change_inv = u.frame_change.triangularView<Eigen::Upper>()
                           .solve(CMatrix::Identity(b.n, b.n));
  u.bracket_in_frame = ComplexFrameBracket(b.n);
  transform_bracket(b, u.frame_change, u.frame_change_inv, u.bracket_in_frame);
  return u;
}

CTensor3 chern_torsion(const UnitaryFrameData& u) {
  const auto& A = u.bracket_in_frame.hol;
  const auto& C = u.bracket_in_frame.mixed_anti;
  const int n = u.n();
  CTensor3 T(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) T(i, j, k) = -C(i, k, j) + C(j, k, i) - A(i, j, k);
  return T;
}

CMatrix chern_S(const UnitaryFrameData& u) {
  const auto& B = u.bracket_in_frame.mixed_hol;
  const auto& C = u.bracket_in_frame.mixed_anti;
  const int n = u.n();
  CMatrix S = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc = 0;
      for (int k = 0; k < n; ++k)
        for (int r = 0; r < n; ++r)
          acc += B(i, k, r) * C(k, j, r) - C(k, r, i) * B(r, k, j) + B(k, k, r) * C(r, j, i) +
                 C(k, k, r) * B(i, r, j);
      S(i, j) = acc;
    }
  return S;
}

double torsion_squared_norm(const CTensor3& T) { return T.squaredNorm(); }

CVector lee_form(const UnitaryFrameData& u) {
  const CTensor3 T = chern_torsion(u);
  const int n = u.n();
  CVector w = CVector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) w[i] += T(i, k, k);
  return w;
}

QTensors q_tensors(const UnitaryFrameData& u) {
  const CTensor3 T = chern_torsion(u);
  const int n = u.n();
  CVector w = CVector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) w[i] += T(i, k, k);

  QTensors q;
  q.q1 = CMatrix::Zero(n, n);
  q.q2 = CMatrix::Zero(n, n);
  q.q3 = CMatrix::Zero(n, n);
  q.q4 = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex a1 = 0, a2 = 0, a4 = 0;
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          a1 += T(i, k, m) * std::conj(T(j, k, m));
          a2 += std::conj(T(k, m, i)) * T(k, m, j);
        }
      for (int m = 0; m < n; ++m)
        a4 += 0.5 * (w[m] * std::conj(T(m, j, i)) + std::conj(w[m]) * T(m, i, j));
      q.q1(i, j) = a1;
      q.q2(i, j) = a2;
      q.q3(i, j) = w[i] * std::conj(w[j]);
      q.q4(i, j) = a4;
    }
  return q;
}

CMatrix k_x(const UnitaryFrameData& u, const std::array<double, 4>& x) {
  const QTensors q = q_tensors(u);
  return chern_S(u) - x[0] * q.q1 - x[1] * q.q2 - x[2] * q.q3 - x[3] * q.q4;
}

CMatrix hcf_K(const UnitaryFrameData& u) { return k_x(u, kXHcf); }

CMatrix abelian_K(const UnitaryFrameData& u) {
  const auto& cb = u.bracket_in_frame;
  const double tol = tau_alg() * std::max(1.0, std::sqrt(cb.squaredNorm()));
  if (!cb.is_abelian_structure(tol)) throw NotAbelian("abelian_K needs an abelian complex structure");
  if (cb.ad_trace().cwiseAbs().maxCoeff() > tol) throw NotUnimodular("abelian_K");

  const auto& B = cb.mixed_hol;
  const auto& C = cb.mixed_anti;
  const int n = u.n();
  CMatrix K = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc = 0;
      for (int k = 0; k < n; ++k)
        for (int r = 0; r < n; ++r) {
          acc += B(i, k, r) * C(k, j, r);        // -mu_{kbar i}^r mu_{k jbar}^{rbar}
          acc -= C(k, r, i) * B(r, k, j);        // +mu_{k rbar}^{ibar} mu_{kbar r}^{j}
          acc += C(i, r, k) * B(r, j, k);        // -mu_{i rbar}^{kbar} mu_{jbar r}^{k}
          acc += C(k, k, r) * B(i, j, r);        // -mu_{k kbar}^{rbar} mu_{jbar i}^{r}
          acc += B(k, k, r) * C(i, j, r);        // -mu_{kbar k}^{r} mu_{i jbar}^{rbar}
        }
      for (int k = 0; k < n; ++k)
        for (int r = 0; r < n; ++r) acc -= C(k, k, i) * B(r, r, j);  // +mu_{k kbar}^{ibar} mu_{rbar r}^{j}
      K(i, j) = 0.5 * acc;
    }
  return K;
}

bool is_balanced(const UnitaryFrameData& u) {
  const CVector w = lee_form(u);
  return w.norm() <= tau_alg() * std::max(1.0, std::sqrt(u.bracket_in_frame.squaredNorm()));
}

CurvatureReport curvature_report(const ComplexFrameBracket& b, const HermitianMetric& g) {
  const UnitaryFrameData u = unitary_frame(b, g);
  CurvatureReport r;
  r.S = chern_S(u);
  const QTensors q = q_tensors(u);
  r.Q1 = q.q1;
  r.Q2 = q.q2;
  r.Q3 = q.q3;
  r.Q4 = q.q4;
  r.K = r.S - 0.5 * r.Q1 + 0.25 * r.Q2 + 0.5 * r.Q3 - r.Q4;
  r.T = chern_torsion(u);
  r.lee_w = lee_form(u);
  r.s = r.S.trace().real();
  r.k_scalar = r.K.trace().real();
  return r;
}

}  // namespace liecurve
