#include "liecurve/riemannian.hpp"

#include <Eigen/Cholesky>

#include "liecurve/errors.hpp"
#include "liecurve/tolerances.hpp"

namespace liecurve {

namespace {

// Orthonormalizing change of basis for an SPD form: columns of F are a
// g-orthonormal basis, F = L^{-T} from g = L L^T.
Matrix orthonormal_basis(const Matrix& g) {
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("inner product");
  const Matrix L = llt.matrixL();
  return L.transpose().triangularView<Eigen::Upper>().solve(
      Matrix::Identity(g.rows(), g.cols()));
}

}  // namespace

Matrix m_endomorphism(const RealBracket& b) {
  const int n = b.dim;
  Matrix M = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0;
      for (int r = 0; r < n; ++r)
        for (int k = 0; k < n; ++k)
          s += -0.5 * b.at(i, r, k) * b.at(j, r, k) + 0.25 * b.at(r, k, i) * b.at(r, k, j);
      M(i, j) = s;
      M(j, i) = s;
    }
  return M;
}

Matrix m_tensor(const RealBracket& b, const Matrix& g) {
  const Matrix F = orthonormal_basis(g);
  Eigen::FullPivLU<Matrix> lu(F);
  const RealBracket bf = gl_action(lu.inverse(), b);
  const Matrix Mf = m_endomorphism(bf);
  const Matrix Finv = lu.inverse();
  return Finv.transpose() * Mf * Finv;
}

double moment_map_residual(const RealBracket& b, const Matrix& E) {
  if (b.norm() == 0.0) throw ZeroBracket("moment_map_residual");
  const Matrix M = m_endomorphism(b);
  const double lhs = (M.array() * E.array()).sum();  // tr(M E^t)
  const double rhs = 0.25 * bracket_inner_product(pi_action(E, b), b);
  const double scale = M.norm() * E.norm() + 1e-300;
  return std::abs(lhs - rhs) / scale;
}

Matrix j_invariant_part(const Matrix& S, const ComplexStructure& j) {
  return 0.5 * (S + j.j.transpose() * S * j.j);
}

CMatrix hermitian_of_real_form(const Matrix& S, const ComplexStructure& j,
                               const std::vector<Vector>& frame, double tol) {
  const Matrix inv = j_invariant_part(S, j);
  if ((inv - S).cwiseAbs().maxCoeff() > tol * std::max(1.0, S.cwiseAbs().maxCoeff()))
    throw NotHermitian("real form is not J-invariant");
  std::vector<Vector> fr = frame.empty() ? standard_frame(j) : frame;
  const int n = static_cast<int>(fr.size());
  CMatrix h(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Vector& xa = fr[a];
      const Vector xb = fr[b];
      const Vector jxb = j.j * fr[b];
      h(a, b) = Complex(xa.dot(S * xb), xa.dot(S * jxb));
    }
  return h;
}

Matrix real_form_of_hermitian(const CMatrix& h, const ComplexStructure& j,
                              const std::vector<Vector>& frame) {
  std::vector<Vector> fr = frame.empty() ? standard_frame(j) : frame;
  const int n = static_cast<int>(fr.size());
  const int nr = j.dim();
  // Basis matrix P: columns x_1..x_n, Jx_1..Jx_n; S in that basis is the
  // block form [[Re h, Im h], [-Im h, Re h]].
  Matrix P(nr, nr);
  for (int a = 0; a < n; ++a) {
    P.col(a) = fr[a];
    P.col(n + a) = j.j * fr[a];
  }
  Matrix Sb(nr, nr);
  Sb.topLeftCorner(n, n) = h.real();
  Sb.topRightCorner(n, n) = h.imag();
  Sb.bottomLeftCorner(n, n) = -h.imag();
  Sb.bottomRightCorner(n, n) = h.real();
  const Matrix Pinv = P.inverse();
  return Pinv.transpose() * Sb * Pinv;
}

RicciReport ricci_decomposition(const RealBracket& b, const ComplexStructure& j, const Matrix& g) {
  const int n = b.dim;
  if (g.rows() != n || j.dim() != n) throw DimensionMismatch("ricci_decomposition");
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, g.cwiseAbs().maxCoeff()))
    throw NotHermitian("metric not symmetric");
  if ((j_invariant_part(g, j) - g).cwiseAbs().maxCoeff() >
      1e-9 * std::max(1.0, g.cwiseAbs().maxCoeff()))
    throw NotHermitian("metric not J-invariant");

  RicciReport out;
  out.M = m_tensor(b, g);
  out.B_half = 0.5 * killing_form(b);

  // Mean curvature: g(H, X) = tr ad_X.
  Vector tr_ad(n);
  for (int i = 0; i < n; ++i) tr_ad[i] = b.ad(i).trace();
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("metric");
  out.H = llt.solve(tr_ad);

  out.S_adH = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    Vector ei = Vector::Unit(n, i);
    Vector mi = b.apply(out.H, ei);
    for (int k = 0; k < n; ++k) {
      Vector ek = Vector::Unit(n, k);
      const double val = 0.5 * (mi.dot(g * ek) + b.apply(out.H, ek).dot(g * ei));
      out.S_adH(i, k) = val;
    }
  }

  out.Ric = out.M - out.B_half - out.S_adH;
  out.Ric11 = j_invariant_part(out.Ric, j);
  out.Ric20_02 = out.Ric - out.Ric11;
  out.r = (llt.solve(out.Ric)).trace();
  return out;
}

CMatrix abelian_ric11(const UnitaryFrameData& u) {
  const auto& cb = u.bracket_in_frame;
  const double tol = tau_alg() * std::max(1.0, std::sqrt(cb.squaredNorm()));
  if (!cb.is_abelian_structure(tol)) throw NotAbelian("abelian_ric11");
  if (cb.ad_trace().cwiseAbs().maxCoeff() > tol) throw NotUnimodular("abelian_ric11");
  const auto& B = cb.mixed_hol;
  const auto& C = cb.mixed_anti;
  const int n = u.n();
  CMatrix R = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc = 0;
      for (int r = 0; r < n; ++r)
        for (int l = 0; l < n; ++l) {
          acc -= C(r, l, i) * B(l, r, j);  // mu_{r lbar}^{ibar} mu_{rbar l}^{j}
          acc += C(i, l, r) * B(l, j, r);  // -mu_{lbar i}^{rbar} mu_{l jbar}^{r}
          acc += B(i, l, r) * C(l, j, r);  // -mu_{lbar i}^{r} mu_{l jbar}^{rbar}
        }
      R(i, j) = 0.5 * acc;
    }
  return R;
}

double dotti_trace(const RealBracket& b, const Matrix& g, const Matrix& ideal_basis) {
  const int n = b.dim;
  const int m = static_cast<int>(ideal_basis.cols());
  if (m == 0) return 0.0;
  const double scale = std::max(1.0, b.norm());
  // mu(i,i) = 0
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c)
      if (b.apply(ideal_basis.col(a), ideal_basis.col(c)).norm() > 1e-8 * scale)
        throw NotAbelianIdeal("dotti_trace");
  // mu(g, i) in i
  Eigen::ColPivHouseholderQR<Matrix> qr(ideal_basis);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) {
      const Vector v = b.apply(Vector::Unit(n, i), ideal_basis.col(a));
      const Vector sol = qr.solve(v);
      if ((ideal_basis * sol - v).norm() > 1e-8 * scale) throw NotAnIdeal("dotti_trace");
    }
  // g-orthonormal basis of the ideal: Gram-Schmidt in the g inner product.
  Matrix on(n, m);
  int cnt = 0;
  for (int a = 0; a < m; ++a) {
    Vector v = ideal_basis.col(a);
    for (int cdx = 0; cdx < cnt; ++cdx) v -= on.col(cdx).dot(g * v) * on.col(cdx);
    const double nv = std::sqrt(v.dot(g * v));
    if (nv < 1e-12) continue;
    on.col(cnt++) = v / nv;
  }
  const Matrix M = m_tensor(b, g);
  double tr = 0;
  for (int a = 0; a < cnt; ++a) tr += on.col(a).dot(M * on.col(a));
  return tr;
}

}  // namespace liecurve
