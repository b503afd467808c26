#include "liecurve/lie_core.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "liecurve/errors.hpp"
#include "liecurve/tolerances.hpp"

namespace liecurve {

Vector RealBracket::apply(const Vector& x, const Vector& y) const {
  Vector out = Vector::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim; ++j) {
      if (y[j] == 0.0) continue;
      const double xy = x[i] * y[j];
      for (int k = 0; k < dim; ++k) out[k] += xy * c(i, j, k);
    }
  }
  return out;
}

Matrix RealBracket::ad(int i) const {
  Matrix m = Matrix::Zero(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) m(k, j) = c(i, j, k);
  return m;
}

Matrix RealBracket::ad(const Vector& x) const {
  Matrix m = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (x[i] == 0.0) continue;
    m += x[i] * ad(i);
  }
  return m;
}

double RealBracket::antisymmetry_residual() const {
  double r = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) r = std::max(r, std::abs(c(i, j, k) + c(j, i, k)));
  return r;
}

ComplexStructure::ComplexStructure(Matrix m) : j(std::move(m)) {
  if (j.rows() != j.cols()) throw DimensionMismatch("complex structure must be square");
  if (j.rows() % 2 != 0) throw NotAdapted("complex structure needs even dimension");
  const double res = (j * j + Matrix::Identity(j.rows(), j.cols())).cwiseAbs().maxCoeff();
  if (res > 1e-7) throw NotAdapted("j^2 != -Id, residual " + std::to_string(res));
}

ComplexStructure ComplexStructure::standard(int n) {
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    m(n + a, a) = 1.0;
    m(a, n + a) = -1.0;
  }
  return ComplexStructure(std::move(m));
}

double ComplexFrameBracket::conjugation_residual() const {
  double r = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k) {
        r = std::max(r, std::abs(hol(a, b, k) + hol(b, a, k)));
        r = std::max(r, std::abs(mixed_anti(a, b, k) + std::conj(mixed_hol(b, a, k))));
      }
  return r;
}

CVector ComplexFrameBracket::ad_trace() const {
  CVector t = CVector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n; ++r) t[i] += hol(i, r, r) + mixed_anti(i, r, r);
  return t;
}

Matrix DerivationSpace::project(const Matrix& E) const {
  Matrix p = Matrix::Zero(E.rows(), E.cols());
  for (const auto& d : basis) p += (d.array() * E.array()).sum() * d;
  return p;
}

double jacobi_residual(const RealBracket& b) {
  const int n = b.dim;
  double worst = 0;
  Vector acc(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int l = j + 1; l < n; ++l) {
        acc.setZero();
        for (int k = 0; k < n; ++k) {
          const double cij = b.at(i, j, k), cjl = b.at(j, l, k), cli = b.at(l, i, k);
          if (cij == 0 && cjl == 0 && cli == 0) continue;
          for (int m = 0; m < n; ++m)
            acc[m] += cij * b.at(k, l, m) + cjl * b.at(k, i, m) + cli * b.at(k, j, m);
        }
        worst = std::max(worst, acc.norm());
      }
  return worst;
}

std::pair<bool, double> is_unimodular(const RealBracket& b) {
  double worst = 0;
  for (int i = 0; i < b.dim; ++i) {
    double t = 0;
    for (int r = 0; r < b.dim; ++r) t += b.at(i, r, r);
    worst = std::max(worst, std::abs(t));
  }
  const double scale = std::max(b.norm(), 1.0);
  return {worst <= tau_alg() * scale, worst};
}

Matrix killing_form(const RealBracket& b) {
  const int n = b.dim;
  Matrix B = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int r = 0; r < n; ++r)
        for (int k = 0; k < n; ++k) s += b.at(i, r, k) * b.at(j, k, r);
      B(i, j) = s;
    }
  return 0.5 * (B + B.transpose());  // symmetric up to roundoff already
}

RealBracket pi_action(const Matrix& E, const RealBracket& b) {
  const int n = b.dim;
  if (E.rows() != n || E.cols() != n) throw DimensionMismatch("pi_action");
  RealBracket out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0;
        for (int r = 0; r < n; ++r)
          s += E(k, r) * b.at(i, j, r) - E(r, i) * b.at(r, j, k) - E(r, j) * b.at(i, r, k);
        out.at(i, j, k) = s;
      }
  return out;
}

RealBracket gl_action(const Matrix& A, const RealBracket& b) {
  const int n = b.dim;
  if (A.rows() != n || A.cols() != n) throw DimensionMismatch("gl_action");
  Eigen::FullPivLU<Matrix> lu(A);
  if (!lu.isInvertible()) throw SingularMatrix("gl_action: matrix not invertible");
  const Matrix Ainv = lu.inverse();

  // Successive one-index contractions keep this O(n^4).
  Tensor3 t1(n), t2(n);
  for (int p = 0; p < n; ++p)
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < n; ++r) {
        double s = 0;
        for (int q = 0; q < n; ++q) s += b.at(p, q, r) * Ainv(q, j);
        t1(p, j, r) = s;
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < n; ++r) {
        double s = 0;
        for (int p = 0; p < n; ++p) s += Ainv(p, i) * t1(p, j, r);
        t2(i, j, r) = s;
      }
  RealBracket out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0;
        for (int r = 0; r < n; ++r) s += A(k, r) * t2(i, j, r);
        out.at(i, j, k) = s;
      }
  return out;
}

double bracket_inner_product(const RealBracket& b1, const RealBracket& b2) {
  if (b1.dim != b2.dim) throw DimensionMismatch("bracket_inner_product");
  double s = 0;
  const auto& d1 = b1.c.data();
  const auto& d2 = b2.c.data();
  for (size_t i = 0; i < d1.size(); ++i) s += d1[i] * d2[i];
  return s;
}

namespace {

// Change of basis taking g0 to the identity: constants in a g0-orthonormal frame.
RealBracket to_orthonormal_frame(const RealBracket& b, const Matrix& g0) {
  Eigen::LLT<Matrix> llt(g0);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("inner product g0");
  const Matrix Lt = llt.matrixL().transpose();
  return gl_action(Lt, b);
}

}  // namespace

double bracket_inner_product(const RealBracket& b1, const RealBracket& b2, const Matrix& g0) {
  return bracket_inner_product(to_orthonormal_frame(b1, g0), to_orthonormal_frame(b2, g0));
}

DerivationSpace derivation_space(const RealBracket& b) {
  const int n = b.dim;
  Matrix M = Matrix::Zero(n * n * n, n * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const int col = p * n + q;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          M(((i * n) + j) * n + p, col) += b.at(i, j, q);
          for (int k = 0; k < n; ++k) {
            if (i == q) M(((i * n) + j) * n + k, col) -= b.at(p, j, k);
            if (j == q) M(((i * n) + j) * n + k, col) -= b.at(i, p, k);
          }
        }
    }
  Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  const double cut = kDerivationSvdCut * std::max(smax, 1e-300);

  DerivationSpace out;
  out.tolerance = cut;
  for (int col = 0; col < n * n; ++col) {
    const double s = col < sv.size() ? sv[col] : 0.0;
    if (smax == 0.0 || s <= cut) {
      Matrix D(n, n);
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) D(p, q) = svd.matrixV()(p * n + q, col);
      out.basis.push_back(std::move(D));
    }
  }
  return out;
}

std::vector<Vector> standard_frame(const ComplexStructure& j) {
  const int nr = j.dim();
  const int n = nr / 2;
  // Standard block layout first.
  bool standard = true;
  for (int a = 0; a < n && standard; ++a) {
    Vector je = j.j.col(a);
    Vector want = Vector::Zero(nr);
    want[n + a] = 1.0;
    if ((je - want).norm() > 1e-12) standard = false;
  }
  std::vector<Vector> frame;
  if (standard) {
    for (int a = 0; a < n; ++a) {
      Vector e = Vector::Zero(nr);
      e[a] = 1.0;
      frame.push_back(e);
    }
    return frame;
  }
  // Greedy adapted frame: extend {x_1, Jx_1, ...} by coordinate vectors.
  Matrix span(nr, 0);
  for (int a = 0; a < nr && static_cast<int>(frame.size()) < n; ++a) {
    Vector e = Vector::Zero(nr);
    e[a] = 1.0;
    Matrix trial(nr, span.cols() + 2);
    if (span.cols() > 0) trial.leftCols(span.cols()) = span;
    trial.col(span.cols()) = e;
    trial.col(span.cols() + 1) = j.j * e;
    Eigen::ColPivHouseholderQR<Matrix> qr(trial);
    if (qr.rank() < trial.cols()) continue;
    frame.push_back(e);
    span = trial;
  }
  if (static_cast<int>(frame.size()) != n) throw NotAdapted("could not build a J-adapted frame");
  return frame;
}

namespace {

struct ComplexBasis {
  // Columns 0..n-1 hold Z_a, columns n..2n-1 hold conj(Z_a), in the original
  // real coordinates (complexified).
  CMatrix Q;
  CMatrix Qinv;
  int n;
};

ComplexBasis make_complex_basis(const ComplexStructure& j, const std::vector<Vector>& frame_in) {
  const int nr = j.dim();
  const int n = nr / 2;
  std::vector<Vector> frame = frame_in.empty() ? standard_frame(j) : frame_in;
  if (static_cast<int>(frame.size()) != n) throw NotAdapted("frame must have n = dim/2 vectors");
  ComplexBasis cb;
  cb.n = n;
  cb.Q = CMatrix::Zero(nr, nr);
  const Complex I(0, 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < n; ++a) {
    if (frame[a].size() != nr) throw DimensionMismatch("frame vector size");
    Vector jx = j.j * frame[a];
    for (int p = 0; p < nr; ++p) {
      cb.Q(p, a) = inv_sqrt2 * (frame[a][p] - I * jx[p]);
      cb.Q(p, n + a) = inv_sqrt2 * (frame[a][p] + I * jx[p]);
    }
  }
  Eigen::FullPivLU<CMatrix> lu(cb.Q);
  if (!lu.isInvertible()) throw NotAdapted("supplied real basis is not J-adapted");
  cb.Qinv = lu.inverse();
  return cb;
}

CVector complex_bilinear_apply(const RealBracket& b, const CVector& x, const CVector& y) {
  const int n = b.dim;
  CVector out = CVector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (x[i] == Complex(0)) continue;
    for (int j = 0; j < n; ++j) {
      if (y[j] == Complex(0)) continue;
      const Complex xy = x[i] * y[j];
      for (int k = 0; k < n; ++k) out[k] += xy * b.at(i, j, k);
    }
  }
  return out;
}

}  // namespace

ComplexFrameBracket complexify(const RealBracket& b, const ComplexStructure& j,
                               const std::vector<Vector>& frame) {
  if (b.dim != j.dim()) throw DimensionMismatch("bracket vs complex structure");
  const ComplexBasis cb = make_complex_basis(j, frame);
  const int n = cb.n;
  ComplexFrameBracket out(n);
  double nij_sq = 0;
  for (int a = 0; a < n; ++a)
    for (int bb = 0; bb < n; ++bb) {
      // (Z_a, Z_b)
      CVector coeff = cb.Qinv * complex_bilinear_apply(b, cb.Q.col(a), cb.Q.col(bb));
      for (int k = 0; k < n; ++k) {
        out.hol(a, bb, k) = coeff[k];
        nij_sq += std::norm(coeff[n + k]);
      }
      // (Z_a, conj Z_b)
      coeff = cb.Qinv * complex_bilinear_apply(b, cb.Q.col(a), cb.Q.col(n + bb));
      for (int k = 0; k < n; ++k) {
        out.mixed_hol(a, bb, k) = coeff[k];
        out.mixed_anti(a, bb, k) = coeff[n + k];
      }
    }
  out.nijenhuis_residual = std::sqrt(nij_sq);
  return out;
}

std::pair<RealBracket, ComplexStructure> realify(const ComplexFrameBracket& cbk) {
  const int n = cbk.n;
  const int nr = 2 * n;
  // Full complex structure-constant tensor over the basis (Z, conj Z).
  CTensor3 D(nr);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k) {
        D(a, b, k) = cbk.hol(a, b, k);
        D(n + a, n + b, n + k) = std::conj(cbk.hol(a, b, k));
        D(a, n + b, k) = cbk.mixed_hol(a, b, k);
        D(a, n + b, n + k) = cbk.mixed_anti(a, b, k);
        D(n + b, a, k) = -cbk.mixed_hol(a, b, k);
        D(n + b, a, n + k) = -cbk.mixed_anti(a, b, k);
      }
  // v_a = (Z_a + conj Z_a)/sqrt(2), v_{n+a} = i (Z_a - conj Z_a)/sqrt(2).
  CMatrix S = CMatrix::Zero(nr, nr);
  const Complex I(0, 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < n; ++a) {
    S(a, a) = inv_sqrt2;
    S(n + a, a) = inv_sqrt2;
    S(a, n + a) = I * inv_sqrt2;
    S(n + a, n + a) = -I * inv_sqrt2;
  }
  const CMatrix Sinv = S.inverse();
  RealBracket out(nr);
  double imag_res = 0;
  for (int p = 0; p < nr; ++p)
    for (int q = 0; q < nr; ++q) {
      CVector outv = CVector::Zero(nr);
      for (int A = 0; A < nr; ++A)
        for (int B = 0; B < nr; ++B) {
          const Complex w = S(A, p) * S(B, q);
          if (w == Complex(0)) continue;
          for (int k = 0; k < nr; ++k) {
            const Complex d = D(A, B, k);
            if (d != Complex(0))
              for (int r = 0; r < nr; ++r) outv[r] += w * d * Sinv(r, k);
          }
        }
      for (int r = 0; r < nr; ++r) {
        imag_res = std::max(imag_res, std::abs(outv[r].imag()));
        out.at(p, q, r) = outv[r].real();
      }
    }
  if (imag_res > 1e-9 * std::max(1.0, std::sqrt(cbk.squaredNorm())))
    throw NotAdapted("realify: complex components are not conjugation-consistent");
  return {out, ComplexStructure::standard(n)};
}

StructurePredicates complex_structure_predicates(const RealBracket& b, const ComplexStructure& j,
                                                 const std::vector<Vector>& frame) {
  const ComplexFrameBracket cb = complexify(b, j, frame);
  const double tol = tau_alg() * std::max(1.0, b.norm());
  StructurePredicates out;
  out.nijenhuis_residual = cb.nijenhuis_residual;
  out.integrable = cb.nijenhuis_residual <= tol;
  out.abelian = cb.is_abelian_structure(tol);
  out.bi_invariant = cb.is_bi_invariant(tol);
  return out;
}

Matrix realify_endomorphism(const CMatrix& E) {
  const int n = static_cast<int>(E.rows());
  Matrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = E.real();
  out.topRightCorner(n, n) = -E.imag();
  out.bottomLeftCorner(n, n) = E.imag();
  out.bottomRightCorner(n, n) = E.real();
  return out;
}

CMatrix complexify_endomorphism(const Matrix& E, const ComplexStructure& j,
                                const std::vector<Vector>& frame, double tol) {
  const double comm = (E * j.j - j.j * E).cwiseAbs().maxCoeff();
  if (comm > tol * std::max(1.0, E.cwiseAbs().maxCoeff()))
    throw NotAdapted("endomorphism does not commute with J");
  const ComplexBasis cb = make_complex_basis(j, frame);
  const CMatrix big = cb.Qinv * E.cast<Complex>() * cb.Q;
  return big.topLeftCorner(cb.n, cb.n);
}

}  // namespace liecurve
