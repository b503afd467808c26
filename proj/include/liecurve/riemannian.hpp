#pragma once

#include "liecurve/hermitian.hpp"
#include "liecurve/lie_core.hpp"

namespace liecurve {

struct RicciReport {
  Matrix M;        // quadratic bracket tensor, Eq. style M(X,Y)
  Matrix B_half;   // (1/2) Killing form
  Matrix S_adH;    // symmetrized ad_H contribution
  Matrix Ric;      // M - B/2 - S(ad_H)
  Matrix Ric11;    // J-invariant part
  Matrix Ric20_02; // J-anti-invariant part
  Vector H;        // mean curvature vector, g(H,X) = tr ad_X
  double r = 0.0;  // scalar curvature tr_g Ric
};

// ---------------------------------------------------------------------------
// Real <-> Hermitian dictionary.
//
// All complex-frame quantities refer to the frame Z_a = (x_a - i J x_a)/sqrt(2)
// over a J-adapted real frame {x_a, J x_a}. For a J-invariant symmetric real
// 2-tensor S the associated Hermitian matrix is
//
//     h(S)(a,b) = S(x_a, x_b) + i S(x_a, J x_b),
//
// with no extra constant: the metric h = Id corresponds to the real metric in
// which {x_a, J x_a} is orthonormal. This single convention fixes every
// factor between the real M/Ric computations and the complex-frame K, e.g.
// h(M) = K on complex unimodular groups with no residual scaling.
// ---------------------------------------------------------------------------

// Hermitian matrix of a J-invariant symmetric real form. `frame` lists the
// x_a (columns empty = standard layout). Throws NotHermitian if S is not
// J-invariant beyond tol.
CMatrix hermitian_of_real_form(const Matrix& S, const ComplexStructure& j,
                               const std::vector<Vector>& frame = {}, double tol = 1e-9);

// Inverse: the J-invariant symmetric real form with the given complex matrix.
Matrix real_form_of_hermitian(const CMatrix& h, const ComplexStructure& j,
                              const std::vector<Vector>& frame = {});

// J-invariant / anti-invariant parts of a symmetric bilinear form.
Matrix j_invariant_part(const Matrix& S, const ComplexStructure& j);

// --- operations ------------------------------------------------------------

// M(X,Y) = -1/2 g(mu(X,X_k), mu(Y,X_k)) + 1/4 g(mu(X_k,X_j),X) g(mu(X_k,X_j),Y)
// over a g-orthonormal frame {X_k}; returned in the reference frame.
// Satisfies tr_g M = -1/4 |mu|_g^2.
Matrix m_tensor(const RealBracket& b, const Matrix& g);

// Endomorphism M_mu for the identity background metric:
// M(i,j) = -1/2 c_{ir}^k c_{jr}^k + 1/4 c_{rs}^i c_{rs}^j.
Matrix m_endomorphism(const RealBracket& b);

// | <M_mu, E> - 1/4 <pi(E)mu, mu> | / (|M_mu| |E| + eps), identity background.
double moment_map_residual(const RealBracket& b, const Matrix& E);

RicciReport ricci_decomposition(const RealBracket& b, const ComplexStructure& j, const Matrix& g);

// Closed-form Ric^{1,1} for unimodular algebras with abelian J, in the
// unitary frame. Cross-validates the real decomposition above.
CMatrix abelian_ric11(const UnitaryFrameData& u);

// tr_g M restricted to a verified abelian ideal (columns of ideal_basis).
double dotti_trace(const RealBracket& b, const Matrix& g, const Matrix& ideal_basis);

}  // namespace liecurve
