#pragma once

#include <array>

#include "liecurve/lie_core.hpp"

namespace liecurve {

// Hermitian positive-definite metric in the reference (1,0)-frame:
// h(a,b) = g(Z_a, conj Z_b).
struct HermitianMetric {
  CMatrix h;

  HermitianMetric() = default;
  explicit HermitianMetric(CMatrix m);

  static HermitianMetric identity(int n) { return HermitianMetric(CMatrix::Identity(n, n)); }
  static HermitianMetric diagonal(const Vector& d);

  int n() const { return static_cast<int>(h.rows()); }
  double hermiticity_residual() const { return (h - h.adjoint()).cwiseAbs().maxCoeff(); }
};

// Frame change to a g-unitary frame W_i = sum_a frame_change(i,a) Z_a with
// frame_change upper triangular in the row convention, so that the frames of
// the worked 3-dimensional cases come out in their adapted normal form
// (W_n proportional to Z_n). frame_change * h * frame_change^* = Id.
struct UnitaryFrameData {
  CMatrix frame_change;
  CMatrix frame_change_inv;
  ComplexFrameBracket bracket_in_frame;

  int n() const { return bracket_in_frame.n; }
  // Congruence back to the reference frame for a (1,1)-tensor given by its
  // matrix T(p,q) = T(W_p, conj W_q) in the unitary frame.
  CMatrix to_reference(const CMatrix& tensor_unitary) const;
  CMatrix to_unitary(const CMatrix& tensor_reference) const;
};

struct QTensors {
  CMatrix q1, q2, q3, q4;
};

struct CurvatureReport {
  CMatrix S, Q1, Q2, Q3, Q4, K;
  CTensor3 T;
  CVector lee_w;
  double s = 0.0;         // Chern scalar curvature
  double k_scalar = 0.0;  // tr_g K
};

inline constexpr std::array<double, 4> kXHcf = {0.5, -0.25, -0.5, 1.0};
inline constexpr std::array<double, 4> kXPcf = {1.0, 0.0, 0.0, 0.0};
inline constexpr std::array<double, 4> kXModifiedHcf = {0.0, -0.5, 0.0, 0.0};

UnitaryFrameData unitary_frame(const ComplexFrameBracket& b, const HermitianMetric& g);

// Torsion components T_{ij}^k of the Chern connection in a unitary frame.
CTensor3 chern_torsion(const UnitaryFrameData& u);

CMatrix chern_S(const UnitaryFrameData& u);

QTensors q_tensors(const UnitaryFrameData& u);

// K = S - (1/2 Q1 - 1/4 Q2 - 1/2 Q3 + Q4), in the unitary frame.
CMatrix hcf_K(const UnitaryFrameData& u);
CMatrix k_x(const UnitaryFrameData& u, const std::array<double, 4>& x);

// Closed-form K for unimodular algebras with abelian J; cross-validates
// hcf_K. Throws NotAbelian / NotUnimodular.
CMatrix abelian_K(const UnitaryFrameData& u);

CVector lee_form(const UnitaryFrameData& u);
bool is_balanced(const UnitaryFrameData& u);

CurvatureReport curvature_report(const ComplexFrameBracket& b, const HermitianMetric& g);

// Norm of the torsion with all indices summed, |T|^2 = sum |T_{ij}^k|^2.
double torsion_squared_norm(const CTensor3& T);

}  // namespace liecurve
