#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liecurve/types.hpp"

namespace liecurve {

// Structure constants of a real algebra in a fixed frame:
// mu(e_i, e_j) = sum_k c(i,j,k) e_k, with c(i,j,k) = -c(j,i,k).
struct RealBracket {
  int dim = 0;
  Tensor3 c;

  RealBracket() = default;
  explicit RealBracket(int n) : dim(n), c(n) {}

  static RealBracket zero(int n) { return RealBracket(n); }

  double& at(int i, int j, int k) { return c(i, j, k); }
  double at(int i, int j, int k) const { return c(i, j, k); }

  // Sets c(i,j,k) = v and c(j,i,k) = -v.
  void set(int i, int j, int k, double v) {
    c(i, j, k) = v;
    c(j, i, k) = -v;
  }

  Vector apply(const Vector& x, const Vector& y) const;
  Matrix ad(int i) const;          // ad_{e_i}, matrix acting on coordinates
  Matrix ad(const Vector& x) const;

  double antisymmetry_residual() const;
  // Full index sum; the norm under which all moment-map constants hold.
  double squaredNorm() const { return c.squaredNorm(); }
  double norm() const { return c.norm(); }
};

// Almost complex structure as a real matrix with j^2 = -Id.
struct ComplexStructure {
  Matrix j;

  ComplexStructure() = default;
  explicit ComplexStructure(Matrix m);

  // Block-standard J on R^{2n}: J v_a = v_{n+a}, J v_{n+a} = -v_a.
  static ComplexStructure standard(int n);

  int dim() const { return static_cast<int>(j.rows()); }
};

// Components of the complexified bracket in a fixed (1,0)-frame {Z_a}:
//   hol(a,b,k)        = mu_{ab}^k          (Z_a, Z_b)      -> Z_k
//   mixed_hol(a,b,k)  = mu_{a bbar}^k      (Z_a, conj Z_b) -> Z_k
//   mixed_anti(a,b,k) = mu_{a bbar}^{kbar} (Z_a, conj Z_b) -> conj Z_k
// Every other component follows from antisymmetry and conjugation;
// in particular mixed_anti(a,b,k) = -conj(mixed_hol(b,a,k)).
// The (Z_a, Z_b) -> conj Z_k part vanishes exactly when J is integrable;
// its norm is kept as nijenhuis_residual.
struct ComplexFrameBracket {
  int n = 0;
  CTensor3 hol, mixed_hol, mixed_anti;
  double nijenhuis_residual = 0.0;

  ComplexFrameBracket() = default;
  explicit ComplexFrameBracket(int n_) : n(n_), hol(n_), mixed_hol(n_), mixed_anti(n_) {}

  double conjugation_residual() const;
  double squaredNorm() const {
    return hol.squaredNorm() + mixed_hol.squaredNorm() + mixed_anti.squaredNorm();
  }
  // Complex trace vector of ad: t_i = sum_r (hol(i,r,r) + mixed_anti(i,r,r)).
  CVector ad_trace() const;
  bool is_abelian_structure(double tol) const { return hol.norm() <= tol; }
  bool is_bi_invariant(double tol) const {
    return std::sqrt(mixed_hol.squaredNorm() + mixed_anti.squaredNorm()) <= tol;
  }
};

struct DerivationSpace {
  std::vector<Matrix> basis;  // orthonormal in the Frobenius inner product
  double tolerance = 0.0;     // singular-value cutoff actually used
  int dim() const { return static_cast<int>(basis.size()); }
  // Frobenius-orthogonal projection onto span(basis).
  Matrix project(const Matrix& E) const;
};

struct StructurePredicates {
  bool integrable = false;
  bool abelian = false;
  bool bi_invariant = false;
  double nijenhuis_residual = 0.0;
};

// --- operations ------------------------------------------------------------

// max over basis triples of | mu(mu(x,y),z) + cyclic |; zero iff Lie.
double jacobi_residual(const RealBracket& b);

// (flag, residual): flag true iff max_i |sum_r c(i,r,r)| <= tau_alg * |mu|.
std::pair<bool, double> is_unimodular(const RealBracket& b);

// B(i,j) = sum_{r,s} c(i,r,s) c(j,s,r) = tr(ad_i ad_j).
Matrix killing_form(const RealBracket& b);

// (pi(E)mu)(x,y) = E mu(x,y) - mu(Ex,y) - mu(x,Ey).
RealBracket pi_action(const Matrix& E, const RealBracket& b);

// (A.mu)(x,y) = A mu(A^{-1}x, A^{-1}y). Throws SingularMatrix.
RealBracket gl_action(const Matrix& A, const RealBracket& b);

// Full index sum <mu,nu> = sum_{i,j,k} mu_{ij}^k nu_{ij}^k in an orthonormal
// frame of g0 (identity when g0 omitted). This is the convention under which
// <M_mu, E> = 1/4 <pi(E)mu, mu> and tr M = -1/4 |mu|^2 hold on the nose.
double bracket_inner_product(const RealBracket& b1, const RealBracket& b2);
double bracket_inner_product(const RealBracket& b1, const RealBracket& b2, const Matrix& g0);

// Orthonormal basis of ker(E -> pi(E)mu), by SVD thresholding.
DerivationSpace derivation_space(const RealBracket& b);

// Components of the complexified bracket in the frame Z_a = (x_a - i J x_a)/sqrt(2).
// `frame` lists the x_a as columns; when empty the standard adapted layout
// x_a = e_a (requiring J e_a = e_{n+a}) is used. Throws NotAdapted if
// {x_a, J x_a} is not a basis.
ComplexFrameBracket complexify(const RealBracket& b, const ComplexStructure& j,
                               const std::vector<Vector>& frame = {});

// Inverse of complexify in the standard layout: returns the real bracket on
// the basis v_a = (Z_a + conj Z_a)/sqrt(2), v_{n+a} = i(Z_a - conj Z_a)/sqrt(2)
// together with the standard J.
std::pair<RealBracket, ComplexStructure> realify(const ComplexFrameBracket& cb);

StructurePredicates complex_structure_predicates(const RealBracket& b, const ComplexStructure& j,
                                                 const std::vector<Vector>& frame = {});

// Default J-adapted frame (x_a = e_a for the standard block layout).
std::vector<Vector> standard_frame(const ComplexStructure& j);

// Expands a complex n x n matrix commuting with multiplication by i into the
// real 2n x 2n matrix acting on the adapted frame coordinates.
Matrix realify_endomorphism(const CMatrix& E);

// Complex-frame components of a real endomorphism that commutes with J
// (throws NotAdapted when it does not, beyond tol).
CMatrix complexify_endomorphism(const Matrix& E, const ComplexStructure& j,
                                const std::vector<Vector>& frame = {}, double tol = 1e-9);

}  // namespace liecurve
