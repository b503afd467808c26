#pragma once

#include <array>
#include <optional>
#include <string>

#include "liecurve/catalog.hpp"
#include "liecurve/riemannian.hpp"

namespace liecurve {

enum class SolitonOperator { K, Kx, M };

struct SolitonCertificate {
  enum class Kind { Static, Soliton, None };
  Kind kind = Kind::None;
  double lambda = 0.0;
  // When symmetric_D is true, D solves the one-sided normal form
  // P(g) = lambda g + g(D., .) with D a g-symmetric derivation; otherwise D
  // is the two-sided solution of P(g) = lambda g + g(D.,.) + g(.,D.).
  Matrix D;
  double residual = 0.0;  // attained least-squares residual, relative to |P(g)|
  bool symmetric_D = false;
  double derivation_residual = 0.0;  // |pi(D)mu| / |mu| of the reported D

  // Re-evaluates the defining equation's residual from the stored data.
  double reevaluate(const Matrix& P, const Matrix& g) const;
};

struct SolitonProblem {
  RealBracket bracket;
  std::optional<ComplexStructure> J;
  std::vector<Vector> frame;
  Matrix g;  // real metric (use real_form_of_hermitian for Hermitian input)
  SolitonOperator op = SolitonOperator::M;
  std::array<double, 4> x = kXHcf;
};

// The operator tensor P(g) in the reference frame (real symmetric matrix).
Matrix soliton_operator_tensor(const SolitonProblem& p);

// Least-squares solve of P(g) = lambda g + g(D.,.) + g(.,D.) over
// (lambda, D in Der(g)); reports the one-sided normal form when available.
SolitonCertificate solve_algebraic_soliton(const SolitonProblem& p);

// true iff |P - lambda g| <= tol_sol * |P| with lambda = tr_g P / n.
std::pair<bool, double> check_static(const SolitonProblem& p);

// Inner product equal to -B on k and +B on p; throws InvalidCartan.
Matrix canonical_metric(const RealBracket& b, const CartanDecomposition& cd);

struct StaticScanSample {
  uint64_t seed = 0;
  bool is_static = false;
  double lambda = 0.0;
  double residual = 0.0;
  double s = 0.0;             // Chern scalar curvature
  double q1 = 0.0, q3 = 0.0;  // trace monitors of the obstruction chain
  double trace_kx = 0.0;
};

struct StaticScanReport {
  int hits = 0;
  int samples = 0;
  std::array<double, 4> x{};
  std::vector<StaticScanSample> rows;
  double min_q1 = 0.0;       // torsion never degenerates on a hit-free scan
  double max_trace_kx = 0.0; // must stay <= 0 up to roundoff when s <= 0
  double chain_identity_residual = 0.0;  // |tr K^x - (s - (x1+x2)q1 - (x3+x4)q3)|
};

// Samples random metrics and runs the K^x static test. Requires the center
// condition z cap Jz != 0 and the admissible x-range; throws
// HypothesisViolated otherwise ("no conclusion" rather than "no hits").
StaticScanReport kx_static_scan(const CatalogEntry& entry, const std::array<double, 4>& x,
                                int samples, uint64_t seed, int jobs = 1);

}  // namespace liecurve
