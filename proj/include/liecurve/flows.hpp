#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "liecurve/catalog.hpp"
#include "liecurve/riemannian.hpp"

namespace liecurve {

enum class FlowKind { Hcf, Kx, MFlow, Ric11Flow, BracketFlow, NormalizedBracketFlow };

std::string flow_kind_name(FlowKind k);

struct IntegratorSettings {
  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step = 0.0;      // 0 = unlimited
  double min_step = 1e-13;
  double initial_step = 0.0;  // 0 = automatic
  long max_steps = 2000000;
};

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

struct FlowProblem {
  CatalogEntry algebra;
  std::optional<CMatrix> h0;  // initial Hermitian metric (Hcf, Kx, Ric11Flow)
  std::optional<Matrix> g0;   // initial real metric (MFlow without J)
  FlowKind kind = FlowKind::Hcf;
  std::array<double, 4> x = kXHcf;
  double t_max = 10.0;
  IntegratorSettings integrator;
  double tol_fix = kTolFix;
  int dwell = kConvergenceDwell;
};

struct FlowSample {
  double t = 0.0;
  std::vector<double> state;
  double mu_norm_sq = 0.0;  // |mu|^2 in a g_t-orthonormal frame
  double M_norm_sq = 0.0;   // |M_mu|^2, Frobenius
  double F = 0.0;           // |M_nu|^2 / |nu|^4
  double r_nu = 0.0;        // 4 |M_nu|^2 of the unit-normalized bracket
  double min_eig = 0.0;     // smallest metric eigenvalue (NaN for bracket flows)
  double fix_residual = 0.0;  // |pi(M_nu + r_nu Id) nu| (normalized flow only)
};

struct TerminationRecord {
  enum class Kind { Horizon, Singularity, Converged };
  Kind kind = Kind::Horizon;
  double t_end = 0.0;
  double T_est = 0.0;   // blow-up estimate (singularity only)
  double T_err = 0.0;
  double fixed_point_residual = 0.0;
  std::string message;
};

// Per-accepted-step norm-law record for M-bracket flows: fd is the finite
// difference of |mu|^2 across the step, rhs the Simpson average of
// -8 |M_mu|^2 over the same step.
struct NormLawRecord {
  double t0 = 0.0, t1 = 0.0;
  double fd = 0.0;
  double rhs = 0.0;
};

struct FlowTrace {
  FlowKind kind = FlowKind::Hcf;
  int n_complex = 0;  // 0 for purely real flows
  int n_real = 0;
  double t_max_requested = 0.0;
  bool integrator_stalled = false;
  std::vector<std::string> state_labels;
  std::vector<FlowSample> samples;
  std::vector<NormLawRecord> norm_law;
  TerminationRecord termination;
  IntegratorStats stats;

  // State decoding helpers.
  CMatrix hermitian_at(size_t idx) const;
  Matrix real_metric_at(size_t idx) const;
  RealBracket bracket_at(size_t idx) const;
};

FlowTrace integrate_metric_flow(const FlowProblem& p);
FlowTrace integrate_bracket_flow(const FlowProblem& p);
FlowTrace integrate_normalized_bracket_flow(const FlowProblem& p);

// Dispatches on p.kind.
FlowTrace integrate_flow(const FlowProblem& p);

// Re-classifies a finished trace: singularity estimate from the min-eigenvalue
// power law, convergence from the fixed-point residual dwell.
TerminationRecord detect_termination(const FlowTrace& trace, double tol_fix = kTolFix,
                                     int dwell = kConvergenceDwell);

// Hermitian state packing (row-major upper triangle, diagonal real,
// off-diagonal re/im pairs); shared by traces and their CSV form.
std::vector<double> pack_hermitian(const CMatrix& h);
CMatrix unpack_hermitian(const std::vector<double>& v, int n);
std::vector<double> pack_symmetric(const Matrix& g);
Matrix unpack_symmetric(const std::vector<double>& v, int n);

}  // namespace liecurve
